//! Exact sparse polynomials over the rationals.

use super::{ApproxPolynomial, DegreeProfile, Monomial};
use crate::error::{Error, Result};
use crate::num::{Complex, Ctx};
use dashu_base::{Abs, Gcd};
use dashu_int::UBig;
use dashu_ratio::RBig;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Sparse multivariate polynomial with arbitrary-precision rational
/// coefficients. No stored coefficient is zero; term order is graded lex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    terms: BTreeMap<Monomial, RBig>,
    nvars: usize,
}

impl RationalPolynomial {
    pub fn zero(nvars: usize) -> Self {
        RationalPolynomial {
            terms: BTreeMap::new(),
            nvars,
        }
    }

    pub fn constant(nvars: usize, c: RBig) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::constant(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, RBig::ONE)
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::variable(nvars, index), RBig::ONE);
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, RBig)>,
    {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: RBig) {
        debug_assert_eq!(mono.nvars(), self.nvars);
        if coeff == RBig::ZERO {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == RBig::ZERO {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_constant())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RBig)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> RBig {
        self.terms.get(mono).cloned().unwrap_or(RBig::ZERO)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(var))
            .max()
            .unwrap_or(0)
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        DegreeProfile {
            per_variable: (0..self.nvars).map(|i| self.degree_in(i)).collect(),
            total: self.total_degree(),
        }
    }

    /// Graded-lex greatest monomial.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&RBig> {
        self.terms.values().next_back()
    }

    /// Divide by the leading coefficient; the extracted unit is returned
    /// alongside so callers can keep the exact identity.
    pub fn make_monic(&self) -> Result<(RBig, RationalPolynomial)> {
        let lead = self
            .leading_coefficient()
            .ok_or(Error::ZeroPolynomial)?
            .clone();
        let inv = RBig::ONE / lead.clone();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c * &inv))
            .collect();
        Ok((
            lead,
            RationalPolynomial {
                terms,
                nvars: self.nvars,
            },
        ))
    }

    pub fn scale(&self, s: &RBig) -> RationalPolynomial {
        if *s == RBig::ZERO {
            return Self::zero(self.nvars);
        }
        RationalPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
            nvars: self.nvars,
        }
    }

    /// Exact formal derivative with respect to variable `var` (0-based).
    pub fn partial_derivative(&self, var: usize) -> Result<RationalPolynomial> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c * RBig::from(e as i64));
        }
        Ok(out)
    }

    /// Evaluate at a complex point at the context precision.
    pub fn evaluate(&self, point: &[Complex], ctx: &Ctx) -> Result<Complex> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let powers = monomial_power_table(point, &self.max_exponents());
        let mut acc = Complex::zero(ctx);
        for (m, c) in &self.terms {
            let mv = monomial_value(m, &powers, ctx);
            acc += &mv.scale(&ctx.from_rbig(c));
        }
        Ok(acc)
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate_exact(&self, point: &[RBig]) -> Result<RBig> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = RBig::ZERO;
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= point[i].pow(e as isize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Least common multiple of all coefficient denominators (in lowest
    /// terms). This is the denominator bound fed to rational recovery.
    pub fn lcm_denominators(&self) -> Result<UBig> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut acc = UBig::ONE;
        for c in self.terms.values() {
            let d = c.denominator();
            let g = (&acc).gcd(d);
            acc = acc / g * d;
        }
        Ok(acc)
    }

    /// Substitute exact rational values for the first `values.len()`
    /// variables; the result is univariate in the last variable, returned as
    /// dense ascending coefficients.
    pub fn specialize_prefix_exact(&self, values: &[RBig]) -> Vec<RBig> {
        assert_eq!(values.len() + 1, self.nvars);
        let n = self.nvars;
        let deg = self.degree_in(n - 1) as usize;
        let mut coeffs = vec![RBig::ZERO; deg + 1];
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, v) in values.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    t *= v.pow(e as isize);
                }
            }
            coeffs[m.exponent(n - 1) as usize] += t;
        }
        coeffs
    }

    /// Same specialization with complex working-precision values.
    pub fn specialize_prefix(&self, values: &[Complex], ctx: &Ctx) -> Vec<Complex> {
        assert_eq!(values.len() + 1, self.nvars);
        let n = self.nvars;
        let deg = self.degree_in(n - 1) as usize;
        let mut maxe = self.max_exponents();
        maxe.pop();
        let powers = monomial_power_table(values, &maxe);
        let mut coeffs = vec![Complex::zero(ctx); deg + 1];
        for (m, c) in &self.terms {
            let mut t = Complex::from_real(ctx.from_rbig(c));
            for (i, pw) in powers.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    t = &t * &pw[e as usize];
                }
            }
            coeffs[m.exponent(n - 1) as usize] += &t;
        }
        coeffs
    }

    /// Rename variables: new variable `i` is old variable `perm[i]`.
    pub fn permute_variables(&self, perm: &[usize]) -> RationalPolynomial {
        assert_eq!(perm.len(), self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.permuted(perm), c.clone()))
            .collect();
        RationalPolynomial {
            terms,
            nvars: self.nvars,
        }
    }

    /// Squared coefficient 2-norm, exact.
    pub fn norm2_sqr(&self) -> RBig {
        let mut acc = RBig::ZERO;
        for c in self.terms.values() {
            acc += c * c;
        }
        acc
    }

    pub fn to_approx(&self, ctx: &Ctx) -> ApproxPolynomial {
        ApproxPolynomial::from_terms(
            self.nvars,
            ctx.bits(),
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), Complex::from_real(ctx.from_rbig(c)))),
        )
    }

    fn max_exponents(&self) -> Vec<u32> {
        (0..self.nvars).map(|i| self.degree_in(i)).collect()
    }

    /// Canonical text with the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &RBig::ZERO;
            let mag = c.clone().abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            match m.render(names) {
                None => out.push_str(&mag.to_string()),
                Some(ms) => {
                    if mag == RBig::ONE {
                        out.push_str(&ms);
                    } else {
                        out.push_str(&format!("{mag}*{ms}"));
                    }
                }
            }
        }
        out
    }
}

/// Exact product of a list of polynomials over the same variables.
pub fn exact_product(ps: &[RationalPolynomial]) -> Result<RationalPolynomial> {
    let nvars = match ps.first() {
        Some(p) => p.nvars(),
        None => return Ok(RationalPolynomial::one(0)),
    };
    let mut acc = RationalPolynomial::one(nvars);
    for p in ps {
        if p.nvars() != nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                got: p.nvars(),
            });
        }
        acc = &acc * p;
    }
    Ok(acc)
}

/// Per-variable power tables up to the needed exponent, one per coordinate.
pub(crate) fn monomial_power_table(point: &[Complex], max_exponents: &[u32]) -> Vec<Vec<Complex>> {
    point
        .iter()
        .zip(max_exponents)
        .map(|(z, &e)| {
            let prec = z.re.precision().max(2);
            let ctx = Ctx::new(prec);
            let mut row = Vec::with_capacity(e as usize + 1);
            row.push(Complex::one(&ctx));
            for k in 1..=e as usize {
                let next = &row[k - 1] * z;
                row.push(next);
            }
            row
        })
        .collect()
}

pub(crate) fn monomial_value(m: &Monomial, powers: &[Vec<Complex>], ctx: &Ctx) -> Complex {
    let mut acc = Complex::one(ctx);
    for (i, &e) in m.0.iter().enumerate() {
        if e > 0 {
            acc = &acc * &powers[i][e as usize];
        }
    }
    acc
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = RationalPolynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
            nvars: self.nvars,
        }
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dashu_int::IBig;

    fn rat(n: i64, d: u64) -> RBig {
        RBig::from_parts(IBig::from(n), UBig::from(d))
    }

    fn xy_minus_one() -> RationalPolynomial {
        let mut p = RationalPolynomial::zero(2);
        p.add_term(Monomial(vec![1, 1]), RBig::ONE);
        p.add_term(Monomial(vec![0, 0]), RBig::from(-1));
        p
    }

    #[test]
    fn evaluate_on_and_off_variety() {
        let ctx = Ctx::new(96);
        let p = xy_minus_one();
        let at = |a: i64, b: i64| {
            p.evaluate(
                &[
                    Complex::from_real(ctx.from_i64(a)),
                    Complex::from_real(ctx.from_i64(b)),
                ],
                &ctx,
            )
            .unwrap()
        };
        assert!(at(1, 1).abs().to_f64().value() == 0.0);
        assert_eq!(at(2, 3).re.to_f64().value(), 5.0);
        // all-zero point gives the constant term
        assert_eq!(at(0, 0).re.to_f64().value(), -1.0);
    }

    #[test]
    fn evaluate_dimension_mismatch() {
        let ctx = Ctx::new(64);
        let p = xy_minus_one();
        assert!(matches!(
            p.evaluate(&[Complex::one(&ctx)], &ctx),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn derivative_power_rule() {
        // d(x^2 y)/dx = 2xy
        let mut p = RationalPolynomial::zero(2);
        p.add_term(Monomial(vec![2, 1]), RBig::ONE);
        let d = p.partial_derivative(0).unwrap();
        assert_eq!(d.coefficient(&Monomial(vec![1, 1])), RBig::from(2));
        assert_eq!(d.num_terms(), 1);
        // derivative of a constant is zero
        let c = RationalPolynomial::constant(2, RBig::from(5));
        assert!(c.partial_derivative(0).unwrap().is_zero());
        // d(x1 x2 - 1)/dx1 = x2
        let d = xy_minus_one().partial_derivative(0).unwrap();
        assert_eq!(d, RationalPolynomial::variable(2, 1));
        assert!(matches!(
            xy_minus_one().partial_derivative(2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn product_expansion() {
        // (x - 1/2)(x + 1/2) = x^2 - 1/4
        let x = RationalPolynomial::variable(1, 0);
        let a = &x - &RationalPolynomial::constant(1, rat(1, 2));
        let b = &x + &RationalPolynomial::constant(1, rat(1, 2));
        let p = exact_product(&[a.clone(), b]).unwrap();
        assert_eq!(p.coefficient(&Monomial(vec![2])), RBig::ONE);
        assert_eq!(p.coefficient(&Monomial(vec![0])), rat(-1, 4));
        assert_eq!(p.num_terms(), 2);
        // identity and annihilator
        assert_eq!(
            exact_product(&[a.clone(), RationalPolynomial::one(1)]).unwrap(),
            a
        );
        assert!(exact_product(&[a, RationalPolynomial::zero(1)])
            .unwrap()
            .is_zero());
    }

    #[test]
    fn monic_normalization() {
        // 2x^2 + 4 -> x^2 + 2
        let mut p = RationalPolynomial::zero(1);
        p.add_term(Monomial(vec![2]), RBig::from(2));
        p.add_term(Monomial(vec![0]), RBig::from(4));
        let (unit, m) = p.make_monic().unwrap();
        assert_eq!(unit, RBig::from(2));
        assert_eq!(m.coefficient(&Monomial(vec![0])), RBig::from(2));
        assert_eq!(*m.leading_coefficient().unwrap(), RBig::ONE);
        // idempotence
        let (u2, m2) = m.make_monic().unwrap();
        assert_eq!(u2, RBig::ONE);
        assert_eq!(m2, m);
        assert!(matches!(
            RationalPolynomial::zero(1).make_monic(),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn lcm_of_denominators() {
        // x^2 + (5/6)x + 1/6 -> 6
        let mut p = RationalPolynomial::zero(1);
        p.add_term(Monomial(vec![2]), RBig::ONE);
        p.add_term(Monomial(vec![1]), rat(5, 6));
        p.add_term(Monomial(vec![0]), rat(1, 6));
        assert_eq!(p.lcm_denominators().unwrap(), UBig::from(6u8));
        // integer coefficients -> 1
        let q = RationalPolynomial::constant(1, RBig::from(7));
        assert_eq!(q.lcm_denominators().unwrap(), UBig::ONE);
        // x/4 + y/10 -> 20
        let mut r = RationalPolynomial::zero(2);
        r.add_term(Monomial(vec![1, 0]), rat(1, 4));
        r.add_term(Monomial(vec![0, 1]), rat(1, 10));
        assert_eq!(r.lcm_denominators().unwrap(), UBig::from(20u8));
        assert!(RationalPolynomial::zero(1).lcm_denominators().is_err());
    }

    #[test]
    fn specialization_is_exact() {
        // f = x1 x2 - 1 at x1 = 3/2: coefficients [-1, 3/2]
        let p = xy_minus_one();
        let coeffs = p.specialize_prefix_exact(&[rat(3, 2)]);
        assert_eq!(coeffs, vec![RBig::from(-1), rat(3, 2)]);
    }

    #[test]
    fn permutation_roundtrip() {
        let p = xy_minus_one();
        let q = p.permute_variables(&[1, 0]);
        assert_eq!(q.permute_variables(&[1, 0]), p);
    }
}
