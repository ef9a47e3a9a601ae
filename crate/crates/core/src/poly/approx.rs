//! Sparse polynomials with working-precision complex coefficients.

use super::exact::{monomial_power_table, monomial_value};
use super::Monomial;
use crate::error::{Error, Result};
use crate::num::{cmp_real, Complex, Ctx, Real, RealExt};
use dashu_base::Abs;
use std::collections::BTreeMap;
use std::fmt;

/// Same shape as [`super::RationalPolynomial`] but with complex coefficients
/// at an explicit working precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxPolynomial {
    terms: BTreeMap<Monomial, Complex>,
    nvars: usize,
    precision_bits: usize,
}

impl ApproxPolynomial {
    pub fn zero(nvars: usize, precision_bits: usize) -> Self {
        ApproxPolynomial {
            terms: BTreeMap::new(),
            nvars,
            precision_bits,
        }
    }

    pub fn from_terms<I>(nvars: usize, precision_bits: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Complex)>,
    {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            if !c.is_zero() {
                map.insert(m, c);
            }
        }
        ApproxPolynomial {
            terms: map,
            nvars,
            precision_bits,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    pub fn ctx(&self) -> Ctx {
        Ctx::new(self.precision_bits)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Complex> {
        self.terms.get(m)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&Complex> {
        self.terms.values().next_back()
    }

    /// Divide through by the leading coefficient.
    pub fn make_monic(&self) -> Result<ApproxPolynomial> {
        let lead = self
            .leading_coefficient()
            .ok_or(Error::ZeroPolynomial)?
            .clone();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.div(&lead)))
            .collect();
        Ok(ApproxPolynomial {
            terms,
            nvars: self.nvars,
            precision_bits: self.precision_bits,
        })
    }

    pub fn evaluate(&self, point: &[Complex]) -> Result<Complex> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let ctx = self.ctx();
        let maxe: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|m| m.exponent(i)).max().unwrap_or(0))
            .collect();
        let powers = monomial_power_table(point, &maxe);
        let mut acc = Complex::zero(&ctx);
        for (m, c) in &self.terms {
            acc += &(&monomial_value(m, &powers, &ctx) * c);
        }
        Ok(acc)
    }

    pub fn mul(&self, rhs: &ApproxPolynomial) -> ApproxPolynomial {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let prec = self.precision_bits.max(rhs.precision_bits);
        let mut map: BTreeMap<Monomial, Complex> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                use std::collections::btree_map::Entry;
                match map.entry(m) {
                    Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    Entry::Occupied(mut o) => {
                        *o.get_mut() += &c;
                    }
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        ApproxPolynomial {
            terms: map,
            nvars: self.nvars,
            precision_bits: prec,
        }
    }

    pub fn sub(&self, rhs: &ApproxPolynomial) -> ApproxPolynomial {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            use std::collections::btree_map::Entry;
            match out.terms.entry(m.clone()) {
                Entry::Vacant(v) => {
                    v.insert(-c);
                }
                Entry::Occupied(mut o) => {
                    *o.get_mut() -= c;
                }
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Coefficient 2-norm.
    pub fn norm2(&self) -> Real {
        let ctx = self.ctx();
        let mut acc = ctx.zero();
        for c in self.terms.values() {
            acc += c.norm_sqr();
        }
        if acc.is_zero() {
            return ctx.zero();
        }
        acc.sqrt()
    }

    /// Largest imaginary-part magnitude over all coefficients.
    pub fn max_imag_abs(&self) -> Real {
        let ctx = self.ctx();
        self.terms
            .values()
            .map(|c| c.im.clone().abs())
            .max_by(cmp_real)
            .unwrap_or_else(|| ctx.zero())
    }

    /// Zero out all imaginary parts.
    pub fn realified(&self) -> ApproxPolynomial {
        ApproxPolynomial::from_terms(
            self.nvars,
            self.precision_bits,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), Complex::from_real(c.re.clone()))),
        )
    }

    /// Drop coefficients whose magnitude is below `threshold`.
    pub fn pruned(&self, threshold: &Real) -> ApproxPolynomial {
        ApproxPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| cmp_real(&c.abs(), threshold) == std::cmp::Ordering::Greater)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            nvars: self.nvars,
            precision_bits: self.precision_bits,
        }
    }
}

impl fmt::Display for ApproxPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| format!("({c})*{m}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monic_division_of_scaled_poly() {
        // (3+0i)xy + (6+0i) -> xy + 2
        let ctx = Ctx::new(96);
        let p = ApproxPolynomial::from_terms(
            2,
            96,
            vec![
                (Monomial(vec![1, 1]), Complex::from_real(ctx.from_i64(3))),
                (Monomial(vec![0, 0]), Complex::from_real(ctx.from_i64(6))),
            ],
        );
        let m = p.make_monic().unwrap();
        let lead = m.coefficient(&Monomial(vec![1, 1])).unwrap();
        let konst = m.coefficient(&Monomial(vec![0, 0])).unwrap();
        assert!((lead.re.to_f64().value() - 1.0).abs() < 1e-25);
        assert!((konst.re.to_f64().value() - 2.0).abs() < 1e-25);
        assert!(ApproxPolynomial::zero(2, 64).make_monic().is_err());
    }

    #[test]
    fn product_and_norm() {
        let ctx = Ctx::new(96);
        // (x + i)(x - i) = x^2 + 1
        let x = Monomial(vec![1]);
        let one = Monomial(vec![0]);
        let a = ApproxPolynomial::from_terms(
            1,
            96,
            vec![
                (x.clone(), Complex::one(&ctx)),
                (one.clone(), Complex::i(&ctx)),
            ],
        );
        let b = ApproxPolynomial::from_terms(
            1,
            96,
            vec![
                (x.clone(), Complex::one(&ctx)),
                (one.clone(), -&Complex::i(&ctx)),
            ],
        );
        let p = a.mul(&b);
        assert_eq!(p.num_terms(), 2);
        assert!((p.coefficient(&one).unwrap().re.to_f64().value() - 1.0).abs() < 1e-25);
        assert!((p.norm2().to_f64().value() - 2f64.sqrt()).abs() < 1e-12);
    }
}
