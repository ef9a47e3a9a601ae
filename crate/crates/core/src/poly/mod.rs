//! Sparse multivariate polynomials: exact rational and working-precision
//! complex coefficients, parsing/printing, and structural predicates.
//!
//! Terms are keyed by [`Monomial`] in a `BTreeMap`, whose ordering is graded
//! lexicographic with the user-supplied variable order. That single choice
//! makes iteration, printing and leading-term extraction deterministic
//! everywhere downstream.

mod approx;
mod exact;
mod parse;
mod squarefree;

pub use approx::ApproxPolynomial;
pub use exact::{exact_product, RationalPolynomial};
pub use parse::parse_poly;
pub use squarefree::squarefree_probe;

pub(crate) use exact::{monomial_power_table as power_table, monomial_value as power_value};

use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of one power product; length equals the ambient variable
/// count of the owning polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        assert!(index < nvars);
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        Monomial(perm.iter().map(|&i| self.0[i]).collect())
    }
}

/// Graded lexicographic: total degree first, then lexicographic on the
/// exponent vector (earlier variables weigh more).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    /// Render with the given variable names, `*`-joined; `None` for the
    /// constant monomial.
    pub fn render(&self, names: &[String]) -> Option<String> {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        if parts.is_empty() {
            None
        } else {
            Some(parts.join("*"))
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.0.len()).map(|i| format!("x{i}")).collect();
        match self.render(&names) {
            Some(s) => write!(f, "{s}"),
            None => write!(f, "1"),
        }
    }
}

/// Per-variable and total degrees of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub per_variable: Vec<u32>,
    pub total: u32,
}

impl DegreeProfile {
    pub fn nvars(&self) -> usize {
        self.per_variable.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let one = Monomial::constant(2);
        let x1 = Monomial::variable(2, 0);
        let x2 = Monomial::variable(2, 1);
        let x1x2 = x1.mul(&x2);
        let x1sq = x1.mul(&x1);
        assert!(one < x2);
        assert!(x2 < x1);
        assert!(x1 < x2.mul(&x2));
        assert!(x2.mul(&x2) < x1x2);
        assert!(x1x2 < x1sq);
    }

    #[test]
    fn display_forms() {
        let m = Monomial(vec![2, 0, 1]);
        assert_eq!(m.to_string(), "x1^2*x3");
        assert_eq!(Monomial::constant(3).to_string(), "1");
    }
}
