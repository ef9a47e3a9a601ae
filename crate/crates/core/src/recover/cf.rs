//! Continued fractions with a truncation control error.

use crate::error::{Error, Result};
use crate::num::{real_to_rbig, Real};
use dashu_base::{DivRem, Sign};
use dashu_int::IBig;
#[cfg(test)]
use dashu_int::UBig;
use dashu_ratio::RBig;

/// Finite continued fraction `[a_0; a_1, a_2, ...]` with nonnegative `a_0`
/// and all later terms at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFExpansion {
    pub terms: Vec<IBig>,
}

/// Expand a nonnegative value, cutting the expansion as soon as the
/// fractional remainder drops below `eps1`.
///
/// The input is a dyadic float, hence an exact rational; the expansion runs
/// in exact rational arithmetic with no re-rounding between steps, so the
/// returned terms are the true leading continued-fraction terms of the
/// perturbed value. The cap turns inputs that never clear the threshold
/// (irrationals approximated far beyond the budget) into a clean error.
pub fn cf_expand(a: &Real, eps1: &RBig) -> Result<CFExpansion> {
    assert!(a >= &Real::ZERO, "cf_expand takes a nonnegative value");
    assert!(eps1 > &RBig::ZERO);
    let cap = iteration_cap(eps1);
    let mut terms = Vec::new();
    // x = num/den ≥ 0, exact
    let mut num = real_to_rbig(a);
    for _ in 0..cap {
        let (n, d) = (num.numerator().clone(), num.denominator().clone());
        debug_assert!(n.sign() != Sign::Negative);
        let (q, r) = n.div_rem(IBig::from(d.clone()));
        terms.push(q);
        // remainder r/d < eps1 terminates
        let rem = RBig::from_parts(r, d);
        if rem < *eps1 {
            return Ok(CFExpansion { terms });
        }
        num = RBig::ONE / rem;
    }
    Err(Error::DivergentExpansion { cap })
}

pub(crate) fn iteration_cap(eps1: &RBig) -> usize {
    let inv = RBig::ONE / eps1.clone();
    let bits = crate::num::ceil_log2_rbig(&inv).max(1) as usize;
    4 * bits + 64
}

/// Exact rational value of a finite continued fraction, folded from the
/// right.
pub fn cf_evaluate(cf: &CFExpansion) -> Result<RBig> {
    let mut it = cf.terms.iter().rev();
    let last = it.next().ok_or(Error::EmptyExpansion)?;
    let mut acc = RBig::from(last.clone());
    for t in it {
        acc = RBig::from(t.clone()) + RBig::ONE / acc;
    }
    Ok(acc)
}
