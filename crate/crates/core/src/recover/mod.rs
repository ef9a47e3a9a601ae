//! Exact rational recovery from floating approximations.
//!
//! A reduced fraction p/q with q ≤ L is pinned down by any approximation
//! within β = 1/((2K+2)·L·(L−1)) of it: the continued fraction of the
//! approximation then coincides with that of p/q up to a tail that the
//! truncation threshold ε₁ = 1/K cuts off (either the next term is ≥ K, or
//! the expansion ends in the `a_N − 1, 1, ≥K` pattern, which evaluates to the
//! same rational). Expanding with ε₁ and evaluating exactly therefore returns
//! p/q itself.

mod cf;

pub use cf::{cf_evaluate, cf_expand, CFExpansion};

use crate::error::{Error, Result};
use crate::num::Real;
use crate::poly::{ApproxPolynomial, RationalPolynomial};
use dashu_base::{Abs, Sign};
use dashu_int::UBig;
use dashu_ratio::RBig;

/// The coupled tolerances of the recovery pipeline.
///
/// `eps` (the sampling/root tolerance) starts unset and is filled by the
/// interpolation stage once the matrix statistics are known.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBudget {
    /// Denominator upper bound for recovered coefficients.
    pub l: UBig,
    /// K = L + 1.
    pub k: UBig,
    /// Recovery tolerance 1/((2K+2)·L·(L−1)).
    pub beta: RBig,
    /// Expansion truncation threshold 1/K.
    pub eps1: RBig,
    /// Sampling/root tolerance; set by the interpolation error budget.
    pub eps: Option<Real>,
}

/// K = L+1, eps1 = 1/K, beta = 1/((2K+2)·L·(L−1)); eps is left unset.
pub fn compute_budget(l: &UBig) -> Result<ErrorBudget> {
    if *l < UBig::from(2u8) {
        return Err(Error::BoundTooSmall { got: l.to_string() });
    }
    let k = l + UBig::ONE;
    let two_k_plus_2 = UBig::from(2u8) * &k + UBig::from(2u8);
    let denom = two_k_plus_2 * l * (l - UBig::ONE);
    let beta = RBig::from_parts(dashu_int::IBig::ONE, denom);
    let eps1 = RBig::from_parts(dashu_int::IBig::ONE, k.clone());
    Ok(ErrorBudget {
        l: l.clone(),
        k,
        beta,
        eps1,
        eps: None,
    })
}

/// Recover the reduced rational p/q (q ≤ `l`) approximated by `r`.
///
/// The caller must have |r − p/q| < β(l); when that fails the recovered
/// denominator can exceed the bound, which is reported rather than guessed
/// around. Magnitudes below β snap to zero. Negative values are recovered by
/// sign extraction.
pub fn recover_rational(r: &Real, l: &UBig) -> Result<RBig> {
    let budget = compute_budget(l)?;
    recover_with_budget(r, &budget)
}

pub fn recover_with_budget(r: &Real, budget: &ErrorBudget) -> Result<RBig> {
    let prec = r.precision().max(64);
    let beta_f = budget
        .beta
        .to_float::<dashu_float::round::mode::HalfEven, 2>(prec)
        .value();
    let (sign, mag) = match r.sign() {
        Sign::Negative => (Sign::Negative, -r.clone()),
        Sign::Positive => (Sign::Positive, r.clone()),
    };
    if mag < beta_f {
        return Ok(RBig::ZERO);
    }
    let cf = cf_expand(&mag, &budget.eps1)?;
    let value = cf_evaluate(&cf)?;
    if value.denominator() > &budget.l {
        return Err(Error::BoundViolated {
            denominator: value.denominator().to_string(),
            bound: budget.l.to_string(),
        });
    }
    Ok(match sign {
        Sign::Negative => -value,
        Sign::Positive => value,
    })
}

/// Term-by-term rational recovery of a near-real polynomial.
///
/// Imaginary parts must stay below β; real parts are recovered under the
/// denominator bound. Coefficients that snap to zero are dropped.
pub fn recover_coefficients(g: &ApproxPolynomial, l: &UBig) -> Result<RationalPolynomial> {
    let budget = compute_budget(l)?;
    let ctx = g.ctx();
    let beta_f = ctx.from_rbig(&budget.beta);
    let mut out = RationalPolynomial::zero(g.nvars());
    for (m, c) in g.terms() {
        let im_mag = c.im.clone().abs();
        if im_mag >= beta_f {
            return Err(Error::NotRealPolynomial {
                magnitude: im_mag.to_f64().value(),
                threshold: beta_f.to_f64().value(),
            });
        }
        let value = recover_with_budget(&c.re, &budget).map_err(|e| match e {
            Error::BoundViolated { .. } | Error::DivergentExpansion { .. } => {
                Error::NotRationalAtBound {
                    bound: budget.l.to_string(),
                }
            }
            other => other,
        })?;
        if value != RBig::ZERO {
            out.add_term(m.clone(), value);
        }
    }
    Ok(out)
}
