//! Determinant magnitude bounds for generalized Vandermonde matrices, and
//! the control error they induce on the sampling tolerance.
//!
//! With M the largest entry magnitude and B the largest pairwise difference
//! within any row or column:
//!
//! * |V_m| ≤ m!·M^(m−1)·B                       (m ≥ 2)
//! * one column replaced by ε-bounded entries:
//!   |V_m| ≤ m!·M^(m−2)·B·ε                     (m ≥ 3)
//! * entrywise perturbation by ≤ ε:
//!   |V_m⁽¹⁾ − V_m⁽²⁾| ≤ m·m!·M^(m−2)·B·ε        (m ≥ 3)
//!
//! The last bound is what couples sampling accuracy to coefficient accuracy:
//! choosing ε with m·m!·M^(m−2)·B·ε ≤ β keeps every reconstructed coefficient
//! within the continued-fraction recovery tolerance β.

use crate::error::{Error, Result};
use crate::num::{ceil_log2_rbig, real_to_rbig, Ctx, Real};
use crate::recover::compute_budget;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

pub(crate) fn factorial(m: usize) -> UBig {
    let mut acc = UBig::ONE;
    for k in 2..=m {
        acc *= UBig::from(k);
    }
    acc
}

fn pow_checked(base: &Real, exp: usize, ctx: &Ctx) -> Real {
    if exp == 0 {
        ctx.one()
    } else {
        base.clone().powi(IBig::from(exp))
    }
}

/// m!·M^(m−1)·B for m ≥ 2.
pub fn vandermonde_bound(m: usize, max_entry: &Real, max_diff: &Real) -> Result<Real> {
    if m < 2 {
        return Err(Error::Precondition {
            message: format!("vandermonde_bound needs m >= 2, got {m}"),
        });
    }
    let ctx = Ctx::new(max_entry.precision().max(64));
    let fac = ctx.from_rbig(&RBig::from(IBig::from(factorial(m))));
    Ok(&fac * &pow_checked(max_entry, m - 1, &ctx) * max_diff)
}

/// m!·M^(m−2)·B·ε for a determinant with one column of ε-bounded entries,
/// m ≥ 3.
pub fn perturbed_bound(
    m: usize,
    max_entry: &Real,
    max_diff: &Real,
    eps_col: &Real,
) -> Result<Real> {
    if m < 3 {
        return Err(Error::Precondition {
            message: format!("perturbed_bound needs m >= 3, got {m}"),
        });
    }
    let ctx = Ctx::new(max_entry.precision().max(64));
    let fac = ctx.from_rbig(&RBig::from(IBig::from(factorial(m))));
    Ok(&(&fac * &pow_checked(max_entry, m - 2, &ctx)) * &(max_diff * eps_col))
}

/// m·m!·M^(m−2)·B·ε bounding the difference of two entrywise-ε-close
/// determinants, m ≥ 3.
pub fn difference_bound(m: usize, max_entry: &Real, max_diff: &Real, eps: &Real) -> Result<Real> {
    if m < 3 {
        return Err(Error::Precondition {
            message: format!("difference_bound needs m >= 3, got {m}"),
        });
    }
    let ctx = Ctx::new(max_entry.precision().max(64));
    let factor = ctx.from_rbig(&RBig::from(IBig::from(factorial(m) * UBig::from(m))));
    Ok(&(&factor * &pow_checked(max_entry, m - 2, &ctx)) * &(max_diff * eps))
}

/// Determinant sensitivity m·m!·M^(m−2)·B (the m = 2 case substitutes the
/// direct bound 2!·M·B, the smallest conservative member of the family).
pub fn sensitivity(m: usize, max_entry: &Real, max_diff: &Real, ctx: &Ctx) -> Result<Real> {
    if m < 2 {
        return Err(Error::Precondition {
            message: format!("sensitivity needs m >= 2, got {m}"),
        });
    }
    if m == 2 {
        return Ok(&(ctx.from_i64(2) * max_entry) * max_diff);
    }
    let factor = ctx.from_rbig(&RBig::from(IBig::from(factorial(m) * UBig::from(m))));
    Ok(&(&factor * &pow_checked(max_entry, m - 2, ctx)) * max_diff)
}

/// Sampling tolerance and working precision for a given denominator bound
/// and matrix statistics: eps = β(L)/(m·m!·M^(m−2)·B), precision
/// max(64, ceil(log2(1/eps)) + 32).
pub fn control_error(
    l: &UBig,
    m: usize,
    max_entry: &Real,
    max_diff: &Real,
) -> Result<(Real, usize)> {
    if max_entry <= &Real::ZERO {
        return Err(Error::NonpositiveStatistic {
            which: "max entry M",
        });
    }
    if max_diff <= &Real::ZERO {
        return Err(Error::NonpositiveStatistic {
            which: "max difference B",
        });
    }
    let budget = compute_budget(l)?;
    let ctx = Ctx::new(max_entry.precision().max(64));
    let sens = sensitivity(m, max_entry, max_diff, &ctx)?;
    let eps = ctx.from_rbig(&budget.beta) / &sens;
    // exact rational bit count of 1/eps
    let sens_r = real_to_rbig(&sens);
    let inv_eps = sens_r / &budget.beta;
    let bits = ceil_log2_rbig(&inv_eps).max(0) as usize + 32;
    Ok((eps, bits.max(64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(ctx: &Ctx, v: f64) -> Real {
        ctx.from_f64(v)
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), UBig::ONE);
        assert_eq!(factorial(1), UBig::ONE);
        assert_eq!(factorial(5), UBig::from(120u8));
    }

    #[test]
    fn vandermonde_bound_values() {
        let ctx = Ctx::new(96);
        // 2!·1·0.5 = 1
        let b = vandermonde_bound(2, &r(&ctx, 1.0), &r(&ctx, 0.5)).unwrap();
        assert_eq!(b.to_f64().value(), 1.0);
        // 3!·2²·1 = 24
        let b = vandermonde_bound(3, &r(&ctx, 2.0), &r(&ctx, 1.0)).unwrap();
        assert_eq!(b.to_f64().value(), 24.0);
        // B = 0 (equal rows) gives 0
        let b = vandermonde_bound(4, &r(&ctx, 3.0), &r(&ctx, 0.0)).unwrap();
        assert_eq!(b.to_f64().value(), 0.0);
        assert!(vandermonde_bound(1, &r(&ctx, 1.0), &r(&ctx, 1.0)).is_err());
    }

    #[test]
    fn perturbed_bound_values() {
        let ctx = Ctx::new(96);
        // 1·6·1·0.1 = 0.6
        let b = perturbed_bound(3, &r(&ctx, 1.0), &r(&ctx, 1.0), &r(&ctx, 0.1)).unwrap();
        assert!((b.to_f64().value() - 0.6).abs() < 1e-15);
        // zero column
        let b = perturbed_bound(4, &r(&ctx, 2.0), &r(&ctx, 1.0), &r(&ctx, 0.0)).unwrap();
        assert_eq!(b.to_f64().value(), 0.0);
        // 2·6·0.5·0.01 = 0.06
        let b = perturbed_bound(3, &r(&ctx, 2.0), &r(&ctx, 0.5), &r(&ctx, 0.01)).unwrap();
        assert!((b.to_f64().value() - 0.06).abs() < 1e-15);
        assert!(perturbed_bound(2, &r(&ctx, 1.0), &r(&ctx, 1.0), &r(&ctx, 1.0)).is_err());
    }

    #[test]
    fn difference_bound_values() {
        let ctx = Ctx::new(96);
        // 3·6·1·1·0.01 = 0.18
        let b = difference_bound(3, &r(&ctx, 1.0), &r(&ctx, 1.0), &r(&ctx, 0.01)).unwrap();
        assert!((b.to_f64().value() - 0.18).abs() < 1e-15);
        // identical matrices
        let b = difference_bound(5, &r(&ctx, 2.0), &r(&ctx, 1.0), &r(&ctx, 0.0)).unwrap();
        assert_eq!(b.to_f64().value(), 0.0);
        // 4·24·1·2·0.001 = 0.192
        let b = difference_bound(4, &r(&ctx, 1.0), &r(&ctx, 2.0), &r(&ctx, 0.001)).unwrap();
        assert!((b.to_f64().value() - 0.192).abs() < 1e-15);
        assert!(difference_bound(2, &r(&ctx, 1.0), &r(&ctx, 1.0), &r(&ctx, 1.0)).is_err());
    }

    #[test]
    fn control_error_formula() {
        let ctx = Ctx::new(96);
        // L=2: beta = 1/16; m=3, M=B=1: sensitivity 18 -> eps = 1/288
        let (eps, bits) = control_error(&UBig::from(2u8), 3, &r(&ctx, 1.0), &r(&ctx, 1.0)).unwrap();
        assert!((eps.to_f64().value() - 1.0 / 288.0).abs() < 1e-18);
        assert!(bits >= 64);
        // L=10: beta = 1/2160 -> eps = 1/38880
        let (eps, _) = control_error(&UBig::from(10u8), 3, &r(&ctx, 1.0), &r(&ctx, 1.0)).unwrap();
        assert!((eps.to_f64().value() - 1.0 / 38880.0).abs() < 1e-18);
        // eps halves when B doubles
        let (e1, _) = control_error(&UBig::from(5u8), 4, &r(&ctx, 1.5), &r(&ctx, 1.0)).unwrap();
        let (e2, _) = control_error(&UBig::from(5u8), 4, &r(&ctx, 1.5), &r(&ctx, 2.0)).unwrap();
        let ratio = (&e1 / &e2).to_f64().value();
        assert!((ratio - 2.0).abs() < 1e-20);
        // nonpositive stats rejected
        assert!(control_error(&UBig::from(5u8), 3, &r(&ctx, 0.0), &r(&ctx, 1.0)).is_err());
        assert!(control_error(&UBig::from(5u8), 3, &r(&ctx, 1.0), &r(&ctx, -1.0)).is_err());
    }
}
