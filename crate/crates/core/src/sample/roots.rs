//! Simultaneous complex root refinement (Aberth–Ehrlich) at working
//! precision.

use crate::error::{Error, Result};
use crate::num::{cmp_real, Complex, Ctx, Real, RealExt};
use dashu_base::EstimatedLog2;
use std::cmp::Ordering;

/// All complex roots of the dense univariate polynomial with ascending
/// `coeffs`, refined until every backward residual |p(z)| drops to roundoff
/// level, and accepted when it is at most `eps`·‖coeffs‖₂.
pub fn univariate_roots(coeffs: &[Complex], eps: &Real, ctx: &Ctx) -> Result<Vec<Complex>> {
    let mut c: Vec<Complex> = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
    let degree = c.len().saturating_sub(1);
    if c.iter().all(|z| z.is_zero()) {
        return Err(Error::ZeroPolynomial);
    }
    if degree == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if degree == 1 {
        let root = -&c[0].div(&c[1]);
        return Ok(vec![root]);
    }

    let norm = coeff_norm(&c, ctx);
    let stop = &norm * &ctx.epsilon_scaled(16);
    let stop_sqr = &stop * &stop;
    let accept = &norm * eps;
    let accept_sqr = &accept * &accept;
    let stagnation = ctx.epsilon_scaled(8);

    let deriv: Vec<Complex> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, z)| z.scale(&ctx.from_i64(k as i64)))
        .collect();

    let mut z = initial_guesses(&c, degree, ctx);
    let max_iterations = 200usize;
    let mut converged = false;
    for _ in 0..max_iterations {
        let mut max_residual_sqr = ctx.zero();
        let mut max_step = ctx.zero();
        let mut max_mag = ctx.one();
        for k in 0..degree {
            let pz = horner(&c, &z[k], ctx);
            let r = pz.norm_sqr();
            if cmp_real(&r, &max_residual_sqr) == Ordering::Greater {
                max_residual_sqr = r;
            }
            let dpz = horner(&deriv, &z[k], ctx);
            let w = if dpz.is_zero() {
                // flat spot: nudge instead of dividing by zero
                Complex::from_real(ctx.epsilon_scaled(32))
            } else {
                pz.div(&dpz)
            };
            let mut s = Complex::zero(ctx);
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    let d = &z[k] - zj;
                    if !d.is_zero() {
                        s += &d.recip();
                    }
                }
            }
            let denom = &Complex::one(ctx) - &(&w * &s);
            let step = if denom.is_zero() { w } else { w.div(&denom) };
            let mag = step.abs();
            if cmp_real(&mag, &max_step) == Ordering::Greater {
                max_step = mag;
            }
            let zm = z[k].abs();
            if cmp_real(&zm, &max_mag) == Ordering::Greater {
                max_mag = zm;
            }
            z[k] = &z[k] - &step;
        }
        if cmp_real(&max_residual_sqr, &stop_sqr) != Ordering::Greater {
            converged = true;
            break;
        }
        if cmp_real(&max_step, &(&stagnation * &max_mag)) != Ordering::Greater {
            converged = true;
            break;
        }
    }
    let _ = converged;

    // backward-error acceptance
    for zk in &z {
        let r = horner(&c, zk, ctx).norm_sqr();
        if cmp_real(&r, &accept_sqr) == Ordering::Greater {
            return Err(Error::NonConvergence {
                iterations: max_iterations,
            });
        }
    }
    Ok(z)
}

pub(crate) fn coeff_norm(coeffs: &[Complex], ctx: &Ctx) -> Real {
    let mut acc = ctx.zero();
    for z in coeffs {
        acc += z.norm_sqr();
    }
    if acc.is_zero() {
        ctx.zero()
    } else {
        acc.sqrt()
    }
}

pub(crate) fn horner(coeffs: &[Complex], z: &Complex, ctx: &Ctx) -> Complex {
    let mut acc = Complex::zero(ctx);
    for c in coeffs.iter().rev() {
        acc = &(&acc * z) + c;
    }
    acc
}

/// Guesses on a circle of Fujiwara-style radius, angles offset off the axes.
fn initial_guesses(c: &[Complex], degree: usize, ctx: &Ctx) -> Vec<Complex> {
    let lead_log2 = log2_mag(&c[degree]);
    let mut radius_log2: f64 = -1024.0;
    for (i, ci) in c.iter().enumerate().take(degree) {
        if ci.is_zero() {
            continue;
        }
        let l = (log2_mag(ci) - lead_log2) / (degree - i) as f64;
        radius_log2 = radius_log2.max(l);
    }
    let radius = 2.0 * radius_log2.exp2();
    let radius = if radius.is_finite() && radius > 0.0 {
        radius
    } else {
        1.0
    };
    (0..degree)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (degree as f64) + 0.4;
            Complex::new(
                ctx.from_f64(radius * theta.cos()),
                ctx.from_f64(radius * theta.sin()),
            )
        })
        .collect()
}

fn log2_mag(z: &Complex) -> f64 {
    let n = z.norm_sqr();
    let (lo, hi) = n.log2_bounds();
    (0.5 * 0.5 * (lo + hi)) as f64
}
