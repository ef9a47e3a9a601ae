//! Least-squares polynomial division.
//!
//! Given monic g, the minimizer h of ‖f − g·h‖₂ over a fixed support is a
//! linear least-squares problem in h's coefficients: each candidate monomial
//! of h contributes a shifted copy of g's coefficient vector as a column.
//! Solved by normal equations and a complex Cholesky factorization at
//! working precision; the achieved residual is the engine's accept/reject
//! signal for candidate factors.

use crate::error::{Error, Result};
use crate::interp::monomial_candidates_capped;
use crate::num::{Complex, Ctx, Real};
use crate::poly::{ApproxPolynomial, Monomial};
use std::collections::BTreeMap;

/// Minimize ‖f − g·h‖₂ over h supported on total degree ≤ deg f − deg g
/// (with per-variable caps inherited from f and g). Returns (h, residual).
pub fn approx_divide(
    f: &ApproxPolynomial,
    g: &ApproxPolynomial,
) -> Result<(ApproxPolynomial, Real)> {
    let nvars = f.nvars();
    debug_assert_eq!(nvars, g.nvars());
    let df = f.total_degree();
    let dg = g.total_degree();
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if dg > df {
        return Err(Error::DegreeMismatch {
            dividend: df as usize,
            divisor: dg as usize,
        });
    }
    let ctx = Ctx::new(f.precision_bits().max(g.precision_bits()));

    let caps: Vec<u32> = (0..nvars)
        .map(|i| {
            let fi = f.terms().map(|(m, _)| m.exponent(i)).max().unwrap_or(0);
            let gi = g.terms().map(|(m, _)| m.exponent(i)).max().unwrap_or(0);
            fi.saturating_sub(gi)
        })
        .collect();
    let support = monomial_candidates_capped(df - dg, &caps);
    let cols: Vec<BTreeMap<Monomial, Complex>> = support
        .monomials
        .iter()
        .map(|mh| g.terms().map(|(mg, c)| (mg.mul(mh), c.clone())).collect())
        .collect();
    let c = cols.len();

    // normal equations M x = rhs with M = A^H A, rhs = A^H b
    let mut gram = vec![vec![Complex::zero(&ctx); c]; c];
    for j in 0..c {
        for k in j..c {
            let (small, big, conj_small) = if cols[j].len() <= cols[k].len() {
                (&cols[j], &cols[k], true)
            } else {
                (&cols[k], &cols[j], false)
            };
            let mut acc = Complex::zero(&ctx);
            for (m, cj) in small {
                if let Some(ck) = big.get(m) {
                    // inner product conj(col_j) · col_k
                    let term = if conj_small {
                        &cj.conj() * ck
                    } else {
                        &ck.conj() * cj
                    };
                    acc += &term;
                }
            }
            gram[k][j] = acc.conj();
            gram[j][k] = acc;
        }
    }
    let mut rhs = vec![Complex::zero(&ctx); c];
    for (j, col) in cols.iter().enumerate() {
        let mut acc = Complex::zero(&ctx);
        for (m, cj) in col {
            if let Some(b) = f.coefficient(m) {
                acc += &(&cj.conj() * b);
            }
        }
        rhs[j] = acc;
    }

    let x = cholesky_solve(&gram, &rhs, &ctx)?;
    let h = ApproxPolynomial::from_terms(nvars, ctx.bits(), support.monomials.into_iter().zip(x));
    let residual = f.sub(&g.mul(&h)).norm2();
    Ok((h, residual))
}

/// Solve M x = b for Hermitian positive-definite M via L·L^H.
#[allow(clippy::needless_range_loop)]
fn cholesky_solve(m: &[Vec<Complex>], b: &[Complex], ctx: &Ctx) -> Result<Vec<Complex>> {
    let n = m.len();
    let mut l = vec![vec![Complex::zero(ctx); n]; n];
    for j in 0..n {
        let mut diag = m[j][j].re.clone();
        for k in 0..j {
            diag -= l[j][k].norm_sqr();
        }
        if diag <= ctx.zero() {
            return Err(Error::RankDeficient);
        }
        let dj = diag.sqrt();
        let inv = ctx.one() / &dj;
        l[j][j] = Complex::from_real(dj);
        for i in (j + 1)..n {
            let mut acc = m[i][j].clone();
            for k in 0..j {
                acc -= &(&l[i][k] * &l[j][k].conj());
            }
            l[i][j] = acc.scale(&inv);
        }
    }
    // forward: L y = b
    let mut y = vec![Complex::zero(ctx); n];
    for i in 0..n {
        let mut acc = b[i].clone();
        for k in 0..i {
            acc -= &(&l[i][k] * &y[k]);
        }
        y[i] = acc.scale(&(ctx.one() / &l[i][i].re));
    }
    // backward: L^H x = y
    let mut x = vec![Complex::zero(ctx); n];
    for i in (0..n).rev() {
        let mut acc = y[i].clone();
        for k in (i + 1)..n {
            acc -= &(&l[k][i].conj() * &x[k]);
        }
        x[i] = acc.scale(&(ctx.one() / &l[i][i].re));
    }
    Ok(x)
}
