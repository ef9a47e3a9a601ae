//! One-sided Jacobi SVD for small complex matrices at working precision.
//!
//! The columns of A are repeatedly rotated in pairs until mutually
//! orthogonal: a unit phase is applied to make the pair's inner product real,
//! then a real Jacobi rotation zeroes it. At convergence A·V = W with
//! orthogonal columns, so the singular values are the column norms of W and V
//! holds the right singular vectors — including an orthonormal basis of the
//! nullspace where column norms vanish.

use crate::num::{cmp_real, Complex, Ctx, Real, RealExt};
use dashu_base::Abs;

pub struct Svd {
    /// Column norms of A·V, sorted descending.
    pub singular: Vec<Real>,
    /// Right singular vectors, `vectors[j]` matching `singular[j]`.
    pub vectors: Vec<Vec<Complex>>,
}

/// Decompose the matrix given as `cols` (each a length-r column vector).
pub fn one_sided_jacobi(mut cols: Vec<Vec<Complex>>, ctx: &Ctx) -> Svd {
    let m = cols.len();
    let mut v: Vec<Vec<Complex>> = (0..m)
        .map(|j| {
            (0..m)
                .map(|i| {
                    if i == j {
                        Complex::one(ctx)
                    } else {
                        Complex::zero(ctx)
                    }
                })
                .collect()
        })
        .collect();

    // off-diagonal tolerance relative to the column norms
    let tol = ctx.epsilon_scaled(8);
    let tol_sqr = &tol * &tol;
    let max_sweeps = 30 + ctx.bits() / 8;

    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..m {
            for q in (p + 1)..m {
                let a = col_norm_sqr(&cols[p], ctx);
                let b = col_norm_sqr(&cols[q], ctx);
                let g = col_inner(&cols[p], &cols[q], ctx);
                let g_sqr = g.norm_sqr();
                if g_sqr <= &(&tol_sqr * &a) * &b || g_sqr.is_zero() {
                    continue;
                }
                rotated = true;
                let g_abs = g_sqr.sqrt();
                // phase making <c_p, c_q> real positive
                let w_conj = g.conj().scale(&(ctx.one() / &g_abs));
                // real Jacobi rotation zeroing the symmetrized Gram entry
                let tau = (&b - &a) / (ctx.from_i64(2) * &g_abs);
                let t = rot_t(&tau, ctx);
                let c = ctx.one() / (ctx.one() + &t * &t).sqrt();
                let s = &t * &c;
                rotate(&mut cols, p, q, &c, &s, &w_conj);
                rotate(&mut v, p, q, &c, &s, &w_conj);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..m).collect();
    let norms: Vec<Real> = (0..m)
        .map(|j| {
            let n = col_norm_sqr(&cols[j], ctx);
            if n.is_zero() {
                ctx.zero()
            } else {
                n.sqrt()
            }
        })
        .collect();
    order.sort_by(|&i, &j| cmp_real(&norms[j], &norms[i]));
    Svd {
        singular: order.iter().map(|&j| norms[j].clone()).collect(),
        vectors: order.iter().map(|&j| v[j].clone()).collect(),
    }
}

fn rot_t(tau: &Real, ctx: &Ctx) -> Real {
    let mag = tau.clone().abs();
    let root = (ctx.one() + tau * tau).sqrt();
    let t = ctx.one() / (&mag + &root);
    if tau < &ctx.zero() {
        -t
    } else {
        t
    }
}

fn col_norm_sqr(col: &[Complex], ctx: &Ctx) -> Real {
    let mut acc = ctx.zero();
    for z in col {
        acc += z.norm_sqr();
    }
    acc
}

fn col_inner(a: &[Complex], b: &[Complex], ctx: &Ctx) -> Complex {
    let mut acc = Complex::zero(ctx);
    for (x, y) in a.iter().zip(b) {
        acc += &(&x.conj() * y);
    }
    acc
}

/// Columns p, q <- (c·p − s·w̄·q, s·p + c·w̄·q).
#[allow(clippy::needless_range_loop)]
fn rotate(cols: &mut [Vec<Complex>], p: usize, q: usize, c: &Real, s: &Real, w_conj: &Complex) {
    let rows = cols[p].len();
    for i in 0..rows {
        let cp = cols[p][i].clone();
        let cq = &cols[q][i] * w_conj;
        cols[p][i] = &cp.scale(c) - &cq.scale(s);
        cols[q][i] = &cp.scale(s) + &cq.scale(c);
    }
}
