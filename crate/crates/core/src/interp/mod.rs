//! Polynomial reconstruction from variety points.
//!
//! A polynomial with monomial set {X^α_1, …, X^α_m} is determined, up to a
//! nonzero scale, by m−1 of its zeros whenever the matrix of monomial values
//! at those zeros has full row rank: the coefficient vector is the null
//! direction of that (m−1)×m matrix, equivalently the signed minors of the
//! symbolic-first-row determinant. The null direction is extracted by a
//! Jacobi SVD; the cofactor expansion is kept as an independent route for
//! cross-checks (it is exponentially costly in m).

mod bounds;
mod svd;

pub use bounds::{
    control_error, difference_bound, perturbed_bound, sensitivity, vandermonde_bound,
};
pub use svd::{one_sided_jacobi, Svd};

use crate::error::{Error, Result};
use crate::num::{cmp_real, pow2, Complex, Ctx, Real, RealExt};
use crate::poly::{ApproxPolynomial, Monomial};
use std::cmp::Ordering;

/// Ordered, duplicate-free monomial list (ascending graded-lex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialSet {
    pub monomials: Vec<Monomial>,
}

impl MonomialSet {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.monomials.first().map(|m| m.nvars()).unwrap_or(0)
    }
}

/// All monomials in `n` variables of total degree ≤ `m_deg`, graded-lex
/// ascending; cardinality C(m_deg + n, n).
pub fn monomial_candidates(m_deg: u32, n: usize) -> MonomialSet {
    assert!(n >= 1);
    let caps = vec![m_deg; n];
    monomial_candidates_capped(m_deg, &caps)
}

/// Same, additionally pruning monomials whose exponent in variable i exceeds
/// `caps[i]`.
pub fn monomial_candidates_capped(m_deg: u32, caps: &[u32]) -> MonomialSet {
    let n = caps.len();
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    fn rec(i: usize, remaining: u32, caps: &[u32], exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == caps.len() {
            out.push(Monomial(exps.clone()));
            return;
        }
        for e in 0..=remaining.min(caps[i]) {
            exps[i] = e;
            rec(i + 1, remaining - e, caps, exps, out);
            exps[i] = 0;
        }
    }
    rec(0, m_deg, caps, &mut exps, &mut out);
    out.sort();
    MonomialSet { monomials: out }
}

/// Monomial values at sample points, with the statistics the determinant
/// bounds need.
#[derive(Debug, Clone)]
pub struct EvaluationMatrix {
    /// rows[i][j] = value of monomial j at point i; (m−1) rows, m columns.
    pub rows: Vec<Vec<Complex>>,
    /// Source point coordinates, one per row.
    pub points: Vec<Vec<Complex>>,
    pub monomials: MonomialSet,
    /// Largest entry magnitude.
    pub max_entry: Real,
    /// Largest pairwise difference magnitude within any row or column.
    pub max_diff: Real,
    precision_bits: usize,
}

impl EvaluationMatrix {
    pub fn m(&self) -> usize {
        self.monomials.len()
    }

    pub fn ctx(&self) -> Ctx {
        Ctx::new(self.precision_bits)
    }
}

/// Evaluate every monomial at every point.
pub fn build_matrix(
    points: &[Vec<Complex>],
    ms: &MonomialSet,
    ctx: &Ctx,
) -> Result<EvaluationMatrix> {
    let m = ms.len();
    if m < 2 {
        return Err(Error::MonomialSetTooSmall);
    }
    if points.len() != m - 1 {
        return Err(Error::WrongPointCount {
            m,
            needed: m - 1,
            got: points.len(),
        });
    }
    let n = ms.nvars();
    let maxe: Vec<u32> = (0..n)
        .map(|i| {
            ms.monomials
                .iter()
                .map(|mo| mo.exponent(i))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut rows = Vec::with_capacity(points.len());
    for p in points {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
        let powers = crate::poly::power_table(p, &maxe);
        let row: Vec<Complex> = ms
            .monomials
            .iter()
            .map(|mo| crate::poly::power_value(mo, &powers, ctx))
            .collect();
        rows.push(row);
    }

    let (max_entry, max_diff) = matrix_stats(&rows, ctx);
    Ok(EvaluationMatrix {
        rows,
        points: points.to_vec(),
        monomials: ms.clone(),
        max_entry,
        max_diff,
        precision_bits: ctx.bits(),
    })
}

/// (max |entry|, max pairwise row/column difference magnitude).
#[allow(clippy::needless_range_loop)]
pub fn matrix_stats(rows: &[Vec<Complex>], ctx: &Ctx) -> (Real, Real) {
    let mut max_entry_sqr = ctx.zero();
    let mut max_diff_sqr = ctx.zero();
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    for row in rows {
        for e in row {
            let v = e.norm_sqr();
            if cmp_real(&v, &max_entry_sqr) == Ordering::Greater {
                max_entry_sqr = v;
            }
        }
        for j in 0..ncols {
            for k in (j + 1)..ncols {
                let v = (&row[j] - &row[k]).norm_sqr();
                if cmp_real(&v, &max_diff_sqr) == Ordering::Greater {
                    max_diff_sqr = v;
                }
            }
        }
    }
    for col in 0..ncols {
        for i in 0..nrows {
            for k in (i + 1)..nrows {
                let v = (&rows[i][col] - &rows[k][col]).norm_sqr();
                if cmp_real(&v, &max_diff_sqr) == Ordering::Greater {
                    max_diff_sqr = v;
                }
            }
        }
    }
    let sqrt0 = |x: Real| if x.is_zero() { ctx.zero() } else { x.sqrt() };
    (sqrt0(max_entry_sqr), sqrt0(max_diff_sqr))
}

#[derive(Debug, Clone)]
pub struct UniquenessReport {
    pub unique: bool,
    /// Smallest-to-largest singular value ratio over the m−1 row-space
    /// directions.
    pub ratio: f64,
}

/// Numerical-rank test: the (m−1)×m matrix must have rank m−1, judged by the
/// ratio of its smallest to largest nonzero singular value against
/// 2^16·unit-roundoff.
pub fn uniqueness_check(em: &EvaluationMatrix) -> UniquenessReport {
    let ctx = em.ctx();
    let svd = run_svd(em, &ctx);
    uniqueness_from_svd(&svd, em.m(), &ctx)
}

fn uniqueness_from_svd(svd: &Svd, m: usize, ctx: &Ctx) -> UniquenessReport {
    let rank_tol = rank_tolerance(ctx);
    let largest = &svd.singular[0];
    if largest.is_zero() {
        return UniquenessReport {
            unique: false,
            ratio: 0.0,
        };
    }
    let smallest_needed = &svd.singular[m - 2];
    let ratio = smallest_needed / largest;
    UniquenessReport {
        unique: ratio > rank_tol,
        ratio: ratio.to_f64().value(),
    }
}

fn rank_tolerance(ctx: &Ctx) -> Real {
    pow2(16 - ctx.bits() as i64, ctx.bits())
}

fn run_svd(em: &EvaluationMatrix, ctx: &Ctx) -> Svd {
    let m = em.m();
    let cols: Vec<Vec<Complex>> = (0..m)
        .map(|j| em.rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    one_sided_jacobi(cols, ctx)
}

/// Null-direction reconstruction: the coefficient vector of the interpolant,
/// normalized monic. Null-vector noise scales like roundoff divided by the
/// smallest-to-largest singular value ratio, so coefficients below that
/// floor are dropped before the monic leading term is chosen — otherwise an
/// ill-conditioned point set can hand the normalization a noise monomial.
pub fn reconstruct(em: &EvaluationMatrix) -> Result<ApproxPolynomial> {
    let ctx = em.ctx();
    let m = em.m();
    let svd = run_svd(em, &ctx);
    let report = uniqueness_from_svd(&svd, m, &ctx);
    if !report.unique {
        return Err(Error::RankDeficient);
    }
    let null = &svd.vectors[m - 1];
    poly_from_coefficients(em, null, report.ratio, &ctx)
}

/// Cofactor-expansion route: coefficient of X^α_k is (−1)^(k+1) times the
/// minor obtained by deleting column k. Exponential in m; intended for
/// m ≤ 6 as the independent cross-check of the null-direction route.
pub fn reconstruct_cofactor(em: &EvaluationMatrix) -> Result<ApproxPolynomial> {
    let ctx = em.ctx();
    let m = em.m();
    let report = uniqueness_check(em);
    if !report.unique {
        return Err(Error::RankDeficient);
    }
    let mut coeffs = Vec::with_capacity(m);
    for k in 0..m {
        let sub: Vec<Vec<Complex>> = em
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, z)| z.clone())
                    .collect()
            })
            .collect();
        let mut minor = determinant(&sub, &ctx);
        if k % 2 == 1 {
            minor = -&minor;
        }
        coeffs.push(minor);
    }
    poly_from_coefficients(em, &coeffs, report.ratio, &ctx)
}

fn poly_from_coefficients(
    em: &EvaluationMatrix,
    coeffs: &[Complex],
    sigma_ratio: f64,
    ctx: &Ctx,
) -> Result<ApproxPolynomial> {
    let m = em.m();
    let max_mag = coeffs
        .iter()
        .map(|c| c.abs())
        .max_by(cmp_real)
        .unwrap_or_else(|| ctx.zero());
    if max_mag.is_zero() {
        return Err(Error::RankDeficient);
    }
    // noise floor: m·2^16·roundoff amplified by the conditioning 1/ratio,
    // with an extra safety byte
    let kappa = ctx.from_f64((1.0 / sigma_ratio.max(f64::MIN_POSITIVE)).min(1e300));
    let drop_tol = &(&(&rank_tolerance(ctx) * &ctx.from_i64(256 * m as i64)) * &kappa) * &max_mag;
    let poly = ApproxPolynomial::from_terms(
        em.monomials.nvars(),
        ctx.bits(),
        em.monomials
            .monomials
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| cmp_real(&c.abs(), &drop_tol) == Ordering::Greater)
            .map(|(m, c)| (m.clone(), c.clone())),
    );
    poly.make_monic()
}

/// Laplace-expansion determinant for small matrices.
pub fn determinant(rows: &[Vec<Complex>], ctx: &Ctx) -> Complex {
    let n = rows.len();
    match n {
        0 => Complex::one(ctx),
        1 => rows[0][0].clone(),
        2 => &(&rows[0][0] * &rows[1][1]) - &(&rows[0][1] * &rows[1][0]),
        _ => {
            let mut acc = Complex::zero(ctx);
            for k in 0..n {
                let sub: Vec<Vec<Complex>> = rows[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != k)
                            .map(|(_, z)| z.clone())
                            .collect()
                    })
                    .collect();
                let term = &rows[0][k] * &determinant(&sub, ctx);
                if k % 2 == 0 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
            acc
        }
    }
}

/// Greedy well-conditioned row subset: repeatedly take the candidate whose
/// component orthogonal to the span of the chosen rows is largest
/// (row-pivoted Gram–Schmidt). Returns indices into `candidates`.
pub fn select_rows(candidates: &[Vec<Complex>], count: usize, ctx: &Ctx) -> Vec<usize> {
    assert!(count <= candidates.len());
    let mut residuals: Vec<Vec<Complex>> = candidates.to_vec();
    let mut chosen: Vec<usize> = Vec::with_capacity(count);
    let mut used = vec![false; candidates.len()];
    for _ in 0..count {
        let mut best = None;
        let mut best_norm = ctx.zero();
        for (i, r) in residuals.iter().enumerate() {
            if used[i] {
                continue;
            }
            let n = vec_norm_sqr(r, ctx);
            if best.is_none() || cmp_real(&n, &best_norm) == Ordering::Greater {
                best = Some(i);
                best_norm = n;
            }
        }
        let pick = best.expect("count <= candidates");
        used[pick] = true;
        chosen.push(pick);
        // orthonormalize the picked residual and deflate the rest
        if best_norm.is_zero() {
            continue;
        }
        let inv = ctx.one() / best_norm.sqrt();
        let q: Vec<Complex> = residuals[pick].iter().map(|z| z.scale(&inv)).collect();
        for (i, r) in residuals.iter_mut().enumerate() {
            if used[i] {
                continue;
            }
            let proj = inner(&q, r, ctx);
            for (rk, qk) in r.iter_mut().zip(&q) {
                *rk -= &(qk * &proj);
            }
        }
    }
    chosen
}

fn vec_norm_sqr(v: &[Complex], ctx: &Ctx) -> Real {
    let mut acc = ctx.zero();
    for z in v {
        acc += z.norm_sqr();
    }
    acc
}

fn inner(a: &[Complex], b: &[Complex], ctx: &Ctx) -> Complex {
    let mut acc = Complex::zero(ctx);
    for (x, y) in a.iter().zip(b) {
        acc += &(&x.conj() * y);
    }
    acc
}
