//! Subset-product recombination of banked real factors.
//!
//! Real non-rational factors multiply in conjugate/Galois groups back into
//! rational ones. Subset products are tried by increasing cardinality; every
//! hit is verified by exact division of the remaining cofactor, removes its
//! constituents from the pool and restarts the enumeration.

use super::{accept_tolerance, rationalize_verify, CandidateFactor, RationalizeOutcome};
use crate::num::{cmp_real, Ctx};
use crate::poly::RationalPolynomial;
use crate::recover::ErrorBudget;
use std::cmp::Ordering;

pub struct RecombineOutcome {
    pub rational: Vec<(RationalPolynomial, f64)>,
    pub leftover: Vec<CandidateFactor>,
    pub remainder: RationalPolynomial,
    pub trace: Vec<String>,
    /// False when the pool exceeded the enumeration cap.
    pub enumerated: bool,
}

const POOL_CAP: usize = 24;

pub fn recombine(
    pool: Vec<CandidateFactor>,
    f_rem: RationalPolynomial,
    budget: &ErrorBudget,
    ctx: &Ctx,
) -> RecombineOutcome {
    let mut trace = Vec::new();
    if pool.len() > POOL_CAP {
        return RecombineOutcome {
            rational: Vec::new(),
            leftover: pool,
            remainder: f_rem,
            trace,
            enumerated: false,
        };
    }
    let mut pool = pool;
    let mut remainder = f_rem;
    let mut rational = Vec::new();

    'restart: loop {
        let n = pool.len();
        if n < 2 || remainder.is_constant() {
            break;
        }
        let rem_deg = remainder.total_degree();
        let rem_approx = remainder.to_approx(ctx);
        let tol = accept_tolerance(&remainder, budget, ctx);
        for k in 2..=n {
            for subset in combinations(n, k) {
                let deg_sum: u32 = subset.iter().map(|&i| pool[i].poly.total_degree()).sum();
                if deg_sum > rem_deg {
                    continue;
                }
                let mut product = pool[subset[0]].poly.clone();
                for &i in &subset[1..] {
                    product = product.mul(&pool[i].poly);
                }
                // products mixing unpaired complex members are discarded by
                // this realness test
                let beta = ctx.from_rbig(&budget.beta);
                let imag_cap = ctx.from_i64(10) * &beta;
                if cmp_real(&product.max_imag_abs(), &imag_cap) == Ordering::Greater {
                    continue;
                }
                let product = match product.realified().make_monic() {
                    Ok(p) => p,
                    Err(_) => continue,
                };
                let Ok((h, r)) = super::divide::approx_divide(&rem_approx, &product) else {
                    continue;
                };
                if cmp_real(&r, &tol) == Ordering::Greater {
                    continue;
                }
                match rationalize_verify(&remainder, &product, &h, budget) {
                    RationalizeOutcome::Exact { g, h } => {
                        trace.push(format!("k={k}: {}", g));
                        rational.push((g, r.to_f64().value()));
                        remainder = h;
                        let mut keep = Vec::new();
                        for (i, c) in pool.into_iter().enumerate() {
                            if !subset.contains(&i) {
                                keep.push(c);
                            }
                        }
                        pool = keep;
                        continue 'restart;
                    }
                    RationalizeOutcome::RealOnly => continue,
                }
            }
        }
        break;
    }

    RecombineOutcome {
        rational,
        leftover: pool,
        remainder,
        trace,
        enumerated: true,
    }
}

/// All k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
