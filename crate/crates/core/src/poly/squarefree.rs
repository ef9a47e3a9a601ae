//! Probabilistic square-freeness check.
//!
//! Specializes all variables but the last at random rationals and tests the
//! resulting univariate polynomial for coprimality with its derivative by an
//! exact Euclidean gcd. A square factor survives every specialization, so a
//! `false` is definitive for the tested point; a square-free input fails only
//! on a measure-zero set of draws.

use super::RationalPolynomial;
use crate::error::{Error, Result};
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use rand_core::RngCore;

/// Returns true when a random specialization leaves the polynomial coprime
/// to its derivative.
pub fn squarefree_probe(p: &RationalPolynomial, rng: &mut dyn RngCore) -> Result<bool> {
    if p.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let n = p.nvars();
    // random rationals in [1, 2] with denominator 2^16
    let den = 1u64 << 16;
    let values: Vec<RBig> = (0..n - 1)
        .map(|_| {
            let num = den + rng.next_u64() % (den + 1);
            RBig::from_parts(IBig::from(num), UBig::from(den))
        })
        .collect();
    let coeffs = p.specialize_prefix_exact(&values);
    let u = trim(coeffs);
    if u.len() < 2 {
        // the specialized polynomial is constant: the last variable does not
        // occur, so the probe cannot decide
        return Err(Error::ConstantInLastVariable);
    }
    let du = derivative(&u);
    let g = gcd_univariate(u, du);
    Ok(g.len() == 1)
}

fn trim(mut v: Vec<RBig>) -> Vec<RBig> {
    while v.len() > 1 && *v.last().unwrap() == RBig::ZERO {
        v.pop();
    }
    v
}

fn derivative(u: &[RBig]) -> Vec<RBig> {
    if u.len() <= 1 {
        return vec![RBig::ZERO];
    }
    trim(
        u.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * RBig::from(k as i64))
            .collect(),
    )
}

/// Euclidean gcd over Q[x] on dense ascending coefficients; result is monic.
pub(crate) fn gcd_univariate(mut a: Vec<RBig>, mut b: Vec<RBig>) -> Vec<RBig> {
    a = trim(a);
    b = trim(b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !(b.len() == 1 && b[0] == RBig::ZERO) {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    // normalize monic
    let lead = a.last().unwrap().clone();
    if lead != RBig::ZERO && lead != RBig::ONE {
        for c in &mut a {
            *c /= lead.clone();
        }
    }
    a
}

fn rem(a: &[RBig], b: &[RBig]) -> Vec<RBig> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    while r.len() > db && !(r.len() == 1 && r[0] == RBig::ZERO) {
        let dr = r.len() - 1;
        let q = r.last().unwrap() / lead;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            let delta = &q * bc;
            r[shift + i] -= delta;
        }
        r = trim(r);
        if dr == db {
            break;
        }
    }
    r
}
