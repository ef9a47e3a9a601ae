//! Property tests for the structural invariants.

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use nullstelle::interp::{
    build_matrix, reconstruct, reconstruct_cofactor, uniqueness_check, MonomialSet,
};
use nullstelle::num::{Complex, Ctx};
use nullstelle::poly::{exact_product, parse_poly, Monomial, RationalPolynomial};
use nullstelle::recover::{cf_evaluate, cf_expand};
use proptest::prelude::*;

fn arb_rational() -> impl Strategy<Value = RBig> {
    (-30i64..=30, 1u64..=12).prop_map(|(n, d)| RBig::from_parts(IBig::from(n), UBig::from(d)))
}

fn arb_poly(nvars: usize) -> impl Strategy<Value = RationalPolynomial> {
    prop::collection::vec(
        (prop::collection::vec(0u32..4, nvars), arb_rational()),
        1..8,
    )
    .prop_map(move |terms| {
        RationalPolynomial::from_terms(nvars, terms.into_iter().map(|(e, c)| (Monomial(e), c)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// parse(print(p)) is the identity.
    #[test]
    fn parse_print_roundtrip(p in arb_poly(3)) {
        let names = vec!["x1".to_string(), "x2".to_string(), "x3".to_string()];
        let text = p.render(&names);
        let q = parse_poly(&text, &["x1", "x2", "x3"]).unwrap();
        prop_assert_eq!(p, q);
    }

    /// make_monic(c·p) = make_monic(p) for nonzero rational c.
    #[test]
    fn monic_scale_invariance(p in arb_poly(2), c in arb_rational()) {
        prop_assume!(!p.is_zero());
        prop_assume!(c != RBig::ZERO);
        let (_, m1) = p.make_monic().unwrap();
        let (_, m2) = p.scale(&c).make_monic().unwrap();
        prop_assert_eq!(m1, m2);
    }

    /// evaluate is a ring homomorphism at a fixed point.
    #[test]
    fn evaluate_is_multiplicative(p in arb_poly(2), q in arb_poly(2), px in -4i64..4, py in -4i64..4) {
        let ctx = Ctx::new(192);
        let point = vec![
            Complex::from_real(ctx.from_i64(px)),
            Complex::from_real(ctx.from_i64(py)),
        ];
        let prod = exact_product(&[p.clone(), q.clone()]).unwrap();
        let lhs = prod.evaluate(&point, &ctx).unwrap();
        let rhs = &p.evaluate(&point, &ctx).unwrap() * &q.evaluate(&point, &ctx).unwrap();
        let diff = (&lhs - &rhs).abs().to_f64().value();
        let scale = 1.0 + lhs.abs().to_f64().value();
        prop_assert!(diff <= scale * 1e-45, "diff {diff}");
    }

    /// lcm_denominators is multiplicative up to divisibility on monic
    /// factors.
    #[test]
    fn lcm_divides_product_of_lcms(p in arb_poly(2), q in arb_poly(2)) {
        prop_assume!(!p.is_zero() && !q.is_zero());
        let (_, pm) = p.make_monic().unwrap();
        let (_, qm) = q.make_monic().unwrap();
        let prod = exact_product(&[pm.clone(), qm.clone()]).unwrap();
        prop_assume!(!prod.is_zero());
        let l = prod.lcm_denominators().unwrap();
        let lp = pm.lcm_denominators().unwrap();
        let lq = qm.lcm_denominators().unwrap();
        prop_assert_eq!(&(&lp * &lq) % &l, UBig::ZERO);
    }

    /// Exact rationals reproduce themselves through the continued fraction
    /// when the truncation threshold is tight enough.
    #[test]
    fn cf_roundtrip_exact(p in 0i64..400, q in 1u64..40) {
        let ctx = Ctx::new(192);
        let frac = RBig::from_parts(IBig::from(p), UBig::from(q));
        let eps1 = RBig::from_parts(IBig::ONE, UBig::from(q + 1));
        let cf = cf_expand(&ctx.from_rbig(&frac), &eps1).unwrap();
        prop_assert_eq!(cf_evaluate(&cf).unwrap(), frac);
        // structure: all terms after the first are at least 1
        for t in &cf.terms[1..] {
            prop_assert!(*t >= IBig::ONE);
        }
    }
}

/// The cofactor-expansion and null-direction reconstruction routes agree
/// coefficientwise for m ≤ 5 (both monic).
#[test]
fn cofactor_and_nullspace_routes_are_parallel() {
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    let ctx = Ctx::new(192);
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(41);
    let mut checked = 0;
    while checked < 50 {
        let m = 2 + (rng.next_u64() % 4) as usize; // 2..=5
        let all = nullstelle::monomial_candidates(3, 2);
        let ms = MonomialSet {
            monomials: all.monomials.into_iter().take(m).collect(),
        };
        let points: Vec<Vec<Complex>> = (0..m - 1)
            .map(|_| {
                (0..2)
                    .map(|_| {
                        Complex::new(
                            ctx.random_unit_interval(&mut rng),
                            (ctx.random_unit_interval(&mut rng) - ctx.one()) / ctx.from_i64(8),
                        )
                    })
                    .collect()
            })
            .collect();
        let em = build_matrix(&points, &ms, &ctx).unwrap();
        if !uniqueness_check(&em).unique {
            continue;
        }
        let (Ok(a), Ok(b)) = (reconstruct(&em), reconstruct_cofactor(&em)) else {
            continue;
        };
        for (mono, ca) in a.terms() {
            let cb = b.coefficient(mono).expect("same support");
            let diff = (ca - cb).abs().to_f64().value();
            assert!(diff <= 1e-10, "normalized difference {diff}");
        }
        checked += 1;
    }
}
