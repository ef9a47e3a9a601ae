//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured numbers (run with `--nocapture` to see them).

use dashu_base::Gcd;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use nullstelle::engine::{recombine, CandidateFactor, CandidateStatus};
use nullstelle::interp::{
    build_matrix, determinant, difference_bound, matrix_stats, monomial_candidates,
    perturbed_bound, reconstruct, uniqueness_check, vandermonde_bound, MonomialSet,
};
use nullstelle::num::{cmp_real, derive_seed, Complex, Ctx};
use nullstelle::poly::{exact_product, parse_poly, Monomial, RationalPolynomial};
use nullstelle::recover::{compute_budget, recover_rational};
use nullstelle::sample::univariate_roots;
use nullstelle::{factorize, FactorConfig};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_core::RngCore;
use std::time::Instant;

fn rat(n: i64, d: u64) -> RBig {
    RBig::from_parts(IBig::from(n), UBig::from(d))
}

fn rand_below(rng: &mut dyn RngCore, n: u64) -> u64 {
    rng.next_u64() % n.max(1)
}

/// Criterion 1: every reduced p/q with q ≤ L ≤ 30, p ≤ 5L, perturbed by
/// 0 or ±β/2, is recovered exactly.
#[test]
fn criterion_1_rational_recovery_exhaustive() {
    let started = Instant::now();
    let ctx = Ctx::new(192);
    let mut cases = 0u64;
    for l in 2u64..=30 {
        let lb = UBig::from(l);
        let budget = compute_budget(&lb).unwrap();
        let half_beta = &budget.beta / RBig::from(2);
        for q in 1..=l {
            for p in 0..=(5 * l) {
                if (UBig::from(p)).gcd(&UBig::from(q)) != UBig::ONE {
                    continue;
                }
                let frac = rat(p as i64, q);
                for delta in [RBig::ZERO, half_beta.clone(), -half_beta.clone()] {
                    let x = ctx.from_rbig(&(&frac + &delta));
                    let got = recover_rational(&x, &lb)
                        .unwrap_or_else(|e| panic!("p={p} q={q} L={l}: {e}"));
                    assert_eq!(got, frac, "p={p} q={q} L={l} delta={delta}");
                    cases += 1;
                }
            }
        }
    }
    let dt = started.elapsed();
    assert!(dt.as_secs() < 30, "took {dt:?}");
    println!("criterion 1: PASS - {cases} exhaustive recoveries, 100% exact, {dt:?}");
}

fn random_rational(rng: &mut dyn RngCore) -> RBig {
    let q = 1 + rand_below(rng, 9);
    let mut p = rand_below(rng, 19) as i64 - 9;
    if p == 0 {
        p = 1;
    }
    rat(p, q)
}

/// Random nonzero polynomial with n ≤ 3 variables, total degree ≤ 4, at most
/// 8 terms, depending on the last variable.
fn random_poly(rng: &mut dyn RngCore, n: usize) -> RationalPolynomial {
    loop {
        let terms = 2 + rand_below(rng, 7) as usize;
        let mut p = RationalPolynomial::zero(n);
        for _ in 0..terms {
            let mut exps = vec![0u32; n];
            let d = rand_below(rng, 5) as u32;
            for _ in 0..d {
                let i = rand_below(rng, n as u64) as usize;
                exps[i] += 1;
            }
            p.add_term(Monomial(exps), random_rational(rng));
        }
        if !p.is_zero() && p.degree_in(n - 1) >= 1 && p.num_terms() >= 2 {
            return p;
        }
    }
}

/// Square-free random polynomial: a repeated component makes the exact
/// interpolation determinant vanish identically (the uniqueness hypothesis
/// fails), which floating points cannot witness reliably.
fn random_squarefree_poly(rng: &mut ChaCha12Rng, n: usize) -> RationalPolynomial {
    'draw: loop {
        let p = random_poly(rng, n);
        for pivot in 0..n {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(pivot, n - 1);
            let rotated = p.permute_variables(&perm);
            if rotated.degree_in(n - 1) == 0 {
                continue;
            }
            match nullstelle::squarefree_probe(&rotated, rng) {
                Ok(true) => {}
                _ => continue 'draw,
            }
        }
        return p;
    }
}

/// Criterion 2: 200 random polynomials are reconstructed from exact variety
/// points, matching the monic truth within 1e-8 relative error.
#[test]
fn criterion_2_reconstruction_fidelity() {
    let started = Instant::now();
    let ctx = Ctx::new(320);
    let mut rng = ChaCha12Rng::seed_from_u64(0x7e01);
    let mut done = 0;
    'poly: while done < 200 {
        let n = 1 + (done % 3);
        let f = random_squarefree_poly(&mut rng, n);
        let support: Vec<Monomial> = f.terms().map(|(m, _)| m.clone()).collect();
        let ms = MonomialSet { monomials: support };
        let m = ms.len();

        // sample m-1 exact variety points (random base, random root)
        let mut points: Vec<Vec<Complex>> = Vec::with_capacity(m - 1);
        let mut attempts = 0;
        while points.len() < m - 1 {
            attempts += 1;
            if attempts > 40 * m {
                continue 'poly; // degenerate draw; take a fresh polynomial
            }
            let base: Vec<Complex> = (0..n - 1)
                .map(|_| Complex::from_real(ctx.random_unit_interval(&mut rng)))
                .collect();
            let coeffs = f.specialize_prefix(&base, &ctx);
            let eps = ctx.epsilon_scaled(64);
            let Ok(roots) = univariate_roots(&coeffs, &eps, &ctx) else {
                continue;
            };
            // a root sitting at zero collapses every column that shares its
            // variable; the exact determinant vanishes there, so such points
            // are excluded by the uniqueness hypothesis
            let floor = ctx.epsilon_scaled(ctx.bits() as i64 * 3 / 4);
            let usable: Vec<&Complex> = roots
                .iter()
                .filter(|z| cmp_real(&z.abs(), &floor) == std::cmp::Ordering::Greater)
                .collect();
            if usable.is_empty() {
                continue;
            }
            let pick = rand_below(&mut rng, usable.len() as u64) as usize;
            let mut coords = base;
            coords.push(usable[pick].clone());
            points.push(coords);
        }
        let em = build_matrix(&points, &ms, &ctx).unwrap();
        let report = uniqueness_check(&em);
        // demand a healthy rank margin: a barely-nonzero smallest singular
        // value (e.g. points mixing branches of a degenerate draw) leaves
        // the null direction unresolved
        if !report.unique || report.ratio < 1e-10 {
            continue 'poly;
        }
        let got = reconstruct(&em).unwrap();
        let (_, truth) = f.make_monic().unwrap();
        for (mono, want) in truth.terms() {
            let want_r = ctx.from_rbig(want);
            let got_c = got
                .coefficient(mono)
                .unwrap_or_else(|| panic!("missing monomial {mono} in reconstruction"));
            let err = (&got_c.re - &want_r)
                .to_f64()
                .value()
                .abs()
                .max(got_c.im.to_f64().value().abs());
            let rel = err / (1.0 + want_r.to_f64().value().abs());
            assert!(
                rel <= 1e-8,
                "poly {done}: coefficient error {rel:.3e} at {mono}"
            );
        }
        done += 1;
    }
    let dt = started.elapsed();
    assert!(dt.as_secs() < 60, "took {dt:?}");
    println!("criterion 2: PASS - 200 reconstructions within 1e-8, {dt:?}");
}

fn random_point(rng: &mut dyn RngCore, ctx: &Ctx, n: usize) -> Vec<Complex> {
    (0..n)
        .map(|_| {
            let re = ctx.random_unit_interval(rng);
            let im = (ctx.random_unit_interval(rng) - ctx.one()) / ctx.from_i64(4);
            Complex::new(re, im)
        })
        .collect()
}

fn monomials_for(m: usize, n: usize) -> MonomialSet {
    let all = monomial_candidates(4, n);
    MonomialSet {
        monomials: all.monomials.into_iter().take(m).collect(),
    }
}

/// Criterion 3: the three determinant bounds hold on 1000 random
/// monomial-evaluation matrices each.
#[test]
fn criterion_3_bound_soundness_monte_carlo() {
    let started = Instant::now();
    let ctx = Ctx::new(128);
    let mut rng = ChaCha12Rng::seed_from_u64(0x7e03);
    let n = 2usize;

    // Theorem 3 shape: m x m monomial values
    for trial in 0..1000 {
        let m = 2 + (trial % 5); // 2..=6
        let ms = monomials_for(m, n);
        let rows: Vec<Vec<Complex>> = (0..m)
            .map(|_| {
                let pt = random_point(&mut rng, &ctx, n);
                ms.monomials
                    .iter()
                    .map(|mono| eval_monomial(mono, &pt, &ctx))
                    .collect()
            })
            .collect();
        let (max_entry, max_diff) = matrix_stats(&rows, &ctx);
        let det = determinant(&rows, &ctx).abs();
        let bound = vandermonde_bound(m, &max_entry, &max_diff).unwrap();
        assert!(
            cmp_real(&det, &bound) != std::cmp::Ordering::Greater,
            "theorem-3 violation at trial {trial}: |det|={} bound={}",
            det.to_f64().value(),
            bound.to_f64().value()
        );
    }

    // Theorem 4 shape: one column replaced by eps-bounded entries
    for trial in 0..1000 {
        let m = 3 + (trial % 4); // 3..=6
        let ms = monomials_for(m, n);
        let mut rows: Vec<Vec<Complex>> = (0..m)
            .map(|_| {
                let pt = random_point(&mut rng, &ctx, n);
                ms.monomials
                    .iter()
                    .map(|mono| eval_monomial(mono, &pt, &ctx))
                    .collect()
            })
            .collect();
        let (max_entry, max_diff) = matrix_stats(&rows, &ctx);
        let col = (rand_below(&mut rng, m as u64)) as usize;
        let mut eps_col = ctx.zero();
        for row in rows.iter_mut() {
            let a = Complex::new(
                (ctx.random_unit_interval(&mut rng) - ctx.one()) / ctx.from_i64(100),
                (ctx.random_unit_interval(&mut rng) - ctx.one()) / ctx.from_i64(100),
            );
            if cmp_real(&a.abs(), &eps_col) == std::cmp::Ordering::Greater {
                eps_col = a.abs();
            }
            row[col] = a;
        }
        let det = determinant(&rows, &ctx).abs();
        let bound = perturbed_bound(m, &max_entry, &max_diff, &eps_col).unwrap();
        assert!(
            cmp_real(&det, &bound) != std::cmp::Ordering::Greater,
            "theorem-4 violation at trial {trial}"
        );
    }

    // Theorem 5 shape: entrywise-eps-perturbed pair
    for trial in 0..1000 {
        let m = 3 + (trial % 4);
        let ms = monomials_for(m, n);
        let rows_x: Vec<Vec<Complex>> = (0..m)
            .map(|_| {
                let pt = random_point(&mut rng, &ctx, n);
                ms.monomials
                    .iter()
                    .map(|mono| eval_monomial(mono, &pt, &ctx))
                    .collect()
            })
            .collect();
        let mut eps = ctx.zero();
        let rows_y: Vec<Vec<Complex>> = rows_x
            .iter()
            .map(|row| {
                row.iter()
                    .map(|z| {
                        let d = Complex::new(
                            (ctx.random_unit_interval(&mut rng) - ctx.one()) / ctx.from_i64(1000),
                            (ctx.random_unit_interval(&mut rng) - ctx.one()) / ctx.from_i64(1000),
                        );
                        if cmp_real(&d.abs(), &eps) == std::cmp::Ordering::Greater {
                            eps = d.abs();
                        }
                        z + &d
                    })
                    .collect()
            })
            .collect();
        let (max_entry, max_diff) = stats_over_pair(&rows_x, &rows_y, &ctx);
        let dx = determinant(&rows_x, &ctx);
        let dy = determinant(&rows_y, &ctx);
        let diff = (&dx - &dy).abs();
        let bound = difference_bound(m, &max_entry, &max_diff, &eps).unwrap();
        assert!(
            cmp_real(&diff, &bound) != std::cmp::Ordering::Greater,
            "theorem-5 violation at trial {trial}"
        );
    }

    let dt = started.elapsed();
    assert!(dt.as_secs() < 30, "took {dt:?}");
    println!("criterion 3: PASS - 3000 Monte Carlo bound checks, zero violations, {dt:?}");
}

fn eval_monomial(mono: &Monomial, pt: &[Complex], ctx: &Ctx) -> Complex {
    let mut acc = Complex::one(ctx);
    for (i, &e) in mono.0.iter().enumerate() {
        if e > 0 {
            acc = &acc * &pt[i].powu(e);
        }
    }
    acc
}

/// M and B over both matrices, per the two-matrix bound.
fn stats_over_pair(
    x: &[Vec<Complex>],
    y: &[Vec<Complex>],
    ctx: &Ctx,
) -> (nullstelle::Real, nullstelle::Real) {
    let (mx, bx) = matrix_stats(x, ctx);
    let (my, by) = matrix_stats(y, ctx);
    let m = if cmp_real(&mx, &my) == std::cmp::Ordering::Greater {
        mx
    } else {
        my
    };
    let b = if cmp_real(&bx, &by) == std::cmp::Ordering::Greater {
        bx
    } else {
        by
    };
    (m, b)
}

/// Criterion 5: the conjugate-pairing path returns x1^2 + x2^2 exactly, both
/// alone and inside a product.
#[test]
fn criterion_5_conjugate_pairing() {
    let started = Instant::now();
    let names = vec!["x1".to_string(), "x2".to_string()];

    let f = parse_poly("x1^2 + x2^2", &["x1", "x2"]).unwrap();
    let r = factorize(&f, &FactorConfig::default()).unwrap();
    assert!(r.complete);
    assert_eq!(
        r.factors
            .iter()
            .map(|p| p.render(&names))
            .collect::<Vec<_>>(),
        vec!["x1^2 + x2^2"]
    );

    let g = parse_poly(
        "x1^3 + x1^2*x2 + x1*x2^2 - x1^2 + x2^3 - x2^2",
        &["x1", "x2"],
    )
    .unwrap();
    // sanity: that text is (x1^2+x2^2)(x1+x2-1)
    let a = parse_poly("x1^2 + x2^2", &["x1", "x2"]).unwrap();
    let b = parse_poly("x1 + x2 - 1", &["x1", "x2"]).unwrap();
    assert_eq!(exact_product(&[a.clone(), b]).unwrap(), g);
    let r = factorize(&g, &FactorConfig::default()).unwrap();
    assert!(r.complete, "notes: {:?}", r.diagnostics.notes);
    assert!(
        r.factors.contains(&a),
        "factors: {:?}",
        r.factors
            .iter()
            .map(|p| p.render(&names))
            .collect::<Vec<_>>()
    );
    let dt = started.elapsed();
    assert!(dt.as_secs() < 10, "took {dt:?}");
    println!("criterion 5: PASS - Case-1 pairing recovers x1^2+x2^2 exactly, {dt:?}");
}

/// Criterion 6: recombination; the pair-product path on x^4-5x^2+6 (true
/// denominator bound 1, so the budget runs at the clamp L=2 where sqrt(2) is
/// unrecoverable) and the k=3 path on the three linear factors of x^3-2.
#[test]
fn criterion_6_recombination() {
    let started = Instant::now();
    let names = vec!["x".to_string()];

    // pair-product path
    let f = parse_poly("x^4 - 5*x^2 + 6", &["x"]).unwrap();
    let config = FactorConfig {
        denominator_bound: Some(UBig::ONE), // forced L=1, clamped to the theorem's minimum
        ..FactorConfig::default()
    };
    let r = factorize(&f, &config).unwrap();
    assert!(r.complete);
    assert_eq!(
        r.factors
            .iter()
            .map(|p| p.render(&names))
            .collect::<Vec<_>>(),
        vec!["x^2 - 3", "x^2 - 2"]
    );
    let pair_events: Vec<&String> = r
        .diagnostics
        .recombination_trace
        .iter()
        .filter(|t| t.starts_with("k=2"))
        .collect();
    assert_eq!(
        pair_events.len(),
        2,
        "trace: {:?}",
        r.diagnostics.recombination_trace
    );

    // k=3 path: the three linear factors of x^3 - 2 recombine only as a
    // triple (pairs are non-real or irrational)
    let ctx = Ctx::new(256);
    let cube = parse_poly("x^3 - 2", &["x"]).unwrap();
    let coeffs = [
        Complex::from_real(ctx.from_i64(-2)),
        Complex::zero(&ctx),
        Complex::zero(&ctx),
        Complex::from_real(ctx.one()),
    ];
    let roots = univariate_roots(&coeffs, &ctx.epsilon_scaled(64), &ctx).unwrap();
    assert_eq!(roots.len(), 3);
    let pool: Vec<CandidateFactor> = roots
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let poly = nullstelle::ApproxPolynomial::from_terms(
                1,
                ctx.bits(),
                vec![
                    (Monomial(vec![1]), Complex::one(&ctx)),
                    (Monomial(vec![0]), -z),
                ],
            );
            CandidateFactor {
                poly,
                branch_tags: std::collections::BTreeSet::from([i]),
                status: CandidateStatus::Real,
                residual: ctx.zero(),
                source_points: Vec::new(),
                monomials: monomial_candidates(1, 1),
            }
        })
        .collect();
    let budget = compute_budget(&UBig::from(2u8)).unwrap();
    let outcome = recombine(pool, cube.clone(), &budget, &ctx);
    assert_eq!(outcome.rational.len(), 1, "trace: {:?}", outcome.trace);
    assert_eq!(outcome.rational[0].0, cube);
    assert!(outcome.leftover.is_empty());
    assert!(
        outcome.trace.iter().any(|t| t.starts_with("k=3")),
        "{:?}",
        outcome.trace
    );

    // and the full pipeline on x^3 - 2 returns it whole
    let r = factorize(&cube, &FactorConfig::default()).unwrap();
    assert!(r.complete);
    assert_eq!(
        r.factors
            .iter()
            .map(|p| p.render(&names))
            .collect::<Vec<_>>(),
        vec!["x^3 - 2"]
    );

    let dt = started.elapsed();
    assert!(dt.as_secs() < 10, "took {dt:?}");
    println!("criterion 6: PASS - pair-product and k=3 recombination paths verified, {dt:?}");
}

/// Criterion 7: the denominator bound is multiplicative — each monic
/// factor's lcm of denominators divides the product's.
#[test]
fn criterion_7_denominator_bound_property() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0x7e07);
    for trial in 0..100 {
        let n = 1 + (trial % 3);
        let count = 2 + (trial % 3);
        let factors: Vec<RationalPolynomial> =
            (0..count).map(|_| random_monic(&mut rng, n)).collect();
        let product = exact_product(&factors).unwrap();
        let big = product.lcm_denominators().unwrap();
        for f in &factors {
            let small = f.lcm_denominators().unwrap();
            assert_eq!(
                &big % &small,
                UBig::ZERO,
                "trial {trial}: {small} does not divide {big}"
            );
        }
    }
    let dt = started.elapsed();
    assert!(dt.as_secs() < 5, "took {dt:?}");
    println!("criterion 7: PASS - 100 products, factor lcm divides product lcm, {dt:?}");
}

fn random_monic(rng: &mut dyn RngCore, n: usize) -> RationalPolynomial {
    loop {
        let p = random_poly(rng, n);
        if let Ok((_, monic)) = p.make_monic() {
            if !monic.is_constant() {
                return monic;
            }
        }
    }
}

/// The seeded end-to-end bench (criterion 4) and CLI determinism
/// (criterion 8) run in the CLI crate's acceptance suite, which owns the
/// binary and the trial generator.
#[test]
fn criterion_4_and_8_location_note() {
    println!("criteria 4 and 8: exercised in crates/cli/tests/acceptance.rs");
    let _ = derive_seed(0, 0);
}
