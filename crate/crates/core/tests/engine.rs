//! End-to-end factorization scenarios.

use nullstelle::poly::{exact_product, parse_poly, RationalPolynomial};
use nullstelle::{factorize, FactorConfig};

fn run(text: &str, vars: &[&str]) -> (nullstelle::FactorizationResult, RationalPolynomial) {
    let f = parse_poly(text, vars).unwrap();
    let result = factorize(&f, &FactorConfig::default()).unwrap();
    (result, f)
}

fn check_exact(result: &nullstelle::FactorizationResult, f: &RationalPolynomial) {
    let mut product = RationalPolynomial::constant(f.nvars(), result.unit.clone());
    for p in &result.factors {
        product = &product * p;
    }
    assert_eq!(
        &product, f,
        "unit * factors must reproduce the input exactly"
    );
}

fn rendered(result: &nullstelle::FactorizationResult, vars: &[&str]) -> Vec<String> {
    let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    result.factors.iter().map(|p| p.render(&names)).collect()
}

#[test]
fn splits_difference_of_squares() {
    let (result, f) = run("x^2 - 1/4", &["x"]);
    check_exact(&result, &f);
    assert!(result.complete);
    assert_eq!(rendered(&result, &["x"]), vec!["x - 1/2", "x + 1/2"]);
    assert_eq!(result.unit, dashu_ratio::RBig::ONE);
}

#[test]
fn splits_two_linear_multivariate_factors() {
    // (x+y+1)(x-y+2) expanded
    let (result, f) = run("x^2 + 3*x - y^2 + y + 2", &["x", "y"]);
    check_exact(&result, &f);
    assert!(result.complete);
    let got = rendered(&result, &["x", "y"]);
    assert_eq!(got.len(), 2, "{got:?}");
    assert!(got.contains(&"x + y + 1".to_string()), "{got:?}");
    assert!(got.contains(&"x - y + 2".to_string()), "{got:?}");
}

#[test]
fn conjugate_pairing_recovers_sum_of_squares() {
    let (result, f) = run("x1^2 + x2^2", &["x1", "x2"]);
    check_exact(&result, &f);
    assert!(result.complete);
    assert_eq!(rendered(&result, &["x1", "x2"]), vec!["x1^2 + x2^2"]);
}

#[test]
fn irreducible_input_is_returned_whole() {
    let (result, f) = run("x^2 + y^2 + 1", &["x", "y"]);
    check_exact(&result, &f);
    assert!(result.complete);
    assert_eq!(result.factors.len(), 1);
}

#[test]
fn recombination_pairs_real_quadratics() {
    let (result, f) = run("x^4 - 5*x^2 + 6", &["x"]);
    check_exact(&result, &f);
    assert!(result.complete, "notes: {:?}", result.diagnostics.notes);
    let got = rendered(&result, &["x"]);
    assert_eq!(got, vec!["x^2 - 3", "x^2 - 2"], "{got:?}");
}

#[test]
fn cube_root_requires_recombination() {
    let (result, f) = run("x^3 - 2", &["x"]);
    check_exact(&result, &f);
    assert!(result.complete, "notes: {:?}", result.diagnostics.notes);
    assert_eq!(rendered(&result, &["x"]), vec!["x^3 - 2"]);
}

#[test]
fn scale_invariance_moves_into_unit() {
    let (r1, _) = run("x^2 - 1/4", &["x"]);
    let f = parse_poly("3*x^2 - 3/4", &["x"]).unwrap();
    let r2 = factorize(&f, &FactorConfig::default()).unwrap();
    check_exact(&r2, &f);
    assert_eq!(r1.factors, r2.factors);
    assert_eq!(r2.unit, dashu_ratio::RBig::from(3));
}

#[test]
fn factor_missing_main_variable_is_found() {
    // (x + y)(y^2 - 2y + z) has one factor without z
    let f = parse_poly("x*y^2 - 2*x*y + x*z + y^3 - 2*y^2 + y*z", &["x", "y", "z"]).unwrap();
    let result = factorize(&f, &FactorConfig::default()).unwrap();
    check_exact(&result, &f);
    assert!(result.complete, "notes: {:?}", result.diagnostics.notes);
    assert_eq!(
        result.factors.len(),
        2,
        "{:?}",
        rendered(&result, &["x", "y", "z"])
    );
}

#[test]
fn emitted_factors_are_irreducible_fixed_points() {
    let (result, f) = run("x^4 - 5*x^2 + 6", &["x"]);
    check_exact(&result, &f);
    for factor in &result.factors {
        let again = factorize(factor, &FactorConfig::default()).unwrap();
        assert_eq!(again.factors.len(), 1);
        assert_eq!(&again.factors[0], factor);
    }
}

#[test]
fn rejects_non_squarefree_input() {
    let f = parse_poly("x^2 + 2*x*y + y^2", &["x", "y"]).unwrap();
    assert!(matches!(
        factorize(&f, &FactorConfig::default()),
        Err(nullstelle::Error::NotSquareFree)
    ));
}

#[test]
fn rejects_constants() {
    let f = parse_poly("5", &["x"]).unwrap();
    assert!(factorize(&f, &FactorConfig::default()).is_err());
    let z = RationalPolynomial::zero(1);
    assert!(factorize(&z, &FactorConfig::default()).is_err());
}

#[test]
fn exactness_holds_for_products_of_linears() {
    // (x - 1/2)(x + 1/3)(x - 2) with rational roots
    let parts = [
        parse_poly("x - 1/2", &["x"]).unwrap(),
        parse_poly("x + 1/3", &["x"]).unwrap(),
        parse_poly("x - 2", &["x"]).unwrap(),
    ];
    let f = exact_product(&parts).unwrap();
    let result = factorize(&f, &FactorConfig::default()).unwrap();
    check_exact(&result, &f);
    assert!(result.complete);
    assert_eq!(result.factors.len(), 3);
}

#[test]
fn extraction_and_pairing_surface() {
    use dashu_int::UBig;
    use nullstelle::engine::{extract_candidate, pair_conjugate, CandidateStatus};
    use nullstelle::num::Ctx;
    use nullstelle::recover::compute_budget;
    use nullstelle::sample::{initial_points, neighborhood, sample_variety};
    use rand_chacha::rand_core::SeedableRng;

    let ctx = Ctx::new(256);
    // x1^2 + x2^2 = (x1 + i x2)(x1 - i x2): complex branches
    let f = parse_poly("x1^2 + x2^2", &["x1", "x2"]).unwrap();
    let mut budget = compute_budget(&UBig::from(2u8)).unwrap();
    budget.eps = Some(ctx.epsilon_scaled(128));
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
    let seeds = initial_points(&f, &mut rng, &budget, &ctx).unwrap();
    assert_eq!(seeds.len(), 2);
    let bounds = neighborhood(&f, &seeds[0], &mut rng, &ctx).unwrap();
    let dp = f.degree_profile();
    let set = sample_variety(&f, &bounds, &seeds, &dp, &budget, 2, &ctx).unwrap();

    let cand = extract_candidate(&f, &set, 1, &budget, &ctx).unwrap();
    assert_eq!(cand.status, CandidateStatus::Complex);
    assert_eq!(cand.poly.total_degree(), 1);

    let paired = pair_conjugate(&cand, &seeds, &budget, &ctx).unwrap();
    assert_eq!(paired.status, CandidateStatus::Real);
    assert_eq!(paired.branch_tags.len(), 2);
    // the paired product is x1^2 + x2^2 up to reconstruction noise
    let sq = |v: usize| {
        nullstelle::Monomial(vec![if v == 0 { 2 } else { 0 }, if v == 1 { 2 } else { 0 }])
    };
    let c1 = paired.poly.coefficient(&sq(0)).unwrap();
    let c2 = paired.poly.coefficient(&sq(1)).unwrap();
    assert!((c1.re.to_f64().value() - 1.0).abs() < 1e-30);
    assert!((c2.re.to_f64().value() - 1.0).abs() < 1e-30);
}

#[test]
fn factors_are_monic_in_graded_lex() {
    let (result, _) = run("x^2 + 3*x - y^2 + y + 2", &["x", "y"]);
    for f in &result.factors {
        assert_eq!(*f.leading_coefficient().unwrap(), dashu_ratio::RBig::ONE);
    }
}
