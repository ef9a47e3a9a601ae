//! Exact factorization of square-free multivariate polynomials over Q by
//! numerical sampling of their complex varieties.
//!
//! The pipeline: pick a random point on one irreducible component of V(f),
//! sample a grid of nearby points on the same component, reconstruct the
//! component's minimal polynomial from those zeros via a generalized
//! Vandermonde null direction, and turn the floating coefficients back into
//! exact rationals with an error-controlled continued-fraction method. Every
//! factor is certified by an exact arithmetic identity before it is
//! reported.
//!
//! ```
//! use nullstelle::{factorize, parse_poly, FactorConfig};
//!
//! let f = parse_poly("x^2 - 1/4", &["x"]).unwrap();
//! let result = factorize(&f, &FactorConfig::default()).unwrap();
//! let names = vec!["x".to_string()];
//! let printed: Vec<String> = result.factors.iter().map(|p| p.render(&names)).collect();
//! assert_eq!(printed, vec!["x - 1/2", "x + 1/2"]);
//! assert!(result.complete);
//! ```

pub mod engine;
pub mod error;
pub mod interp;
pub mod num;
pub mod poly;
pub mod recover;
pub mod sample;

pub use engine::{
    approx_divide, extract_candidate, factorize, pair_conjugate, rationalize_verify, recombine,
    CandidateFactor, CandidateStatus, Diagnostics, FactorConfig, FactorizationResult,
    RationalizeOutcome, DEFAULT_SEED,
};
pub use error::{Error, Result};
pub use interp::{
    build_matrix, control_error, difference_bound, monomial_candidates, perturbed_bound,
    reconstruct, uniqueness_check, vandermonde_bound, EvaluationMatrix, MonomialSet,
};
pub use num::{Complex, Ctx, Real};
pub use poly::{
    exact_product, parse_poly, squarefree_probe, ApproxPolynomial, DegreeProfile, Monomial,
    RationalPolynomial,
};
pub use recover::{
    cf_evaluate, cf_expand, compute_budget, recover_coefficients, recover_rational, CFExpansion,
    ErrorBudget,
};
pub use sample::{
    gradient_check, initial_points, neighborhood, sample_variety, univariate_roots,
    NeighborhoodBox, SamplePoint, SampleSet,
};

// The guide's code blocks double as tests: each chapter is compiled and run
// by `cargo test --doc`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/rational-recovery.md")]
    mod rational_recovery {}
    #[doc = include_str!("../../../book/src/interpolation.md")]
    mod interpolation {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    mod pipeline {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
