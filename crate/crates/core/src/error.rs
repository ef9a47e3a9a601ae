//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown variable `{name}` at byte {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("operation undefined for a constant polynomial")]
    ConstantPolynomial,
    #[error("continued fraction did not terminate within {cap} terms")]
    DivergentExpansion { cap: usize },
    #[error("empty continued fraction expansion")]
    EmptyExpansion,
    #[error("denominator bound must be at least 2, got {got}")]
    BoundTooSmall { got: String },
    #[error("bound violated: recovered denominator {denominator} exceeds bound {bound}")]
    BoundViolated { denominator: String, bound: String },
    #[error("not a real polynomial: imaginary magnitude {magnitude:e} at or above threshold {threshold:e}")]
    NotRealPolynomial { magnitude: f64, threshold: f64 },
    #[error("not rational at bound {bound}")]
    NotRationalAtBound { bound: String },
    #[error("matrix is rank deficient; interpolation is not unique")]
    RankDeficient,
    #[error("monomial set too small for reconstruction (need at least 2)")]
    MonomialSetTooSmall,
    #[error(
        "wrong point count: monomial set of size {m} needs {m} - 1 = {needed} points, got {got}"
    )]
    WrongPointCount { m: usize, needed: usize, got: usize },
    #[error("nonpositive matrix statistic: {which}")]
    NonpositiveStatistic { which: &'static str },
    #[error("{message}")]
    Precondition { message: String },
    #[error("root refinement did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("polynomial is constant in the last variable")]
    ConstantInLastVariable,
    #[error("no regular point found after {attempts} attempts")]
    NoRegularPoint { attempts: usize },
    #[error("no stable neighborhood found after {halvings} halvings")]
    NoStableNeighborhood { halvings: usize },
    #[error("branch ambiguity: closest-root distance ratio {ratio:.4}")]
    BranchAmbiguity { ratio: f64 },
    #[error("conjugate pairing failed")]
    ConjugatePairingFailed,
    #[error("degenerate sampling: uniqueness check failed after grid refinement")]
    DegenerateSampling,
    #[error("input is not square-free (probe failed)")]
    NotSquareFree,
    #[error("dividend degree {dividend} below divisor degree {divisor}")]
    DegreeMismatch { dividend: usize, divisor: usize },
    #[error("timed out")]
    Timeout,
}

pub type Result<T> = std::result::Result<T, Error>;
