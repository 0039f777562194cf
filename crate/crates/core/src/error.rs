use thiserror::Error;

/// Malformed text input (rationals and characters).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("not a rational number: {0:?}")]
    Rational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("expected {expected} comma-separated components, got {got} in {input:?}")]
    Arity {
        expected: usize,
        got: usize,
        input: String,
    },
}

/// Domain errors raised by the geometric and enumerative operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WallError {
    #[error("expected a semicircular wall, got {0}")]
    NotSemicircle(String),
    #[error("alpha^2 must be positive, got {0}")]
    NonPositiveAlphaSq(String),
    #[error("s must be positive, got {0}")]
    NonPositiveS(String),
    #[error("character {0} has no tilt hyperbola (ch0 = ch1 = 0)")]
    DegenerateHyperbola(String),
    #[error("beta must be an integer, got {0}")]
    NonIntegerBeta(String),
    #[error("character {0} is not integral")]
    NonIntegral(String),
    #[error("character {0} has negative discriminant")]
    NegativeDiscriminant(String),
    #[error("twisted degree ch1^beta = {0} must be positive")]
    NonPositiveTwistedDegree(String),
    #[error("a_max must be at least 1")]
    BadCap,
    #[error("admissible ch3 range is unbounded {0}")]
    UnboundedCh3(&'static str),
    #[error("negative discriminant for {0}")]
    NegativeFactorDiscriminant(&'static str),
    #[error("degenerate diagram window: {0}")]
    DegenerateWindow(String),
    #[error("twisted coordinates of {0} do not fit in 64 bits")]
    TooLarge(String),
}

/// Errors from the cohomology helpers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("projective space dimension must be at least 1, got {0}")]
    BadDimension(u32),
    #[error("cohomological degree {i} out of range for P^{n}")]
    BadDegree { n: u32, i: u32 },
    #[error("formula for h^0(I_Z(d)) with {k} points needs d >= {min_d}, got d = {d}")]
    OutsideDomain { k: u32, d: i64, min_d: i64 },
    #[error("number of points must be positive")]
    NoPoints,
    #[error("fat point formula needs k >= 1, got {0}")]
    FatPointDegree(i64),
    #[error("value does not fit in 128 bits")]
    Overflow,
}
