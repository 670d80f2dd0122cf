use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("lambda = {lambda} is not admissible for n = {n}")]
    NotAdmissible { n: u32, lambda: i64 },

    #[error("m = {m} violates the weight congruence m = 2k + q (mod 4) for k = {k}, q = {q}")]
    Congruence { m: i64, k: i64, q: u8 },

    #[error("pair (l, k) = ({l}, {k}) is not admissible for n = {n}")]
    PairNotAdmissible { n: u32, l: i64, k: i64 },

    #[error("harmonic polynomial has degree {found}, expected {expected}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("hypergeometric parameter b = {0} is a non-positive integer")]
    HypergeometricPole(String),

    #[error("series failed to converge within {terms} terms (a = {a}, b = {b}, z = {z})")]
    NoConvergence { a: String, b: String, z: String, terms: usize },

    #[error("point is too close to a singular locus: {0}")]
    Singular(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
