//! Exact polynomials in `y_1, ..., y_n` and harmonic polynomials.

mod gaussian;
mod harmonic;
mod polynomial;

pub use gaussian::GaussRational;
pub use harmonic::{
    c_const, canonical_harmonic, decompose_yj, harmonic_basis, harmonic_dimension, signed_harmonic_n2,
    HarmonicPolynomial,
};
pub use polynomial::{CompiledPolynomial, Monomial, Polynomial};
