//! K-finite solutions of the Schrödinger and heat equations with an
//! inverse-square potential.
//!
//! The solution space `ker(Ω - 2λ)` of the Casimir operator is spanned by
//! explicit hypergeometric vectors `F_{m,l,k}`. This crate enumerates the
//! admissible eigenvalues, builds and evaluates the vectors, applies the
//! `sl(2)` and Heisenberg operators in closed form, and checks every closed
//! form against finite-difference and exact oracles.
//!
//! ```
//! use singular_weyl::{admissible_pairs, Eigenvalue};
//! assert_eq!(admissible_pairs(3, Eigenvalue(75)).unwrap(), vec![(5, 2), (3, 9), (1, 36)]);
//! ```

pub mod admissibility;
pub mod config;
pub mod error;
pub mod ktype;
pub mod operators;
pub mod params;
pub mod poly;
pub mod sampling;
pub mod special;
pub mod structure;
pub mod verify;

pub use admissibility::{admissible_pairs, eigenvalue_of_pair, enumerate_admissible, is_admissible};
pub use config::{FdConfig, SeriesConfig, Tolerances};
pub use error::{Error, Result};
pub use ktype::{make_ktype, make_ktype_n1, CompactPoint, KTypeVector, LinearCombination, NoncompactPoint};
pub use params::{parse_complex, Eigenvalue, KTypeIndex, ParameterSet, SPreset};
pub use poly::{canonical_harmonic, harmonic_basis, HarmonicPolynomial, Polynomial};
pub use structure::{composition_series, decompose, CompositionSeries, LadderGraph, SubmoduleDescriptor};
pub use verify::{run_verification, VerifyConfig, VerifyReport};
