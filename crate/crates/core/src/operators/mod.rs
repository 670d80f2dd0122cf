//! Differential operators: exact ladder actions, a finite-difference oracle,
//! and group actions in the non-compact picture.

mod closed;
mod fd;
mod group;
mod recover;

pub use closed::{
    apply_e, apply_eta, apply_kappa, apply_linear, e_coefficients, e_target_harmonics, e_terms, eta_coefficient,
    eta_coefficient_at, kappa_coefficient, printed_e_coefficients, ETarget, ETerm, ExactCoefficient, HarmonicSlot,
    Sign, Unit,
};
pub use fd::{
    fd_apply, pde_residual_noncompact, pde_terms_noncompact, Differ, OperatorKind, OperatorSpec, PdeTerms, Picture,
};
pub use group::{group_action_noncompact, GroupElement, Transformed};
pub use recover::{denominator_bound, rationalize, recover_e_coefficients, RecoveredTerm, Recovery};
