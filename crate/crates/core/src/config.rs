//! Numerical tolerances and finite-difference settings.
//!
//! Every threshold used by the evaluators and the verification sweeps lives
//! here so that the CLI can override them in one place.

use serde::{Deserialize, Serialize};

/// Settings for the power-series evaluation of the confluent hypergeometric
/// function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    /// Terms below `rel_tol * |partial sum|` count towards the stopping rule.
    pub rel_tol: f64,
    /// Number of consecutive small terms required before stopping.
    pub small_terms: usize,
    /// Hard cap on the number of terms.
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-17, small_terms: 3, max_terms: 1000 }
    }
}

/// Central-difference oracle settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    /// Base step for first derivatives, scaled by `max(1, |coordinate|)`.
    pub step: f64,
    /// Base step for second derivatives.
    pub step_second: f64,
    /// Number of Richardson extrapolation levels applied on top of the
    /// fourth-order stencil.
    pub richardson_levels: u32,
    /// Extra factor on the steps along the spatial coordinates.
    #[serde(default = "one")]
    pub spatial_scale: f64,
}

fn one() -> f64 {
    1.0
}

impl FdConfig {
    /// Same settings with the given spatial step factor.
    pub fn with_spatial_scale(&self, spatial_scale: f64) -> Self {
        Self { spatial_scale, ..*self }
    }
}

impl Default for FdConfig {
    fn default() -> Self {
        Self { step: 1e-3, step_second: 1e-2, richardson_levels: 1, spatial_scale: 1.0 }
    }
}

/// Pass/fail thresholds for the verification sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub series: SeriesConfig,
    pub fd: FdConfig,
    /// Contiguous relation residual, relative to the size of the terms.
    pub contiguous: f64,
    /// Kernel-equation residuals (compact Casimir and non-compact PDE).
    pub pde: f64,
    /// First-order ladder operators against the oracle.
    pub ladder: f64,
    /// Least-squares residual when projecting the Heisenberg action onto
    /// its predicted directions.
    pub heisenberg: f64,
    /// Periodicity in the compact picture.
    pub periodicity: f64,
    /// Derivative at the identity of one-parameter group actions.
    pub group: f64,
    /// Round trip between the compact and non-compact pictures.
    pub picture: f64,
    /// Distance, relative to `max(1, |x|)`, at which a recovered coefficient
    /// `x` is identified with a rational.
    #[serde(default = "default_rational")]
    pub rational: f64,
}

fn default_rational() -> f64 {
    1e-7
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            series: SeriesConfig::default(),
            fd: FdConfig::default(),
            contiguous: 1e-10,
            pde: 1e-6,
            ladder: 1e-8,
            heisenberg: 1e-8,
            periodicity: 1e-12,
            group: 1e-5,
            picture: 1e-12,
            rational: default_rational(),
        }
    }
}
