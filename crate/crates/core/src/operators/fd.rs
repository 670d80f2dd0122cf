//! Finite-difference application of the differential operators.
//!
//! Functions are passed as `Fn(f64, &[f64]) -> Complex64`, where the first
//! argument is `θ` (compact picture) or `t` (non-compact picture).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::FdConfig;
use crate::error::{Error, Result};
use crate::params::ParameterSet;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    Compact,
    Noncompact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Kappa,
    EtaPlus,
    EtaMinus,
    /// Casimir operator; compact picture only.
    Omega,
    /// `E_j⁺`, 1-based `j`.
    EPlus(usize),
    /// `E_j⁻`, 1-based `j`.
    EMinus(usize),
    /// `[[a, b], [c, -a]] ∈ sl(2, ℝ)`; non-compact picture only.
    Sl2 {
        a: f64,
        b: f64,
        c: f64,
    },
    /// `(u, v, w)` in the Heisenberg algebra; non-compact picture only.
    Heisenberg {
        u: Vec<f64>,
        v: Vec<f64>,
        w: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub picture: Picture,
    pub kind: OperatorKind,
}

impl OperatorSpec {
    pub fn compact(kind: OperatorKind) -> Self {
        Self { picture: Picture::Compact, kind }
    }

    pub fn noncompact(kind: OperatorKind) -> Self {
        Self { picture: Picture::Noncompact, kind }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match (&self.kind, self.picture) {
            (OperatorKind::EPlus(j) | OperatorKind::EMinus(j), _) if *j == 0 || *j > n => {
                bad(format!("coordinate index {j} outside 1..={n}"))
            }
            (OperatorKind::Omega, Picture::Noncompact) => {
                bad("the Casimir operator is only available in the compact picture".into())
            }
            (OperatorKind::Sl2 { .. } | OperatorKind::Heisenberg { .. }, Picture::Compact) => {
                bad("sl2 and Heisenberg elements are only available in the non-compact picture".into())
            }
            (OperatorKind::Heisenberg { u, v, .. }, _) if u.len() != n || v.len() != n => {
                bad(format!("Heisenberg vectors must have length {n}"))
            }
            _ => Ok(()),
        }
    }
}

/// Central-difference derivatives along one coordinate (0 is the first
/// argument, `j + 1` is `y_j` / `x_j`).
pub struct Differ<'a, F> {
    f: &'a F,
    cfg: FdConfig,
}

impl<'a, F: Fn(f64, &[f64]) -> Complex64> Differ<'a, F> {
    pub fn new(f: &'a F, cfg: FdConfig) -> Self {
        Self { f, cfg }
    }

    fn eval_shift(&self, p0: f64, p: &[f64], coord: usize, delta: f64, buf: &mut Vec<f64>) -> Complex64 {
        if coord == 0 {
            (self.f)(p0 + delta, p)
        } else {
            buf.clear();
            buf.extend_from_slice(p);
            buf[coord - 1] += delta;
            (self.f)(p0, buf)
        }
    }

    fn step_scale(&self, p0: f64, p: &[f64], coord: usize) -> f64 {
        if coord == 0 {
            p0.abs().max(1.0)
        } else {
            p[coord - 1].abs().max(1.0) * self.cfg.spatial_scale
        }
    }

    /// Richardson extrapolation for a stencil whose error expands in
    /// `h⁴, h⁶, h⁸, ...`.
    fn extrapolate(mut estimates: Vec<Complex64>) -> Complex64 {
        let mut order = 4;
        while estimates.len() > 1 {
            let factor = 2f64.powi(order);
            estimates = estimates.windows(2).map(|w| (w[1] * factor - w[0]) / (factor - 1.0)).collect();
            order += 2;
        }
        estimates[0]
    }

    pub fn first(&self, p0: f64, p: &[f64], coord: usize) -> Complex64 {
        let h0 = self.cfg.step * self.step_scale(p0, p, coord);
        let mut buf = Vec::with_capacity(p.len());
        let estimates = (0..=self.cfg.richardson_levels)
            .map(|level| {
                let h = h0 / 2f64.powi(level as i32);
                let fm2 = self.eval_shift(p0, p, coord, -2.0 * h, &mut buf);
                let fm1 = self.eval_shift(p0, p, coord, -h, &mut buf);
                let fp1 = self.eval_shift(p0, p, coord, h, &mut buf);
                let fp2 = self.eval_shift(p0, p, coord, 2.0 * h, &mut buf);
                (fm2 - fm1 * 8.0 + fp1 * 8.0 - fp2) / (12.0 * h)
            })
            .collect();
        Self::extrapolate(estimates)
    }

    /// Pure second derivative; `center` is `f` at the point.
    pub fn second(&self, p0: f64, p: &[f64], coord: usize, center: Complex64) -> Complex64 {
        let h0 = self.cfg.step_second * self.step_scale(p0, p, coord);
        let mut buf = Vec::with_capacity(p.len());
        let estimates = (0..=self.cfg.richardson_levels)
            .map(|level| {
                let h = h0 / 2f64.powi(level as i32);
                let fm2 = self.eval_shift(p0, p, coord, -2.0 * h, &mut buf);
                let fm1 = self.eval_shift(p0, p, coord, -h, &mut buf);
                let fp1 = self.eval_shift(p0, p, coord, h, &mut buf);
                let fp2 = self.eval_shift(p0, p, coord, 2.0 * h, &mut buf);
                (-fm2 + fm1 * 16.0 - center * 30.0 + fp1 * 16.0 - fp2) / (12.0 * h * h)
            })
            .collect();
        Self::extrapolate(estimates)
    }

    pub fn laplacian(&self, p0: f64, p: &[f64], center: Complex64) -> Complex64 {
        (1..=p.len()).map(|c| self.second(p0, p, c, center)).sum()
    }

    /// `Σ_j y_j ∂_j`
    pub fn euler(&self, p0: f64, p: &[f64]) -> Complex64 {
        p.iter().enumerate().map(|(j, &y)| self.first(p0, p, j + 1) * y).sum()
    }
}

/// Applies `spec` to `f` at `(p0, p)` by finite differences.
///
/// Compact picture (`p0 = θ`, `p = y`):
/// `κ = i∂_θ`, `η± = ½e^{∓2iθ}(-E_n ∓ i∂_θ - (n/2 ± 2is‖y‖²))`,
/// `Ω = ‖y‖²(4s∂_θ + 4s²‖y‖² + Δ)`, `E_j± = e^{∓iθ}(±i∂_j - 2sy_j)`.
///
/// Non-compact picture (`p0 = t`, `p = x`): the `sl(2)` element
/// `[[a, b], [c, -a]]` acts by
/// `(ct-a)Σx_j∂_j + (ct²-2at-b)∂_t + (ra - cs‖x‖² - rct)`, and
/// `κ = i(e⁻ - e⁺)`, `η± = ½(h ± i(e⁺ + e⁻))` in terms of the standard basis.
/// `(u, v, w)` acts by `-Σu_j∂_j + tΣv_j∂_j + s(w - 2v·x)` and
/// `E_j± = (∓ie_j, e_j, 0)`.
pub fn fd_apply<F: Fn(f64, &[f64]) -> Complex64>(
    spec: &OperatorSpec,
    params: &ParameterSet,
    f: &F,
    p0: f64,
    p: &[f64],
    cfg: &FdConfig,
) -> Result<Complex64> {
    let n = params.n() as usize;
    if p.len() != n {
        return Err(Error::InvalidParameter(format!("point has dimension {}, expected {n}", p.len())));
    }
    spec.validate(n)?;
    let d = Differ::new(f, *cfg);
    let s = params.s();
    let norm2: f64 = p.iter().map(|v| v * v).sum();
    match spec.picture {
        Picture::Compact => {
            let theta = p0;
            Ok(match &spec.kind {
                OperatorKind::Kappa => I * d.first(p0, p, 0),
                OperatorKind::EtaPlus | OperatorKind::EtaMinus => {
                    let sg = if spec.kind == OperatorKind::EtaPlus { 1.0 } else { -1.0 };
                    let value = f(p0, p);
                    let inner = -d.euler(p0, p)
                        - I * sg * d.first(p0, p, 0)
                        - (n as f64 / 2.0 + sg * 2.0 * I * s * norm2) * value;
                    0.5 * Complex64::from_polar(1.0, -sg * 2.0 * theta) * inner
                }
                OperatorKind::Omega => {
                    let value = f(p0, p);
                    norm2 * (4.0 * s * d.first(p0, p, 0) + 4.0 * s * s * norm2 * value + d.laplacian(p0, p, value))
                }
                OperatorKind::EPlus(j) | OperatorKind::EMinus(j) => {
                    let sg = if matches!(spec.kind, OperatorKind::EPlus(_)) { 1.0 } else { -1.0 };
                    let value = f(p0, p);
                    Complex64::from_polar(1.0, -sg * theta) * (sg * I * d.first(p0, p, *j) - 2.0 * s * p[j - 1] * value)
                }
                OperatorKind::Sl2 { .. } | OperatorKind::Heisenberg { .. } => unreachable!("rejected by validate"),
            })
        }
        Picture::Noncompact => {
            let t = p0;
            let r = params.r_f64();
            let sl2 = |a: Complex64, b: Complex64, c: Complex64, dt: Complex64, euler: Complex64, value: Complex64| {
                (c * t - a) * euler + (c * t * t - 2.0 * a * t - b) * dt + (r * a - c * s * norm2 - r * c * t) * value
            };
            let heis = |u: &[Complex64], v: &[f64], w: f64, grad: &[Complex64], value: Complex64| {
                let mut acc = s * (w - 2.0 * v.iter().zip(p).map(|(a, b)| a * b).sum::<f64>()) * value;
                for j in 0..n {
                    acc += (-u[j] + t * v[j]) * grad[j];
                }
                acc
            };
            let c = |x: f64| Complex64::new(x, 0.0);
            let zero = c(0.0);
            let one = c(1.0);
            Ok(match &spec.kind {
                OperatorKind::Sl2 { a, b, c: cc } => {
                    let value = f(p0, p);
                    sl2(c(*a), c(*b), c(*cc), d.first(p0, p, 0), d.euler(p0, p), value)
                }
                OperatorKind::Kappa | OperatorKind::EtaPlus | OperatorKind::EtaMinus => {
                    let value = f(p0, p);
                    let dt = d.first(p0, p, 0);
                    let eu = d.euler(p0, p);
                    // complex combination of h = (1,0,0), e⁺ = (0,1,0), e⁻ = (0,0,1)
                    let (a, b, cc) = match spec.kind {
                        OperatorKind::Kappa => (zero, -I, I),
                        OperatorKind::EtaPlus => (0.5 * one, 0.5 * I, 0.5 * I),
                        _ => (0.5 * one, -0.5 * I, -0.5 * I),
                    };
                    sl2(a, b, cc, dt, eu, value)
                }
                OperatorKind::Heisenberg { u, v, w } => {
                    let value = f(p0, p);
                    let grad: Vec<Complex64> = (1..=n).map(|j| d.first(p0, p, j)).collect();
                    let u: Vec<Complex64> = u.iter().map(|&x| c(x)).collect();
                    heis(&u, v, *w, &grad, value)
                }
                OperatorKind::EPlus(j) | OperatorKind::EMinus(j) => {
                    let sg = if matches!(spec.kind, OperatorKind::EPlus(_)) { 1.0 } else { -1.0 };
                    let value = f(p0, p);
                    let mut u = vec![zero; n];
                    u[j - 1] = -sg * I;
                    let mut v = vec![0.0; n];
                    v[j - 1] = 1.0;
                    let grad: Vec<Complex64> = (1..=n).map(|jj| d.first(p0, p, jj)).collect();
                    heis(&u, &v, 0.0, &grad, value)
                }
                OperatorKind::Omega => unreachable!("rejected by validate"),
            })
        }
    }
}

/// `(4s∂_t + Δ - 2λ/‖x‖²) f` at `(t, x)`.
pub fn pde_residual_noncompact<F: Fn(f64, &[f64]) -> Complex64>(
    f: &F,
    lambda: f64,
    s: Complex64,
    t: f64,
    x: &[f64],
    cfg: &FdConfig,
) -> Result<Complex64> {
    let norm2: f64 = x.iter().map(|v| v * v).sum();
    let guard = 10.0 * cfg.step_second;
    if norm2.sqrt() < guard {
        return Err(Error::Singular(format!("‖x‖ = {} is within {guard} of x = 0", norm2.sqrt())));
    }
    let d = Differ::new(f, *cfg);
    let value = f(t, x);
    Ok(4.0 * s * d.first(t, x, 0) + d.laplacian(t, x, value) - 2.0 * lambda / norm2 * value)
}

/// Pieces of the PDE residual at one point.
#[derive(Debug, Clone, Copy)]
pub struct PdeTerms {
    /// `4s∂_t f`
    pub time: Complex64,
    /// `Δf`
    pub laplacian: Complex64,
    /// `2λf/‖x‖²`
    pub potential: Complex64,
    /// Largest `|∂_j² f|`; `Δf` can be far smaller when these cancel.
    pub largest_second: f64,
}

impl PdeTerms {
    pub fn residual(&self) -> Complex64 {
        self.time + self.laplacian - self.potential
    }

    /// Largest single term entering the residual.
    pub fn scale(&self) -> f64 {
        self.time.norm().max(self.largest_second).max(self.potential.norm())
    }
}

/// The terms of `(4s∂_t + Δ - 2λ/‖x‖²) f` at `(t, x)`.
pub fn pde_terms_noncompact<F: Fn(f64, &[f64]) -> Complex64>(
    f: &F,
    lambda: f64,
    s: Complex64,
    t: f64,
    x: &[f64],
    cfg: &FdConfig,
) -> Result<PdeTerms> {
    let norm2: f64 = x.iter().map(|v| v * v).sum();
    let guard = 10.0 * cfg.step_second;
    if norm2.sqrt() < guard {
        return Err(Error::Singular(format!("‖x‖ = {} is within {guard} of x = 0", norm2.sqrt())));
    }
    let d = Differ::new(f, *cfg);
    let value = f(t, x);
    let seconds: Vec<Complex64> = (1..=x.len()).map(|c| d.second(t, x, c, value)).collect();
    Ok(PdeTerms {
        time: 4.0 * s * d.first(t, x, 0),
        laplacian: seconds.iter().sum(),
        potential: 2.0 * lambda / norm2 * value,
        largest_second: seconds.iter().map(|v| v.norm()).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SPreset;

    fn params(n: u32) -> ParameterSet {
        ParameterSet::with_preset(n, 0, SPreset::Schrodinger).unwrap()
    }

    #[test]
    fn kappa_on_exponential() {
        let m = 6.0;
        let f = |theta: f64, y: &[f64]| Complex64::from_polar(1.0, -m * theta / 2.0) * (y[0] * y[0] + y[1]);
        let spec = OperatorSpec::compact(OperatorKind::Kappa);
        let got = fd_apply(&spec, &params(2), &f, 0.3, &[0.5, -0.2], &FdConfig::default()).unwrap();
        let expected = (m / 2.0) * f(0.3, &[0.5, -0.2]);
        assert!((got - expected).norm() < 1e-10);
    }

    #[test]
    fn pde_on_constants() {
        let one = |_: f64, _: &[f64]| Complex64::new(1.0, 0.0);
        let s = SPreset::Heat.value();
        let cfg = FdConfig::default();
        let r = pde_residual_noncompact(&one, 0.0, s, 0.2, &[0.5, 0.5, 0.1], &cfg).unwrap();
        assert!(r.norm() < 1e-12);
        let x = [0.5, 0.5, 0.1];
        let r = pde_residual_noncompact(&one, 3.0, s, 0.2, &x, &cfg).unwrap();
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        assert!((r - Complex64::new(-6.0 / norm2, 0.0)).norm() < 1e-9);
        assert!(matches!(pde_residual_noncompact(&one, 3.0, s, 0.2, &[0.01, 0.0, 0.0], &cfg), Err(Error::Singular(_))));
    }

    #[test]
    fn second_derivative_of_polynomial() {
        let f = |t: f64, x: &[f64]| Complex64::new(t * t * t + x[0].powi(4), 0.0);
        let d = Differ::new(&f, FdConfig::default());
        assert!((d.second(0.5, &[1.5], 1, f(0.5, &[1.5])).re - 12.0 * 2.25).abs() < 1e-9);
        assert!((d.first(0.5, &[1.5], 0).re - 0.75).abs() < 1e-10);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let f = |_: f64, _: &[f64]| Complex64::new(1.0, 0.0);
        let cfg = FdConfig::default();
        let p = params(2);
        assert!(fd_apply(&OperatorSpec::compact(OperatorKind::EPlus(3)), &p, &f, 0.0, &[1.0, 1.0], &cfg).is_err());
        assert!(fd_apply(&OperatorSpec::noncompact(OperatorKind::Omega), &p, &f, 0.0, &[1.0, 1.0], &cfg).is_err());
        let sl2 = OperatorSpec::compact(OperatorKind::Sl2 { a: 1.0, b: 0.0, c: 0.0 });
        assert!(fd_apply(&sl2, &p, &f, 0.0, &[1.0, 1.0], &cfg).is_err());
    }
}
