use std::path::PathBuf;

use singular_weyl::{parse_complex, ParameterSet, SPreset, Tolerances};

use crate::args::{Common, Format, Preset, TolArgs};
use crate::CliError;

pub const SEED_VAR: &str = "SINGULAR_WEYL_SEED";

/// Validated options shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ParameterSet,
    pub lambda: Option<i64>,
    pub lambda_max: Option<i64>,
    pub m_min: Option<i64>,
    pub m_max: Option<i64>,
    pub tolerances: Tolerances,
    pub format: Option<Format>,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(args: &Common) -> Result<Self, CliError> {
        let s = match (&args.s, args.preset) {
            (Some(text), _) => parse_complex(text)?,
            (None, Some(Preset::Heat)) => SPreset::Heat.value(),
            (None, _) => SPreset::Schrodinger.value(),
        };
        let params = ParameterSet::new(args.n, args.q, s)?;
        if let Some(l) = args.lambda.filter(|l| *l < 0) {
            return Err(CliError::Invalid(format!("--lambda must be non-negative, got {l}")));
        }
        if let Some(l) = args.lambda_max.filter(|l| *l < 0) {
            return Err(CliError::Invalid(format!("--lambda-max must be non-negative, got {l}")));
        }
        if let (Some(lo), Some(hi)) = (args.m_min, args.m_max) {
            if lo > hi {
                return Err(CliError::Invalid(format!("--m-min {lo} exceeds --m-max {hi}")));
            }
        }
        let seed = match std::env::var(SEED_VAR) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Invalid(format!("{SEED_VAR} must be an unsigned integer, got '{v}'")))?,
            Err(_) => args.seed.unwrap_or(0),
        };
        Ok(Self {
            params,
            lambda: args.lambda,
            lambda_max: args.lambda_max,
            m_min: args.m_min,
            m_max: args.m_max,
            tolerances: tolerances(&args.tol)?,
            format: args.format,
            seed,
            output: args.output.clone(),
        })
    }

    /// `--format`, or `default` when absent; anything outside `allowed` is
    /// rejected.
    pub fn format(&self, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(CliError::Invalid(format!("format {f:?} is not available here").to_lowercase()))
        }
    }

    /// `(m_min, m_max)` with the given defaults.
    pub fn m_range(&self, default: (i64, i64)) -> Result<(i64, i64), CliError> {
        let range = (self.m_min.unwrap_or(default.0), self.m_max.unwrap_or(default.1));
        if range.0 > range.1 {
            return Err(CliError::Invalid(format!("empty weight range [{}, {}]", range.0, range.1)));
        }
        Ok(range)
    }
}

fn tolerances(t: &TolArgs) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    let fields: [(Option<f64>, &mut f64, &str); 9] = [
        (t.tol_contiguous, &mut tol.contiguous, "contiguous"),
        (t.tol_pde, &mut tol.pde, "pde"),
        (t.tol_ladder, &mut tol.ladder, "ladder"),
        (t.tol_heisenberg, &mut tol.heisenberg, "heisenberg"),
        (t.tol_periodicity, &mut tol.periodicity, "periodicity"),
        (t.tol_group, &mut tol.group, "group"),
        (t.tol_picture, &mut tol.picture, "picture"),
        (t.tol_rational, &mut tol.rational, "rational"),
        (t.tol_fd_step, &mut tol.fd.step, "fd-step"),
    ];
    for (value, slot, name) in fields {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Invalid(format!("--tol-{name} must be positive, got {v}")));
            }
            *slot = v;
        }
    }
    Ok(tol)
}
