//! Sweeps of the closed forms against the numerical and exact oracles.

use std::collections::BTreeMap;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::admissibility::{admissible_pairs, enumerate_admissible, kernel_eigenvalue};
use crate::config::Tolerances;
use crate::error::Result;
use crate::ktype::{make_ktype, make_ktype_n1, periodicity_residual, CompactPoint, KTypeVector, NoncompactPoint};
use crate::operators::{
    apply_eta, apply_kappa, fd_apply, pde_terms_noncompact, recover_e_coefficients, ExactCoefficient, OperatorKind,
    OperatorSpec, Sign,
};
use crate::params::{weight_residue, Eigenvalue, KTypeIndex, ParameterSet};
use crate::poly::{canonical_harmonic, decompose_yj, harmonic_basis, harmonic_dimension};
use crate::sampling::{compact_points, hypergeometric_samples, noncompact_points};
use crate::special::{contiguous_residual_scaled, Relation};
use crate::structure::{expected_shifts, heisenberg_targets};

/// K-types with admissible `λ <= lambda_max` and `m_min <= m <= m_max`,
/// one canonical harmonic per `(l, k)`, ordered by `(λ, l, k, m)`.
/// For `n = 2` only `k >= 0` is included.
pub fn ktype_lattice(params: &ParameterSet, lambda_max: i64, m_min: i64, m_max: i64) -> Result<Vec<KTypeVector>> {
    let n = params.n();
    let mut labels = Vec::new();
    for lambda in enumerate_admissible(n, lambda_max) {
        for pair in admissible_pairs(n, lambda)? {
            if n == 2 && pair.1 < 0 {
                continue;
            }
            labels.push((lambda, pair));
        }
    }
    let mut out = Vec::new();
    for (lambda, pair) in labels {
        let (l, k) = if n == 1 { crate::admissibility::n1_radial_index(pair.0) } else { pair };
        let h = if n == 1 { None } else { Some(canonical_harmonic(n, k)?) };
        let residue = weight_residue(params, k) as i64;
        let first = m_min + (residue - m_min).rem_euclid(4);
        let mut base: Option<KTypeVector> = None;
        for m in (first..=m_max).step_by(4) {
            let f = match (&base, &h) {
                (Some(b), _) => b.with_m(m),
                (None, None) => make_ktype_n1(*params, m, pair.0)?,
                (None, Some(h)) => make_ktype(*params, m, l, k, h.clone())?,
            };
            base.get_or_insert_with(|| f.clone());
            debug_assert_eq!(f.lambda(), lambda);
            out.push(f);
        }
    }
    out.sort_by_key(|f| (f.lambda(), f.index().l, f.index().k, f.index().m));
    Ok(out)
}

/// Largest relative residual of `4s∂_t f + Δf - 2λ f/‖x‖²` over `points`,
/// each measured against the largest of `|4s∂_t f|`, `|∂_j² f|` and
/// `|2λf/‖x‖²|`.
pub fn pde_check(f: &KTypeVector, points: &[NoncompactPoint], tol: &Tolerances) -> Result<f64> {
    let nc = f.to_noncompact();
    let lambda = f.lambda().value() as f64;
    let s = f.params().s();
    let mut worst = 0.0f64;
    for p in points {
        let cfg = f.fd_config(&tol.fd, &p.x);
        let terms = pde_terms_noncompact(&nc, lambda, s, p.t, &p.x, &cfg)?;
        let scale = terms.scale();
        let res = terms.residual().norm();
        worst = worst.max(if scale > 0.0 { res / scale } else { res });
    }
    Ok(worst)
}

/// Largest `|Ω F - 2λ F|` over compact `points`, relative to the largest of
/// `|ΩF|`, `|2λF|`, `|4sρ²∂_θF|` and `|4s²ρ⁴F|`.
pub fn casimir_check(f: &KTypeVector, points: &[CompactPoint], tol: &Tolerances) -> Result<f64> {
    let spec = OperatorSpec::compact(OperatorKind::Omega);
    let func = |theta: f64, y: &[f64]| f.value(theta, y);
    let two_lambda = 2.0 * f.lambda().value() as f64;
    let s = f.params().s();
    let half_m = f.index().m as f64 / 2.0;
    let mut worst = 0.0f64;
    for p in points {
        let omega = fd_apply(&spec, f.params(), &func, p.theta, &p.y, &f.fd_config(&tol.fd, &p.y))?;
        let v = f.try_value(p.theta, &p.y)?;
        let rho2: f64 = p.y.iter().map(|x| x * x).sum();
        // ∂_θ F = -i(m/2) F
        let theta_term = (s * 4.0 * rho2 * half_m).norm() * v.norm();
        let potential = (s * s * 4.0 * rho2 * rho2).norm() * v.norm();
        let scale = omega.norm().max(two_lambda * v.norm()).max(theta_term).max(potential);
        let res = (omega - v * two_lambda).norm();
        worst = worst.max(if scale > 0.0 { res / scale } else { res });
    }
    Ok(worst)
}

/// Which first-order `sl(2)` operator [`ladder_check`] compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Kappa,
    Eta(Sign),
}

impl Ladder {
    pub const ALL: [Ladder; 3] = [Ladder::Kappa, Ladder::Eta(Sign::Plus), Ladder::Eta(Sign::Minus)];

    pub fn name(self) -> &'static str {
        match self {
            Ladder::Kappa => "kappa",
            Ladder::Eta(Sign::Plus) => "eta+",
            Ladder::Eta(Sign::Minus) => "eta-",
        }
    }
}

/// Largest `|closed form - oracle| / max(|F|, |oracle|, 1)` over `points`.
pub fn ladder_check(f: &KTypeVector, op: Ladder, points: &[CompactPoint], tol: &Tolerances) -> Result<f64> {
    let (kind, closed) = match op {
        Ladder::Kappa => (OperatorKind::Kappa, apply_kappa(f)),
        Ladder::Eta(Sign::Plus) => (OperatorKind::EtaPlus, apply_eta(f, Sign::Plus)),
        Ladder::Eta(Sign::Minus) => (OperatorKind::EtaMinus, apply_eta(f, Sign::Minus)),
    };
    let spec = OperatorSpec::compact(kind);
    let func = |theta: f64, y: &[f64]| f.value(theta, y);
    let mut worst = 0.0f64;
    for p in points {
        let fd = fd_apply(&spec, f.params(), &func, p.theta, &p.y, &f.fd_config(&tol.fd, &p.y))?;
        let cl = closed.value(p.theta, &p.y);
        let scale = f.try_value(p.theta, &p.y)?.norm().max(fd.norm()).max(1.0);
        worst = worst.max((fd - cl).norm() / scale);
    }
    Ok(worst)
}

/// Largest `|F(θ+jπ, (-1)^j y) - i^{-jq} F(θ, y)| / max(|F(θ, y)|, 1e-300)`
/// over `points` and `js`.
pub fn periodicity_check(f: &KTypeVector, points: &[CompactPoint], js: &[i64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in points {
        let scale = f.try_value(p.theta, &p.y)?.norm().max(1e-300);
        for &j in js {
            worst = worst.max(periodicity_residual(f, p.theta, &p.y, j)?.norm() / scale);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientRecord {
    pub target: KTypeIndex,
    pub lambda: Eigenvalue,
    /// `[re, im]`
    pub value: [f64; 2],
    pub rational: Option<Rational64>,
    pub expected: ExactCoefficient,
}

/// One line of a verification report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub operator: String,
    pub index: Option<KTypeIndex>,
    pub lambda: Option<Eigenvalue>,
    pub points: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovered_coefficients: Option<Vec<CoefficientRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed_coefficients: Option<Vec<Option<ExactCoefficient>>>,
    #[serde(rename = "match")]
    pub matches: bool,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    fn residual(operator: &str, f: Option<&KTypeVector>, points: usize, max_residual: f64, tolerance: f64) -> Self {
        let ok = max_residual <= tolerance;
        Self {
            operator: operator.to_string(),
            index: f.map(|f| f.index()),
            lambda: f.map(|f| f.lambda()),
            points,
            max_residual,
            tolerance,
            recovered_coefficients: None,
            printed_coefficients: None,
            matches: ok,
            status: if ok { Status::Pass } else { Status::Fail },
            detail: None,
        }
    }

    fn error(operator: &str, f: Option<&KTypeVector>, err: impl ToString) -> Self {
        let mut r = Self::residual(operator, f, 0, f64::NAN, 0.0);
        r.detail = Some(err.to_string());
        r
    }
}

/// `E_j±` recovered by least squares and compared with the verified and the
/// printed coefficients.
pub fn heisenberg_check(
    f: &KTypeVector,
    j: usize,
    sign: Sign,
    points: &[CompactPoint],
    tol: &Tolerances,
) -> Result<CheckRecord> {
    let n = f.params().n();
    let index = f.index();
    let rec = recover_e_coefficients(f, j, sign, points, &tol.fd, tol.rational)?;
    let shifts = expected_shifts(n, index.l, index.k);
    let targets = heisenberg_targets(n, index.l, index.k);
    let lambda = f.lambda().value();
    let mut shift_ok = true;
    let recovered = rec
        .terms
        .iter()
        .map(|t| {
            let lambda_t = kernel_eigenvalue(n, t.index.l, t.index.k);
            let listed = targets.iter().any(|x| (x.l, x.k, x.lambda) == (t.index.l, t.index.k, lambda_t));
            shift_ok &= listed && shifts.contains(&(lambda_t.value() - lambda));
            CoefficientRecord {
                target: t.index,
                lambda: lambda_t,
                value: t.coefficient,
                rational: t.rational,
                expected: t.expected,
            }
        })
        .collect();
    let ok = rec.residual <= tol.heisenberg && rec.all_match() && shift_ok;
    let printed_differs = rec.printed_mismatches() > 0;
    let status = match (ok, printed_differs) {
        (false, _) => Status::Fail,
        (true, true) => Status::Warn,
        (true, false) => Status::Pass,
    };
    let mut detail = Vec::new();
    if !shift_ok {
        detail.push("eigenvalue shift outside the predicted set".to_string());
    }
    if !rec.all_match() {
        detail.push("recovered coefficients do not match the closed form".to_string());
    }
    if printed_differs {
        detail.push(format!("{} printed coefficient(s) differ from the recovered ones", rec.printed_mismatches()));
    }
    let label = format!("E_{}{}", j, if sign == Sign::Plus { "+" } else { "-" });
    Ok(CheckRecord {
        operator: label,
        index: Some(index),
        lambda: Some(f.lambda()),
        points: points.len(),
        max_residual: rec.residual,
        tolerance: tol.heisenberg,
        recovered_coefficients: Some(recovered),
        printed_coefficients: Some(rec.terms.iter().map(|t| t.printed).collect()),
        matches: ok,
        status,
        detail: (!detail.is_empty()).then(|| detail.join("; ")),
    })
}

/// Largest scaled residual of every contiguous relation over seeded samples.
pub fn contiguous_check(samples: usize, seed: u64) -> Vec<(Relation, f64, usize)> {
    let points = hypergeometric_samples(samples, 20.0, 10.0, seed);
    Relation::ALL
        .into_iter()
        .map(|rel| {
            let mut worst = 0.0f64;
            let mut errors = 0;
            for &(a, b, z) in &points {
                match contiguous_residual_scaled(rel, a, b, z) {
                    Ok(r) => worst = worst.max(r.relative()),
                    Err(_) => errors += 1,
                }
            }
            (rel, worst, errors)
        })
        .collect()
}

/// Exact checks on the harmonic basis for degrees `0..=k_max`: zero
/// Laplacian, dimension, and the `y_j h` split for every `j`. Returns a
/// description of the first failure.
pub fn harmonic_check(n: u32, k_max: u32) -> std::result::Result<usize, String> {
    let mut checked = 0;
    for k in 0..=k_max {
        if n == 1 && k >= 2 {
            break;
        }
        let basis = harmonic_basis(n, k).map_err(|e| e.to_string())?;
        if basis.len() as u64 != harmonic_dimension(n, k) {
            return Err(format!("n={n} k={k}: {} basis elements, expected {}", basis.len(), harmonic_dimension(n, k)));
        }
        for h in &basis {
            if !h.poly().laplacian().is_zero() {
                return Err(format!("n={n} k={k}: non-harmonic basis element {}", h.poly()));
            }
            for j in 1..=n as usize {
                decompose_yj(h, j).map_err(|e| format!("n={n} k={k} j={j}: {e}"))?;
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Settings for [`run_verification`].
#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    pub lambda_max: i64,
    pub m_min: i64,
    pub m_max: i64,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub pde_points: usize,
    pub ladder_points: usize,
    pub heisenberg_points: usize,
    pub periodicity_points: usize,
    pub contiguous_samples: usize,
    pub harmonic_k_max: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            lambda_max: 60,
            m_min: -30,
            m_max: 30,
            seed: 0,
            tolerances: Tolerances::default(),
            pde_points: 50,
            ladder_points: 20,
            heisenberg_points: 40,
            periodicity_points: 20,
            contiguous_samples: 1000,
            harmonic_k_max: 6,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub warned: usize,
    pub failed: usize,
    /// Largest residual per operator.
    pub max_residual: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n: u32,
    pub q: u8,
    pub s: [f64; 2],
    pub config: VerifyConfig,
    pub ktypes: usize,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

/// Seeds of the sample point sets, derived from the run seed.
struct Seeds {
    pde: u64,
    compact: u64,
    heisenberg: u64,
    periodicity: u64,
    contiguous: u64,
}

impl Seeds {
    fn new(seed: u64) -> Self {
        let mix = |k: u64| seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k);
        Self { pde: mix(1), compact: mix(2), heisenberg: mix(3), periodicity: mix(4), contiguous: mix(5) }
    }
}

fn ktype_checks(
    f: &KTypeVector,
    cfg: &VerifyConfig,
    pde_pts: &[NoncompactPoint],
    compact_pts: &[CompactPoint],
    heis_pts: &[CompactPoint],
    per_pts: &[CompactPoint],
) -> Vec<CheckRecord> {
    let tol = &cfg.tolerances;
    let n = f.params().n() as usize;
    let mut out = Vec::new();
    let mut push = |name: &str, r: Result<f64>, points: usize, tolerance: f64| {
        out.push(match r {
            Ok(v) => CheckRecord::residual(name, Some(f), points, v, tolerance),
            Err(e) => CheckRecord::error(name, Some(f), e),
        });
    };
    push("pde", pde_check(f, pde_pts, tol), pde_pts.len(), tol.pde);
    push("casimir", casimir_check(f, compact_pts, tol), compact_pts.len(), tol.pde);
    for op in Ladder::ALL {
        push(op.name(), ladder_check(f, op, compact_pts, tol), compact_pts.len(), tol.ladder);
    }
    push("periodicity", periodicity_check(f, per_pts, &[1, 2, 3, 4]), per_pts.len(), tol.periodicity);
    for j in 1..=n {
        for sign in Sign::BOTH {
            out.push(match heisenberg_check(f, j, sign, heis_pts, tol) {
                Ok(r) => r,
                Err(e) => {
                    CheckRecord::error(&format!("E_{j}{}", if sign == Sign::Plus { "+" } else { "-" }), Some(f), e)
                }
            });
        }
    }
    out
}

/// Runs every check over the K-type lattice of `params` plus the
/// parameter-independent special-function and harmonic checks.
pub fn run_verification(params: &ParameterSet, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let n = params.n();
    let seeds = Seeds::new(cfg.seed);
    let lattice = ktype_lattice(params, cfg.lambda_max, cfg.m_min, cfg.m_max)?;
    let pde_pts = noncompact_points(n, cfg.pde_points, seeds.pde);
    let compact_pts = compact_points(n, cfg.ladder_points, seeds.compact);
    let heis_pts = compact_points(n, cfg.heisenberg_points, seeds.heisenberg);
    let per_pts = compact_points(n, cfg.periodicity_points, seeds.periodicity);

    let mut checks: Vec<CheckRecord> = lattice
        .par_iter()
        .map(|f| ktype_checks(f, cfg, &pde_pts, &compact_pts, &heis_pts, &per_pts))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();

    checks.extend(boundary_checks(params, cfg));
    for (rel, worst, errors) in contiguous_check(cfg.contiguous_samples, seeds.contiguous) {
        let mut r = CheckRecord::residual(
            &format!("contiguous:{rel}"),
            None,
            cfg.contiguous_samples,
            worst,
            cfg.tolerances.contiguous,
        );
        if errors > 0 {
            r.status = Status::Fail;
            r.matches = false;
            r.detail = Some(format!("{errors} sample(s) hit a pole"));
        }
        checks.push(r);
    }
    checks.push(match harmonic_check(n, cfg.harmonic_k_max) {
        Ok(count) => CheckRecord::residual("harmonicity", None, count, 0.0, 0.0),
        Err(e) => CheckRecord::error("harmonicity", None, e),
    });

    let mut max_residual = BTreeMap::new();
    for c in &checks {
        let key = if c.operator.starts_with("E_") { "E".to_string() } else { c.operator.clone() };
        let entry = max_residual.entry(key).or_insert(0.0f64);
        if c.max_residual.is_finite() {
            *entry = entry.max(c.max_residual);
        }
    }
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    let summary = Summary {
        checks: checks.len(),
        passed: count(Status::Pass),
        warned: count(Status::Warn),
        failed: count(Status::Fail),
        max_residual,
    };
    Ok(VerifyReport {
        n,
        q: params.q(),
        s: [params.s().re, params.s().im],
        config: cfg.clone(),
        ktypes: lattice.len(),
        summary,
        checks,
    })
}

/// `η∓` has an exact zero coefficient at `m = ±(2k+4l+n)` and nowhere else
/// in the weight range, for every pair in the lattice.
fn boundary_checks(params: &ParameterSet, cfg: &VerifyConfig) -> Vec<CheckRecord> {
    let n = params.n();
    let mut out = Vec::new();
    let mut labels = Vec::new();
    for lambda in enumerate_admissible(n, cfg.lambda_max) {
        if let Ok(pairs) = admissible_pairs(n, lambda) {
            for p in pairs {
                let (l, k) = if n == 1 { crate::admissibility::n1_radial_index(p.0) } else { p };
                if k >= 0 {
                    labels.push((lambda, l, k));
                }
            }
        }
    }
    for (lambda, l, k) in labels {
        let residue = weight_residue(params, k) as i64;
        let first = cfg.m_min + (residue - cfg.m_min).rem_euclid(4);
        let bw = KTypeIndex::new(0, l, k).boundary_weight(n);
        let mut bad = Vec::new();
        for m in (first..=cfg.m_max).step_by(4) {
            let idx = KTypeIndex::new(m, l, k);
            for (sign, kill_at) in [(Sign::Minus, bw), (Sign::Plus, -bw)] {
                let zero = crate::operators::eta_coefficient_at(idx, n, sign) == Rational64::from_integer(0);
                if zero != (m == kill_at) {
                    bad.push(format!("m={m} sign={sign:?}"));
                }
            }
        }
        let mut r = CheckRecord::residual("eta-boundary", None, 0, 0.0, 0.0);
        r.index = Some(KTypeIndex::new(bw, l, k));
        r.lambda = Some(lambda);
        if !bad.is_empty() {
            r.status = Status::Fail;
            r.matches = false;
            r.detail = Some(bad.join(", "));
        }
        out.push(r);
    }
    out
}
