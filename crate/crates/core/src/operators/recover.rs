//! Numerical recovery of the Heisenberg-action coefficients.
//!
//! `E_j±.F` is evaluated by finite differences at sample points and projected
//! by least squares onto the four candidate directions. The recovered complex
//! coefficients are then matched against small-denominator rationals times
//! `i` or `s`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

use super::closed::{e_coefficients, printed_e_coefficients, ETarget, ExactCoefficient, HarmonicSlot, Sign};
use super::fd::{fd_apply, OperatorKind, OperatorSpec};
use crate::config::FdConfig;
use crate::error::{Error, Result};
use crate::ktype::{make_ktype_shared, CompactPoint, KTypeVector};
use crate::params::KTypeIndex;

/// Best rational approximation `p/q` of `x` with `q <= max_den`, accepted
/// when `|x - p/q| <= tol · max(1, |x|)`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Rational64> {
    if !x.is_finite() {
        return None;
    }
    let bound = tol * x.abs().max(1.0);
    // nearest fraction, smallest denominator on ties
    let (p, q, err) = (1..=max_den.max(1))
        .map(|q| {
            let p = (x * q as f64).round();
            (p, q, (x - p / q as f64).abs())
        })
        .fold((0.0, 1, f64::INFINITY), |best, c| if c.2 < best.2 { c } else { best });
    (err <= bound).then(|| Rational64::new(p as i64, q))
}

/// `4b(b-1)` with `b = k + 2l + n/2`, i.e. `(2b)(2b-2)`, at least 1.
pub fn denominator_bound(index: KTypeIndex, n: u32) -> i64 {
    let two_b = 2 * index.k + 4 * index.l + n as i64;
    (two_b * (two_b - 2)).max(1)
}

#[derive(Debug, Clone, Serialize)]
pub struct RecoveredTerm {
    pub target: ETarget,
    pub index: KTypeIndex,
    /// `[re, im]`
    pub coefficient: [f64; 2],
    /// `coefficient / unit` as a small-denominator rational, using the unit
    /// of the closed form.
    pub rational: Option<Rational64>,
    pub expected: ExactCoefficient,
    pub printed: Option<ExactCoefficient>,
    /// Recovered value agrees with the closed form.
    pub matches: bool,
    /// Printed value agrees with the closed form.
    pub printed_matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Recovery {
    pub index: KTypeIndex,
    pub j: usize,
    pub sign: Sign,
    pub points: usize,
    /// `‖W(Ax - v)‖ / ‖Wv‖`, where the diagonal `W` scales every sample
    /// point to unit size.
    pub residual: f64,
    pub terms: Vec<RecoveredTerm>,
}

impl Recovery {
    pub fn all_match(&self) -> bool {
        self.terms.iter().all(|t| t.matches)
    }

    pub fn printed_mismatches(&self) -> usize {
        self.terms.iter().filter(|t| !t.printed_matches).count()
    }
}

/// Projects the finite-difference `E_j±.F` onto the candidate directions.
/// Spatial steps are scaled by [`KTypeVector::length_scale`] at each point.
///
/// Candidates whose harmonic vanishes or whose index leaves `l, k >= 0` are
/// excluded from the fit; their expected coefficient must then be zero or
/// irrelevant.
pub fn recover_e_coefficients(
    f: &KTypeVector,
    j: usize,
    sign: Sign,
    points: &[CompactPoint],
    cfg: &FdConfig,
    rational_tol: f64,
) -> Result<Recovery> {
    let params = *f.params();
    let n = params.n();
    let index = f.index();
    let s = params.s();
    let (raised, lowered) = f.harmonic_factor().e_targets(j)?;
    let expected = e_coefficients(index, n, sign)?;
    let printed = printed_e_coefficients(index, n, sign);

    let mut candidates = Vec::new();
    for (i, target) in ETarget::ALL.into_iter().enumerate() {
        let t = target.index(index, sign);
        let h = match target.slot {
            HarmonicSlot::Raised => &raised,
            HarmonicSlot::Lowered => &lowered,
        };
        if t.l < 0 || t.k < 0 || h.harmonic().is_zero() {
            continue;
        }
        candidates.push((i, target, t, make_ktype_shared(params, t.m, t.l, t.k, h.clone())));
    }

    let kind = match sign {
        Sign::Plus => OperatorKind::EPlus(j),
        Sign::Minus => OperatorKind::EMinus(j),
    };
    let spec = OperatorSpec::compact(kind);
    let rows = points.len();
    let cols = candidates.len();
    let mut a = DMatrix::<Complex64>::zeros(rows, cols);
    let mut v = DVector::<Complex64>::zeros(rows);
    let func = |theta: f64, y: &[f64]| f.value(theta, y);
    for (r, p) in points.iter().enumerate() {
        v[r] = fd_apply(&spec, &params, &func, p.theta, &p.y, &f.fd_config(cfg, &p.y))?;
        for (c, (_, _, _, vec)) in candidates.iter().enumerate() {
            a[(r, c)] = vec.value(p.theta, &p.y);
        }
    }
    // High-degree harmonics vary over orders of magnitude between points;
    // without row weights a few points dominate every column.
    for r in 0..rows {
        let w = (0..cols).map(|c| a[(r, c)].norm()).fold(v[r].norm(), f64::max);
        if w > 0.0 {
            a.row_mut(r).unscale_mut(w);
            v[r] /= w;
        }
    }
    let v_norm = v.norm();

    let x = if cols == 0 {
        DVector::zeros(0)
    } else {
        let scales: Vec<f64> = (0..cols).map(|c| a.column(c).norm().max(f64::MIN_POSITIVE)).collect();
        let mut scaled = a.clone();
        for (c, sc) in scales.iter().enumerate() {
            scaled.column_mut(c).unscale_mut(*sc);
        }
        let svd = scaled.svd(true, true);
        let y = svd.solve(&v, 1e-13).map_err(|e| Error::Internal(format!("least squares failed: {e}")))?;
        DVector::from_iterator(cols, y.iter().zip(&scales).map(|(yi, sc)| yi / sc))
    };
    let residual = if v_norm == 0.0 { (&a * &x - &v).norm() } else { (&a * &x - &v).norm() / v_norm };

    let max_den = denominator_bound(index, n);
    let mut terms = Vec::new();
    for (c, (i, target, t, _)) in candidates.iter().enumerate() {
        let coefficient = x[c];
        let exp = expected[*i];
        let unit = ExactCoefficient::unit_value(exp.unit, s);
        let ratio = coefficient / unit;
        let rational = if ratio.im.abs() <= rational_tol * ratio.norm().max(1.0) {
            rationalize(ratio.re, max_den, rational_tol)
        } else {
            None
        };
        let matches = rational == Some(exp.value) || (exp.is_zero() && coefficient.norm() <= rational_tol);
        terms.push(RecoveredTerm {
            target: *target,
            index: *t,
            coefficient: [coefficient.re, coefficient.im],
            rational,
            expected: exp,
            printed: printed[*i],
            matches,
            printed_matches: printed[*i] == Some(exp),
        });
    }
    Ok(Recovery { index, j, sign, points: rows, residual, terms })
}
