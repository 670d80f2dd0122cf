//! The K-finite vectors `F_{m,l,k}` in the compact picture and the transform
//! to the non-compact picture.
//!
//! ```text
//! F_{m,l,k}(θ, y) = e^{-imθ/2} e^{-isρ²} ρ^{2l} h(y) ₁F₁(a, b, 2isρ²)
//! a = (m + 4l + 2|k| + n)/4,   b = 2l + |k| + n/2
//! ```

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::admissibility::{is_admissible, kernel_eigenvalue, n1_radial_index};
use crate::config::FdConfig;
use crate::error::{Error, Result};
use crate::params::{weight_residue, Eigenvalue, KTypeIndex, ParameterSet};
use crate::poly::{decompose_yj, CompiledPolynomial, GaussRational, HarmonicPolynomial, Polynomial};
use crate::special::hyp1f1;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Point `(θ, y)` of the compact picture.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactPoint {
    pub theta: f64,
    pub y: Vec<f64>,
}

impl CompactPoint {
    pub fn new(theta: f64, y: Vec<f64>) -> Self {
        Self { theta, y }
    }
}

/// Point `(t, x)` of the non-compact picture.
#[derive(Debug, Clone, PartialEq)]
pub struct NoncompactPoint {
    pub t: f64,
    pub x: Vec<f64>,
}

impl NoncompactPoint {
    pub fn new(t: f64, x: Vec<f64>) -> Self {
        Self { t, x }
    }
}

/// Harmonic factor shared by vectors that differ only in `m`. The target
/// harmonics of `E_j±` are computed on first use.
#[derive(Debug)]
pub(crate) struct HarmonicFactor {
    h: HarmonicPolynomial,
    compiled: CompiledPolynomial,
    e_targets: Vec<OnceLock<Result<TargetPair>>>,
}

/// Raised and lowered target harmonics of one `E_j`.
type TargetPair = (Arc<HarmonicFactor>, Arc<HarmonicFactor>);

impl HarmonicFactor {
    pub(crate) fn new(h: HarmonicPolynomial) -> Arc<Self> {
        let compiled = h.poly().compile();
        let e_targets = (0..h.nvars()).map(|_| OnceLock::new()).collect();
        Arc::new(Self { h, compiled, e_targets })
    }

    pub(crate) fn harmonic(&self) -> &HarmonicPolynomial {
        &self.h
    }

    /// `(h_{k+1,j}, c_{k,n} ∂_j h)` for 1-based `j`.
    pub(crate) fn e_targets(&self, j: usize) -> Result<TargetPair> {
        let compute = || {
            let (raised, c) = decompose_yj(&self.h, j)?;
            let c = GaussRational::ratio(*c.numer(), *c.denom());
            let lowered = self.h.derivative(j - 1).scale(&c);
            Ok((HarmonicFactor::new(raised), HarmonicFactor::new(lowered)))
        };
        match j.checked_sub(1).and_then(|i| self.e_targets.get(i)) {
            Some(cell) => cell.get_or_init(compute).clone(),
            None => compute(),
        }
    }
}

/// A validated basis vector `F_{m,l,k}` with its harmonic factor.
#[derive(Debug, Clone)]
pub struct KTypeVector {
    params: ParameterSet,
    index: KTypeIndex,
    h: Arc<HarmonicFactor>,
    lambda: Eigenvalue,
    a: Complex64,
    b: Complex64,
}

impl PartialEq for KTypeVector {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.index == other.index && self.h.h == other.h.h
    }
}

/// Builds `F_{m,l,k}` after checking the weight congruence, the range of `k`,
/// the degree of `h`, and admissibility of `(l, k)`.
///
/// For `n = 2` a negative `k` is accepted with `h` of degree `|k|`; this
/// convention is experimental.
pub fn make_ktype(params: ParameterSet, m: i64, l: i64, k: i64, h: HarmonicPolynomial) -> Result<KTypeVector> {
    let n = params.n();
    if h.nvars() != n as usize {
        return Err(Error::InvalidParameter(format!("harmonic polynomial has {} variables, expected {n}", h.nvars())));
    }
    if h.is_zero() {
        return Err(Error::InvalidParameter("harmonic polynomial must be non-zero".into()));
    }
    if l < 0 {
        return Err(Error::Domain(format!("l = {l} must be non-negative")));
    }
    match n {
        1 if !(0..=1).contains(&k) => return Err(Error::Domain(format!("k = {k} must be 0 or 1 when n = 1"))),
        2 => {}
        _ if k < 0 => return Err(Error::Domain(format!("k = {k} must be non-negative when n >= 3"))),
        _ => {}
    }
    if h.degree() != k.unsigned_abs() as u32 {
        return Err(Error::DegreeMismatch { expected: k.unsigned_abs() as u32, found: h.degree() });
    }
    if m.rem_euclid(4) != weight_residue(&params, k) as i64 {
        return Err(Error::Congruence { m, k, q: params.q() });
    }
    let lambda = kernel_eigenvalue(n, l, k);
    if l >= 1 && !is_admissible(n, lambda.value()) {
        return Err(Error::PairNotAdmissible { n, l, k });
    }
    Ok(make_ktype_unchecked(params, m, l, k, h))
}

/// Builds `F_{m,l,k}` without any validation. Intended for negative controls.
pub fn make_ktype_unchecked(params: ParameterSet, m: i64, l: i64, k: i64, h: HarmonicPolynomial) -> KTypeVector {
    make_ktype_shared(params, m, l, k, HarmonicFactor::new(h))
}

pub(crate) fn make_ktype_shared(params: ParameterSet, m: i64, l: i64, k: i64, h: Arc<HarmonicFactor>) -> KTypeVector {
    let n = params.n() as f64;
    let ka = k.abs() as f64;
    let a = Complex64::new((m as f64 + 4.0 * l as f64 + 2.0 * ka + n) / 4.0, 0.0);
    let b = Complex64::new(2.0 * l as f64 + ka + n / 2.0, 0.0);
    KTypeVector { params, index: KTypeIndex::new(m, l, k), lambda: kernel_eigenvalue(params.n(), l, k), h, a, b }
}

/// `n = 1` vector attached to the admissible pair `(L, 0)`: `l = ⌊L/2⌋`,
/// `k = L mod 2`, `h = y^k`.
pub fn make_ktype_n1(params: ParameterSet, m: i64, big_l: i64) -> Result<KTypeVector> {
    if params.n() != 1 {
        return Err(Error::InvalidParameter("make_ktype_n1 requires n = 1".into()));
    }
    if big_l < 0 {
        return Err(Error::Domain(format!("L = {big_l} must be non-negative")));
    }
    let (l, k) = n1_radial_index(big_l);
    let h = if k == 0 { HarmonicPolynomial::constant(1) } else { HarmonicPolynomial::new(Polynomial::var(1, 0), 1)? };
    make_ktype(params, m, l, k, h)
}

impl KTypeVector {
    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn index(&self) -> KTypeIndex {
        self.index
    }

    pub fn harmonic(&self) -> &HarmonicPolynomial {
        &self.h.h
    }

    pub(crate) fn harmonic_factor(&self) -> &Arc<HarmonicFactor> {
        &self.h
    }

    pub fn lambda(&self) -> Eigenvalue {
        self.lambda
    }

    /// Hypergeometric parameters `(a, b)`.
    pub fn hyp_params(&self) -> (Complex64, Complex64) {
        (self.a, self.b)
    }

    /// Spatial length over which `F` varies near a point of norm `radius`:
    /// `min(1, radius/(2l+|k|+1))`. Finite-difference steps along `y` or `x`
    /// are scaled by it so that high-degree vectors are resolved.
    pub fn length_scale(&self, radius: f64) -> f64 {
        let degree = (2 * self.index.l + self.index.k.abs() + 1) as f64;
        1f64.min(radius / degree)
    }

    /// `base` with its spatial steps scaled by [`Self::length_scale`].
    pub fn fd_config(&self, base: &FdConfig, point: &[f64]) -> FdConfig {
        let radius = point.iter().map(|v| v * v).sum::<f64>().sqrt();
        base.with_spatial_scale(self.length_scale(radius))
    }

    /// Same vector with a different weight `m` (no congruence check).
    pub(crate) fn with_m(&self, m: i64) -> KTypeVector {
        make_ktype_shared(self.params, m, self.index.l, self.index.k, self.h.clone())
    }

    /// `F(θ, y)`, or `NaN` when the series evaluation fails.
    pub fn value(&self, theta: f64, y: &[f64]) -> Complex64 {
        self.try_value(theta, y).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    pub fn try_value(&self, theta: f64, y: &[f64]) -> Result<Complex64> {
        let rho2: f64 = y.iter().map(|v| v * v).sum();
        let s = self.params.s();
        let phase = Complex64::from_polar(1.0, -(self.index.m as f64) * theta / 2.0);
        let gauss = (-I * s * rho2).exp();
        let radial = rho2.powi(self.index.l as i32);
        let hv = self.h.compiled.eval(y);
        let series = hyp1f1(self.a, self.b, 2.0 * I * s * rho2)?;
        Ok(phase * gauss * radial * hv * series)
    }

    /// The non-compact picture of this vector.
    pub fn to_noncompact(&self) -> impl Fn(f64, &[f64]) -> Complex64 + Sync + '_ {
        let n = self.params.n();
        let s = self.params.s();
        move |t: f64, x: &[f64]| noncompact_transform(n, s, |theta, y| self.value(theta, y), t, x)
    }
}

/// `F(θ, y)` at a compact-picture point.
pub fn eval_compact(f: &KTypeVector, p: &CompactPoint) -> Result<Complex64> {
    if p.y.len() != f.params.n() as usize {
        return Err(Error::InvalidParameter(format!("point has dimension {}, expected {}", p.y.len(), f.params.n())));
    }
    f.try_value(p.theta, &p.y)
}

/// `f(t,x) = (1+t²)^{-n/4} e^{st‖x‖²/(1+t²)} F(arctan t, x/√(1+t²))`.
pub fn noncompact_transform(
    n: u32,
    s: Complex64,
    compact: impl Fn(f64, &[f64]) -> Complex64,
    t: f64,
    x: &[f64],
) -> Complex64 {
    let w = 1.0 + t * t;
    let x2: f64 = x.iter().map(|v| v * v).sum();
    let scale = w.sqrt().recip();
    let y: Vec<f64> = x.iter().map(|v| v * scale).collect();
    let pre = w.powf(-(n as f64) / 4.0) * (s * t * x2 / w).exp();
    pre * compact(t.atan(), &y)
}

/// `F(θ,y) = (cos θ)^{-n/2} e^{-s‖y‖² tan θ} f(tan θ, y sec θ)` on
/// `cos θ > 0`, extended to `cos θ < 0` by `F(θ, y) = i^{-q} F(θ - π, -y)`.
pub fn compact_of_noncompact(
    params: &ParameterSet,
    f: impl Fn(f64, &[f64]) -> Complex64,
    theta: f64,
    y: &[f64],
) -> Result<Complex64> {
    // reduce θ to (-π/2, π/2] + jπ
    let j = ((theta + PI / 2.0) / PI).floor();
    let base = theta - j * PI;
    let c = base.cos();
    if c.abs() < 1e-12 {
        return Err(Error::Singular(format!("cos θ = 0 at θ = {theta}")));
    }
    let j = j as i64;
    let sign = if j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let yy: Vec<f64> = y.iter().map(|v| v * sign).collect();
    let y2: f64 = yy.iter().map(|v| v * v).sum();
    let sec = c.recip();
    let x: Vec<f64> = yy.iter().map(|v| v * sec).collect();
    let n = params.n() as f64;
    let value = c.powf(-n / 2.0) * (-params.s() * y2 * base.tan()).exp() * f(base.tan(), &x);
    // F(base + jπ, (-1)^j yy) = i^{-jq} F(base, yy)
    Ok(i_power(-j * params.q() as i64) * value)
}

/// `i^e`
pub fn i_power(e: i64) -> Complex64 {
    match e.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `F(θ + jπ, (-1)^j y) - i^{-jq} F(θ, y)`
pub fn periodicity_residual(f: &KTypeVector, theta: f64, y: &[f64], j: i64) -> Result<Complex64> {
    if j == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let sign = if j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let shifted: Vec<f64> = y.iter().map(|v| v * sign).collect();
    let lhs = f.try_value(theta + j as f64 * PI, &shifted)?;
    let rhs = i_power(-j * f.params.q() as i64) * f.try_value(theta, y)?;
    Ok(lhs - rhs)
}

/// JSON form `{n, q, s: [re, im], m, l, k, lambda, h}`.
impl Serialize for KTypeVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(8))?;
        map.serialize_entry("n", &self.params.n())?;
        map.serialize_entry("q", &self.params.q())?;
        map.serialize_entry("s", &[self.params.s().re, self.params.s().im])?;
        map.serialize_entry("m", &self.index.m)?;
        map.serialize_entry("l", &self.index.l)?;
        map.serialize_entry("k", &self.index.k)?;
        map.serialize_entry("lambda", &self.lambda)?;
        map.serialize_entry("h", &self.h.h)?;
        map.end()
    }
}

/// Finite complex-weighted sum of K-type vectors. Terms with the same index
/// and harmonic are merged; zero coefficients are dropped.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearCombination {
    terms: Vec<(Complex64, KTypeVector)>,
}

impl LinearCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(c: Complex64, v: KTypeVector) -> Self {
        let mut lc = Self::new();
        lc.push(c, v);
        lc
    }

    pub fn push(&mut self, c: Complex64, v: KTypeVector) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        if let Some(pos) = self.terms.iter().position(|(_, w)| w == &v) {
            self.terms[pos].0 += c;
            if self.terms[pos].0 == Complex64::new(0.0, 0.0) {
                self.terms.remove(pos);
            }
        } else {
            self.terms.push((c, v));
        }
    }

    pub fn add(&self, other: &LinearCombination) -> LinearCombination {
        let mut out = self.clone();
        for (c, v) in &other.terms {
            out.push(*c, v.clone());
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> LinearCombination {
        let mut out = LinearCombination::new();
        for (d, v) in &self.terms {
            out.push(c * d, v.clone());
        }
        out
    }

    pub fn terms(&self) -> &[(Complex64, KTypeVector)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the term with this index, if any.
    pub fn coefficient(&self, index: KTypeIndex) -> Option<Complex64> {
        self.terms.iter().find(|(_, v)| v.index == index).map(|(c, _)| *c)
    }

    pub fn value(&self, theta: f64, y: &[f64]) -> Complex64 {
        self.terms.iter().map(|(c, v)| c * v.value(theta, y)).sum()
    }

    /// Terms sorted by index, for deterministic output.
    pub fn sorted(&self) -> Vec<(Complex64, KTypeVector)> {
        let mut t = self.terms.clone();
        t.sort_by_key(|(_, v)| v.index);
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SPreset;
    use crate::poly::{canonical_harmonic, harmonic_basis};
    use crate::sampling::compact_points;

    fn params(n: u32, q: i64) -> ParameterSet {
        ParameterSet::with_preset(n, q, SPreset::Schrodinger).unwrap()
    }

    #[test]
    fn construction_examples() {
        let one = HarmonicPolynomial::constant(3);
        assert!(matches!(make_ktype(params(3, 0), 2, 1, 0, one.clone()), Err(Error::Congruence { .. })));
        let f = make_ktype(params(3, 2), 2, 1, 0, one.clone()).unwrap();
        assert_eq!(f.lambda(), Eigenvalue(3));
        let y1 = HarmonicPolynomial::new(Polynomial::var(3, 0), 1).unwrap();
        // 2k + q = 2 forces m ≡ 2 (mod 4)
        assert!(matches!(make_ktype(params(3, 0), 0, 2, 1, y1.clone()), Err(Error::Congruence { .. })));
        let f = make_ktype(params(3, 0), 2, 2, 1, y1.clone()).unwrap();
        assert_eq!(f.lambda(), Eigenvalue(14));
        assert!(matches!(make_ktype(params(3, 2), 0, 2, 0, y1), Err(Error::DegreeMismatch { .. })));
        assert!(make_ktype(params(3, 0), 0, 1, -1, one).is_err());
    }

    #[test]
    fn vanishes_at_origin() {
        let f = make_ktype(params(3, 2), 2, 1, 0, HarmonicPolynomial::constant(3)).unwrap();
        assert_eq!(f.value(0.3, &[0.0, 0.0, 0.0]), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn extreme_weights_have_closed_forms() {
        for (n, l, k) in [(3u32, 1i64, 0i64), (3, 1, 2), (4, 2, 1), (1, 1, 1)] {
            let h = canonical_harmonic(n, k).unwrap();
            let top = 2 * k + 4 * l + n as i64;
            for q in 0..4 {
                let p = params(n, q);
                for m in [top, -top] {
                    let Ok(f) = make_ktype(p, m, l, k, h.clone()) else { continue };
                    let hc = h.poly().compile();
                    for pt in compact_points(n, 10, 5) {
                        let rho2: f64 = pt.y.iter().map(|v| v * v).sum();
                        let sign = if m > 0 { 1.0 } else { -1.0 };
                        let expected = Complex64::from_polar(1.0, -(m as f64) * pt.theta / 2.0)
                            * (sign * I * p.s() * rho2).exp()
                            * rho2.powi(l as i32)
                            * hc.eval(&pt.y);
                        let got = f.value(pt.theta, &pt.y);
                        assert!((got - expected).norm() <= 1e-12 * expected.norm().max(1.0), "{got} {expected}");
                    }
                }
            }
        }
    }

    #[test]
    fn periodicity_holds_and_broken_congruence_is_detected() {
        let h = harmonic_basis(3, 2).unwrap().remove(1);
        for q in 0..4 {
            let p = params(3, q);
            let m = (q + 4).rem_euclid(4) + 4;
            let f = make_ktype(p, m, 1, 2, h.clone()).unwrap();
            for pt in compact_points(3, 20, 11) {
                for j in 0..=4 {
                    let r = periodicity_residual(&f, pt.theta, &pt.y, j).unwrap();
                    assert!(r.norm() <= 1e-12 * f.value(pt.theta, &pt.y).norm().max(1.0));
                }
            }
            let broken = make_ktype_unchecked(p, m + 2, 1, 2, h.clone());
            let pt = &compact_points(3, 1, 11)[0];
            assert!(periodicity_residual(&broken, pt.theta, &pt.y, 1).unwrap().norm() > 1e-3);
        }
    }

    #[test]
    fn picture_round_trip() {
        for (n, q, m, l, k) in [(3u32, 0i64, 4i64, 1i64, 0i64), (2, 1, -1, 2, 1), (1, 1, 5, 1, 0), (4, 0, -8, 1, 2)] {
            let p = params(n, q);
            let f = make_ktype(p, m, l, k, canonical_harmonic(n, k).unwrap()).unwrap();
            let nc = f.to_noncompact();
            for pt in compact_points(n, 20, 2) {
                let back = compact_of_noncompact(&p, &nc, pt.theta, &pt.y).unwrap();
                let direct = f.value(pt.theta, &pt.y);
                assert!((back - direct).norm() <= 1e-12 * direct.norm().max(1.0));
            }
            let x = vec![0.7; n as usize];
            assert!((nc(0.0, &x) - f.value(0.0, &x)).norm() < 1e-15);
        }
    }

    #[test]
    fn extension_across_the_singular_angle() {
        let p = params(3, 1);
        let f = make_ktype(p, 3, 1, 1, canonical_harmonic(3, 1).unwrap()).unwrap();
        let nc = f.to_noncompact();
        let y = [0.4, -0.3, 0.5];
        assert!(compact_of_noncompact(&p, &nc, PI / 2.0, &y).is_err());
        for theta in [PI / 2.0 - 1e-3, PI / 2.0 + 1e-3, 2.5, -2.0, 4.0] {
            let got = compact_of_noncompact(&p, &nc, theta, &y).unwrap();
            let direct = f.value(theta, &y);
            assert!((got - direct).norm() <= 1e-8 * direct.norm().max(1.0), "θ={theta}");
        }
    }

    #[test]
    fn n1_helper_maps_to_general_formula() {
        let p = params(1, 1);
        let f = make_ktype_n1(p, 1, 2).unwrap();
        assert_eq!(f.index(), KTypeIndex::new(1, 1, 0));
        assert_eq!(f.lambda(), Eigenvalue(1));
        let p = params(1, 3);
        let f = make_ktype_n1(p, 1, 3).unwrap();
        assert_eq!(f.index(), KTypeIndex::new(1, 1, 1));
        assert_eq!(f.lambda(), Eigenvalue(3));
    }

    #[test]
    fn json_form() {
        let f = make_ktype(params(3, 2), 2, 1, 0, HarmonicPolynomial::constant(3)).unwrap();
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["lambda"], 3);
        assert_eq!(v["s"], serde_json::json!([0.0, 0.5]));
        assert_eq!(v["h"], serde_json::json!([{"exponents": [0, 0, 0], "coeff": [1, 1]}]));
    }

    #[test]
    fn combinations_merge_and_drop() {
        let f = make_ktype(params(3, 2), 2, 1, 0, HarmonicPolynomial::constant(3)).unwrap();
        let mut lc = LinearCombination::single(Complex64::new(1.0, 0.0), f.clone());
        lc.push(Complex64::new(2.0, 0.0), f.clone());
        assert_eq!(lc.len(), 1);
        assert_eq!(lc.coefficient(f.index()), Some(Complex64::new(3.0, 0.0)));
        lc.push(Complex64::new(-3.0, 0.0), f);
        assert!(lc.is_empty());
    }
}
