//! Exact actions of `κ`, `η±` and `E_j±` on the basis vectors.

use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ktype::{make_ktype_shared, KTypeVector, LinearCombination};
use crate::params::KTypeIndex;
use crate::poly::HarmonicPolynomial;

/// `+` or `-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

fn real(r: Rational64) -> Complex64 {
    Complex64::new(*r.numer() as f64 / *r.denom() as f64, 0.0)
}

/// `κ.F = (m/2) F`
pub fn kappa_coefficient(f: &KTypeVector) -> Rational64 {
    Rational64::new(f.index().m, 2)
}

pub fn apply_kappa(f: &KTypeVector) -> LinearCombination {
    LinearCombination::single(real(kappa_coefficient(f)), f.clone())
}

/// `η±.F_{m,l,k} = -(±m + 4l + 2k + n)/4 · F_{m±4,l,k}`
pub fn eta_coefficient(f: &KTypeVector, sign: Sign) -> Rational64 {
    eta_coefficient_at(f.index(), f.params().n(), sign)
}

/// [`eta_coefficient`] from the index alone.
pub fn eta_coefficient_at(index: KTypeIndex, n: u32, sign: Sign) -> Rational64 {
    let KTypeIndex { m, l, k } = index;
    Rational64::new(-(sign.as_i64() * m + 4 * l + 2 * k.abs() + n as i64), 4)
}

pub fn apply_eta(f: &KTypeVector, sign: Sign) -> LinearCombination {
    let c = eta_coefficient(f, sign);
    if c.is_zero() {
        return LinearCombination::new();
    }
    LinearCombination::single(real(c), f.with_m(f.index().m + 4 * sign.as_i64()))
}

/// Applies a linear map defined on basis vectors to a combination.
pub fn apply_linear(lc: &LinearCombination, op: impl Fn(&KTypeVector) -> LinearCombination) -> LinearCombination {
    let mut out = LinearCombination::new();
    for (c, v) in lc.terms() {
        out = out.add(&op(v).scale(*c));
    }
    out
}

/// The scalar that multiplies a rational coefficient of the Heisenberg
/// action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    One,
    I,
    S,
}

/// `value · unit` with exact rational `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExactCoefficient {
    pub value: Rational64,
    pub unit: Unit,
}

impl ExactCoefficient {
    pub fn new(value: Rational64, unit: Unit) -> Self {
        Self { value, unit }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn unit_value(unit: Unit, s: Complex64) -> Complex64 {
        match unit {
            Unit::One => Complex64::new(1.0, 0.0),
            Unit::I => Complex64::new(0.0, 1.0),
            Unit::S => s,
        }
    }

    pub fn to_complex(&self, s: Complex64) -> Complex64 {
        real(self.value) * Self::unit_value(self.unit, s)
    }
}

impl fmt::Display for ExactCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = match self.unit {
            Unit::One => "",
            Unit::I => "i",
            Unit::S => "s",
        };
        if self.value.is_integer() {
            write!(f, "{}{}", self.value.numer(), unit)
        } else {
            write!(f, "({}){}", self.value, unit)
        }
    }
}

/// Which harmonic a target of the Heisenberg action carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HarmonicSlot {
    /// `h_{k+1,j} = y_j h - c_{k,n} ρ² ∂_j h`
    Raised,
    /// `c_{k,n} ∂_j h`
    Lowered,
}

/// One of the four directions `(m±2, l-1, k+1)`, `(m±2, l, k+1)`,
/// `(m±2, l, k-1)`, `(m±2, l+1, k-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ETarget {
    pub dl: i64,
    pub dk: i64,
    pub slot: HarmonicSlot,
}

impl ETarget {
    pub const ALL: [ETarget; 4] = [
        ETarget { dl: -1, dk: 1, slot: HarmonicSlot::Raised },
        ETarget { dl: 0, dk: 1, slot: HarmonicSlot::Raised },
        ETarget { dl: 0, dk: -1, slot: HarmonicSlot::Lowered },
        ETarget { dl: 1, dk: -1, slot: HarmonicSlot::Lowered },
    ];

    pub fn index(&self, source: KTypeIndex, sign: Sign) -> KTypeIndex {
        KTypeIndex::new(source.m + 2 * sign.as_i64(), source.l + self.dl, source.k + self.dk)
    }
}

/// `a = (m+4l+2k+n)/4` and `b = 2l+k+n/2` as exact rationals.
fn ab(index: KTypeIndex, n: u32) -> (Rational64, Rational64) {
    let KTypeIndex { m, l, k } = index;
    let n = n as i64;
    (Rational64::new(m + 4 * l + 2 * k + n, 4), Rational64::new(4 * l + 2 * k + n, 2))
}

/// Verified coefficients of `E_j±.F_{m,l,k}` on the four target directions
/// (in `ETarget::ALL` order), with targets normalized as in [`HarmonicSlot`].
///
/// ```text
/// E⁺: 2il,  -4sa(b-1-l)/(b(b-1)),       i(2l+2k+n-2),  -4sla/(b(b-1))
/// E⁻: -2il, -4s(b-a)(b-1-l)/(b(b-1)),  -i(2l+2k+n-2), -4sl(b-a)/(b(b-1))
/// ```
/// For `l = 0` the second entry reduces to `-4sa/b` (resp. `-4s(b-a)/b`).
pub fn e_coefficients(index: KTypeIndex, n: u32, sign: Sign) -> Result<[ExactCoefficient; 4]> {
    if index.k < 0 {
        return Err(Error::Domain("the Heisenberg action is implemented for k >= 0 only".into()));
    }
    let (a, b) = ab(index, n);
    let l = Rational64::from_integer(index.l);
    let kk = Rational64::from_integer(2 * index.l + 2 * index.k + n as i64 - 2);
    let one = Rational64::one();
    // a for E⁺, b - a for E⁻
    let alpha = match sign {
        Sign::Plus => a,
        Sign::Minus => b - a,
    };
    let sg = Rational64::from_integer(sign.as_i64());
    let four = Rational64::from_integer(4);
    let (second, fourth) = if index.l == 0 {
        (-four * alpha / b, Rational64::zero())
    } else {
        let den = b * (b - one);
        (-four * alpha * (b - one - l) / den, -four * l * alpha / den)
    };
    Ok([
        ExactCoefficient::new(sg * 2 * l, Unit::I),
        ExactCoefficient::new(second, Unit::S),
        ExactCoefficient::new(sg * kk, Unit::I),
        ExactCoefficient::new(fourth, Unit::S),
    ])
}

/// The coefficients exactly as printed in the published statement,
/// converted to the same target normalization. `None` where the printed
/// expression divides by zero.
pub fn printed_e_coefficients(index: KTypeIndex, n: u32, sign: Sign) -> [Option<ExactCoefficient>; 4] {
    let (a, b) = ab(index, n);
    let one = Rational64::one();
    let l = Rational64::from_integer(index.l);
    let kk = Rational64::from_integer(2 * index.l + 2 * index.k + n as i64 - 2);
    let four = Rational64::from_integer(4);
    let div = |num: Rational64, den: Rational64| if den.is_zero() { None } else { Some(num / den) };
    match sign {
        Sign::Plus => {
            // -s (2l+2k+n-2)(m+2k+4l+n) / (2(b-1)b)
            let second = div(-kk * four * a, Rational64::from_integer(2) * (b - one) * b);
            // i c (2isl(m+2k+4l+n) / (2(b-1)b)) on ∂_j h
            let fourth = div(-Rational64::from_integer(2) * l * four * a, Rational64::from_integer(2) * (b - one) * b);
            [
                Some(ExactCoefficient::new(Rational64::from_integer(2) * l, Unit::I)),
                second.map(|v| ExactCoefficient::new(v, Unit::S)),
                Some(ExactCoefficient::new(kk, Unit::I)),
                fourth.map(|v| ExactCoefficient::new(v, Unit::S)),
            ]
        }
        Sign::Minus => {
            // -s (2-2l-2k-n)(4l+2k+n-m) / (2(b-1))
            let second = div(kk * four * (b - a), Rational64::from_integer(2) * (b - one));
            // -i c (-isl (4l+2k+n-m)/(2(b-1))) on ∂_j h
            let fourth = div(-l * four * (b - a), Rational64::from_integer(2) * (b - one));
            [
                Some(ExactCoefficient::new(-Rational64::from_integer(2) * l, Unit::I)),
                second.map(|v| ExactCoefficient::new(v, Unit::S)),
                Some(ExactCoefficient::new(-kk, Unit::I)),
                fourth.map(|v| ExactCoefficient::new(v, Unit::S)),
            ]
        }
    }
}

/// A target of the Heisenberg action together with its coefficient.
#[derive(Debug, Clone)]
pub struct ETerm {
    pub target: ETarget,
    pub coefficient: ExactCoefficient,
    pub vector: KTypeVector,
}

/// The harmonic carried by each target slot: `h_{k+1,j}` and `c_{k,n} ∂_j h`.
pub fn e_target_harmonics(f: &KTypeVector, j: usize) -> Result<(HarmonicPolynomial, HarmonicPolynomial)> {
    let (raised, lowered) = f.harmonic_factor().e_targets(j)?;
    Ok((raised.harmonic().clone(), lowered.harmonic().clone()))
}

/// Exact terms of `E_j±.F` (`j` is 1-based). Targets whose harmonic vanishes,
/// whose coefficient is zero, or with `l' < 0` / `k' < 0` are dropped.
pub fn e_terms(f: &KTypeVector, j: usize, sign: Sign) -> Result<Vec<ETerm>> {
    let index = f.index();
    let n = f.params().n();
    let coeffs = e_coefficients(index, n, sign)?;
    let (raised, lowered) = f.harmonic_factor().e_targets(j)?;
    let mut out = Vec::new();
    for (target, coefficient) in ETarget::ALL.into_iter().zip(coeffs) {
        let h = match target.slot {
            HarmonicSlot::Raised => &raised,
            HarmonicSlot::Lowered => &lowered,
        };
        let t = target.index(index, sign);
        if coefficient.is_zero() || h.harmonic().is_zero() || t.l < 0 || t.k < 0 {
            continue;
        }
        out.push(ETerm { target, coefficient, vector: make_ktype_shared(*f.params(), t.m, t.l, t.k, h.clone()) });
    }
    Ok(out)
}

/// `E_j±.F` as a combination (`j` is 1-based).
pub fn apply_e(f: &KTypeVector, j: usize, sign: Sign) -> Result<LinearCombination> {
    let s = f.params().s();
    let mut lc = LinearCombination::new();
    for term in e_terms(f, j, sign)? {
        lc.push(term.coefficient.to_complex(s), term.vector);
    }
    Ok(lc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktype::make_ktype;
    use crate::params::{ParameterSet, SPreset};
    use crate::poly::canonical_harmonic;

    fn ktype(n: u32, q: i64, m: i64, l: i64, k: i64) -> KTypeVector {
        let p = ParameterSet::with_preset(n, q, SPreset::Schrodinger).unwrap();
        make_ktype(p, m, l, k, canonical_harmonic(n, k).unwrap()).unwrap()
    }

    #[test]
    fn kappa_and_eta_examples() {
        assert!(!apply_kappa(&ktype(3, 0, 2, 1, 1)).is_empty());
        assert!(apply_kappa(&ktype(3, 2, 0, 1, 1)).is_empty());
        let f = ktype(3, 0, 6, 1, 1);
        assert_eq!(apply_kappa(&f).coefficient(f.index()), Some(Complex64::new(3.0, 0.0)));

        let f = ktype(3, 1, 3, 1, 1);
        let lc = apply_eta(&f, Sign::Plus);
        assert_eq!(eta_coefficient(&f, Sign::Plus), Rational64::from_integer(-3));
        assert_eq!(lc.coefficient(KTypeIndex::new(7, 1, 1)), Some(Complex64::new(-3.0, 0.0)));

        // boundary weights
        let top = 2 + 4 + 3;
        assert!(apply_eta(&ktype(3, 3, top, 1, 1), Sign::Minus).is_empty());
        assert!(apply_eta(&ktype(3, 1, -top, 1, 1), Sign::Plus).is_empty());
    }

    #[test]
    fn sl2_relations_on_coefficients() {
        for (n, q, m, l, k) in [(3, 0, 4, 1, 0), (3, 3, -7, 2, 3), (4, 2, 10, 1, 2), (1, 1, 1, 1, 0)] {
            let f = ktype(n, q, m, l, k);
            let single = LinearCombination::single(Complex64::new(1.0, 0.0), f.clone());
            for sign in Sign::BOTH {
                // [κ, η±] = ±2 η±
                let ke = apply_linear(&apply_eta(&f, sign), apply_kappa);
                let ek = apply_linear(&apply_kappa(&f), |v| apply_eta(v, sign));
                let bracket = ke.add(&ek.scale(Complex64::new(-1.0, 0.0)));
                let expected = apply_eta(&f, sign).scale(Complex64::new(2.0 * sign.as_i64() as f64, 0.0));
                assert_eq!(bracket, expected);
            }
            // [η⁺, η⁻] = κ
            let pm = apply_linear(&apply_eta(&f, Sign::Minus), |v| apply_eta(v, Sign::Plus));
            let mp = apply_linear(&apply_eta(&f, Sign::Plus), |v| apply_eta(v, Sign::Minus));
            let bracket = pm.add(&mp.scale(Complex64::new(-1.0, 0.0)));
            assert_eq!(bracket, apply_linear(&single, apply_kappa));
        }
    }

    #[test]
    fn printed_plus_agrees_and_printed_minus_differs() {
        let idx = KTypeIndex::new(6, 2, 1);
        let ours = e_coefficients(idx, 3, Sign::Plus).unwrap();
        let printed = printed_e_coefficients(idx, 3, Sign::Plus);
        for (o, p) in ours.iter().zip(printed) {
            assert_eq!(Some(*o), p);
        }
        let ours = e_coefficients(idx, 3, Sign::Minus).unwrap();
        let printed = printed_e_coefficients(idx, 3, Sign::Minus);
        assert_eq!(Some(ours[0]), printed[0]);
        assert_eq!(Some(ours[2]), printed[2]);
        assert_ne!(Some(ours[1]), printed[1]);
        assert_ne!(Some(ours[3]), printed[3]);
    }

    #[test]
    fn l_zero_k_zero_leaves_one_term() {
        let f = ktype(3, 3, 3, 0, 0);
        let lc = apply_e(&f, 1, Sign::Plus).unwrap();
        assert_eq!(lc.len(), 1);
        assert_eq!(lc.terms()[0].1.index(), KTypeIndex::new(5, 0, 1));
    }

    #[test]
    fn lowest_weight_goes_to_lowest_weights() {
        // E⁻ on m = 2k+4l+n
        let (n, l, k) = (3i64, 2i64, 1i64);
        let m = 2 * k + 4 * l + n;
        let f = ktype(n as u32, 3, m, l, k);
        let lc = apply_e(&f, 1, Sign::Minus).unwrap();
        for (_, v) in lc.terms() {
            let t = v.index();
            assert_eq!(t.m, 2 * t.k + 4 * t.l + n, "{t}");
        }
        assert_eq!(lc.len(), 2);
    }
}
