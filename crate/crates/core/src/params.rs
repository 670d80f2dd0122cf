//! Representation parameters and K-type indices.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named choices of the scalar `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SPreset {
    /// `s = i/2`
    Schrodinger,
    /// `s = -1/4`
    Heat,
}

impl SPreset {
    pub fn value(self) -> Complex64 {
        match self {
            SPreset::Schrodinger => Complex64::new(0.0, 0.5),
            SPreset::Heat => Complex64::new(-0.25, 0.0),
        }
    }

    pub const ALL: [SPreset; 2] = [SPreset::Schrodinger, SPreset::Heat];
}

impl FromStr for SPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "schrodinger" | "schroedinger" => Ok(SPreset::Schrodinger),
            "heat" => Ok(SPreset::Heat),
            other => Err(Error::InvalidParameter(format!("unknown preset '{other}'"))),
        }
    }
}

/// The character parameters `(n, q, s)` with `r` pinned to `-n/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    n: u32,
    q: u8,
    s: Complex64,
}

impl ParameterSet {
    pub fn new(n: u32, q: i64, s: Complex64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::InvalidParameter("s must be finite".into()));
        }
        if s == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidParameter("s must be nonzero".into()));
        }
        Ok(Self { n, q: q.rem_euclid(4) as u8, s })
    }

    pub fn with_preset(n: u32, q: i64, preset: SPreset) -> Result<Self> {
        Self::new(n, q, preset.value())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Residue of `q` in `{0, 1, 2, 3}`.
    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    /// Always `-n/2`.
    pub fn r(&self) -> Rational64 {
        Rational64::new(-(self.n as i64), 2)
    }

    pub fn r_f64(&self) -> f64 {
        -(self.n as f64) / 2.0
    }

    /// `q ≡ n (mod 4)`: lowest weight vectors exist.
    pub fn has_lowest(&self) -> bool {
        self.q as i64 == (self.n as i64).rem_euclid(4)
    }

    /// `q ≡ -n (mod 4)`: highest weight vectors exist.
    pub fn has_highest(&self) -> bool {
        self.q as i64 == (-(self.n as i64)).rem_euclid(4)
    }
}

/// An eigenvalue `λ` of the Casimir operator (the kernel is `ker(Ω - 2λ)`).
///
/// Non-zero admissible values are integers for every `n`; for `n = 1` they
/// are the triangular numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Eigenvalue(pub i64);

impl Eigenvalue {
    pub fn value(self) -> i64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The triple `(m, l, k)` labelling a K-type vector.
///
/// `m/2` is the weight of the compact generator, `2l` the smooth indicial
/// exponent of the radial part and `k` the degree of the harmonic factor
/// (signed `O(2)` weight when `n = 2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KTypeIndex {
    pub m: i64,
    pub l: i64,
    pub k: i64,
}

impl KTypeIndex {
    pub fn new(m: i64, l: i64, k: i64) -> Self {
        Self { m, l, k }
    }

    /// Homogeneity degree of the harmonic factor.
    pub fn degree(&self) -> u32 {
        self.k.unsigned_abs() as u32
    }

    /// `2|k| + 4l + n`, the weight at which the ladder terminates.
    pub fn boundary_weight(&self, n: u32) -> i64 {
        2 * self.k.abs() + 4 * self.l + n as i64
    }
}

impl fmt::Display for KTypeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.m, self.l, self.k)
    }
}

/// `(q + 2k) mod 4`: every legal `m` for the harmonic degree `k` is congruent
/// to this residue.
pub fn weight_residue(params: &ParameterSet, k: i64) -> u8 {
    (params.q() as i64 + 2 * k).rem_euclid(4) as u8
}

/// Parses a complex number written as `re`, `imi`, `re+imi` or `re-imi`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidParameter(format!("cannot parse complex number '{text}'"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent or leading
    let split = body
        .char_indices()
        .rev()
        .find(|&(idx, c)| (c == '+' || c == '-') && idx > 0 && !matches!(body.as_bytes()[idx - 1], b'e' | b'E'))
        .map(|(idx, _)| idx);
    let imag = |s: &str| -> Result<f64> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(idx) => {
            let re = body[..idx].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[idx..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues() {
        let p = ParameterSet::new(3, 0, SPreset::Heat.value()).unwrap();
        assert_eq!(weight_residue(&p, 0), 0);
        let p = ParameterSet::new(3, 3, SPreset::Heat.value()).unwrap();
        assert_eq!(weight_residue(&p, 2), 3);
        let p = ParameterSet::new(3, 1, SPreset::Heat.value()).unwrap();
        assert_eq!(weight_residue(&p, 3), 3);
    }

    #[test]
    fn rejects_zero_s_and_normalises_q() {
        assert!(ParameterSet::new(3, 0, Complex64::new(0.0, 0.0)).is_err());
        assert!(ParameterSet::new(0, 0, Complex64::new(1.0, 0.0)).is_err());
        let p = ParameterSet::new(2, -1, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(p.q(), 3);
        assert_eq!(p.r(), Rational64::new(-1, 1));
    }

    #[test]
    fn lowest_highest_flags() {
        let p = ParameterSet::new(3, 3, Complex64::new(1.0, 0.0)).unwrap();
        assert!(p.has_lowest() && !p.has_highest());
        let p = ParameterSet::new(2, 2, Complex64::new(1.0, 0.0)).unwrap();
        assert!(p.has_lowest() && p.has_highest());
        let p = ParameterSet::new(3, 0, Complex64::new(1.0, 0.0)).unwrap();
        assert!(!p.has_lowest() && !p.has_highest());
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0+0.5i").unwrap(), Complex64::new(0.0, 0.5));
        assert_eq!(parse_complex("-0.25").unwrap(), Complex64::new(-0.25, 0.0));
        assert_eq!(parse_complex("1e-3-2i").unwrap(), Complex64::new(1e-3, -2.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("2.5e-1i").unwrap(), Complex64::new(0.0, 0.25));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }
}
