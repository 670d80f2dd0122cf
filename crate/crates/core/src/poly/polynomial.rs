use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use super::GaussRational;

/// Exponent vector ordered graded-lexicographically: total degree first, then
/// the exponent of `y_1`, then `y_2`, ...
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// All exponent vectors of total degree `degree` in `nvars` variables, in
    /// decreasing graded-lex order.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn rec(prefix: &mut Vec<u32>, left: u32, slots: usize, out: &mut Vec<Monomial>) {
            if slots == 1 {
                prefix.push(left);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e);
                rec(prefix, left - e, slots - 1, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if degree == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(&mut Vec::with_capacity(nvars), degree, nvars, &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial in `y_1, ..., y_n` with exact Gaussian-rational
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, GaussRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussRational::from_int(1))
    }

    /// The coordinate `y_j` (zero-based `j`).
    pub fn var(nvars: usize, j: usize) -> Self {
        assert!(j < nvars, "variable index {j} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[j] = 1;
        Self::monomial(Monomial(e), GaussRational::from_int(1))
    }

    pub fn monomial(m: Monomial, c: GaussRational) -> Self {
        let mut p = Self::zero(m.0.len());
        p.add_term(m, c);
        p
    }

    /// `ρ² = y_1² + ... + y_n²`
    pub fn rho_squared(nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        for j in 0..nvars {
            let mut e = vec![0; nvars];
            e[j] = 2;
            p.add_term(Monomial(e), GaussRational::from_int(1));
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, GaussRational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> GaussRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussRational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Largest monomial in graded-lex order.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussRational::is_real)
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, v) in &self.terms {
            p.add_term(m.clone(), v * c);
        }
        p
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&GaussRational::real(r.clone()))
    }

    /// `∂/∂y_j` (zero-based `j`).
    pub fn derivative(&self, j: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[j];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[j] -= 1;
            p.add_term(Monomial(exps), c * &GaussRational::from_int(e as i64));
        }
        p
    }

    /// `Σ_j ∂_j² p`
    pub fn laplacian(&self) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            for j in 0..self.nvars {
                let e = m.0[j];
                if e < 2 {
                    continue;
                }
                let mut exps = m.0.clone();
                exps[j] -= 2;
                p.add_term(Monomial(exps), c * &GaussRational::from_int((e * (e - 1)) as i64));
            }
        }
        p
    }

    /// Euler operator `Σ_j y_j ∂_j p`: multiplies each monomial by its degree.
    pub fn euler(&self) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), c * &GaussRational::from_int(m.degree() as i64));
        }
        p
    }

    pub fn eval(&self, y: &[f64]) -> Complex64 {
        self.compile().eval(y)
    }

    /// Floating-point copy for repeated evaluation.
    pub fn compile(&self) -> CompiledPolynomial {
        CompiledPolynomial::new(self.terms.iter())
    }

    /// Multiplies through by the least common denominator and divides by the
    /// content, so that the coefficients become coprime Gaussian integers.
    /// The leading coefficient is made to have positive real part (or positive
    /// imaginary part when purely imaginary).
    pub fn primitive(&self) -> Self {
        use num_integer::Integer;
        use num_traits::Signed;
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = num_bigint::BigInt::from(1);
        for c in self.terms.values() {
            lcm = lcm.lcm(c.re.denom()).lcm(c.im.denom());
        }
        let scaled = self.scale_rational(&BigRational::from_integer(lcm));
        let mut gcd = num_bigint::BigInt::from(0);
        for c in scaled.terms.values() {
            gcd = gcd.gcd(c.re.numer()).gcd(c.im.numer());
        }
        let lead = scaled.terms.values().next_back().expect("non-zero");
        let negative = if lead.re.is_zero() { lead.im.is_negative() } else { lead.re.is_negative() };
        if negative {
            gcd = -gcd;
        }
        scaled.scale_rational(&BigRational::new(1.into(), gcd))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), -c.clone());
        }
        p
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(&GaussRational::from_int(-1))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let e = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                p.add_term(Monomial(e), ca * cb);
            }
        }
        p
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| if e == 1 { format!("y{}", j + 1) } else { format!("y{}^{}", j + 1, e) })
                    .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c == &GaussRational::from_int(1) {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", c, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    fn from_rational(r: &BigRational) -> Self {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        let lo = BigRational::from_float(hi).map(|h| (r - h).to_f64().unwrap_or(0.0)).unwrap_or(0.0);
        Self::renormalize(hi, lo)
    }

    fn renormalize(a: f64, b: f64) -> Self {
        let hi = a + b;
        Self { hi, lo: b - (hi - a) }
    }

    fn add(self, other: Self) -> Self {
        let s = self.hi + other.hi;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (other.hi - bb);
        Self::renormalize(s, err + self.lo + other.lo)
    }

    /// Rounding error of `a * b`; without hardware FMA, `mul_add` is a slow
    /// library call, so Dekker's splitting is used instead.
    fn product_error(a: f64, b: f64, p: f64) -> f64 {
        if cfg!(target_feature = "fma") {
            a.mul_add(b, -p)
        } else {
            const SPLIT: f64 = 134_217_729.0; // 2^27 + 1
            let split = |x: f64| {
                let t = SPLIT * x;
                let hi = t - (t - x);
                (hi, x - hi)
            };
            let (ah, al) = split(a);
            let (bh, bl) = split(b);
            ((ah * bh - p) + ah * bl + al * bh) + al * bl
        }
    }

    fn mul(self, other: Self) -> Self {
        let p = self.hi * other.hi;
        let err = Self::product_error(self.hi, other.hi, p) + (self.hi * other.lo + self.lo * other.hi);
        Self::renormalize(p, err)
    }
}

/// Polynomial prepared for fast floating-point evaluation.
///
/// Monomials and the running sum are carried in double-double precision, so
/// high-degree harmonics whose terms cancel heavily still evaluate to full
/// `f64` accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledPolynomial {
    /// Per term: the range of `factors` holding its power indices, and the
    /// real and imaginary coefficients.
    terms: Vec<(usize, usize, DoubleDouble, DoubleDouble)>,
    /// Indices `j * stride + e` into the table of powers `y_j^e`, `e >= 1`.
    factors: Vec<usize>,
    max_exponent: u32,
}

impl CompiledPolynomial {
    fn new<'a>(terms: impl Iterator<Item = (&'a Monomial, &'a GaussRational)>) -> Self {
        let terms: Vec<_> = terms.collect();
        let max_exponent = terms.iter().flat_map(|(m, _)| m.0.iter().copied()).max().unwrap_or(0);
        let stride = max_exponent as usize + 1;
        let mut factors = Vec::new();
        let terms = terms
            .into_iter()
            .map(|(m, c)| {
                let start = factors.len();
                for (j, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        factors.push(j * stride + e as usize);
                    }
                }
                (start, factors.len(), DoubleDouble::from_rational(&c.re), DoubleDouble::from_rational(&c.im))
            })
            .collect();
        Self { terms, factors, max_exponent }
    }

    pub fn eval(&self, y: &[f64]) -> Complex64 {
        let stride = self.max_exponent as usize + 1;
        let mut powers = vec![DoubleDouble::ONE; y.len() * stride];
        for (j, &x) in y.iter().enumerate() {
            let x = DoubleDouble { hi: x, lo: 0.0 };
            for e in 1..stride {
                powers[j * stride + e] = powers[j * stride + e - 1].mul(x);
            }
        }
        let (mut re, mut im) = (DoubleDouble::ZERO, DoubleDouble::ZERO);
        for &(start, end, cre, cim) in &self.terms {
            let v = match self.factors[start..end].split_first() {
                Some((&first, rest)) => rest.iter().fold(powers[first], |v, &i| v.mul(powers[i])),
                None => DoubleDouble::ONE,
            };
            if cre.hi != 0.0 {
                re = re.add(v.mul(cre));
            }
            if cim.hi != 0.0 {
                im = im.add(v.mul(cim));
            }
        }
        Complex64::new(re.hi + re.lo, im.hi + im.lo)
    }
}

/// JSON rational: `[num, den]`, with integers written as numbers when they fit
/// in 64 bits and as decimal strings otherwise.
struct JsonRational<'a>(&'a BigRational);

impl Serialize for JsonRational<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        for v in [self.0.numer(), self.0.denom()] {
            match v.to_i64() {
                Some(x) => seq.serialize_element(&x)?,
                None => seq.serialize_element(&v.to_string())?,
            }
        }
        seq.end()
    }
}

struct JsonCoefficient<'a>(&'a GaussRational);

impl Serialize for JsonCoefficient<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_real() {
            JsonRational(&self.0.re).serialize(s)
        } else {
            let mut seq = s.serialize_seq(Some(2))?;
            seq.serialize_element(&JsonRational(&self.0.re))?;
            seq.serialize_element(&JsonRational(&self.0.im))?;
            seq.end()
        }
    }
}

struct JsonTerm<'a>(&'a Monomial, &'a GaussRational);

impl Serialize for JsonTerm<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("exponents", &self.0 .0)?;
        map.serialize_entry("coeff", &JsonCoefficient(self.1))?;
        map.end()
    }
}

/// Serialized as a list of `{exponents, coeff}` in decreasing graded-lex
/// order.
impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in self.terms.iter().rev() {
            seq.serialize_element(&JsonTerm(m, c))?;
        }
        seq.end()
    }
}
