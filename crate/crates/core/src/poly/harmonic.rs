use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use serde::Serialize;

use super::{GaussRational, Monomial, Polynomial};
use crate::error::{Error, Result};

/// A homogeneous polynomial with identically zero Laplacian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicPolynomial {
    poly: Polynomial,
    degree: u32,
    weight: Option<i64>,
}

/// Serialized as the underlying polynomial.
impl Serialize for HarmonicPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.poly.serialize(s)
    }
}

impl HarmonicPolynomial {
    /// Checks homogeneity and exact harmonicity.
    pub fn new(poly: Polynomial, degree: u32) -> Result<Self> {
        if !poly.is_homogeneous(degree) {
            return Err(Error::DegreeMismatch { expected: degree, found: poly.degree().unwrap_or(0) });
        }
        if !poly.laplacian().is_zero() {
            return Err(Error::Domain(format!("polynomial {poly} is not harmonic")));
        }
        Ok(Self { poly, degree, weight: None })
    }

    pub fn constant(nvars: usize) -> Self {
        Self { poly: Polynomial::one(nvars), degree: 0, weight: Some(0) }
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn into_poly(self) -> Polynomial {
        self.poly
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Signed `O(2)` weight, set for the `n = 2` polynomials `(y1 ± i y2)^|k|`.
    pub fn weight(&self) -> Option<i64> {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// `∂_j h` as a harmonic polynomial of degree `k - 1` (zero-based `j`).
    pub fn derivative(&self, j: usize) -> HarmonicPolynomial {
        HarmonicPolynomial { poly: self.poly.derivative(j), degree: self.degree.saturating_sub(1), weight: None }
    }

    pub fn scale(&self, c: &GaussRational) -> HarmonicPolynomial {
        HarmonicPolynomial { poly: self.poly.scale(c), degree: self.degree, weight: self.weight }
    }
}

/// `dim ℋ_k(ℝⁿ) = C(n+k-1, k) - C(n+k-3, k-2)`.
pub fn harmonic_dimension(n: u32, k: u32) -> u64 {
    fn binom(top: i64, bottom: i64) -> u64 {
        if bottom < 0 || top < bottom || top < 0 {
            return 0;
        }
        let mut acc: u64 = 1;
        for i in 0..bottom {
            acc = acc * (top - i) as u64 / (i + 1) as u64;
        }
        acc
    }
    let (n, k) = (n as i64, k as i64);
    binom(n + k - 1, k) - binom(n + k - 3, k - 2)
}

/// Laplacian in the variables `y_2, ..., y_n` only.
fn tail_laplacian(p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero(p.nvars());
    for (m, c) in p.terms() {
        for j in 1..p.nvars() {
            let e = m.0[j];
            if e < 2 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[j] -= 2;
            out.add_term(Monomial(exps), c * &GaussRational::from_int((e * (e - 1)) as i64));
        }
    }
    out
}

/// The unique harmonic polynomial whose part of degree `<= 1` in `y_1` is
/// the given monomial (which must have `y_1`-exponent 0 or 1).
///
/// Writing `h = Σ_j y_1^j p_j` with `p_j` free of `y_1`, harmonicity is the
/// recursion `(j+2)(j+1) p_{j+2} = -Δ' p_j`.
fn harmonic_extension(seed: &Monomial) -> Polynomial {
    let nvars = seed.0.len();
    let e1 = seed.0[0];
    debug_assert!(e1 <= 1);
    let mut h = Polynomial::monomial(seed.clone(), GaussRational::from_int(1));
    let mut level = h.clone();
    let mut j = e1;
    loop {
        let next = tail_laplacian(&level);
        if next.is_zero() {
            break;
        }
        let factor = BigRational::new(BigInt::from(-1), BigInt::from((j + 2) * (j + 1)));
        let mut shifted = Polynomial::zero(nvars);
        for (m, c) in next.terms() {
            let mut exps = m.0.clone();
            exps[0] += 2;
            shifted.add_term(Monomial(exps), c.scale(&factor));
        }
        h = &h + &shifted;
        level = shifted;
        j += 2;
    }
    h
}

/// Exact rational basis of `ℋ_k(ℝⁿ)`.
///
/// One element per monomial of degree `k` with `y_1`-exponent at most 1; the
/// element agrees with that monomial up to terms of higher `y_1`-degree.
/// Ordered by decreasing graded-lex order of these monomials.
pub fn harmonic_basis(n: u32, k: u32) -> Result<Vec<HarmonicPolynomial>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if n == 1 && k >= 2 {
        return Err(Error::Domain(format!("no non-zero harmonic polynomials of degree {k} in one variable")));
    }
    let basis = Monomial::all_of_degree(n as usize, k)
        .into_iter()
        .filter(|m| m.0[0] <= 1)
        .map(|m| HarmonicPolynomial { poly: harmonic_extension(&m), degree: k, weight: None })
        .collect();
    Ok(basis)
}

/// `(y_1 + i y_2)^k` for `k >= 0` and `(y_1 - i y_2)^|k|` for `k < 0`.
pub fn signed_harmonic_n2(k: i64) -> HarmonicPolynomial {
    let sign = if k >= 0 { 1 } else { -1 };
    let factor = &Polynomial::var(2, 0)
        + &Polynomial::var(2, 1)
            .scale(&GaussRational::new(BigRational::zero(), BigRational::from_integer(BigInt::from(sign))));
    let mut p = Polynomial::one(2);
    for _ in 0..k.unsigned_abs() {
        p = &p * &factor;
    }
    HarmonicPolynomial { poly: p, degree: k.unsigned_abs() as u32, weight: Some(k) }
}

/// The harmonic attached to `(n, k)` when a single representative is needed:
/// the signed polynomial for `n = 2`, otherwise the first basis element.
pub fn canonical_harmonic(n: u32, k: i64) -> Result<HarmonicPolynomial> {
    if n == 2 {
        return Ok(signed_harmonic_n2(k));
    }
    if k < 0 {
        return Err(Error::Domain(format!("k = {k} must be non-negative when n != 2")));
    }
    if n == 0 || (n == 1 && k >= 2) {
        return Err(Error::Domain(format!("no non-zero harmonic polynomials of degree {k} for n = {n}")));
    }
    // first element of `harmonic_basis` without building the rest
    let mut seed = vec![0u32; n as usize];
    if n == 1 {
        seed[0] = k as u32;
    } else if k > 0 {
        seed[0] = 1;
        seed[1] = k as u32 - 1;
    }
    let seed = Monomial(seed);
    Ok(HarmonicPolynomial { poly: harmonic_extension(&seed), degree: k as u32, weight: None })
}

/// `c_{k,n} = 1/(2k+n-2)`, with `c_{0,2} = 0`.
pub fn c_const(k: u32, n: u32) -> Rational64 {
    let den = 2 * k as i64 + n as i64 - 2;
    if den == 0 {
        Rational64::zero()
    } else {
        Rational64::new(1, den)
    }
}

fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Splits `y_j h` into `h_{k+1,j} + c_{k,n} ρ² ∂_j h` and returns the
/// degree `k + 1` harmonic part with `c_{k,n}`. `j` is 1-based.
pub fn decompose_yj(h: &HarmonicPolynomial, j: usize) -> Result<(HarmonicPolynomial, Rational64)> {
    let n = h.nvars();
    if j == 0 || j > n {
        return Err(Error::InvalidParameter(format!("coordinate index {j} outside 1..={n}")));
    }
    if !h.poly.laplacian().is_zero() {
        return Err(Error::Domain("input is not harmonic".into()));
    }
    let c = c_const(h.degree, n as u32);
    let yj_h = &Polynomial::var(n, j - 1) * &h.poly;
    let correction = (&Polynomial::rho_squared(n) * &h.poly.derivative(j - 1)).scale_rational(&big(c));
    let rest = &yj_h - &correction;
    if !rest.laplacian().is_zero() {
        return Err(Error::Internal(format!("y_{j} h - c rho^2 d_j h is not harmonic for h = {}", h.poly)));
    }
    if !rest.is_homogeneous(h.degree + 1) {
        return Err(Error::Internal("harmonic part is not homogeneous".into()));
    }
    Ok((HarmonicPolynomial { poly: rest, degree: h.degree + 1, weight: None }, c))
}
