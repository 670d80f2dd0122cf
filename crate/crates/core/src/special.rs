//! Confluent hypergeometric function of the first kind and its contiguous
//! relations.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::SeriesConfig;
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Rising factorial `a (a + 1) ... (a + j - 1)`; the empty product is 1.
pub fn pochhammer(a: Complex64, j: u32) -> Complex64 {
    (0..j).fold(ONE, |acc, i| acc * (a + i as f64))
}

fn is_nonpositive_integer(b: Complex64) -> bool {
    b.im == 0.0 && b.re <= 0.0 && b.re.fract() == 0.0
}

/// `₁F₁(a; b; z)` with the default series settings.
pub fn hyp1f1(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    hyp1f1_with(a, b, z, &SeriesConfig::default())
}

/// `₁F₁(a; b; z) = Σ_j (a)_j / (b)_j z^j / j!` by direct summation.
///
/// Summation stops once `cfg.small_terms` consecutive terms fall below
/// `cfg.rel_tol * |partial sum|` while the term ratio is already below one.
/// For `Re z < 0` the series is summed after Kummer's transformation
/// `₁F₁(a; b; z) = e^z ₁F₁(b - a; b; -z)`, which avoids the cancellation of
/// alternating terms. Terminating series are always summed directly.
pub fn hyp1f1_with(a: Complex64, b: Complex64, z: Complex64, cfg: &SeriesConfig) -> Result<Complex64> {
    if z.re < 0.0 && !is_nonpositive_integer(a) {
        return hyp1f1_series(b - a, b, -z, cfg).map(|(sum, _)| z.exp() * sum);
    }
    hyp1f1_series(a, b, z, cfg).map(|(sum, _)| sum)
}

/// Returns the sum and the sum of absolute values of the terms, the latter
/// being a bound on the cancellation in the series.
pub(crate) fn hyp1f1_series(a: Complex64, b: Complex64, z: Complex64, cfg: &SeriesConfig) -> Result<(Complex64, f64)> {
    if is_nonpositive_integer(b) {
        return Err(Error::HypergeometricPole(format!("{b}")));
    }
    let mut term = ONE;
    let mut sum = ONE;
    let mut abs_sum = 1.0;
    let mut small = 0usize;
    let real_params = a.im == 0.0 && b.im == 0.0;
    for j in 0..cfg.max_terms {
        let jf = j as f64;
        let ratio = if real_params {
            z * ((a.re + jf) / ((b.re + jf) * (jf + 1.0)))
        } else {
            (a + jf) * z / ((b + jf) * (jf + 1.0))
        };
        term *= ratio;
        sum += term;
        let term2 = term.norm_sqr();
        abs_sum += term2.sqrt();
        if term2 == 0.0 && (a + jf).norm_sqr() == 0.0 {
            // terminating series
            return Ok((sum, abs_sum));
        }
        if term2 <= cfg.rel_tol * cfg.rel_tol * sum.norm_sqr() && ratio.norm_sqr() < 1.0 {
            small += 1;
            if small >= cfg.small_terms {
                return Ok((sum, abs_sum));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence { a: a.to_string(), b: b.to_string(), z: z.to_string(), terms: cfg.max_terms })
}

/// `d^order/dz^order ₁F₁(a; b; z) = (a)_order / (b)_order ₁F₁(a + order; b + order; z)`.
pub fn hyp1f1_derivative(a: Complex64, b: Complex64, z: Complex64, order: u32) -> Result<Complex64> {
    if order == 0 {
        return Err(Error::InvalidParameter("derivative order must be at least 1".into()));
    }
    if is_nonpositive_integer(b) {
        return Err(Error::HypergeometricPole(format!("{b}")));
    }
    let shift = order as f64;
    let factor = pochhammer(a, order) / pochhammer(b, order);
    if factor == Complex64::new(0.0, 0.0) {
        return Ok(factor);
    }
    Ok(factor * hyp1f1(a + shift, b + shift, z)?)
}

/// Term-by-term differentiated series, used as an independent route for the
/// derivative formula.
fn hyp1f1_derivative_termwise(a: Complex64, b: Complex64, z: Complex64, order: u32) -> Result<Complex64> {
    let cfg = SeriesConfig::default();
    // Σ_{j>=order} (a)_j/(b)_j z^{j-order}/(j-order)!
    let mut coeff = pochhammer(a, order) / pochhammer(b, order);
    let mut power = ONE;
    let mut sum = coeff;
    let mut small = 0usize;
    for i in 1..cfg.max_terms {
        let j = (order as usize + i - 1) as f64;
        coeff *= (a + j) / (b + j);
        power *= z / i as f64;
        let term = coeff * power;
        sum += term;
        if term.norm() <= cfg.rel_tol * sum.norm() {
            small += 1;
            if small >= cfg.small_terms && i as f64 > z.norm() {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence { a: a.to_string(), b: b.to_string(), z: z.to_string(), terms: cfg.max_terms })
}

/// Named identities satisfied by `₁F₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// `F'(a;b;z) = (a/b) F(a+1;b+1;z)`, checked against the differentiated series.
    U0,
    /// `b F(a;b) - b F(a-1;b) - z F(a;b+1) = 0`
    U1,
    /// `b(1-b+z) F(a;b) + b(b-1) F(a-1;b-1) - a z F(a+1;b+1) = 0`
    U2,
    /// `(a-1+z) F(a;b) + (b-a) F(a-1;b) + (1-b) F(a;b-1) = 0`
    U3,
    /// `(a-b+1) F(a;b) - a F(a+1;b) + (b-1) F(a;b-1) = 0`
    U4,
    /// `F(a;b) = F(a;b-1) - a z / (b(b-1)) F(a+1;b+1)`
    Uno,
    /// `F(a;b) = F(a-1;b-1) + (b-a) z / (b(b-1)) F(a;b+1)`
    Dos,
}

impl Relation {
    pub const ALL: [Relation; 7] =
        [Relation::U0, Relation::U1, Relation::U2, Relation::U3, Relation::U4, Relation::Uno, Relation::Dos];
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Relation::U0 => "U0",
            Relation::U1 => "U1",
            Relation::U2 => "U2",
            Relation::U3 => "U3",
            Relation::U4 => "U4",
            Relation::Uno => "Uno",
            Relation::Dos => "Dos",
        };
        f.write_str(name)
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Relation::ALL
            .into_iter()
            .find(|r| r.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown relation '{s}'")))
    }
}

/// Residual of a contiguous relation together with the scale of its terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationResidual {
    pub residual: Complex64,
    /// Largest `|coefficient| * Σ_j |series term|` among the terms; the
    /// floating-point error of each term is proportional to it.
    pub scale: f64,
}

impl RelationResidual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual.norm()
        } else {
            self.residual.norm() / self.scale
        }
    }
}

/// LHS − RHS of `relation` evaluated with [`hyp1f1`].
pub fn contiguous_residual(relation: Relation, a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(contiguous_residual_scaled(relation, a, b, z)?.residual)
}

/// [`contiguous_residual`] plus the magnitude against which it should be
/// compared.
pub fn contiguous_residual_scaled(
    relation: Relation,
    a: Complex64,
    b: Complex64,
    z: Complex64,
) -> Result<RelationResidual> {
    let cfg = SeriesConfig::default();
    let f = |a: Complex64, b: Complex64| hyp1f1_series(a, b, z, &cfg);
    let mut residual = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    let mut add = |coef: Complex64, (value, abs_sum): (Complex64, f64)| {
        residual += coef * value;
        scale = scale.max(coef.norm() * abs_sum.max(value.norm()));
    };
    match relation {
        Relation::U0 => {
            let closed = hyp1f1_derivative(a, b, z, 1)?;
            let direct = hyp1f1_derivative_termwise(a, b, z, 1)?;
            residual = closed - direct;
            scale = closed.norm().max(direct.norm());
            let (_, abs) = f(a + 1.0, b + 1.0)?;
            scale = scale.max((a / b).norm() * abs);
        }
        Relation::U1 => {
            add(b, f(a, b)?);
            add(-b, f(a - 1.0, b)?);
            add(-z, f(a, b + 1.0)?);
        }
        Relation::U2 => {
            add(b * (1.0 - b + z), f(a, b)?);
            add(b * (b - 1.0), f(a - 1.0, b - 1.0)?);
            add(-a * z, f(a + 1.0, b + 1.0)?);
        }
        Relation::U3 => {
            add(a - 1.0 + z, f(a, b)?);
            add(b - a, f(a - 1.0, b)?);
            add(1.0 - b, f(a, b - 1.0)?);
        }
        Relation::U4 => {
            add(a - b + 1.0, f(a, b)?);
            add(-a, f(a + 1.0, b)?);
            add(b - 1.0, f(a, b - 1.0)?);
        }
        Relation::Uno => {
            add(ONE, f(a, b)?);
            add(-ONE, f(a, b - 1.0)?);
            add(a * z / (b * (b - 1.0)), f(a + 1.0, b + 1.0)?);
        }
        Relation::Dos => {
            add(ONE, f(a, b)?);
            add(-ONE, f(a - 1.0, b - 1.0)?);
            add(-(b - a) * z / (b * (b - 1.0)), f(a, b + 1.0)?);
        }
    }
    Ok(RelationResidual { residual, scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(c(3.0, 0.0), 0), c(1.0, 0.0));
        assert_eq!(pochhammer(c(2.0, 0.0), 3), c(24.0, 0.0));
        assert_eq!(pochhammer(c(-1.0, 0.0), 3), c(0.0, 0.0));
    }

    #[test]
    fn trivial_values() {
        let (a, b) = (c(1.3, -0.2), c(2.1, 0.7));
        assert_eq!(hyp1f1(a, b, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(hyp1f1(c(0.0, 0.0), b, c(3.0, 1.0)).unwrap(), c(1.0, 0.0));
        for z in [c(1.0, 0.0), c(-4.0, 2.0), c(0.0, 7.5), c(-10.0, 0.0)] {
            let got = hyp1f1(b, b, z).unwrap();
            assert!((got - z.exp()).norm() <= 1e-12 * z.exp().norm().max(1.0), "{z}");
        }
    }

    #[test]
    fn pole_is_an_error() {
        assert!(matches!(hyp1f1(c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)), Err(Error::HypergeometricPole(_))));
        assert!(hyp1f1(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn terminating_series_is_a_polynomial() {
        // 1F1(-2; b; z) = 1 - 2z/b + z^2/(b(b+1))
        let b = c(1.5, 0.0);
        let z = c(0.7, -0.3);
        let expected = 1.0 - 2.0 * z / b + z * z / (b * (b + 1.0));
        assert!((hyp1f1(c(-2.0, 0.0), b, z).unwrap() - expected).norm() < 1e-15);
    }

    #[test]
    fn known_value() {
        // 1F1(1; 2; z) = (e^z - 1)/z
        for z in [c(0.5, 0.0), c(-3.0, 1.0), c(2.0, -2.0)] {
            let expected = (z.exp() - 1.0) / z;
            assert!((hyp1f1(c(1.0, 0.0), c(2.0, 0.0), z).unwrap() - expected).norm() < 1e-14 * expected.norm());
        }
    }

    #[test]
    fn derivative_examples() {
        let (a, b) = (c(0.8, 0.1), c(1.9, -0.4));
        let d = hyp1f1_derivative(a, b, c(0.0, 0.0), 1).unwrap();
        assert!((d - a / b).norm() < 1e-15);
        assert_eq!(hyp1f1_derivative(c(0.0, 0.0), b, c(2.0, 1.0), 1).unwrap(), c(0.0, 0.0));
        assert!(hyp1f1_derivative(a, b, c(1.0, 0.0), 0).is_err());
    }

    /// Five-point central difference with one Richardson level, in the
    /// complex argument along the real axis.
    fn fd_derivative(a: Complex64, b: Complex64, z: Complex64) -> Complex64 {
        let h = 1e-5;
        let d = |h: f64| {
            let f = |dz: f64| hyp1f1(a, b, z + dz).unwrap();
            (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h)
        };
        let (d1, d2) = (d(h), d(h / 2.0));
        d2 + (d2 - d1) / 15.0
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = c(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let b = c(rng.random_range(0.5..6.0), rng.random_range(-5.0..5.0));
            let z = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let closed = hyp1f1_derivative(a, b, z, 1).unwrap();
            let fd = fd_derivative(a, b, z);
            assert!((closed - fd).norm() <= 1e-8 * closed.norm().max(1.0), "{a} {b} {z}: {closed} vs {fd}");
        }
    }

    #[test]
    fn satisfies_kummer_ode() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let a = c(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
            let b = c(rng.random_range(0.5..10.0), rng.random_range(-10.0..10.0));
            let z = c(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let f0 = hyp1f1(a, b, z).unwrap();
            let f1 = hyp1f1_derivative(a, b, z, 1).unwrap();
            let f2 = hyp1f1_derivative(a, b, z, 2).unwrap();
            let terms = [z * f2, (b - z) * f1, a * f0];
            let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
            let residual = terms[0] + terms[1] - terms[2];
            assert!(residual.norm() <= 1e-9 * scale, "{a} {b} {z}");
        }
    }

    #[test]
    fn relation_examples() {
        assert_eq!(contiguous_residual(Relation::U1, c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let b = c(2.5, 0.3);
        for z in [c(1.0, 1.0), c(-3.0, 0.5)] {
            let r = contiguous_residual_scaled(Relation::Dos, b, b, z).unwrap();
            assert!(r.residual.norm() <= 1e-10 * r.scale);
        }
    }

    #[test]
    fn every_relation_vanishes_on_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let a = c(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
            let b = c(rng.random_range(-10.0..10.0), rng.random_range(1.0..10.0));
            let z = c(rng.random_range(-7.0..7.0), rng.random_range(-7.0..7.0));
            for rel in Relation::ALL {
                let r = contiguous_residual_scaled(rel, a, b, z).unwrap();
                assert!(r.relative() <= 1e-10, "{rel} {a} {b} {z}: {}", r.relative());
            }
        }
    }

    /// With `(b - a)/(b - 1)` in place of `(b - a)/(b(b - 1))` the relation
    /// no longer holds.
    #[test]
    fn dos_with_unscaled_coefficient_fails() {
        let (a, b, z) = (c(1.3, 0.0), c(2.7, 0.0), c(0.9, 0.0));
        let wrong = hyp1f1(a, b, z).unwrap() - hyp1f1(a - 1.0, b - 1.0, z).unwrap()
            + (b - a) / (b - 1.0) * z * hyp1f1(a, b + 1.0, z).unwrap();
        assert!(wrong.norm() > 0.1);
    }

    #[test]
    fn relation_names_round_trip() {
        for rel in Relation::ALL {
            assert_eq!(rel.to_string().parse::<Relation>().unwrap(), rel);
        }
    }
}
