//! Seeded sample points for numerical checks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ktype::{CompactPoint, NoncompactPoint};

pub const RHO_RANGE: (f64, f64) = (0.2, 2.0);
pub const THETA_RANGE: (f64, f64) = (-1.2, 1.2);
pub const X_NORM_RANGE: (f64, f64) = (0.3, 2.0);
pub const T_RANGE: (f64, f64) = (-1.5, 1.5);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly distributed unit vector in `ℝⁿ`.
pub fn unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![if rng.random::<bool>() { 1.0 } else { -1.0 }];
    }
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        if norm2 > 1e-4 && norm2 <= 1.0 {
            let norm = norm2.sqrt();
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

pub fn vector_with_norm<R: Rng>(rng: &mut R, n: usize, range: (f64, f64)) -> Vec<f64> {
    let r = rng.random_range(range.0..range.1);
    unit_vector(rng, n).into_iter().map(|x| x * r).collect()
}

pub fn compact_points(n: u32, count: usize, seed: u64) -> Vec<CompactPoint> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let theta = rng.random_range(THETA_RANGE.0..THETA_RANGE.1);
            CompactPoint::new(theta, vector_with_norm(&mut rng, n as usize, RHO_RANGE))
        })
        .collect()
}

pub fn noncompact_points(n: u32, count: usize, seed: u64) -> Vec<NoncompactPoint> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let t = rng.random_range(T_RANGE.0..T_RANGE.1);
            NoncompactPoint::new(t, vector_with_norm(&mut rng, n as usize, X_NORM_RANGE))
        })
        .collect()
}

fn in_disk<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    loop {
        let (x, y) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if x * x + y * y <= 1.0 {
            return Complex64::new(x * radius, y * radius);
        }
    }
}

/// `(a, b, z)` uniform in the disks `|a|, |b| <= ab_radius`,
/// `|z| <= z_radius`, with `b - 1`, `b`, `b + 1` at distance at least
/// `0.5` from the poles `0, -1, -2, ...`.
pub fn hypergeometric_samples(
    count: usize,
    ab_radius: f64,
    z_radius: f64,
    seed: u64,
) -> Vec<(Complex64, Complex64, Complex64)> {
    let mut rng = rng(seed);
    let near_pole = |b: Complex64| {
        (-1..=1).any(|shift| {
            let c = b + shift as f64;
            let nearest = c.re.round().min(0.0);
            (c - nearest).norm() < 0.5
        })
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = in_disk(&mut rng, ab_radius);
        let b = in_disk(&mut rng, ab_radius);
        let z = in_disk(&mut rng, z_radius);
        if !near_pole(b) {
            out.push((a, b, z));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_respect_ranges_and_seed() {
        let a = compact_points(3, 50, 7);
        assert_eq!(a, compact_points(3, 50, 7));
        for p in &a {
            let rho = p.y.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((RHO_RANGE.0..=RHO_RANGE.1).contains(&rho));
            assert!((THETA_RANGE.0..=THETA_RANGE.1).contains(&p.theta));
        }
        for p in noncompact_points(1, 50, 3) {
            assert!((X_NORM_RANGE.0..=X_NORM_RANGE.1).contains(&p.x[0].abs()));
        }
    }
}
