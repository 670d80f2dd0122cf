//! Arithmetic of admissible eigenvalues and admissible `(l, k)` pairs.
//!
//! For `n >= 2` the non-zero admissible eigenvalues are
//! `A_n = { l(n + 2j) : 1 <= l <= j + 1 }`, which has a closed form: all even
//! integers `>= n` when `n` is even, and the integers `2^r a` (`a` odd) with
//! `a >= n + 2^(r+1) - 2` when `n` is odd. For `n = 1` they are the non-zero
//! triangular numbers.
//!
//! Pairs are reported in the convention of the admissibility definition:
//! for `n >= 2` the pair `(l, k)` has `λ = l(2l + 2k + n - 2)`; for `n = 1`
//! the pair is `(L, 0)` with `λ = L(L - 1)/2`. [`n1_radial_index`] converts the
//! latter into the `(l, k)` used by the K-type formula.

use num_integer::Roots;

use crate::error::{Error, Result};
use crate::params::Eigenvalue;

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("n must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Eigenvalue attached to an admissible pair.
///
/// `l(2l + 2k + n - 2)` for `n >= 2` and `l(l - 1)/2` for `n = 1`.
pub fn eigenvalue_of_pair(n: u32, l: i64, k: i64) -> Result<Eigenvalue> {
    check_n(n)?;
    if l < 0 {
        return Err(Error::Domain(format!("l = {l} must be non-negative")));
    }
    match n {
        1 if k != 0 => Err(Error::Domain(format!("k = {k} must be 0 when n = 1"))),
        1 => Ok(Eigenvalue(l * (l - 1) / 2)),
        2 => Ok(Eigenvalue(l * (2 * l + 2 * k))),
        _ if k < 0 => Err(Error::Domain(format!("k = {k} must be non-negative when n >= 3"))),
        _ => Ok(Eigenvalue(l * (2 * l + 2 * k + n as i64 - 2))),
    }
}

/// Eigenvalue of the K-type `F_{m,l,k}` built on a harmonic of degree `|k|`:
/// `l(2l + 2|k| + n - 2)`, valid for every `n` including `n = 1`.
pub fn kernel_eigenvalue(n: u32, l: i64, k: i64) -> Eigenvalue {
    Eigenvalue(l * (2 * l + 2 * k.abs() + n as i64 - 2))
}

/// Converts the `n = 1` pair `(L, 0)` into the `(l, k)` of the K-type formula:
/// `ρ^{2l} y^k = |y|^L` up to sign, so `l = L / 2` and `k = L mod 2`.
pub fn n1_radial_index(big_l: i64) -> (i64, i64) {
    (big_l.div_euclid(2), big_l.rem_euclid(2))
}

fn is_triangular(lambda: i64) -> bool {
    if lambda < 0 {
        return false;
    }
    let d = 8 * lambda as u64 + 1;
    let r = d.sqrt();
    r * r == d
}

/// Closed-form membership test for the non-zero admissible eigenvalues.
pub fn is_admissible(n: u32, lambda: i64) -> bool {
    if n == 0 || lambda <= 0 {
        return false;
    }
    if n == 1 {
        return is_triangular(lambda);
    }
    if n % 2 == 0 {
        return lambda % 2 == 0 && lambda >= n as i64;
    }
    let r = lambda.trailing_zeros();
    let odd = lambda >> r;
    // 2^(r+1) overflows only for absurd lambda; saturate
    let bound = (n as i64).saturating_add(1i64.checked_shl(r + 1).unwrap_or(i64::MAX)) - 2;
    odd >= bound
}

/// Same as [`is_admissible`] for a rational input; non-integers are never
/// admissible.
pub fn is_admissible_rational(n: u32, lambda: num_rational::Rational64) -> bool {
    lambda.is_integer() && is_admissible(n, lambda.to_integer())
}

/// All admissible `λ <= lambda_max`, strictly increasing.
pub fn enumerate_admissible(n: u32, lambda_max: i64) -> Vec<Eigenvalue> {
    (1..=lambda_max.max(0)).filter(|&lambda| is_admissible(n, lambda)).map(Eigenvalue).collect()
}

/// The complete list of λ-admissible pairs, sorted by decreasing `l`.
pub fn admissible_pairs(n: u32, lambda: Eigenvalue) -> Result<Vec<(i64, i64)>> {
    check_n(n)?;
    let value = lambda.value();
    if !is_admissible(n, value) {
        return Err(Error::NotAdmissible { n, lambda: value });
    }
    if n == 1 {
        // λ = L(L-1)/2 with L >= 2
        let big_l = (1 + (8 * value as u64 + 1).sqrt() as i64) / 2;
        return Ok(vec![(big_l, 0)]);
    }
    let n = n as i64;
    let mut pairs = Vec::new();
    for l in (1..=value).rev() {
        if value % l != 0 {
            continue;
        }
        // 2k = λ/l - 2l + 2 - n
        let twice_k = value / l - 2 * l + 2 - n;
        if twice_k % 2 != 0 {
            continue;
        }
        let k = twice_k / 2;
        if n >= 3 && k < 0 {
            continue;
        }
        pairs.push((l, k));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    /// Direct enumeration of `{ l(n + 2j) : 1 <= l <= j + 1 }` (triangular
    /// numbers for n = 1), restricted to values up to `max`.
    fn brute_force_set(n: u32, max: i64) -> BTreeSet<i64> {
        let mut set = BTreeSet::new();
        if n == 1 {
            for big_l in 0.. {
                let t = big_l * (big_l - 1) / 2;
                if t > max {
                    break;
                }
                if t > 0 {
                    set.insert(t);
                }
            }
            return set;
        }
        for l in 1..=max {
            let mut j = l - 1;
            while l * (n as i64 + 2 * j) <= max {
                set.insert(l * (n as i64 + 2 * j));
                j += 1;
            }
        }
        set
    }

    fn brute_force_pairs(n: u32, lambda: i64) -> Vec<(i64, i64)> {
        let kmin = if n == 2 { -lambda } else { 0 };
        let mut out = Vec::new();
        for l in 1..=lambda {
            for k in kmin..=lambda {
                if l * (2 * l + 2 * k + n as i64 - 2) == lambda {
                    out.push((l, k));
                }
            }
        }
        out.sort_by_key(|p| std::cmp::Reverse(p.0));
        out
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalue_of_pair(3, 5, 2).unwrap(), Eigenvalue(75));
        assert_eq!(eigenvalue_of_pair(3, 1, 0).unwrap(), Eigenvalue(3));
        assert!(brute_force_set(3, 10).contains(&3));
        assert_eq!(eigenvalue_of_pair(1, 1, 0).unwrap(), Eigenvalue(0));
        assert!(eigenvalue_of_pair(3, 1, -1).is_err());
        assert!(eigenvalue_of_pair(1, 2, 1).is_err());
        assert_eq!(eigenvalue_of_pair(2, 2, -1).unwrap(), Eigenvalue(4));
    }

    #[test]
    fn admissibility_examples() {
        assert!(!is_admissible(2, 3));
        assert!(is_admissible(3, 75));
        assert!(!is_admissible(4, 2));
        assert!(!brute_force_set(4, 10).contains(&2));
        assert!(!is_admissible(3, 0));
        assert!(!is_admissible(3, -5));
        assert!(!is_admissible_rational(3, num_rational::Rational64::new(7, 2)));
        assert!(is_admissible_rational(3, num_rational::Rational64::new(6, 2)));
    }

    #[test]
    fn enumeration_examples() {
        let v = |xs: &[i64]| xs.iter().copied().map(Eigenvalue).collect::<Vec<_>>();
        assert_eq!(enumerate_admissible(4, 10), v(&[4, 6, 8, 10]));
        assert_eq!(enumerate_admissible(3, 5), v(&[3, 5]));
        assert_eq!(enumerate_admissible(1, 3), v(&[1, 3]));
        assert!(enumerate_admissible(3, -1).is_empty());
    }

    #[test]
    fn pair_examples() {
        assert_eq!(admissible_pairs(3, Eigenvalue(75)).unwrap(), vec![(5, 2), (3, 9), (1, 36)]);
        assert_eq!(admissible_pairs(2, Eigenvalue(4)).unwrap(), vec![(2, -1), (1, 1)]);
        assert_eq!(admissible_pairs(3, Eigenvalue(3)).unwrap(), vec![(1, 0)]);
        assert_eq!(admissible_pairs(1, Eigenvalue(6)).unwrap(), vec![(4, 0)]);
        assert!(matches!(admissible_pairs(2, Eigenvalue(3)), Err(Error::NotAdmissible { .. })));
    }

    #[test]
    fn n1_conversion_matches_general_formula() {
        for big_l in 0..40 {
            let (l, k) = n1_radial_index(big_l);
            assert_eq!(kernel_eigenvalue(1, l, k), eigenvalue_of_pair(1, big_l, 0).unwrap());
        }
    }

    #[test]
    fn closed_form_matches_enumeration_small() {
        for n in 1..=8 {
            let set = brute_force_set(n, 600);
            for lambda in 0..=600 {
                assert_eq!(is_admissible(n, lambda), set.contains(&lambda), "n={n} λ={lambda}");
            }
        }
    }

    #[test]
    fn pairs_match_brute_force() {
        for n in 2..=6 {
            for lambda in enumerate_admissible(n, 200) {
                let pairs = admissible_pairs(n, lambda).unwrap();
                assert!(!pairs.is_empty());
                assert_eq!(pairs, brute_force_pairs(n, lambda.value()), "n={n} λ={lambda}");
            }
        }
    }

    proptest! {
        #[test]
        fn pairs_reproduce_their_eigenvalue(n in 1u32..=8, lambda in 1i64..3000) {
            if is_admissible(n, lambda) {
                for (l, k) in admissible_pairs(n, Eigenvalue(lambda)).unwrap() {
                    prop_assert_eq!(eigenvalue_of_pair(n, l, k).unwrap(), Eigenvalue(lambda));
                    prop_assert!(l >= 1);
                }
            } else {
                prop_assert!(admissible_pairs(n, Eigenvalue(lambda)).is_err());
            }
        }

        #[test]
        fn n3_pair_bound(lambda in 1i64..3000) {
            // 1 <= l <= (-(n-2) + sqrt((n-2)^2 + 8λ)) / 4
            if is_admissible(3, lambda) {
                let bound = (-1.0 + (1.0 + 8.0 * lambda as f64).sqrt()) / 4.0;
                for (l, _) in admissible_pairs(3, Eigenvalue(lambda)).unwrap() {
                    prop_assert!(l as f64 <= bound + 1e-12);
                }
            }
        }
    }
}
