//! Group elements acting on functions of `(t, x)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ParameterSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupElement {
    Identity,
    /// `[[a, b], [c, d]]` with `ad - bc = 1`.
    Sl2 {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    /// `(v1, v2, w)` in the Heisenberg group.
    Heisenberg {
        v1: Vec<f64>,
        v2: Vec<f64>,
        w: f64,
    },
    /// Row-major orthogonal `n × n` matrix.
    Orthogonal(Vec<Vec<f64>>),
}

impl GroupElement {
    /// `exp(ε [[1, 0], [0, -1]])`
    pub fn diagonal(eps: f64) -> Self {
        GroupElement::Sl2 { a: eps.exp(), b: 0.0, c: 0.0, d: (-eps).exp() }
    }

    /// `exp(ε [[0, 1], [0, 0]])`
    pub fn upper(eps: f64) -> Self {
        GroupElement::Sl2 { a: 1.0, b: eps, c: 0.0, d: 1.0 }
    }

    /// `exp(ε [[0, 0], [1, 0]])`
    pub fn lower(eps: f64) -> Self {
        GroupElement::Sl2 { a: 1.0, b: 0.0, c: eps, d: 1.0 }
    }

    /// Rotation by `angle` in the `(i, j)` coordinate plane (0-based).
    pub fn rotation(n: usize, i: usize, j: usize, angle: f64) -> Self {
        let mut m = vec![vec![0.0; n]; n];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = 1.0;
        }
        let (s, c) = angle.sin_cos();
        m[i][i] = c;
        m[j][j] = c;
        m[i][j] = -s;
        m[j][i] = s;
        GroupElement::Orthogonal(m)
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            GroupElement::Identity => Ok(()),
            GroupElement::Sl2 { a, b, c, d } => {
                if ((a * d - b * c) - 1.0).abs() > 1e-12 {
                    Err(Error::InvalidParameter(format!("det = {} is not 1", a * d - b * c)))
                } else {
                    Ok(())
                }
            }
            GroupElement::Heisenberg { v1, v2, .. } => {
                if v1.len() != n || v2.len() != n {
                    Err(Error::InvalidParameter(format!("Heisenberg vectors must have length {n}")))
                } else {
                    Ok(())
                }
            }
            GroupElement::Orthogonal(u) => {
                if u.len() != n || u.iter().any(|row| row.len() != n) {
                    return Err(Error::InvalidParameter(format!("orthogonal matrix must be {n} x {n}")));
                }
                for i in 0..n {
                    for j in 0..n {
                        let dot: f64 = (0..n).map(|k| u[i][k] * u[j][k]).sum();
                        let expected = if i == j { 1.0 } else { 0.0 };
                        if (dot - expected).abs() > 1e-10 {
                            return Err(Error::InvalidParameter("matrix is not orthogonal".into()));
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// `g.f` for a function `f` of `(t, x)`.
pub struct Transformed<F> {
    params: ParameterSet,
    g: GroupElement,
    f: F,
}

/// The action on the non-compact picture:
///
/// ```text
/// (g.f)(t,x)          = (a-ct)^r e^{-sc‖x‖²/(a-ct)} f((dt-b)/(a-ct), x/(a-ct))
/// ((v1,v2,w).f)(t,x)  = e^{s(v1·v2 - 2v2·x - t‖v2‖² + w)} f(t, x - v1 + t v2)
/// (u.f)(t,x)          = f(t, u⁻¹x)
/// ```
///
/// with `r = -n/2` and the principal branch of `(a-ct)^r`. The central
/// character of the double cover is not tracked, which is exact on the
/// identity component of each one-parameter subgroup.
pub fn group_action_noncompact<F: Fn(f64, &[f64]) -> Complex64>(
    params: &ParameterSet,
    g: GroupElement,
    f: F,
) -> Result<Transformed<F>> {
    g.validate(params.n() as usize)?;
    Ok(Transformed { params: *params, g, f })
}

impl<F: Fn(f64, &[f64]) -> Complex64> Transformed<F> {
    pub fn eval(&self, t: f64, x: &[f64]) -> Result<Complex64> {
        let s = self.params.s();
        match &self.g {
            GroupElement::Identity => Ok((self.f)(t, x)),
            GroupElement::Sl2 { a, b, c, d } => {
                let den = a - c * t;
                if den.abs() < 1e-14 {
                    return Err(Error::Domain(format!("a - ct = 0 at t = {t}")));
                }
                let x2: f64 = x.iter().map(|v| v * v).sum();
                let pre = Complex64::new(den, 0.0).powf(self.params.r_f64()) * (-s * c * x2 / den).exp();
                let xs: Vec<f64> = x.iter().map(|v| v / den).collect();
                Ok(pre * (self.f)((d * t - b) / den, &xs))
            }
            GroupElement::Heisenberg { v1, v2, w } => {
                let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| a * b).sum::<f64>();
                let exponent = dot(v1, v2) - 2.0 * dot(v2, x) - t * dot(v2, v2) + w;
                let xs: Vec<f64> = x.iter().zip(v1).zip(v2).map(|((xi, a), b)| xi - a + t * b).collect();
                Ok((s * exponent).exp() * (self.f)(t, &xs))
            }
            GroupElement::Orthogonal(u) => {
                // u⁻¹ = uᵀ
                let n = x.len();
                let xs: Vec<f64> = (0..n).map(|i| (0..n).map(|k| u[k][i] * x[k]).sum()).collect();
                Ok((self.f)(t, &xs))
            }
        }
    }

    /// As [`Transformed::eval`], with `NaN` off the domain.
    pub fn value(&self, t: f64, x: &[f64]) -> Complex64 {
        self.eval(t, x).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SPreset;

    fn test_fn(t: f64, x: &[f64]) -> Complex64 {
        let x2: f64 = x.iter().map(|v| v * v).sum();
        Complex64::new(t.cos() + x[0], x2 * t) * (1.0 + x.last().unwrap() * 0.3)
    }

    #[test]
    fn identity_and_translation() {
        let p = ParameterSet::with_preset(2, 1, SPreset::Heat).unwrap();
        let id = group_action_noncompact(&p, GroupElement::Identity, test_fn).unwrap();
        assert_eq!(id.eval(0.4, &[0.1, 0.2]).unwrap(), test_fn(0.4, &[0.1, 0.2]));
        let v1 = vec![0.3, -0.2];
        let tr = group_action_noncompact(
            &p,
            GroupElement::Heisenberg { v1: v1.clone(), v2: vec![0.0, 0.0], w: 0.0 },
            test_fn,
        )
        .unwrap();
        let got = tr.eval(0.4, &[0.1, 0.2]).unwrap();
        assert!((got - test_fn(0.4, &[0.1 - 0.3, 0.2 + 0.2])).norm() < 1e-15);
    }

    #[test]
    fn singular_denominator() {
        let p = ParameterSet::with_preset(3, 0, SPreset::Heat).unwrap();
        let g = group_action_noncompact(&p, GroupElement::lower(2.0), test_fn).unwrap();
        assert!(matches!(g.eval(0.5, &[0.1, 0.2, 0.3]), Err(Error::Domain(_))));
        assert!(group_action_noncompact(&p, GroupElement::Sl2 { a: 1.0, b: 1.0, c: 1.0, d: 1.0 }, test_fn).is_err());
    }

    #[test]
    fn actions_compose() {
        // g1.(g2.f) = (g1 g2).f
        let p = ParameterSet::with_preset(2, 0, SPreset::Schrodinger).unwrap();
        let (t, x) = (0.3, [0.4, -0.7]);
        let inner = group_action_noncompact(&p, GroupElement::lower(0.2), test_fn).unwrap();
        let outer = group_action_noncompact(&p, GroupElement::lower(0.1), |t, x: &[f64]| inner.value(t, x)).unwrap();
        let direct = group_action_noncompact(&p, GroupElement::lower(0.3), test_fn).unwrap();
        assert!((outer.eval(t, &x).unwrap() - direct.eval(t, &x).unwrap()).norm() < 1e-12);

        // Heisenberg product (v,w)(v',w') = (v+v', w+w'+ v1·v2' - v2·v1')
        let h1 = (vec![0.2, 0.1], vec![-0.3, 0.4], 0.5);
        let h2 = (vec![-0.1, 0.6], vec![0.2, 0.2], -0.2);
        let el = |h: &(Vec<f64>, Vec<f64>, f64)| GroupElement::Heisenberg { v1: h.0.clone(), v2: h.1.clone(), w: h.2 };
        let inner = group_action_noncompact(&p, el(&h2), test_fn).unwrap();
        let outer = group_action_noncompact(&p, el(&h1), |t, x: &[f64]| inner.value(t, x)).unwrap();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let sum = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
        let prod = (sum(&h1.0, &h2.0), sum(&h1.1, &h2.1), h1.2 + h2.2 + dot(&h1.0, &h2.1) - dot(&h1.1, &h2.0));
        let direct = group_action_noncompact(&p, el(&prod), test_fn).unwrap();
        assert!((outer.eval(t, &x).unwrap() - direct.eval(t, &x).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn rotation_is_orthogonal() {
        let p = ParameterSet::with_preset(3, 0, SPreset::Heat).unwrap();
        assert!(group_action_noncompact(&p, GroupElement::rotation(3, 0, 2, 0.7), test_fn).is_ok());
        assert!(group_action_noncompact(&p, GroupElement::Orthogonal(vec![vec![2.0; 3]; 3]), test_fn).is_err());
    }
}
