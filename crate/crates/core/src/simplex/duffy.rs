//! The collapsed-coordinate map `D : S^d = (−1,1)^d → T^d`.
//!
//! ```text
//! 3D:  ξ₁ = (1+η₁)(1−η₂)(1−η₃)/4 − 1,  ξ₂ = (1+η₂)(1−η₃)/2 − 1,  ξ₃ = η₃
//! 2D:  ξ₁ = (1+η₁)(1−η₂)/2 − 1,        ξ₂ = η₂
//! ```

use super::check_dim;
use crate::error::{param, Error, Result};
use nalgebra::DMatrix;

/// A cube point together with its image and the Jacobian data of `D` there.
#[derive(Debug, Clone, PartialEq)]
pub struct DuffyPoint {
    pub eta: Vec<f64>,
    pub xi: Vec<f64>,
    pub jac_det: f64,
    jacobian: DMatrix<f64>,
    inv_jacobian: Option<DMatrix<f64>>,
}

impl DuffyPoint {
    /// `D′(η)`, row `i` holding `∂ξᵢ/∂η`.
    pub fn jacobian(&self) -> &DMatrix<f64> {
        &self.jacobian
    }

    /// `(D′(η))⁻¹`; undefined on the collapsed faces `η₂ = 1` or `η₃ = 1`.
    pub fn inv_jacobian(&self) -> Result<&DMatrix<f64>> {
        self.inv_jacobian.as_ref().ok_or_else(|| {
            Error::Singular(format!(
                "inverse Jacobian undefined at eta = {:?}",
                self.eta
            ))
        })
    }

    /// `∇_ξ u = (D′)^{−T} ∇_η ũ`.
    pub fn xi_gradient(&self, eta_grad: &[f64]) -> Result<Vec<f64>> {
        let inv = self.inv_jacobian()?;
        let d = self.eta.len();
        Ok((0..d)
            .map(|i| (0..d).map(|k| inv[(k, i)] * eta_grad[k]).sum())
            .collect())
    }
}

fn check_cube(eta: &[f64]) -> Result<()> {
    check_dim(eta.len())?;
    if eta.iter().any(|v| !(-1.0..=1.0).contains(v)) {
        return param(format!("point {eta:?} lies outside the closed cube"));
    }
    Ok(())
}

pub fn duffy_map(eta: &[f64]) -> Result<DuffyPoint> {
    check_cube(eta)?;
    let d = eta.len();
    let (xi, jac, det, inv) = match d {
        1 => (
            eta.to_vec(),
            DMatrix::identity(1, 1),
            1.0,
            Some(DMatrix::identity(1, 1)),
        ),
        2 => {
            let (e1, e2) = (eta[0], eta[1]);
            let m2 = 1.0 - e2;
            let xi = vec![(1.0 + e1) * m2 / 2.0 - 1.0, e2];
            let jac = DMatrix::from_row_slice(2, 2, &[m2 / 2.0, -(1.0 + e1) / 2.0, 0.0, 1.0]);
            let inv = (m2 > 0.0)
                .then(|| DMatrix::from_row_slice(2, 2, &[2.0 / m2, (1.0 + e1) / m2, 0.0, 1.0]));
            (xi, jac, m2 / 2.0, inv)
        }
        _ => {
            let (e1, e2, e3) = (eta[0], eta[1], eta[2]);
            let (m2, m3) = (1.0 - e2, 1.0 - e3);
            let xi = vec![
                (1.0 + e1) * m2 * m3 / 4.0 - 1.0,
                (1.0 + e2) * m3 / 2.0 - 1.0,
                e3,
            ];
            #[rustfmt::skip]
            let jac = DMatrix::from_row_slice(3, 3, &[
                m2 * m3 / 4.0, -(1.0 + e1) * m3 / 4.0, -(1.0 + e1) * m2 / 4.0,
                0.0,           m3 / 2.0,               -(1.0 + e2) / 2.0,
                0.0,           0.0,                    1.0,
            ]);
            let inv = (m2 > 0.0 && m3 > 0.0).then(|| {
                let s = 1.0 / (m2 * m3);
                #[rustfmt::skip]
                let m = DMatrix::from_row_slice(3, 3, &[
                    4.0 * s, 2.0 * (1.0 + e1) * s, 2.0 * (1.0 + e1) * s,
                    0.0,     2.0 * m2 * s,         (1.0 - e2 * e2) * s,
                    0.0,     0.0,                  1.0,
                ]);
                m
            });
            (xi, jac, (m2 / 2.0) * (m3 / 2.0).powi(2), inv)
        }
    };
    Ok(DuffyPoint {
        eta: eta.to_vec(),
        xi,
        jac_det: det,
        jacobian: jac,
        inv_jacobian: inv,
    })
}

/// `D⁻¹(ξ)`; fails on the collapsed vertex/edge where `η` is not unique.
pub fn duffy_inverse(xi: &[f64]) -> Result<Vec<f64>> {
    check_dim(xi.len())?;
    let singular = || {
        Err(Error::Singular(format!(
            "D^-1 undefined at collapsed point {xi:?}"
        )))
    };
    match xi.len() {
        1 => Ok(xi.to_vec()),
        2 => {
            let t = 1.0 - xi[1];
            if t <= 0.0 {
                return singular();
            }
            Ok(vec![2.0 * (1.0 + xi[0]) / t - 1.0, xi[1]])
        }
        _ => {
            let m3 = 1.0 - xi[2];
            let m23 = -xi[1] - xi[2];
            if m3 <= 0.0 || m23 <= 0.0 {
                return singular();
            }
            Ok(vec![
                2.0 * (1.0 + xi[0]) / m23 - 1.0,
                2.0 * (1.0 + xi[1]) / m3 - 1.0,
                xi[2],
            ])
        }
    }
}

/// `∇_η ũ` for `ũ = u ∘ D`, given `∇_ξ u` as a callback on the element.
///
/// ```text
/// ∂_{η₁}ũ = (1−η₂)(1−η₃)/4 ∂₁u
/// ∂_{η₂}ũ = −(1+η₁)(1−η₃)/4 ∂₁u + (1−η₃)/2 ∂₂u
/// ∂_{η₃}ũ = −(1+η₁)(1−η₂)/4 ∂₁u − (1+η₂)/2 ∂₂u + ∂₃u
/// ```
pub fn transformed_gradient(grad: impl Fn(&[f64]) -> Vec<f64>, eta: &[f64]) -> Result<Vec<f64>> {
    let pt = duffy_map(eta)?;
    let g = grad(&pt.xi);
    if g.len() != eta.len() {
        return param("gradient callback returned the wrong number of components");
    }
    let j = pt.jacobian();
    let d = eta.len();
    Ok((0..d)
        .map(|k| (0..d).map(|i| j[(i, k)] * g[i]).sum())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vertex_is_fixed_and_det_at_center() {
        let p = duffy_map(&[-1.0, -1.0, -1.0]).unwrap();
        assert_eq!(p.xi, vec![-1.0, -1.0, -1.0]);
        let c = duffy_map(&[0.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(c.jac_det, 0.125, epsilon = 1e-16);
        assert_relative_eq!(c.jacobian().determinant(), 0.125, epsilon = 1e-15);
        assert_relative_eq!(
            duffy_map(&[0.3, -0.2]).unwrap().jac_det,
            0.6,
            epsilon = 1e-16
        );
    }

    #[test]
    fn collapsed_points() {
        let top = duffy_map(&[0.4, 0.2, 1.0]).unwrap();
        assert_eq!(top.xi, vec![-1.0, -1.0, 1.0]);
        assert!(matches!(top.inv_jacobian(), Err(Error::Singular(_))));
        assert!(duffy_inverse(&[-1.0, -1.0, 1.0]).is_err());
        assert!(duffy_inverse(&[-1.0, 1.0]).is_err());
        assert!(duffy_map(&[1.5, 0.0]).is_err());
    }

    #[test]
    fn inverse_jacobian_is_inverse() {
        for eta in [[0.1, -0.7, 0.3], [-0.9, 0.95, -0.99], [0.5, 0.5, 0.5]] {
            let p = duffy_map(&eta).unwrap();
            let prod = p.jacobian() * p.inv_jacobian().unwrap();
            assert!((prod - DMatrix::identity(3, 3)).abs().max() < 1e-13);
        }
        let p = duffy_map(&[0.2, -0.4]).unwrap();
        let prod = p.jacobian() * p.inv_jacobian().unwrap();
        assert!((prod - DMatrix::identity(2, 2)).abs().max() < 1e-14);
    }

    #[test]
    fn gradient_of_coordinate_functions() {
        let eta = [0.3, -0.5, 0.2];
        let g = transformed_gradient(|_| vec![0.0, 0.0, 1.0], &eta).unwrap();
        assert_eq!(g, vec![0.0, 0.0, 1.0]);
        let g = transformed_gradient(|_| vec![1.0, 0.0, 0.0], &eta).unwrap();
        assert_relative_eq!(g[0], 1.5 * 0.8 / 4.0, epsilon = 1e-16);
    }
}
