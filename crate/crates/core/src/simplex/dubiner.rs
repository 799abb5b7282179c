//! Dubiner basis
//!
//! ```text
//! ψ̃_{pqr}(η) = P_p(η₁) P_q^{(2p+1,0)}(η₂) P_r^{(2p+2q+2,0)}(η₃) ((1−η₂)/2)^p ((1−η₃)/2)^{p+q}
//! ```
//!
//! and its 2D reduction `P_p(η₁) ((1−η₂)/2)^p P_q^{(2p+1,0)}(η₂)`.
//!
//! Evaluation in `ξ` never forms `D⁻¹`. Writing `t = (1−η₂)(1−η₃)/4` and
//! `s = (1−η₃)/2`, the collapsed factors combine into homogenized Jacobi values
//! `t^p P_p(y₁/t)` and `s^q P_q(y₂/s)` with `y₁, y₂, t, s` affine in `ξ`.
//! Gradients in `ξ` are computed with the `1/(1−η)` factors of `(D′)⁻¹`
//! cancelled against the collapsed powers, so they too are finite everywhere.

use super::{check_dim, BasisSet, SimplexIndex};
use crate::error::{param, Result};
use crate::jacobi::{self, JacobiWeight};

/// `x^e`, or `0` for negative `e` (those slots are always multiplied by a
/// vanishing coefficient).
fn pw(x: f64, e: isize) -> f64 {
    if e < 0 {
        0.0
    } else {
        x.powi(e as i32)
    }
}

fn w_q(p: usize) -> JacobiWeight {
    JacobiWeight::one_sided(2 * p as u32 + 1)
}

fn w_r(p: usize, q: usize) -> JacobiWeight {
    JacobiWeight::one_sided(2 * (p + q) as u32 + 2)
}

/// `ψ̃_idx(η)` on the cube; the dimension is `eta.len()`.
pub fn dubiner_eval_eta(idx: SimplexIndex, eta: &[f64]) -> Result<f64> {
    check_dim(eta.len())?;
    let SimplexIndex { p, q, r } = idx;
    let mut v = jacobi::eval(p, JacobiWeight::legendre(), eta[0]);
    if eta.len() >= 2 {
        v *= jacobi::eval(q, w_q(p), eta[1]) * ((1.0 - eta[1]) / 2.0).powi(p as i32);
    }
    if eta.len() == 3 {
        v *= jacobi::eval(r, w_r(p, q), eta[2]) * ((1.0 - eta[2]) / 2.0).powi((p + q) as i32);
    }
    Ok(v)
}

/// `ψ_idx(ξ)` on the closed reference element, including collapsed points.
pub fn dubiner_eval(idx: SimplexIndex, xi: &[f64]) -> Result<f64> {
    check_dim(xi.len())?;
    let SimplexIndex { p, q, r } = idx;
    let leg = JacobiWeight::legendre();
    Ok(match xi.len() {
        1 => jacobi::eval(p, leg, xi[0]),
        2 => {
            let t = (1.0 - xi[1]) / 2.0;
            let y = 1.0 + xi[0] - t;
            jacobi::scaled_eval_all(p, leg, y, t)[p] * jacobi::eval(q, w_q(p), xi[1])
        }
        _ => {
            let s = (1.0 - xi[2]) / 2.0;
            let t = -(xi[1] + xi[2]) / 2.0;
            let (y1, y2) = (1.0 + xi[0] - t, 1.0 + xi[1] - s);
            jacobi::scaled_eval_all(p, leg, y1, t)[p]
                * jacobi::scaled_eval_all(q, w_q(p), y2, s)[q]
                * jacobi::eval(r, w_r(p, q), xi[2])
        }
    })
}

/// Evaluates a whole [`BasisSet`] at one point, reusing internal tables.
#[derive(Debug, Clone)]
pub struct BasisEvaluator {
    basis: BasisSet,
    scale: Vec<f64>,
    leg: Vec<f64>,
    dleg: Vec<f64>,
    pq: Vec<Vec<f64>>,
    dpq: Vec<Vec<f64>>,
    rn: Vec<Vec<f64>>,
    drn: Vec<Vec<f64>>,
    scratch: Vec<f64>,
}

impl BasisEvaluator {
    /// With `orthonormal`, every value is multiplied by `1/‖ψ_idx‖`.
    pub fn new(basis: &BasisSet, orthonormal: bool) -> Self {
        let scale = if orthonormal {
            basis.scaling()
        } else {
            vec![1.0; basis.len()]
        };
        let m = basis.degree();
        Self {
            basis: basis.clone(),
            scale,
            leg: Vec::new(),
            dleg: Vec::new(),
            pq: vec![Vec::new(); m + 1],
            dpq: vec![Vec::new(); m + 1],
            rn: vec![Vec::new(); m + 1],
            drn: vec![Vec::new(); m + 1],
            scratch: Vec::new(),
        }
    }

    pub fn basis(&self) -> &BasisSet {
        &self.basis
    }

    fn fill_tables(&mut self, eta: &[f64], with_deriv: bool) {
        let m = self.basis.degree();
        let leg = JacobiWeight::legendre();
        jacobi::eval_all_into(m, leg, eta[0], &mut self.leg);
        if with_deriv {
            jacobi::deriv_all_into(m, leg, eta[0], &mut self.scratch, &mut self.dleg);
        }
        let dim = self.basis.dim();
        if dim >= 2 {
            for p in 0..=m {
                jacobi::eval_all_into(m - p, w_q(p), eta[1], &mut self.pq[p]);
                if with_deriv {
                    jacobi::deriv_all_into(
                        m - p,
                        w_q(p),
                        eta[1],
                        &mut self.scratch,
                        &mut self.dpq[p],
                    );
                }
            }
        }
        if dim == 3 {
            for n in 0..=m {
                let w = JacobiWeight::one_sided(2 * n as u32 + 2);
                jacobi::eval_all_into(m - n, w, eta[2], &mut self.rn[n]);
                if with_deriv {
                    jacobi::deriv_all_into(m - n, w, eta[2], &mut self.scratch, &mut self.drn[n]);
                }
            }
        }
    }

    /// Values at the cube point `eta` and, optionally, `∇_ξ` of every basis
    /// function at `D(η)`, stored `dim` entries per function.
    pub fn eval_eta(
        &mut self,
        eta: &[f64],
        values: &mut [f64],
        grads: Option<&mut [f64]>,
    ) -> Result<()> {
        let dim = self.basis.dim();
        let n = self.basis.len();
        if eta.len() != dim || values.len() != n {
            return param("point or output length does not match the basis");
        }
        let with_deriv = grads.is_some();
        self.fill_tables(eta, with_deriv);
        let a = if dim >= 2 { (1.0 - eta[1]) / 2.0 } else { 1.0 };
        let b = if dim == 3 { (1.0 - eta[2]) / 2.0 } else { 1.0 };
        let h1 = (1.0 + eta[0]) / 2.0;
        let h2 = if dim >= 2 { (1.0 + eta[1]) / 2.0 } else { 0.0 };
        let mut grads = grads;
        if let Some(g) = grads.as_deref() {
            if g.len() != n * dim {
                return param("gradient buffer has the wrong length");
            }
        }
        for (k, idx) in self.basis.indices().iter().enumerate() {
            let (p, q, r) = (idx.p, idx.q, idx.r);
            let (pi, nq) = (p as isize, (p + q) as isize);
            let s = self.scale[k];
            match dim {
                1 => {
                    values[k] = s * self.leg[p];
                    if let Some(g) = grads.as_deref_mut() {
                        g[k] = s * self.dleg[p];
                    }
                }
                2 => {
                    let (l, pq) = (self.leg[p], self.pq[p][q]);
                    values[k] = s * l * pw(a, pi) * pq;
                    if let Some(g) = grads.as_deref_mut() {
                        let d1 = self.dleg[p] * pw(a, pi - 1) * pq;
                        let d2 =
                            l * (pw(a, pi) * self.dpq[p][q] - 0.5 * p as f64 * pw(a, pi - 1) * pq);
                        g[2 * k] = s * d1;
                        g[2 * k + 1] = s * (h1 * d1 + d2);
                    }
                }
                _ => {
                    let (l, pq, rr) = (self.leg[p], self.pq[p][q], self.rn[p + q][r]);
                    values[k] = s * l * pw(a, pi) * pq * pw(b, nq) * rr;
                    if let Some(g) = grads.as_deref_mut() {
                        let bm = pw(b, nq - 1);
                        let d1 = self.dleg[p] * pw(a, pi - 1) * pq * bm * rr;
                        let d2 = l
                            * (pw(a, pi) * self.dpq[p][q] - 0.5 * p as f64 * pw(a, pi - 1) * pq)
                            * bm
                            * rr;
                        let d3 = l
                            * pw(a, pi)
                            * pq
                            * (pw(b, nq) * self.drn[p + q][r] - 0.5 * (p + q) as f64 * bm * rr);
                        g[3 * k] = s * d1;
                        g[3 * k + 1] = s * (h1 * d1 + d2);
                        g[3 * k + 2] = s * (h1 * d1 + h2 * d2 + d3);
                    }
                }
            }
        }
        Ok(())
    }

    /// Values at an element point `xi`, valid on the closed element.
    pub fn eval_xi(&mut self, xi: &[f64], values: &mut [f64]) -> Result<()> {
        let dim = self.basis.dim();
        let n = self.basis.len();
        if xi.len() != dim || values.len() != n {
            return param("point or output length does not match the basis");
        }
        let m = self.basis.degree();
        let leg = JacobiWeight::legendre();
        match dim {
            1 => jacobi::eval_all_into(m, leg, xi[0], &mut self.leg),
            2 => {
                let t = (1.0 - xi[1]) / 2.0;
                self.leg = jacobi::scaled_eval_all(m, leg, 1.0 + xi[0] - t, t);
                for p in 0..=m {
                    jacobi::eval_all_into(m - p, w_q(p), xi[1], &mut self.pq[p]);
                }
            }
            _ => {
                let s = (1.0 - xi[2]) / 2.0;
                let t = -(xi[1] + xi[2]) / 2.0;
                self.leg = jacobi::scaled_eval_all(m, leg, 1.0 + xi[0] - t, t);
                for p in 0..=m {
                    self.pq[p] = jacobi::scaled_eval_all(m - p, w_q(p), 1.0 + xi[1] - s, s);
                }
                for nn in 0..=m {
                    let w = JacobiWeight::one_sided(2 * nn as u32 + 2);
                    jacobi::eval_all_into(m - nn, w, xi[2], &mut self.rn[nn]);
                }
            }
        }
        for (k, idx) in self.basis.indices().iter().enumerate() {
            let mut v = self.leg[idx.p];
            if dim >= 2 {
                v *= self.pq[idx.p][idx.q];
            }
            if dim == 3 {
                v *= self.rn[idx.p + idx.q][idx.r];
            }
            values[k] = self.scale[k] * v;
        }
        Ok(())
    }
}
