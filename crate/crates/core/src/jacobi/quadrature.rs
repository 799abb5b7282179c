//! Gauss–Jacobi rules via the Golub–Welsch construction.
//!
//! Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix of the
//! orthonormal recurrence, polished by a Newton step on `p̂_m`. Weights use the
//! Christoffel form `wᵢ = 1 / Σ_{k<m} p̂_k(xᵢ)²`, which equals the classical
//! `μ₀ v₀ᵢ²` (first eigenvector components) but does not lose relative accuracy
//! on the small weights near the endpoints.

use super::{norm_sq, JacobiWeight};
use crate::error::{param, Result};
use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and positive weights on `(−1, 1)` for the weight `(1−x)^α(1+x)^β`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    weight: JacobiWeight,
    exact_degree: usize,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_spec(&self) -> JacobiWeight {
        self.weight
    }

    /// Highest polynomial degree integrated exactly against the weight.
    pub fn exact_degree(&self) -> usize {
        self.exact_degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `Σ wᵢ f(xᵢ)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    /// Pull the rule back to `(a, b)`; weights pick up the factor `(b−a)/2`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let nodes = self.nodes.iter().map(|x| a + half * (x + 1.0)).collect();
        let weights = self.weights.iter().map(|w| w * half).collect();
        (nodes, weights)
    }
}

/// Point count for exactness up to degree `d`: `⌈(d+1)/2⌉ + safety`.
pub fn points_for_degree(degree: usize, safety: usize) -> usize {
    (degree + 1).div_ceil(2).max(1) + safety
}

/// Diagonal and off-diagonal entries of the orthonormal Jacobi recurrence.
///
/// Returns `(a_0..a_{m-1}, b_1..b_m)` with
/// `x p̂_k = b_{k+1} p̂_{k+1} + a_k p̂_k + b_k p̂_{k−1}`.
fn jacobi_matrix(m: usize, w: JacobiWeight) -> (Vec<f64>, Vec<f64>) {
    let (al, be) = (w.alpha(), w.beta());
    let diag = (0..m)
        .map(|k| {
            if k == 0 {
                (be - al) / (al + be + 2.0)
            } else {
                let s = 2.0 * k as f64 + al + be;
                (be * be - al * al) / (s * (s + 2.0))
            }
        })
        .collect();
    let off = (1..=m)
        .map(|k| {
            let kf = k as f64;
            let s = 2.0 * kf + al + be;
            if k == 1 {
                (4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + al + be).powi(2) * (3.0 + al + be))).sqrt()
            } else {
                (4.0 * kf * (kf + al) * (kf + be) * (kf + al + be)
                    / (s * s * (s + 1.0) * (s - 1.0)))
                    .sqrt()
            }
        })
        .collect();
    (diag, off)
}

/// Orthonormal values `p̂_0..p̂_m` and `p̂_m'` at `x`.
fn orthonormal_values(x: f64, mu0: f64, diag: &[f64], off: &[f64], values: &mut Vec<f64>) -> f64 {
    let m = diag.len();
    values.clear();
    let mut prev = 0.0;
    let mut cur = 1.0 / mu0.sqrt();
    let mut dprev = 0.0;
    let mut dcur = 0.0;
    values.push(cur);
    for k in 0..m {
        let b_prev = if k == 0 { 0.0 } else { off[k - 1] };
        let next = ((x - diag[k]) * cur - b_prev * prev) / off[k];
        let dnext = (cur + (x - diag[k]) * dcur - b_prev * dprev) / off[k];
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
        values.push(cur);
    }
    dcur
}

/// `m`-point Gauss rule for `(1−x)^α (1+x)^β`, exact through degree `2m−1`.
pub fn gauss_jacobi(m: usize, w: JacobiWeight) -> Result<QuadratureRule> {
    if m == 0 {
        return param("quadrature needs at least one point");
    }
    let mu0 = norm_sq(0, w);
    let (diag, off) = jacobi_matrix(m, w);
    let mut t = DMatrix::<f64>::zeros(m, m);
    for k in 0..m {
        t[(k, k)] = diag[k];
        if k + 1 < m {
            t[(k, k + 1)] = off[k];
            t[(k + 1, k)] = off[k];
        }
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(t).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    let mut vals = Vec::with_capacity(m + 1);
    let mut weights = Vec::with_capacity(m);
    for x in nodes.iter_mut() {
        for _ in 0..2 {
            let d = orthonormal_values(*x, mu0, &diag, &off, &mut vals);
            let step = vals[m] / d;
            if step.is_finite() && step.abs() < 1e-8 {
                *x -= step;
            }
        }
        orthonormal_values(*x, mu0, &diag, &off, &mut vals);
        let s: f64 = vals[..m].iter().map(|v| v * v).sum();
        weights.push(1.0 / s);
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        weight: w,
        exact_degree: 2 * m - 1,
    })
}

/// Gauss–Legendre rule with `m` points.
pub fn gauss_legendre(m: usize) -> Result<QuadratureRule> {
    gauss_jacobi(m, JacobiWeight::legendre())
}

/// Composite Gauss–Legendre rule on `(0, length)`, geometrically graded toward `0`.
///
/// `layers` subintervals `(ℓρ^{k+1}, ℓρ^k)` plus the innermost `(0, ℓρ^{layers})`,
/// each carrying `points` Gauss nodes. Nodes are returned as distances from the
/// graded endpoint so that they keep full relative precision near it. Exponentially
/// accurate for integrands with an algebraic singularity at `0`.
pub fn graded_legendre(
    layers: usize,
    ratio: f64,
    points: usize,
    length: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return param("grading ratio must lie in (0, 1)");
    }
    if !(length > 0.0) {
        return param("graded interval must have positive length");
    }
    let base = gauss_legendre(points)?;
    let mut breaks: Vec<f64> = (0..=layers)
        .map(|k| length * ratio.powi(k as i32))
        .collect();
    breaks.push(0.0);
    breaks.reverse();
    let mut nodes = Vec::with_capacity((layers + 1) * points);
    let mut weights = Vec::with_capacity((layers + 1) * points);
    for pair in breaks.windows(2) {
        let (n, w) = base.mapped(pair[0], pair[1]);
        nodes.extend(n);
        weights.extend(w);
    }
    Ok((nodes, weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn one_point_legendre_is_midpoint() {
        let r = gauss_legendre(1).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r.nodes()[0].abs() < 1e-15);
        assert_relative_eq!(r.weights()[0], 2.0, max_relative = 1e-15);
        assert_eq!(r.exact_degree(), 1);
    }

    #[test]
    fn zero_points_rejected() {
        assert!(gauss_jacobi(0, JacobiWeight::legendre()).is_err());
    }

    #[test]
    fn three_point_weight_sum() {
        let r = gauss_jacobi(3, JacobiWeight::one_sided(1)).unwrap();
        let s: f64 = r.weights().iter().sum();
        assert_relative_eq!(s, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn nodes_sorted_interior_and_weights_positive() {
        for &(a, b) in &[(0.0, 0.0), (5.0, 0.0), (-0.5, 0.3), (40.0, 0.0)] {
            let w = JacobiWeight::new(a, b).unwrap();
            let r = gauss_jacobi(37, w).unwrap();
            assert!(r.nodes().windows(2).all(|p| p[0] < p[1]));
            assert!(r.nodes().iter().all(|x| *x > -1.0 && *x < 1.0));
            assert!(r.weights().iter().all(|w| *w > 0.0));
            let s: f64 = r.weights().iter().sum();
            assert_relative_eq!(s, norm_sq(0, w), max_relative = 1e-13);
        }
    }

    #[test]
    fn legendre_nodes_known_values() {
        let r = gauss_legendre(3).unwrap();
        let x = (0.6f64).sqrt();
        assert_relative_eq!(r.nodes()[0], -x, epsilon = 1e-15);
        assert_relative_eq!(r.nodes()[2], x, epsilon = 1e-15);
        assert_relative_eq!(r.weights()[1], 8.0 / 9.0, max_relative = 1e-14);
    }

    #[test]
    fn graded_rule_handles_endpoint_singularity() {
        let (t, w) = graded_legendre(60, 0.3, 12, 2.0).unwrap();
        // ∫₀² t^{-1/2} = 2√2
        let v: f64 = t.iter().zip(&w).map(|(t, w)| w / t.sqrt()).sum();
        assert_relative_eq!(v, 2.0 * 2f64.sqrt(), max_relative = 1e-10);
        assert!(t.windows(2).all(|p| p[0] < p[1]));
        assert!(graded_legendre(3, 1.5, 4, 2.0).is_err());
    }
}
