use super::{check_dim, duffy_map};
use crate::error::Result;
use crate::jacobi::{gauss_legendre, points_for_degree};

/// Tensor Gauss–Legendre rule on `(−1,1)^d` with the Duffy determinant folded
/// into the weights, so `Σ wᵢ f(D(ηᵢ)) ≈ ∫_{T^d} f`.
///
/// All nodes are interior; the collapsed faces are never sampled.
#[derive(Debug, Clone)]
pub struct CubeRule {
    dim: usize,
    points_per_axis: usize,
    eta: Vec<f64>,
    xi: Vec<f64>,
    weights: Vec<f64>,
}

impl CubeRule {
    pub fn new(dim: usize, points_per_axis: usize) -> Result<Self> {
        check_dim(dim)?;
        let g = gauss_legendre(points_per_axis)?;
        let m = g.len();
        let total = m.pow(dim as u32);
        let mut eta = Vec::with_capacity(total * dim);
        let mut xi = Vec::with_capacity(total * dim);
        let mut weights = Vec::with_capacity(total);
        let mut digits = vec![0usize; dim];
        for _ in 0..total {
            let pt: Vec<f64> = digits.iter().map(|&i| g.nodes()[i]).collect();
            let w0: f64 = digits.iter().map(|&i| g.weights()[i]).product();
            let d = duffy_map(&pt)?;
            weights.push(w0 * d.jac_det);
            eta.extend_from_slice(&pt);
            xi.extend_from_slice(&d.xi);
            for digit in digits.iter_mut() {
                *digit += 1;
                if *digit < m {
                    break;
                }
                *digit = 0;
            }
        }
        Ok(Self {
            dim,
            points_per_axis,
            eta,
            xi,
            weights,
        })
    }

    /// Rule exact for polynomials of total degree `degree` on `T^d`.
    ///
    /// In collapsed coordinates such an integrand has degree `≤ degree` in each
    /// `ηᵢ`, and the determinant adds at most `d − 1` more.
    pub fn for_degree(dim: usize, degree: usize, safety: usize) -> Result<Self> {
        Self::new(
            dim,
            points_for_degree(degree + dim.saturating_sub(1), safety),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn eta(&self, i: usize) -> &[f64] {
        &self.eta[i * self.dim..(i + 1) * self.dim]
    }

    pub fn xi(&self, i: usize) -> &[f64] {
        &self.xi[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        (0..self.len())
            .map(|i| self.weights[i] * f(self.xi(i)))
            .sum()
    }
}
