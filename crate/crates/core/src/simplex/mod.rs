//! Reference simplices, the collapsed (Duffy) coordinates, and the Dubiner basis.
//!
//! Reference elements:
//!
//! * `I  = (−1, 1)`
//! * `T² = {ξ : −1 < ξ₁, ξ₂ ; ξ₁ + ξ₂ < 0}`, area 2
//! * `T³ = {ξ : −1 < ξ₁, ξ₂, ξ₃ ; ξ₁ + ξ₂ + ξ₃ < −1}`, volume 4/3
//!
//! In one dimension the "Dubiner" basis is plain Legendre, so every routine
//! here also accepts `dim = 1`.

mod cube;
mod dubiner;
mod duffy;
mod expansion;
mod lines;
mod trace;

pub use cube::CubeRule;
pub use dubiner::{dubiner_eval, dubiner_eval_eta, BasisEvaluator};
pub use duffy::{duffy_inverse, duffy_map, transformed_gradient, DuffyPoint};
pub use expansion::{analyze, analyze_with, synthesize};
pub use lines::{trace_coefficient_sum, LineFunctions, TraceSum};
pub use trace::{
    boundary_rule, boundary_rule_with, boundary_trace_direct, boundary_trace_eta,
    boundary_trace_parseval, Boundary,
};

use crate::error::{param, Result};

/// Dubiner multi-index. Unused trailing entries are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexIndex {
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

impl SimplexIndex {
    pub const fn new(p: usize, q: usize, r: usize) -> Self {
        Self { p, q, r }
    }

    pub fn degree(&self) -> usize {
        self.p + self.q + self.r
    }

    /// `‖ψ_idx‖²_{L²}` on the `dim`-dimensional reference element:
    /// `2/(2p+1) · 2/(2p+2q+2) · 2/(2p+2q+2r+3)`, truncated to `dim` factors.
    pub fn norm_sq(&self, dim: usize) -> f64 {
        let (p, q, r) = (self.p as f64, self.q as f64, self.r as f64);
        let mut v = 2.0 / (2.0 * p + 1.0);
        if dim >= 2 {
            v *= 2.0 / (2.0 * p + 2.0 * q + 2.0);
        }
        if dim >= 3 {
            v *= 2.0 / (2.0 * p + 2.0 * q + 2.0 * r + 3.0);
        }
        v
    }
}

/// All Dubiner indices of total degree `≤ degree`, graded then lexicographic.
///
/// Because of the grading, the indices of degree `≤ N` form a prefix for every
/// `N ≤ degree`; projection onto `P_N` is a truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    dim: usize,
    degree: usize,
    indices: Vec<SimplexIndex>,
}

impl BasisSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn indices(&self) -> &[SimplexIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Number of basis functions of total degree `≤ n`.
    pub fn prefix_len(&self, n: usize) -> usize {
        cardinality(n.min(self.degree), self.dim)
    }

    pub fn position(&self, idx: SimplexIndex) -> Option<usize> {
        self.indices.iter().position(|i| *i == idx)
    }

    pub fn norms_sq(&self) -> Vec<f64> {
        self.indices.iter().map(|i| i.norm_sq(self.dim)).collect()
    }

    /// `1/‖ψ_idx‖`, the factors that make the basis orthonormal.
    pub fn scaling(&self) -> Vec<f64> {
        self.indices
            .iter()
            .map(|i| 1.0 / i.norm_sq(self.dim).sqrt())
            .collect()
    }

    /// Measure of the reference element.
    pub fn volume(&self) -> f64 {
        reference_volume(self.dim)
    }
}

/// `|I| = 2`, `|T²| = 2`, `|T³| = 4/3`.
pub fn reference_volume(dim: usize) -> f64 {
    match dim {
        1 | 2 => 2.0,
        _ => 4.0 / 3.0,
    }
}

/// `dim P_n` on the `dim`-simplex.
pub fn cardinality(n: usize, dim: usize) -> usize {
    match dim {
        1 => n + 1,
        2 => (n + 1) * (n + 2) / 2,
        _ => (n + 1) * (n + 2) * (n + 3) / 6,
    }
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        param(format!("dimension must be 1, 2 or 3, got {dim}"))
    }
}

pub fn enumerate_basis(degree: usize, dim: usize) -> Result<BasisSet> {
    check_dim(dim)?;
    let mut indices = Vec::with_capacity(cardinality(degree, dim));
    for k in 0..=degree {
        match dim {
            1 => indices.push(SimplexIndex::new(k, 0, 0)),
            2 => indices.extend((0..=k).map(|p| SimplexIndex::new(p, k - p, 0))),
            _ => {
                for p in 0..=k {
                    for q in 0..=k - p {
                        indices.push(SimplexIndex::new(p, q, k - p - q));
                    }
                }
            }
        }
    }
    Ok(BasisSet {
        dim,
        degree,
        indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bases() {
        let b = enumerate_basis(1, 2).unwrap();
        let got: Vec<_> = b.indices().iter().map(|i| (i.p, i.q)).collect();
        assert_eq!(got, vec![(0, 0), (0, 1), (1, 0)]);
        assert_eq!(enumerate_basis(2, 3).unwrap().len(), 10);
        assert_eq!(enumerate_basis(40, 2).unwrap().len(), 861);
        assert_eq!(enumerate_basis(7, 1).unwrap().len(), 8);
        assert!(enumerate_basis(3, 4).is_err());
    }

    #[test]
    fn graded_lex_order_and_prefixes() {
        for dim in 1..=3 {
            let b = enumerate_basis(6, dim).unwrap();
            assert_eq!(b.len(), cardinality(6, dim));
            for w in b.indices().windows(2) {
                let key = |i: &SimplexIndex| (i.degree(), i.p, i.q, i.r);
                assert!(key(&w[0]) < key(&w[1]));
            }
            for n in 0..=6 {
                let k = b.prefix_len(n);
                assert!(b.indices()[..k].iter().all(|i| i.degree() <= n));
                assert!(b.indices()[k..].iter().all(|i| i.degree() > n));
            }
        }
    }

    #[test]
    fn constant_norms_are_volumes() {
        for dim in 1..=3 {
            let i = SimplexIndex::new(0, 0, 0);
            assert!((i.norm_sq(dim) - reference_volume(dim)).abs() < 1e-15);
        }
    }
}
