//! Boundary traces.
//!
//! `Γ` is the bottom edge `(−1,1)×{−1}` of `T²` or the bottom face `T²×{−1}`
//! of `T³`; `η_d = −1` there, so the Dubiner functions restrict to
//! `(−1)^q P_p(ξ₁)` (2D) and `(−1)^r ψ^{2D}_{pq}` (3D).

use super::{analyze, check_dim, duffy_map, enumerate_basis};
use crate::error::{param, Result};
use crate::jacobi::{gauss_legendre, points_for_degree};

/// Which part of the boundary a trace lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// The bottom edge (2D) or face (3D).
    Bottom,
    /// All edges (2D) or faces (3D).
    Full,
}

/// Iterated Gauss rule on `T²` in plain `ξ` coordinates, `ξ₁` outermost:
/// `ξ₁ ∈ (−1, 1)`, `ξ₂ ∈ (−1, −ξ₁)`.
fn triangle_rule(points: usize) -> Result<Vec<([f64; 2], f64)>> {
    let g = gauss_legendre(points)?;
    let mut out = Vec::with_capacity(g.len() * g.len());
    for (x, wx) in g.iter() {
        let (ys, wys) = g.mapped(-1.0, -x);
        for (y, wy) in ys.into_iter().zip(wys) {
            out.push(([x, y], wx * wy));
        }
    }
    Ok(out)
}

/// Points in `ξ` and weights integrating polynomials of total degree
/// `≤ degree` exactly over the chosen boundary part.
pub fn boundary_rule(
    dim: usize,
    boundary: Boundary,
    degree: usize,
) -> Result<Vec<(Vec<f64>, f64)>> {
    // the inner interval of the iterated triangle rule depends on the outer
    // variable, which raises the outer degree by one
    boundary_rule_with(dim, boundary, points_for_degree(degree + 1, 2))
}

/// [`boundary_rule`] with an explicit number of Gauss points per direction.
pub fn boundary_rule_with(
    dim: usize,
    boundary: Boundary,
    points: usize,
) -> Result<Vec<(Vec<f64>, f64)>> {
    check_dim(dim)?;
    match dim {
        1 => param("traces are defined for dim 2 and 3; use point evaluation in 1D"),
        2 => {
            let g = gauss_legendre(points)?;
            let mut out: Vec<(Vec<f64>, f64)> = g.iter().map(|(t, w)| (vec![t, -1.0], w)).collect();
            if boundary == Boundary::Full {
                out.extend(g.iter().map(|(t, w)| (vec![-1.0, t], w)));
                let s = 2f64.sqrt();
                out.extend(g.iter().map(|(t, w)| (vec![t, -t], s * w)));
            }
            Ok(out)
        }
        _ => {
            let tri = triangle_rule(points)?;
            let mut out: Vec<(Vec<f64>, f64)> = tri
                .iter()
                .map(|([x, y], w)| (vec![*x, *y, -1.0], *w))
                .collect();
            if boundary == Boundary::Full {
                let s = 3f64.sqrt();
                for ([x, y], w) in &tri {
                    out.push((vec![*x, -1.0, *y], *w));
                    out.push((vec![-1.0, *x, *y], *w));
                    out.push((vec![*x, *y, -1.0 - x - y], s * w));
                }
            }
            Ok(out)
        }
    }
}

/// `‖f‖²_{L²(Γ)}` by quadrature in `ξ` on the bottom edge/face.
pub fn boundary_trace_direct(f: impl Fn(&[f64]) -> f64, dim: usize, degree: usize) -> Result<f64> {
    Ok(boundary_rule(dim, Boundary::Bottom, 2 * degree)?
        .iter()
        .map(|(x, w)| w * f(x).powi(2))
        .sum())
}

/// `‖f̃‖²` on the bottom of the cube, with `f̃ = f ∘ D` and the face measure
/// carried in collapsed coordinates: `∫ f̃² dη₁` (2D) or
/// `∫∫ f̃² (1−η₂)/2 dη₁ dη₂` (3D).
pub fn boundary_trace_eta(f: impl Fn(&[f64]) -> f64, dim: usize, degree: usize) -> Result<f64> {
    check_dim(dim)?;
    let g = gauss_legendre(points_for_degree(2 * degree + 1, 2))?;
    match dim {
        1 => param("traces are defined for dim 2 and 3"),
        2 => {
            let mut acc = 0.0;
            for (e1, w) in g.iter() {
                acc += w * f(&duffy_map(&[e1, -1.0])?.xi).powi(2);
            }
            Ok(acc)
        }
        _ => {
            let mut acc = 0.0;
            for (e1, w1) in g.iter() {
                for (e2, w2) in g.iter() {
                    let xi = duffy_map(&[e1, e2, -1.0])?.xi;
                    acc += w1 * w2 * (1.0 - e2) / 2.0 * f(&xi).powi(2);
                }
            }
            Ok(acc)
        }
    }
}

/// `‖f‖²_{L²(Γ)}` from the Dubiner coefficients of `f` alone:
///
/// ```text
/// 2D:  Σ_p 1/γ_p |Σ_q (−1)^q (p+q+1) u_pq|²
/// 3D:  Σ_{p,q} (2p+1)/2 · (p+q+1) |Σ_r (−1)^r (2r+2p+2q+3)/2 · u_pqr|²
/// ```
///
/// The weights are `2^{2p+1}/γ_q^{(2p+1,0)} = p+q+1` and
/// `2^n/γ_r^{(n,0)} = (2r+n+1)/2`, so no power of two is formed.
pub fn boundary_trace_parseval(
    f: impl Fn(&[f64]) -> f64,
    dim: usize,
    degree: usize,
) -> Result<f64> {
    check_dim(dim)?;
    if dim == 1 {
        return param("traces are defined for dim 2 and 3");
    }
    let basis = enumerate_basis(degree, dim)?;
    let u = analyze(f, &basis, degree)?;
    let sign = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let m = degree + 1;
    let mut inner = vec![0.0; m * m];
    for (c, idx) in u.iter().zip(basis.indices()) {
        let (p, q, r) = (idx.p as f64, idx.q as f64, idx.r as f64);
        if dim == 2 {
            inner[idx.p] += sign(idx.q) * (p + q + 1.0) * c;
        } else {
            inner[idx.p * m + idx.q] += sign(idx.r) * (2.0 * r + 2.0 * p + 2.0 * q + 3.0) / 2.0 * c;
        }
    }
    let mut total = 0.0;
    for p in 0..m {
        let pf = p as f64;
        if dim == 2 {
            total += (2.0 * pf + 1.0) / 2.0 * inner[p].powi(2);
        } else {
            for q in 0..m - p {
                total += (2.0 * pf + 1.0) / 2.0 * (pf + q as f64 + 1.0) * inner[p * m + q].powi(2);
            }
        }
    }
    Ok(total)
}
