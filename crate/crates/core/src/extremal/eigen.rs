//! Largest generalized eigenpair of `B v = λ G v` with `G` SPD.

use crate::error::{param, Error, Result};
use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

/// Eigenvalues within this relative distance of the maximum count as ties.
const TIE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    pub lambda_max: f64,
    /// Maximizer normalized to `vᵀ G v = 1`.
    pub vector: DVector<f64>,
    /// `‖L⁻¹(B v − λ G v)‖ / max(1, |λ|)` with `G = L Lᵀ`.
    pub ortho_residual: f64,
    /// All normalized eigenvectors whose eigenvalue ties with `lambda_max`,
    /// `vector` first.
    pub candidates: Vec<DVector<f64>>,
}

fn factor(g: &DMatrix<f64>) -> Result<Cholesky<f64, Dyn>> {
    let n = g.nrows();
    Cholesky::new(g.clone()).ok_or_else(|| {
        let d = g.diagonal();
        let (mn, mx) = d.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| {
            (a.min(*v), b.max(v.abs()))
        });
        Error::NotPositiveDefinite {
            dim: n,
            min_diagonal: mn,
            diagonal_ratio: if mx > 0.0 { mn / mx } else { f64::NAN },
        }
    })
}

fn check_square(b_rows: usize, g: &DMatrix<f64>) -> Result<()> {
    if g.nrows() != g.ncols() || b_rows != g.nrows() {
        return param("numerator and denominator forms have different sizes");
    }
    Ok(())
}

/// Indices of eigenvalues tied with the maximum, maximum first.
fn top_indices(vals: &DVector<f64>) -> Vec<usize> {
    let imax = vals.imax();
    let top = vals[imax];
    let mut out = vec![imax];
    for (i, v) in vals.iter().enumerate() {
        if i != imax && (top - v).abs() <= TIE * top.abs().max(1.0) {
            out.push(i);
        }
    }
    out
}

fn residual(
    b_times_v: &DVector<f64>,
    chol: &Cholesky<f64, Dyn>,
    g: &DMatrix<f64>,
    v: &DVector<f64>,
    lambda: f64,
) -> f64 {
    let r = b_times_v - g * v * lambda;
    let z = chol.l_dirty().solve_lower_triangular(&r).unwrap_or(r);
    z.norm() / lambda.abs().max(1.0)
}

/// Dense route: `C = L⁻¹ B L⁻ᵀ` and a symmetric eigen decomposition.
pub fn rayleigh_sup(b: &DMatrix<f64>, g: &DMatrix<f64>) -> Result<EigenSolution> {
    check_square(b.nrows(), g)?;
    let chol = factor(g)?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(b)
        .ok_or_else(|| Error::Singular("triangular solve failed".into()))?;
    let c = l
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| Error::Singular("triangular solve failed".into()))?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let lt = l.transpose();
    let mut candidates = Vec::new();
    for i in top_indices(&eig.eigenvalues) {
        let y = eig.eigenvectors.column(i).into_owned();
        let v = lt
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::Singular("triangular solve failed".into()))?;
        candidates.push(v);
    }
    let lambda = eig.eigenvalues.max();
    let v = candidates[0].clone();
    Ok(EigenSolution {
        lambda_max: lambda,
        ortho_residual: residual(&(b * &v), &chol, g, &v, lambda),
        vector: v,
        candidates,
    })
}

/// Low-rank route for `B = W Wᵀ`: the nonzero spectrum of `L⁻¹ W Wᵀ L⁻ᵀ`
/// equals that of the small Gram matrix `Zᵀ Z`, `Z = L⁻¹ W`.
pub fn rayleigh_sup_factored(w: &DMatrix<f64>, g: &DMatrix<f64>) -> Result<EigenSolution> {
    check_square(w.nrows(), g)?;
    if w.ncols() == 0 {
        return param("empty numerator factor");
    }
    let chol = factor(g)?;
    let l = chol.l();
    let z = l
        .solve_lower_triangular(w)
        .ok_or_else(|| Error::Singular("triangular solve failed".into()))?;
    let small = z.transpose() * &z;
    let small = (&small + small.transpose()) * 0.5;
    let eig = SymmetricEigen::new(small);
    let lambda = eig.eigenvalues.max();
    let lt = l.transpose();
    let mut candidates = Vec::new();
    for i in top_indices(&eig.eigenvalues) {
        let y = eig.eigenvectors.column(i).into_owned();
        let x = &z * y;
        let x = &x / x.norm();
        let v = lt
            .solve_upper_triangular(&x)
            .ok_or_else(|| Error::Singular("triangular solve failed".into()))?;
        candidates.push(v);
    }
    let v = candidates[0].clone();
    let bv = w * (w.transpose() * &v);
    Ok(EigenSolution {
        lambda_max: lambda,
        ortho_residual: residual(&bv, &chol, g, &v, lambda),
        vector: v,
        candidates,
    })
}
