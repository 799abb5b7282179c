//! Symmetric bilinear forms over `P_M`, in the orthonormalized Dubiner basis.
//!
//! Working with `φ_idx = ψ_idx/‖ψ_idx‖` keeps the `2^{2p+1}`-type factors of
//! the unnormalized norms out of every matrix entry, so the 1D forms at
//! `M = 240` carry entries of moderate size.

use crate::error::{param, Result};
use crate::jacobi::points_for_degree;
use crate::simplex::{
    boundary_rule_with, enumerate_basis, BasisEvaluator, BasisSet, Boundary, CubeRule,
};
use nalgebra::DMatrix;

/// Role of an assembled form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Mass,
    H1,
    Trace(Boundary),
    PointEval,
    /// A form composed with the truncation onto `P_N`.
    Projected,
}

/// Quadrature settings shared by all assembly routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssemblyOptions {
    /// Extra Gauss points per direction beyond the exactness count.
    pub safety: usize,
    /// Multiplier on the point count; `2` is the doubling check.
    pub refine: usize,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self {
            safety: 2,
            refine: 1,
        }
    }
}

impl AssemblyOptions {
    pub fn doubled(self) -> Self {
        Self {
            refine: 2 * self.refine,
            ..self
        }
    }

    fn points(&self, degree: usize) -> usize {
        self.refine * points_for_degree(degree, self.safety)
    }
}

/// Dense symmetric matrix over an ordered basis.
///
/// Rank-deficient numerator forms also keep a factor `W` with `A = W Wᵀ`,
/// which the eigen solvers exploit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricForm {
    basis: BasisSet,
    kind: FormKind,
    matrix: DMatrix<f64>,
    factor: Option<DMatrix<f64>>,
}

impl SymmetricForm {
    /// Wrap a matrix, symmetrizing it as `(A + Aᵀ)/2`.
    pub fn new(basis: BasisSet, kind: FormKind, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != basis.len() || matrix.ncols() != basis.len() {
            return param("matrix size does not match the basis");
        }
        let sym = (&matrix + matrix.transpose()) * 0.5;
        Ok(Self {
            basis,
            kind,
            matrix: sym,
            factor: None,
        })
    }

    fn from_factor(basis: BasisSet, kind: FormKind, factor: DMatrix<f64>) -> Self {
        let matrix = &factor * factor.transpose();
        Self {
            basis,
            kind,
            matrix,
            factor: Some(factor),
        }
    }

    pub fn basis(&self) -> &BasisSet {
        &self.basis
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `W` with `A = W Wᵀ`, when the form was assembled that way.
    pub fn factor(&self) -> Option<&DMatrix<f64>> {
        self.factor.as_ref()
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `vᵀ A v`.
    pub fn quad(&self, v: &[f64]) -> f64 {
        let n = v.len();
        let mut s = 0.0;
        for j in 0..n {
            let col: f64 = (0..n).map(|i| self.matrix[(i, j)] * v[i]).sum();
            s += v[j] * col;
        }
        s
    }

    /// Same form with every entry multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            basis: self.basis.clone(),
            kind: self.kind,
            matrix: &self.matrix * c,
            factor: self.factor.as_ref().map(|w| w * c.sqrt()),
        }
    }

    /// Largest entrywise difference to another form over the same basis.
    pub fn max_abs_diff(&self, other: &SymmetricForm) -> f64 {
        (&self.matrix - &other.matrix).abs().max()
    }
}

/// Accumulate `acc += Xᵀ X` for `X` built in row chunks.
struct Gram {
    acc: DMatrix<f64>,
    chunk: DMatrix<f64>,
    rows: usize,
}

impl Gram {
    const CHUNK: usize = 256;

    fn new(n: usize) -> Self {
        Self {
            acc: DMatrix::zeros(n, n),
            chunk: DMatrix::zeros(Self::CHUNK, n),
            rows: 0,
        }
    }

    fn push(&mut self, row: impl Iterator<Item = f64>) {
        for (j, v) in row.enumerate() {
            self.chunk[(self.rows, j)] = v;
        }
        self.rows += 1;
        if self.rows == Self::CHUNK {
            self.flush();
        }
    }

    fn flush(&mut self) {
        if self.rows == 0 {
            return;
        }
        let x = self.chunk.rows(0, self.rows);
        self.acc.gemm_tr(1.0, &x, &x, 1.0);
        self.rows = 0;
    }

    fn finish(mut self) -> DMatrix<f64> {
        self.flush();
        self.acc
    }
}

fn volume_rule(dim: usize, degree: usize, opts: &AssemblyOptions) -> Result<CubeRule> {
    // product of two degree-M functions plus the Duffy determinant
    CubeRule::new(dim, opts.points(2 * degree + dim - 1))
}

/// `⟨φ_i, φ_j⟩_{L²}`, assembled by quadrature (not assumed to be `I`).
pub fn mass_form(degree: usize, dim: usize, opts: &AssemblyOptions) -> Result<SymmetricForm> {
    let basis = enumerate_basis(degree, dim)?;
    let rule = volume_rule(dim, degree, opts)?;
    let mut ev = BasisEvaluator::new(&basis, true);
    let mut vals = vec![0.0; basis.len()];
    let mut g = Gram::new(basis.len());
    for i in 0..rule.len() {
        ev.eval_eta(rule.eta(i), &mut vals, None)?;
        let s = rule.weight(i).sqrt();
        g.push(vals.iter().map(|v| s * v));
    }
    SymmetricForm::new(basis, FormKind::Mass, g.finish())
}

/// `⟨φ_i, φ_j⟩_{L²} + ⟨∇φ_i, ∇φ_j⟩_{L²}`.
pub fn h1_form(degree: usize, dim: usize, opts: &AssemblyOptions) -> Result<SymmetricForm> {
    let basis = enumerate_basis(degree, dim)?;
    let n = basis.len();
    let rule = volume_rule(dim, degree, opts)?;
    let mut ev = BasisEvaluator::new(&basis, true);
    let mut vals = vec![0.0; n];
    let mut grads = vec![0.0; n * dim];
    let mut g = Gram::new(n);
    for i in 0..rule.len() {
        ev.eval_eta(rule.eta(i), &mut vals, Some(&mut grads))?;
        let s = rule.weight(i).sqrt();
        g.push(vals.iter().map(|v| s * v));
        for k in 0..dim {
            g.push((0..n).map(|j| s * grads[j * dim + k]));
        }
    }
    SymmetricForm::new(basis, FormKind::H1, g.finish())
}

/// `∫_Γ φ_i φ_j` over the bottom edge/face or the whole boundary.
pub fn trace_form(
    degree: usize,
    dim: usize,
    boundary: Boundary,
    opts: &AssemblyOptions,
) -> Result<SymmetricForm> {
    if dim < 2 {
        return param("trace forms need dim 2 or 3; use point_eval_form in 1D");
    }
    let basis = enumerate_basis(degree, dim)?;
    let rule = boundary_rule_with(dim, boundary, opts.points(2 * degree + 1))?;
    let mut ev = BasisEvaluator::new(&basis, true);
    let mut vals = vec![0.0; basis.len()];
    let mut w = DMatrix::zeros(basis.len(), rule.len());
    for (k, (x, wt)) in rule.iter().enumerate() {
        ev.eval_xi(x, &mut vals)?;
        let s = wt.sqrt();
        for (j, v) in vals.iter().enumerate() {
            w[(j, k)] = s * v;
        }
    }
    Ok(SymmetricForm::from_factor(
        basis,
        FormKind::Trace(boundary),
        w,
    ))
}

/// `u ↦ u(1)²` on `P_M(I)`: the rank-one form `v vᵀ`, `v_q = √((2q+1)/2)`.
pub fn point_eval_form(degree: usize) -> Result<SymmetricForm> {
    let basis = enumerate_basis(degree, 1)?;
    let v = DMatrix::from_iterator(
        basis.len(),
        1,
        (0..=degree).map(|q| ((2 * q + 1) as f64 / 2.0).sqrt()),
    );
    Ok(SymmetricForm::from_factor(basis, FormKind::PointEval, v))
}

/// `Pᵀ B P` with `P` the truncation of `P_{2N}` onto `P_N`.
pub fn projection_form(b: &SymmetricForm, n: usize) -> Result<SymmetricForm> {
    if b.basis().degree() != 2 * n {
        return param(format!(
            "projection onto P_{n} needs a form over P_{}, got P_{}",
            2 * n,
            b.basis().degree()
        ));
    }
    let k = b.basis().prefix_len(n);
    let len = b.len();
    let mut m = DMatrix::zeros(len, len);
    m.view_mut((0, 0), (k, k))
        .copy_from(&b.matrix.view((0, 0), (k, k)));
    let factor = b.factor.as_ref().map(|w| {
        let mut f = DMatrix::zeros(len, w.ncols());
        f.view_mut((0, 0), (k, w.ncols())).copy_from(&w.rows(0, k));
        f
    });
    Ok(SymmetricForm {
        basis: b.basis.clone(),
        kind: FormKind::Projected,
        matrix: m,
        factor,
    })
}

/// Coefficients of `Π_N u` for `u` given in the orthonormal basis of `P_M`.
pub fn project_coefficients(basis: &BasisSet, coeffs: &[f64], n: usize) -> Vec<f64> {
    let k = basis.prefix_len(n);
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| if i < k { *c } else { 0.0 })
        .collect()
}
