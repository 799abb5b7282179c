//! Stability constants of the `L²`-projection `Π_N`, maximized over `P_{2N}`.
//!
//! With `B` the trace form (2D, bottom edge) or the point evaluation at `1`
//! (1D), composed with `Π_N`, `M` the mass form and `A` the `H¹` form:
//!
//! * `mult`: `sup uᵀBu / √(uᵀMu · uᵀAu)`
//! * `add`: `sup uᵀBu / uᵀAu`
//! * `h1_stability`: `sup ‖Π_N u‖²_{H¹} / (‖u‖²_{H¹} (N+1))`
//! * `trace_ratio`: `sup uᵀB₀u / uᵀAu` with the unprojected `B₀` (diagnostic)

use super::eigen::{rayleigh_sup, rayleigh_sup_factored, EigenSolution};
use crate::error::{param, Error, Result};
use crate::forms::{
    h1_form, mass_form, point_eval_form, projection_form, trace_form, AssemblyOptions,
    SymmetricForm,
};
use crate::simplex::Boundary;
use nalgebra::{Cholesky, DMatrix, DVector};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstantKind {
    Mult,
    Add,
    H1Stability,
    TraceRatio,
}

impl ConstantKind {
    pub const ALL: [ConstantKind; 4] = [
        ConstantKind::Mult,
        ConstantKind::Add,
        ConstantKind::H1Stability,
        ConstantKind::TraceRatio,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ConstantKind::Mult => "mult",
            ConstantKind::Add => "add",
            ConstantKind::H1Stability => "h1_stability",
            ConstantKind::TraceRatio => "trace_ratio",
        }
    }
}

impl fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "mult" => Ok(ConstantKind::Mult),
            "add" | "add_h1_denominator" => Ok(ConstantKind::Add),
            "h1_stability" | "h1" => Ok(ConstantKind::H1Stability),
            "trace_ratio" => Ok(ConstantKind::TraceRatio),
            other => param(format!("unknown constant kind '{other}'")),
        }
    }
}

/// One row of a constants table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantRecord {
    pub dim: usize,
    pub n: usize,
    pub kind: ConstantKind,
    pub value: f64,
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    pub assembly: AssemblyOptions,
    /// Relative tolerance on the multiplier ratio `r`.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            assembly: AssemblyOptions::default(),
            tol: 1e-12,
            max_iterations: 200,
        }
    }
}

/// Outcome of the multiplicative fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct MultSolution {
    /// `Q(v)` evaluated directly from the three forms.
    pub value: f64,
    /// `λ_max(2B, rM + A/r)` at the final ratio.
    pub eigen_value: f64,
    pub ratio: f64,
    pub iterations: usize,
    /// `|r_{k+1} − r_k| / r_k` at exit.
    pub residual: f64,
    pub vector: DVector<f64>,
}

fn quad(a: &DMatrix<f64>, v: &DVector<f64>) -> f64 {
    v.dot(&(a * v))
}

/// `uᵀBu / √(uᵀMu · uᵀAu)`.
pub fn mult_quotient(
    b: &SymmetricForm,
    m: &SymmetricForm,
    a: &SymmetricForm,
    v: &DVector<f64>,
) -> f64 {
    quad(b.matrix(), v) / (quad(m.matrix(), v) * quad(a.matrix(), v)).sqrt()
}

/// Generalized eigen solve with `b` as numerator, using its factor if known.
pub fn form_sup(b: &SymmetricForm, g: &DMatrix<f64>) -> Result<EigenSolution> {
    match b.factor() {
        Some(w) => rayleigh_sup_factored(w, g),
        None => rayleigh_sup(b.matrix(), g),
    }
}

/// Maximize `Q(u) = uᵀBu/√(uᵀMu · uᵀAu)`.
///
/// For a ratio `r > 0`, `2√(ab) ≤ ra + b/r` gives
/// `λ(r) := λ_max(2B, rM + A/r) ≤ sup Q`, with equality at the stationary
/// ratio `r = √(vᵀAv / vᵀMv)` of the maximizer `v`. The fixed point
/// `r ↦ √(vᵀAv/vᵀMv)` is iterated in `s = ln r` with secant acceleration,
/// falling back to the plain update whenever the secant step misbehaves.
pub fn multiplicative_from_forms(
    b: &SymmetricForm,
    m: &SymmetricForm,
    a: &SymmetricForm,
    settings: &SolverSettings,
) -> Result<MultSolution> {
    let n = b.len();
    if m.len() != n || a.len() != n {
        return param("forms live on different bases");
    }
    let (mm, am) = (m.matrix(), a.matrix());
    let ratio_of = |v: &DVector<f64>| (quad(am, v) / quad(mm, v)).sqrt();

    let start = form_sup(b, am)?;
    let mut r = ratio_of(&start.vector);
    if !(r.is_finite() && r > 0.0) {
        r = 1.0;
    }

    // (r, λ(r), best candidate, r_next)
    let eval = |r: f64| -> Result<(f64, DVector<f64>, f64)> {
        let g = mm * r + am / r;
        let sol = form_sup(b, &g)?;
        let v = sol
            .candidates
            .iter()
            .max_by(|x, y| mult_quotient(b, m, a, x).total_cmp(&mult_quotient(b, m, a, y)))
            .cloned()
            .unwrap_or(sol.vector);
        let next = ratio_of(&v);
        Ok((2.0 * sol.lambda_max, v, next))
    };

    let mut prev: Option<(f64, f64)> = None;
    let mut best: Option<(f64, f64)> = None;
    let mut last_residual = f64::INFINITY;
    for it in 1..=settings.max_iterations {
        let (lam, v, next) = eval(r)?;
        let residual = (next - r).abs() / r;
        let q = mult_quotient(b, m, a, &v);
        if best.is_none_or(|(bq, _)| q > bq) {
            best = Some((q, residual));
        }
        last_residual = residual;
        if residual <= settings.tol {
            return Ok(MultSolution {
                value: q,
                eigen_value: lam,
                ratio: r,
                iterations: it,
                residual,
                vector: v,
            });
        }
        let s = r.ln();
        let f = next.ln() - s;
        let plain = next.ln();
        let mut s_new = plain;
        if let Some((s0, f0)) = prev {
            if f != f0 {
                let cand = s - f * (s - s0) / (f - f0);
                if cand.is_finite() && (cand - s).abs() <= 2.0 {
                    s_new = cand;
                }
            }
        }
        prev = Some((s, f));
        r = s_new.exp();
    }
    let (best_value, _) = best.unwrap_or((f64::NAN, f64::NAN));
    Err(Error::NoConvergence {
        iterations: settings.max_iterations,
        best_value,
        residual: last_residual,
    })
}

/// The forms of one `(dim, N)` problem, assembled over `P_{2N}`.
#[derive(Debug, Clone)]
pub struct ConstantProblem {
    pub dim: usize,
    pub n: usize,
    pub mass: SymmetricForm,
    pub h1: SymmetricForm,
    /// Trace (2D) or point-evaluation (1D) form, not projected.
    pub numerator: SymmetricForm,
    /// `numerator ∘ Π_N`.
    pub projected: SymmetricForm,
}

impl ConstantProblem {
    pub fn assemble(dim: usize, n: usize, opts: &AssemblyOptions) -> Result<Self> {
        if n < 1 {
            return param("N must be at least 1");
        }
        let m = 2 * n;
        let numerator = match dim {
            1 => point_eval_form(m)?,
            2 => trace_form(m, 2, Boundary::Bottom, opts)?,
            _ => return param("constants are defined for dim 1 and 2"),
        };
        let projected = projection_form(&numerator, n)?;
        Ok(Self {
            dim,
            n,
            mass: mass_form(m, dim, opts)?,
            h1: h1_form(m, dim, opts)?,
            numerator,
            projected,
        })
    }

    fn record(
        &self,
        kind: ConstantKind,
        value: f64,
        iterations: usize,
        residual: f64,
    ) -> ConstantRecord {
        ConstantRecord {
            dim: self.dim,
            n: self.n,
            kind,
            value,
            iterations,
            residual,
        }
    }

    pub fn additive(&self) -> Result<ConstantRecord> {
        let s = form_sup(&self.projected, self.h1.matrix())?;
        Ok(self.record(ConstantKind::Add, s.lambda_max, 1, s.ortho_residual))
    }

    pub fn trace_ratio(&self) -> Result<ConstantRecord> {
        let s = form_sup(&self.numerator, self.h1.matrix())?;
        Ok(self.record(ConstantKind::TraceRatio, s.lambda_max, 1, s.ortho_residual))
    }

    /// `λ_max(PᵀAP, A)/(N+1)`, with `PᵀAP = W Wᵀ`, `W = [L₁₁; 0]` and
    /// `A₁₁ = L₁₁ L₁₁ᵀ` the leading `P_N` block.
    pub fn h1_stability(&self) -> Result<ConstantRecord> {
        let a = self.h1.matrix();
        let k = self.h1.basis().prefix_len(self.n);
        let a11 = a.view((0, 0), (k, k)).into_owned();
        let l11 = Cholesky::new(a11)
            .ok_or(Error::NotPositiveDefinite {
                dim: k,
                min_diagonal: f64::NAN,
                diagonal_ratio: f64::NAN,
            })?
            .l();
        let mut w = DMatrix::zeros(a.nrows(), k);
        w.view_mut((0, 0), (k, k)).copy_from(&l11);
        let s = rayleigh_sup_factored(&w, a)?;
        Ok(self.record(
            ConstantKind::H1Stability,
            s.lambda_max / (self.n as f64 + 1.0),
            1,
            s.ortho_residual,
        ))
    }

    pub fn multiplicative(&self, settings: &SolverSettings) -> Result<MultSolution> {
        multiplicative_from_forms(&self.projected, &self.mass, &self.h1, settings)
    }

    pub fn solve(&self, kind: ConstantKind, settings: &SolverSettings) -> Result<ConstantRecord> {
        match kind {
            ConstantKind::Mult => {
                let s = self.multiplicative(settings)?;
                Ok(self.record(kind, s.value, s.iterations, s.residual))
            }
            ConstantKind::Add => self.additive(),
            ConstantKind::H1Stability => self.h1_stability(),
            ConstantKind::TraceRatio => self.trace_ratio(),
        }
    }
}

/// Assemble once and solve every requested kind, in the order given.
pub fn compute_constants(
    dim: usize,
    n: usize,
    kinds: &[ConstantKind],
    settings: &SolverSettings,
) -> Result<Vec<ConstantRecord>> {
    let problem = ConstantProblem::assemble(dim, n, &settings.assembly)?;
    kinds.iter().map(|k| problem.solve(*k, settings)).collect()
}

pub fn additive_constant(
    n: usize,
    dim: usize,
    settings: &SolverSettings,
) -> Result<ConstantRecord> {
    ConstantProblem::assemble(dim, n, &settings.assembly)?.additive()
}

pub fn multiplicative_constant(
    n: usize,
    dim: usize,
    settings: &SolverSettings,
) -> Result<ConstantRecord> {
    ConstantProblem::assemble(dim, n, &settings.assembly)?.solve(ConstantKind::Mult, settings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kinds_round_trip() {
        for k in ConstantKind::ALL {
            assert_eq!(k.as_str().parse::<ConstantKind>().unwrap(), k);
        }
        assert_eq!(
            "add_h1_denominator".parse::<ConstantKind>().unwrap(),
            ConstantKind::Add
        );
        assert!("nope".parse::<ConstantKind>().is_err());
    }

    #[test]
    fn one_dimensional_first_row() {
        let s = SolverSettings::default();
        let p = ConstantProblem::assemble(1, 1, &s.assembly).unwrap();
        assert_relative_eq!(p.additive().unwrap().value, 0.875, epsilon = 1e-12);
        let m = p.multiplicative(&s).unwrap();
        // P_2 is small enough to maximize in closed form with exact arithmetic
        assert_relative_eq!(m.value, 1.181849168039031, epsilon = 1e-13);
        assert_relative_eq!(m.value, m.eigen_value, epsilon = 1e-10);
    }

    #[test]
    fn two_dimensional_first_row() {
        let s = SolverSettings::default();
        let p = ConstantProblem::assemble(2, 1, &s.assembly).unwrap();
        assert_relative_eq!(
            p.multiplicative(&s).unwrap().value,
            1.841709179979923,
            epsilon = 1e-9
        );
        assert_relative_eq!(
            p.additive().unwrap().value,
            1.471718130438879,
            epsilon = 1e-9
        );
        assert_relative_eq!(
            p.h1_stability().unwrap().value,
            0.630765682656827,
            epsilon = 1e-9
        );
    }

    #[test]
    fn h1_stability_matches_dense_route() {
        let p = ConstantProblem::assemble(2, 2, &AssemblyOptions::default()).unwrap();
        let proj = projection_form(&p.h1, 2).unwrap();
        let dense = rayleigh_sup(proj.matrix(), p.h1.matrix()).unwrap();
        assert_relative_eq!(
            dense.lambda_max / 3.0,
            p.h1_stability().unwrap().value,
            max_relative = 1e-11
        );
    }
}
