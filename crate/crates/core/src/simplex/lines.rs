//! Reduction of a tetrahedral expansion to one-dimensional functions of `η₃`.
//!
//! For fixed `(p, q)`, with `k = p + q` and `n = 2k + 2`:
//!
//! ```text
//! U_pq(η₃)  = ∫∫ ũ(η) P_p(η₁) P_q^{(2p+1,0)}(η₂) ((1−η₂)/2)^{p+1} dη₁ dη₂
//! Ũ_pq(η₃)  = U_pq(η₃) / (1−η₃)^k
//! ũ_pqr     = ∫ (1−η₃)^n Ũ_pq P_r^{(n,0)} dη₃
//! ũ′_pqr    = ∫ (1−η₃)^n Ũ′_pq P_r^{(n,0)} dη₃
//! ```
//!
//! so that `u_pqr = 2^{−(k+2)} ũ_pqr`.

use super::{dubiner_eval_eta, duffy_map, CubeRule, SimplexIndex};
use crate::error::{param, Error, Result};
use crate::field::ScalarField;
use crate::identities::factors;
use crate::jacobi::{self, gauss_legendre, points_for_degree, JacobiWeight, QuadratureRule};

/// `U_pq`, `Ũ_pq` and their coefficients for one `(p, q)` and a fixed field.
pub struct LineFunctions<'a, F: ScalarField + ?Sized> {
    field: &'a F,
    p: usize,
    q: usize,
    degree: usize,
    inner: QuadratureRule,
}

impl<'a, F: ScalarField + ?Sized> LineFunctions<'a, F> {
    /// `degree` is the polynomial degree of the field; integrals are exact up
    /// to roundoff when the field is a polynomial of that degree.
    pub fn new(field: &'a F, p: usize, q: usize, degree: usize) -> Result<Self> {
        if field.dim() != 3 {
            return param("line functions are defined for fields on the tetrahedron");
        }
        let inner = gauss_legendre(points_for_degree(degree + p + q + 2, 2))?;
        Ok(Self {
            field,
            p,
            q,
            degree,
            inner,
        })
    }

    fn k(&self) -> usize {
        self.p + self.q
    }

    /// `(U_pq(η₃), U′_pq(η₃))`.
    pub fn values(&self, eta3: f64) -> Result<(f64, f64)> {
        let wq = JacobiWeight::one_sided(2 * self.p as u32 + 1);
        let leg = JacobiWeight::legendre();
        let mut u = 0.0;
        let mut du = 0.0;
        for (e1, w1) in self.inner.iter() {
            let lp = jacobi::eval(self.p, leg, e1);
            for (e2, w2) in self.inner.iter() {
                let d = duffy_map(&[e1, e2, eta3])?;
                let weight = w1
                    * w2
                    * lp
                    * jacobi::eval(self.q, wq, e2)
                    * ((1.0 - e2) / 2.0).powi(self.p as i32 + 1);
                let g = self.field.gradient(&d.xi);
                // ∂ξ/∂η₃ is the last column of D′
                let j = d.jacobian();
                let dz = j[(0, 2)] * g[0] + j[(1, 2)] * g[1] + g[2];
                u += weight * self.field.value(&d.xi);
                du += weight * dz;
            }
        }
        Ok((u, du))
    }

    pub fn u(&self, eta3: f64) -> Result<f64> {
        Ok(self.values(eta3)?.0)
    }

    /// `Ũ_pq(η₃)`; singular at `η₃ = 1` unless `p = q = 0`.
    pub fn u_tilde(&self, eta3: f64) -> Result<f64> {
        let m = 1.0 - eta3;
        if m <= 0.0 && self.k() > 0 {
            return Err(Error::Singular(format!(
                "U~_{{{},{}}} is not defined at eta3 = 1",
                self.p, self.q
            )));
        }
        Ok(self.u(eta3)? / m.powi(self.k() as i32))
    }

    /// `Ũ′_pq(η₃) = U′/(1−η₃)^k + k U/(1−η₃)^{k+1}`.
    pub fn u_tilde_prime(&self, eta3: f64) -> Result<f64> {
        let m = 1.0 - eta3;
        let k = self.k() as i32;
        if m <= 0.0 && k > 0 {
            return Err(Error::Singular(format!(
                "U~'_{{{},{}}} is not defined at eta3 = 1",
                self.p, self.q
            )));
        }
        let (u, du) = self.values(eta3)?;
        Ok(du / m.powi(k)
            + if k > 0 {
                k as f64 * u / m.powi(k + 1)
            } else {
                0.0
            })
    }

    fn outer(&self, r: usize) -> Result<QuadratureRule> {
        gauss_legendre(points_for_degree(self.degree + self.k() + 2 + r, 2))
    }

    /// `ũ_pqr`, integrated as `∫ (1−η₃)^{k+2} U_pq P_r`.
    pub fn coeff(&self, r: usize) -> Result<f64> {
        let w = JacobiWeight::one_sided(2 * self.k() as u32 + 2);
        let k = self.k() as i32;
        let mut acc = 0.0;
        for (z, wt) in self.outer(r)?.iter() {
            acc += wt * (1.0 - z).powi(k + 2) * self.u(z)? * jacobi::eval(r, w, z);
        }
        Ok(acc)
    }

    /// `ũ′_pqr`, integrated as `∫ [(1−η₃)^{k+2} U′ + k (1−η₃)^{k+1} U] P_r`.
    pub fn coeff_prime(&self, r: usize) -> Result<f64> {
        let w = JacobiWeight::one_sided(2 * self.k() as u32 + 2);
        let k = self.k() as i32;
        let mut acc = 0.0;
        for (z, wt) in self.outer(r)?.iter() {
            let (u, du) = self.values(z)?;
            let m = 1.0 - z;
            acc += wt * (m.powi(k + 2) * du + k as f64 * m.powi(k + 1) * u) * jacobi::eval(r, w, z);
        }
        Ok(acc)
    }
}

/// Both sides of the finite-sum identity for the `r`-tail of the trace sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSum {
    /// `Σ_{r≥N} (−1)^r 2^n/γ_r^{(n,0)} u_pqr`, summed until three consecutive
    /// terms fall below `1e−14`.
    pub tail: f64,
    /// The three-term form in `ũ′_{pq,N−1}` and `ũ′_{pq,N}`.
    pub short: f64,
    /// Number of tail terms summed.
    pub terms: usize,
}

/// `u_pqr = ∫_{T³} f ψ_pqr` by tetrahedral quadrature, independent of the
/// line functions.
fn tet_coefficient<F: ScalarField + ?Sized>(
    f: &F,
    idx: SimplexIndex,
    degree: usize,
) -> Result<f64> {
    let rule = CubeRule::for_degree(3, degree + idx.degree(), 2)?;
    let mut acc = 0.0;
    for i in 0..rule.len() {
        acc += rule.weight(i) * f.value(rule.xi(i)) * dubiner_eval_eta(idx, rule.eta(i))?;
    }
    Ok(acc)
}

pub fn trace_coefficient_sum<F: ScalarField + ?Sized>(
    f: &F,
    degree: usize,
    p: usize,
    q: usize,
    n_start: usize,
) -> Result<TraceSum> {
    if n_start < 1 {
        return param("the finite-sum identity needs N >= 1");
    }
    let n = 2 * (p + q) + 2;
    let nf = n as f64;
    let mut tail = 0.0;
    let mut small = 0;
    let mut terms = 0;
    let mut r = n_start;
    while small < 3 {
        if r > n_start + degree + 200 {
            return Err(Error::NoConvergence {
                iterations: terms,
                best_value: tail,
                residual: f64::NAN,
            });
        }
        let u = tet_coefficient(f, SimplexIndex::new(p, q, r), degree)?;
        let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
        let term = sign * (2.0 * r as f64 + nf + 1.0) / 2.0 * u;
        tail += term;
        terms += 1;
        small = if term.abs() < 1e-14 { small + 1 } else { 0 };
        r += 1;
    }

    let lines = LineFunctions::new(f, p, q, degree)?;
    // 2^{p+q}/γ_r^{(n,0)}
    let c = |r: usize| {
        2f64.powi((p + q) as i32) * (2.0 * r as f64 + nf + 1.0) / 2f64.powi(n as i32 + 1)
    };
    let sgn = |r: usize| if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    let big_n = n_start;
    let nu = n as u32;
    let mut short = sgn(big_n) * factors(big_n, nu)?.h2 * c(big_n) * lines.coeff_prime(big_n)?;
    for r in big_n - 1..=big_n {
        short += -sgn(r) * factors(r + 1, nu)?.h3 * c(r + 1) * lines.coeff_prime(r)?;
    }
    Ok(TraceSum { tail, short, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Polynomial;
    use crate::simplex::analyze;
    use crate::simplex::enumerate_basis;
    use approx::assert_relative_eq;

    #[test]
    fn constant_field_line() {
        let one = Polynomial::zero(3).term(1.0, &[]);
        let l = LineFunctions::new(&one, 0, 0, 0).unwrap();
        for z in [-1.0, 0.0, 0.5, 1.0] {
            assert_relative_eq!(l.u(z).unwrap(), 2.0, epsilon = 1e-14);
            assert_relative_eq!(l.u_tilde(z).unwrap(), 2.0, epsilon = 1e-14);
        }
        let l = LineFunctions::new(&one, 1, 0, 0).unwrap();
        assert!(matches!(l.u_tilde(1.0), Err(Error::Singular(_))));
    }

    #[test]
    fn lines_vanish_at_top_and_rescale_coefficients() {
        let f = Polynomial::zero(3)
            .term(1.0, &[1, 1])
            .term(-2.0, &[0, 2, 1])
            .term(0.5, &[3])
            .term(1.5, &[0, 0, 2]);
        let b = enumerate_basis(4, 3).unwrap();
        let c = analyze(|x| f.eval(x), &b, 3).unwrap();
        for (k, idx) in b.indices().iter().enumerate() {
            let l = LineFunctions::new(&f, idx.p, idx.q, 3).unwrap();
            if idx.p + idx.q > 0 {
                assert!(l.u(1.0).unwrap().abs() < 1e-13);
            }
            let scaled = l.coeff(idx.r).unwrap() / 2f64.powi((idx.p + idx.q + 2) as i32);
            assert_relative_eq!(scaled, c[k], epsilon = 1e-13);
        }
    }

    #[test]
    fn finite_sum_examples() {
        let cube = Polynomial::zero(3).term(1.0, &[0, 0, 3]);
        let s = trace_coefficient_sum(&cube, 3, 0, 0, 1).unwrap();
        assert!((s.tail - s.short).abs() < 1e-10, "{s:?}");
        assert!(s.tail.abs() > 1e-3);
        let lin = Polynomial::zero(3).term(1.0, &[1]).term(2.0, &[0, 0, 1]);
        let s = trace_coefficient_sum(&lin, 1, 1, 0, 3).unwrap();
        assert!(s.tail.abs() < 1e-13 && s.short.abs() < 1e-13);
        assert!(trace_coefficient_sum(&lin, 1, 0, 0, 0).is_err());
    }
}
