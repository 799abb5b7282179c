//! Coefficient factors `h₁, h₂, h₃, g₁, g₂, g₃` relating one-sided Jacobi
//! polynomials to their derivatives and antiderivatives, the connection formula
//! between the expansion of a function and that of its derivative, and numeric
//! sweeps that check every exact identity and inequality built on them.
//!
//! Several identities carry `1/γ_q^{(α,0)} = (2q+α+1)/2^{α+1}`. The common
//! `2^{α+1}` cancels within each identity, so the sweeps work with
//! `(2q+α+1)` directly and never form `2^{α+1}` for large `α`.

use crate::error::{param, Error, Result};
use crate::field::Polynomial;
use crate::jacobi::{self, gauss_jacobi, gauss_legendre, points_for_degree, JacobiWeight};
use crate::report::{rel_diff, violation, SuiteReport};

/// The six factors at a fixed `(q, α)`.
///
/// The `g` factors are absent when one of their denominators vanishes
/// (`2q+α ∈ {0, 1, 2}`); the `h` factors always exist for `q, α ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorTable {
    pub q: usize,
    pub alpha: u32,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    g: Option<[f64; 3]>,
}

impl FactorTable {
    fn g(&self, i: usize) -> Result<f64> {
        self.g.map(|g| g[i]).ok_or_else(|| {
            Error::Domain(format!(
                "g-factors undefined at q={}, alpha={} (vanishing denominator)",
                self.q, self.alpha
            ))
        })
    }

    pub fn g1(&self) -> Result<f64> {
        self.g(0)
    }

    pub fn g2(&self) -> Result<f64> {
        self.g(1)
    }

    pub fn g3(&self) -> Result<f64> {
        self.g(2)
    }
}

/// Additive offset applied to `h₂`, used to check that the sweeps catch a
/// corrupted factor.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Perturbation {
    pub h2: f64,
}

/// Factors at `(q, α)`:
///
/// ```text
/// h₁ = −2(q+1) / ((2q+α+1)(2q+α+2))      g₁ = (2q+2α) / ((2q+α−1)(2q+α))
/// h₂ =  2α     / ((2q+α+2)(2q+α))        g₂ = 2α      / ((2q+α−2)(2q+α))
/// h₃ =  2(q+α) / ((2q+α+1)(2q+α))        g₃ = −(2q−2) / ((2q+α−1)(2q+α−2))
/// ```
///
/// At `q = α = 0` the `h₂` numerator vanishes and `h₃` reduces to `1/(2q+1)`.
pub fn factors(q: usize, alpha: u32) -> Result<FactorTable> {
    factors_perturbed(q, alpha, Perturbation::default())
}

pub(crate) fn factors_perturbed(q: usize, alpha: u32, tweak: Perturbation) -> Result<FactorTable> {
    let (qf, a) = (q as f64, alpha as f64);
    let s = 2.0 * qf + a;
    let h1 = -2.0 * (qf + 1.0) / ((s + 1.0) * (s + 2.0));
    let (h2, h3) = if alpha == 0 {
        (0.0, 1.0 / (2.0 * qf + 1.0))
    } else {
        (2.0 * a / ((s + 2.0) * s), 2.0 * (qf + a) / ((s + 1.0) * s))
    };
    let g = (2 * q + alpha as usize > 2).then(|| {
        [
            (2.0 * qf + 2.0 * a) / ((s - 1.0) * s),
            2.0 * a / ((s - 2.0) * s),
            -(2.0 * qf - 2.0) / ((s - 1.0) * (s - 2.0)),
        ]
    });
    if !(h1.is_finite() && h2.is_finite() && h3.is_finite()) {
        return Err(Error::Domain(format!(
            "h-factors undefined at q={q}, alpha={alpha}"
        )));
    }
    Ok(FactorTable {
        q,
        alpha,
        h1,
        h2: h2 + tweak.h2,
        h3,
        g,
    })
}

/// `2^{α+1} / γ_q^{(α,0)} = 2q+α+1`.
fn inv_gamma_scaled(q: usize, alpha: u32) -> f64 {
    2.0 * q as f64 + alpha as f64 + 1.0
}

/// Reports for the three exact factor-identity families.
#[derive(Debug, Clone)]
pub struct FactorIdentityReport {
    /// `g_i(q+1,α)/γ_q` against the matching `h`-ratio.
    pub ratio: SuiteReport,
    /// `Σ (−1)^{q+k} h_{k+1}(q+k,α)/γ_{q+k} = 0`, `k = 0, 1, 2`.
    pub cancellation: SuiteReport,
    /// `h₂ − h₁ = h₃`.
    pub h_sum: SuiteReport,
}

impl FactorIdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.ratio
            .max_residual
            .max(self.cancellation.max_residual)
            .max(self.h_sum.max_residual)
    }

    pub fn into_vec(self) -> Vec<SuiteReport> {
        vec![self.ratio, self.cancellation, self.h_sum]
    }
}

/// Check the ratio identities, the alternating cancellation and `h₂−h₁=h₃`
/// for `1 ≤ q ≤ q_max`, `0 ≤ α ≤ alpha_max`.
pub fn verify_factor_identities(q_max: usize, alpha_max: u32) -> Result<FactorIdentityReport> {
    verify_factor_identities_with(q_max, alpha_max, Perturbation::default())
}

pub fn verify_factor_identities_with(
    q_max: usize,
    alpha_max: u32,
    tweak: Perturbation,
) -> Result<FactorIdentityReport> {
    if q_max < 2 {
        return param("q_max must be at least 2");
    }
    let tol = 1e-13;
    let mut ratio = SuiteReport::new("ratio-identities", tol);
    let mut cancellation = SuiteReport::new("cancellation", tol);
    let mut h_sum = SuiteReport::new("h-sum", tol);
    let f = |q, a| factors_perturbed(q, a, tweak);
    for alpha in 0..=alpha_max {
        let c = |q| inv_gamma_scaled(q, alpha);
        for q in 0..=q_max {
            let t = f(q, alpha)?;
            h_sum.record(rel_diff(t.h2 - t.h1, t.h3, 1e-300), || {
                format!("q={q} alpha={alpha}")
            });
            if q == 0 {
                continue;
            }
            let next = f(q + 1, alpha)?;
            let lhs = [next.g1()? * c(q), next.g2()? * c(q), next.g3()? * c(q)];
            let rhs = [
                next.h3 * c(q + 1),
                t.h2 * c(q),
                f(q - 1, alpha)?.h1 * c(q - 1),
            ];
            for (l, r) in lhs.iter().zip(&rhs) {
                ratio.record(rel_diff(*l, *r, 1e-300), || format!("q={q} alpha={alpha}"));
            }
            let terms = [
                c(q) * t.h1,
                -c(q + 1) * next.h2,
                c(q + 2) * f(q + 2, alpha)?.h3,
            ];
            let scale = terms.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let sum: f64 = terms.iter().sum();
            cancellation.record(sum.abs() / scale, || format!("q={q} alpha={alpha}"));
        }
    }
    Ok(FactorIdentityReport {
        ratio,
        cancellation,
        h_sum,
    })
}

/// `u_q = h₁(q,α) b_{q+1} + h₂(q,α) b_q + h₃(q,α) b_{q−1}` for `1 ≤ q ≤ len−2`.
///
/// The relation says nothing about `q = 0` or the last entry, so those slots
/// stay `None`.
pub fn connect_coefficients(b: &[f64], alpha: u32) -> Result<Vec<Option<f64>>> {
    connect_coefficients_with(b, alpha, Perturbation::default())
}

pub(crate) fn connect_coefficients_with(
    b: &[f64],
    alpha: u32,
    tweak: Perturbation,
) -> Result<Vec<Option<f64>>> {
    if b.len() < 3 {
        return param("connection formula needs at least three coefficients");
    }
    let mut u = vec![None; b.len()];
    for q in 1..b.len() - 1 {
        let t = factors_perturbed(q, alpha, tweak)?;
        u[q] = Some(t.h1 * b[q + 1] + t.h2 * b[q] + t.h3 * b[q - 1]);
    }
    Ok(u)
}

/// Weighted moments `∫ (1−x)^α f(x) P_q^{(α,0)}(x) dx` for `q < count`.
///
/// `f_degree` is the polynomial degree of `f`; the Gauss–Jacobi rule is sized
/// so the moments are exact for polynomial `f`.
pub fn jacobi_moments(
    f: impl Fn(f64) -> f64,
    alpha: u32,
    count: usize,
    f_degree: usize,
) -> Result<Vec<f64>> {
    let w = JacobiWeight::one_sided(alpha);
    let rule = gauss_jacobi(points_for_degree(f_degree + count, 2), w)?;
    let mut acc = vec![0.0; count];
    for (x, wt) in rule.iter() {
        let p = jacobi::eval_all(count.saturating_sub(1), w, x);
        let fx = wt * f(x);
        for (a, pq) in acc.iter_mut().zip(&p) {
            *a += fx * pq;
        }
    }
    Ok(acc)
}

/// Expansion coefficients of `U` and of `U′` against `P_q^{(α,0)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPair {
    pub u: Vec<f64>,
    pub b: Vec<f64>,
    pub alpha: u32,
}

impl CoefficientPair {
    /// Both sequences truncated at the common length `len`.
    pub fn from_polynomial(poly: &Polynomial, alpha: u32, len: usize) -> Result<Self> {
        let d = poly.derivative(0);
        let deg = poly.degree();
        Ok(Self {
            u: jacobi_moments(|x| poly.eval(&[x]), alpha, len, deg)?,
            b: jacobi_moments(|x| d.eval(&[x]), alpha, len, deg.saturating_sub(1))?,
            alpha,
        })
    }

    /// `Σ u_q² / γ_q`.
    pub fn parseval_u(&self) -> f64 {
        parseval(&self.u, self.alpha)
    }

    /// `Σ b_q² / γ_q`.
    pub fn parseval_b(&self) -> f64 {
        parseval(&self.b, self.alpha)
    }
}

fn parseval(c: &[f64], alpha: u32) -> f64 {
    let w = JacobiWeight::one_sided(alpha);
    c.iter()
        .enumerate()
        .map(|(q, v)| v * v / jacobi::norm_sq(q, w))
        .sum()
}

/// Fixed univariate corpus for the connection and coefficient-bound sweeps.
pub fn connection_corpus() -> Vec<Polynomial> {
    [
        &[0.0, 0.0, 0.0, 1.0][..],
        &[1.0, -2.0, 1.0],
        &[1.0, 1.0],
        &[0.5, 0.0, -1.0, 0.0, 1.0],
        &[1.0, 1.0, -1.0, -1.0],
        &[0.0, 1.0, 0.0, -3.0, 0.0, 2.0],
        &[0.3, -1.7, 2.2, 0.9, -1.1, 0.0, 0.4],
        &[0.0, 0.0, 1.0, -3.0, 3.0, -1.0],
        &[1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0],
        &[1.0, 0.0, 0.0, 0.0, -4.0, 0.0, 0.0, 0.0, 5.0],
    ]
    .iter()
    .map(|c| Polynomial::from_coeffs(c))
    .collect()
}

/// Connection formula against independently computed `u_q` and `b_q`.
pub fn verify_connection(
    corpus: &[Polynomial],
    alpha_max: u32,
    tweak: Perturbation,
) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("connection", 1e-12);
    for (k, poly) in corpus.iter().enumerate() {
        for alpha in 0..=alpha_max {
            let pair = CoefficientPair::from_polynomial(poly, alpha, poly.degree() + 4)?;
            let conn = connect_coefficients_with(&pair.b, alpha, tweak)?;
            let scale = pair.u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (q, c) in conn.iter().enumerate() {
                if let Some(c) = c {
                    rep.record((pair.u[q] - c).abs() / scale, || {
                        format!("poly#{k} alpha={alpha} q={q}")
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// `|b_{q−1}|² + |b_q|² ≤ C 2^{α+1} (Σ_{j≥q} u_j²/γ_j)^{1/2} (Σ_{j≥q−1} b_j²/γ_j)^{1/2}`
/// with `C = 10`, on the polynomial corpus.
pub fn verify_coefficient_bound(corpus: &[Polynomial], alpha_max: u32) -> Result<SuiteReport> {
    const C: f64 = 10.0;
    let mut rep = SuiteReport::new("coefficient-bound", 1e-10);
    for (k, poly) in corpus.iter().enumerate() {
        for alpha in 0..=alpha_max {
            let pair = CoefficientPair::from_polynomial(poly, alpha, poly.degree() + 4)?;
            let w = JacobiWeight::one_sided(alpha);
            let weighted = |c: &[f64], from: usize| -> f64 {
                (from..c.len())
                    .map(|j| c[j] * c[j] / jacobi::norm_sq(j, w))
                    .sum()
            };
            for q in 1..pair.b.len() {
                let lhs = pair.b[q - 1].powi(2) + pair.b[q].powi(2);
                let rhs = C
                    * 2f64.powi(alpha as i32 + 1)
                    * weighted(&pair.u, q).sqrt()
                    * weighted(&pair.b, q - 1).sqrt();
                rep.record(violation(lhs, rhs), || {
                    format!("poly#{k} alpha={alpha} q={q}")
                });
            }
        }
    }
    Ok(rep)
}

fn sample_points(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| -1.0 + 2.0 * (k as f64 + 0.5) / n as f64)
}

/// Pointwise checks of the three antiderivative/derivative relations:
///
/// * `∫_{−1}^x (1−t)^α P_q = −(1−x)^α (h₁ P_{q+1} + h₂ P_q + h₃ P_{q−1})`
/// * `P̂_q = g₁ P_q + g₂ P_{q−1} + g₃ P_{q−2}` (through [`jacobi::antideriv`])
/// * `P_q/γ_q = h₁(q−1)/γ_{q−1} P′_{q−1} + h₂(q)/γ_q P′_q + h₃(q+1)/γ_{q+1} P′_{q+1}`
///
/// at 20 points for `1 ≤ q ≤ q_max`, `α ≤ alpha_max`.
pub fn verify_antiderivative_relations(
    q_max: usize,
    alpha_max: u32,
    tweak: Perturbation,
) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("antiderivative", 1e-10);
    for alpha in 0..=alpha_max {
        let w = JacobiWeight::one_sided(alpha);
        let a = alpha as f64;
        for q in 1..=q_max {
            let t = factors_perturbed(q, alpha, tweak)?;
            let rule = gauss_legendre(points_for_degree(q + alpha as usize, 2))?;
            let c = |k| inv_gamma_scaled(k, alpha);
            let tm = factors_perturbed(q - 1, alpha, tweak)?;
            let tp = factors_perturbed(q + 1, alpha, tweak)?;
            for x in sample_points(20) {
                let p = jacobi::eval_all(q + 1, w, x);
                let dp = jacobi::deriv_all(q + 1, w, x);

                let (nodes, weights) = rule.mapped(-1.0, x);
                let lhs: f64 = nodes
                    .iter()
                    .zip(&weights)
                    .map(|(t, wt)| wt * (1.0 - t).powf(a) * jacobi::eval(q, w, *t))
                    .sum();
                let rhs = -(1.0 - x).powf(a) * (t.h1 * p[q + 1] + t.h2 * p[q] + t.h3 * p[q - 1]);
                rep.record((lhs - rhs).abs() / lhs.abs().max(1.0), || {
                    format!("(i) q={q} alpha={alpha} x={x:.3}")
                });

                let lhs = c(q) * p[q];
                let rhs = tm.h1 * c(q - 1) * dp[q - 1]
                    + t.h2 * c(q) * dp[q]
                    + tp.h3 * c(q + 1) * dp[q + 1];
                rep.record((lhs - rhs).abs() / lhs.abs().max(1.0), || {
                    format!("(iii) q={q} alpha={alpha} x={x:.3}")
                });

                if q >= 2 {
                    let direct = gauss_legendre(points_for_degree(q, 2))?;
                    let (n2, w2) = direct.mapped(-1.0, x);
                    let quad: f64 = n2
                        .iter()
                        .zip(&w2)
                        .map(|(t, wt)| wt * jacobi::eval(q - 1, w, *t))
                        .sum();
                    let anti = jacobi::antideriv(q, alpha, x)?;
                    rep.record((quad - anti).abs() / quad.abs().max(1.0), || {
                        format!("(ii) q={q} alpha={alpha} x={x:.3}")
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// `I_q² = ∫(1−x)^α |P_q^{(α,0)′}|²` by Gauss–Jacobi quadrature.
pub fn derivative_norm_sq(q: usize, alpha: u32) -> Result<f64> {
    if q == 0 {
        return Ok(0.0);
    }
    let w = JacobiWeight::one_sided(alpha);
    let rule = gauss_jacobi(q + 2, w)?;
    Ok(rule.integrate(|x| jacobi::deriv(q, w, x).powi(2)))
}

/// `I_q² ≤ 4q(q+1+α)² γ_q^{(α,0)}` for `q ≤ q_max`, `α ≤ alpha_max`.
pub fn verify_deriv_norm_bound(q_max: usize, alpha_max: u32) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("deriv-bound", 1e-10);
    for alpha in 0..=alpha_max {
        let w = JacobiWeight::one_sided(alpha);
        for q in 0..=q_max {
            let lhs = derivative_norm_sq(q, alpha)?;
            let qf = q as f64;
            let rhs = 4.0 * qf * (qf + 1.0 + alpha as f64).powi(2) * jacobi::norm_sq(q, w);
            rep.record(violation(lhs, rhs), || format!("q={q} alpha={alpha}"));
        }
    }
    Ok(rep)
}

/// A test function `U(x) = x^a · p(x)` on `(0, 1]`.
#[derive(Debug, Clone)]
pub struct HardyCase {
    pub power: f64,
    pub poly: Polynomial,
}

impl HardyCase {
    pub fn new(power: f64, coeffs: &[f64]) -> Self {
        Self {
            power,
            poly: Polynomial::from_coeffs(coeffs),
        }
    }
}

/// Fixed corpus: polynomials and `x^{1/2+ε}`-type factors.
pub fn hardy_corpus() -> Vec<HardyCase> {
    vec![
        HardyCase::new(0.0, &[1.0]),
        HardyCase::new(0.0, &[0.0, 1.0]),
        HardyCase::new(0.0, &[1.0, -1.0]),
        HardyCase::new(0.0, &[1.0, -3.0, 2.0]),
        HardyCase::new(0.55, &[1.0]),
        HardyCase::new(0.55, &[1.0, -1.0]),
        HardyCase::new(0.25, &[1.0, 0.0, 1.0]),
        HardyCase::new(1.5, &[1.0, -1.0]),
        HardyCase::new(0.0, &[0.2, -1.0, 0.0, 3.0, -2.0]),
    ]
}

/// Both sides of `∫₀¹ x^β U² ≤ (2/(β+1))² ∫₀¹ x^{β+2} U′² + U(1)²/(β+1)`.
pub fn hardy_sides(beta: f64, case: &HardyCase) -> Result<(f64, f64)> {
    let c = beta + 2.0 * case.power;
    if !(beta > -1.0) || !(c > -1.0) {
        return param("Hardy sample needs beta > -1 and beta + 2a > -1");
    }
    let deg = case.poly.degree();
    let rule = gauss_jacobi(
        points_for_degree(2 * deg + 2, 2),
        JacobiWeight::new(0.0, c)?,
    )?;
    let dp = case.poly.derivative(0);
    // ∫₀¹ x^c g(x) dx = 2^{−c−1} ∫_{−1}^1 (1+t)^c g((1+t)/2) dt
    let scale = 2f64.powf(-c - 1.0);
    let mut lhs = 0.0;
    let mut grad = 0.0;
    for (t, w) in rule.iter() {
        let x = 0.5 * (1.0 + t);
        let p = case.poly.eval(&[x]);
        lhs += w * p * p;
        // x^{β+2} U′² = x^{β+2a} (a p + x p′)²
        grad += w * (case.power * p + x * dp.eval(&[x])).powi(2);
    }
    let u1 = case.poly.eval(&[1.0]);
    let rhs = (2.0 / (beta + 1.0)).powi(2) * grad * scale + u1 * u1 / (beta + 1.0);
    Ok((lhs * scale, rhs))
}

pub fn verify_hardy(betas: &[f64], corpus: &[HardyCase]) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("hardy", 1e-10);
    for &beta in betas {
        for (k, case) in corpus.iter().enumerate() {
            let (lhs, rhs) = hardy_sides(beta, case)?;
            rep.record(violation(lhs, rhs), || format!("case#{k} beta={beta}"));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_case_factors() {
        for q in 0..10 {
            assert_eq!(factors(q, 0).unwrap().h2, 0.0);
        }
        let t = factors(1, 0).unwrap();
        assert_relative_eq!(t.h1, -1.0 / 3.0, epsilon = 1e-16);
        assert_relative_eq!(t.h3, 1.0 / 3.0, epsilon = 1e-16);
        assert_relative_eq!(t.h2 - t.h1, t.h3, epsilon = 1e-16);
    }

    #[test]
    fn g_factors_domain() {
        assert!(factors(1, 0).unwrap().g2().is_err());
        assert!(factors(0, 1).unwrap().g1().is_err());
        assert!(factors(2, 0).unwrap().g1().is_ok());
        assert!(factors(1, 1).unwrap().g3().is_ok());
    }

    #[test]
    fn h_sign_pattern() {
        for q in 1..60 {
            for a in 0..30 {
                let t = factors(q, a).unwrap();
                assert!(t.h1 <= 0.0 && t.h2 >= 0.0 && t.h3 >= 0.0);
                assert_relative_eq!(t.h2 - t.h1, t.h3, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn identity_sweep_small() {
        let r = verify_factor_identities(50, 20).unwrap();
        assert!(r.max_residual() <= 1e-13, "{r:?}");
    }

    #[test]
    fn ratio_identity_instance() {
        // q = 2, α = 3
        let (q, a) = (2usize, 3u32);
        let w = JacobiWeight::one_sided(a);
        let lhs = factors(q + 1, a).unwrap().g1().unwrap() / jacobi::norm_sq(q, w);
        let rhs = factors(q + 1, a).unwrap().h3 / jacobi::norm_sq(q + 1, w);
        assert_relative_eq!(lhs, rhs, max_relative = 1e-14);
    }

    #[test]
    fn cancellation_legendre_q1() {
        // α = 0, q = 1: −h₁(1)/γ₁ + 0 + h₃(3)/γ₃·(−1)³ … sums to zero
        let g = |q| jacobi::norm_sq(q, JacobiWeight::legendre());
        let s = -factors(1, 0).unwrap().h1 / g(1) + factors(2, 0).unwrap().h2 / g(2)
            - factors(3, 0).unwrap().h3 / g(3);
        assert!(s.abs() < 1e-15);
    }

    #[test]
    fn perturbed_h2_breaks_cancellation() {
        let r = verify_factor_identities_with(20, 5, Perturbation { h2: 1e-6 }).unwrap();
        assert!(!r.cancellation.passed());
    }

    #[test]
    fn connection_legendre_reduction() {
        let b = [0.3, -1.2, 0.7, 2.0, -0.4, 0.9];
        let u = connect_coefficients(&b, 0).unwrap();
        assert!(u[0].is_none() && u[5].is_none());
        for q in 1..5 {
            let qf = q as f64;
            let expected = (b[q - 1] - b[q + 1]) / (2.0 * qf + 1.0);
            assert_relative_eq!(u[q].unwrap(), expected, epsilon = 1e-15);
        }
        // expansion-coefficient form: û_q = b̂_{q−1}/(2q−1) − b̂_{q+1}/(2q+3)
        let g = |q| jacobi::norm_sq(q, JacobiWeight::legendre());
        for q in 1..5 {
            let qf = q as f64;
            let hat = u[q].unwrap() / g(q);
            let expected =
                b[q - 1] / g(q - 1) / (2.0 * qf - 1.0) - b[q + 1] / g(q + 1) / (2.0 * qf + 3.0);
            assert_relative_eq!(hat, expected, epsilon = 1e-14);
        }
        assert!(connect_coefficients(&b[..2], 0).is_err());
    }

    #[test]
    fn connection_on_cubic_and_weighted_square() {
        for (coeffs, alpha) in [
            (&[0.0, 0.0, 0.0, 1.0][..], 0u32),
            (&[1.0, -2.0, 1.0][..], 2),
        ] {
            let p = Polynomial::from_coeffs(coeffs);
            let pair = CoefficientPair::from_polynomial(&p, alpha, 7).unwrap();
            let conn = connect_coefficients(&pair.b, alpha).unwrap();
            for q in 1..6 {
                assert!((conn[q].unwrap() - pair.u[q]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn parseval_matches_weighted_norms() {
        for p in connection_corpus() {
            for alpha in [0u32, 3] {
                let pair = CoefficientPair::from_polynomial(&p, alpha, p.degree() + 2).unwrap();
                let rule = gauss_jacobi(p.degree() + 3, JacobiWeight::one_sided(alpha)).unwrap();
                let d = p.derivative(0);
                let nu = rule.integrate(|x| p.eval(&[x]).powi(2));
                let nb = rule.integrate(|x| d.eval(&[x]).powi(2));
                assert_relative_eq!(pair.parseval_u(), nu, max_relative = 1e-9);
                assert_relative_eq!(pair.parseval_b(), nb, max_relative = 1e-9, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn derivative_norm_closed_forms() {
        assert_eq!(derivative_norm_sq(0, 4).unwrap(), 0.0);
        for a in 0..8u32 {
            let af = a as f64;
            let i1 = (af + 2.0).powi(2) / 4.0 * 2f64.powf(af + 1.0) / (af + 1.0);
            assert_relative_eq!(derivative_norm_sq(1, a).unwrap(), i1, max_relative = 1e-13);
            let i2 = (3.0 + af) * (af + 2.0) / (2.0 * (af + 1.0)) * 2f64.powf(af + 1.0);
            assert_relative_eq!(derivative_norm_sq(2, a).unwrap(), i2, max_relative = 1e-13);
        }
        assert_relative_eq!(derivative_norm_sq(2, 0).unwrap(), 6.0, max_relative = 1e-14);
        let bound = 4.0 * 2.0 * 9.0 * (2.0 / 5.0);
        assert_relative_eq!(bound, 28.8, max_relative = 1e-15);
    }

    #[test]
    fn hardy_examples() {
        let (l, r) = hardy_sides(0.0, &HardyCase::new(0.0, &[1.0])).unwrap();
        assert_relative_eq!(l, 1.0, max_relative = 1e-14);
        assert_relative_eq!(r, 1.0, max_relative = 1e-14);
        let (l, r) = hardy_sides(0.0, &HardyCase::new(0.0, &[0.0, 1.0])).unwrap();
        assert_relative_eq!(l, 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(r, 4.0 / 3.0 + 1.0, max_relative = 1e-14);
        let (l, r) = hardy_sides(1.0, &HardyCase::new(0.0, &[1.0, -1.0])).unwrap();
        assert_relative_eq!(l, 1.0 / 12.0, max_relative = 1e-14);
        assert_relative_eq!(r, 0.25, max_relative = 1e-14);
        assert!(hardy_sides(-1.0, &HardyCase::new(0.0, &[1.0])).is_err());
    }
}
