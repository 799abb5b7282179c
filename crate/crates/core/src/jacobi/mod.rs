//! Jacobi polynomials `P_n^{(α,β)}` on `[-1, 1]`.
//!
//! All evaluation goes through the upward three-term recurrence
//!
//! ```text
//! a¹ₙ P_{n+1} = (a²ₙ + a³ₙ x) Pₙ − a⁴ₙ P_{n−1}
//! a¹ₙ = 2(n+1)(n+α+β+1)(2n+α+β)
//! a²ₙ = (2n+α+β+1)(α²−β²)
//! a³ₙ = (2n+α+β)(2n+α+β+1)(2n+α+β+2)
//! a⁴ₙ = 2(n+α)(n+β)(2n+α+β+2)
//! ```
//!
//! started from `P₀ ≡ 1`. Orthogonality holds against `(1−x)^α (1+x)^β` with
//! squared norm `γₙ^{(α,β)}` (see [`norm_sq`]).

pub mod quadrature;

pub use quadrature::{
    gauss_jacobi, gauss_legendre, graded_legendre, points_for_degree, QuadratureRule,
};

use crate::error::{param, Result};
use crate::identities;
use statrs::function::gamma::ln_gamma;

/// Exponent pair `(α, β)` of the weight `(1−x)^α (1+x)^β`; both exceed −1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiWeight {
    alpha: f64,
    beta: f64,
}

impl JacobiWeight {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return param(format!(
                "Jacobi exponents must satisfy alpha, beta > -1 (got alpha={alpha}, beta={beta})"
            ));
        }
        Ok(Self { alpha, beta })
    }

    /// Legendre weight `(0, 0)`.
    pub const fn legendre() -> Self {
        Self {
            alpha: 0.0,
            beta: 0.0,
        }
    }

    /// The one-sided weight `(1−x)^α` with nonnegative integer `α`.
    pub fn one_sided(alpha: u32) -> Self {
        Self {
            alpha: alpha as f64,
            beta: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(α+1, β+1)`, the weight of the derivative family.
    pub fn shifted(&self) -> Self {
        Self {
            alpha: self.alpha + 1.0,
            beta: self.beta + 1.0,
        }
    }

    /// `(β, α)`.
    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }

    /// Weight function value at `x`.
    pub fn density(&self, x: f64) -> f64 {
        (1.0 - x).powf(self.alpha) * (1.0 + x).powf(self.beta)
    }
}

/// Coefficients `(a, b, c)` of `P_{n+1} = (a + b x) Pₙ − c P_{n−1}`.
///
/// For `n = 0` the common factor `(α+β)(α+β+1)` of `a¹₀, a²₀, a³₀` is cancelled,
/// which keeps the Legendre-like cases `α+β ∈ {0, −1}` finite.
pub(crate) fn recurrence(n: usize, w: JacobiWeight) -> (f64, f64, f64) {
    let (al, be) = (w.alpha, w.beta);
    if n == 0 {
        return ((al - be) / 2.0, (al + be + 2.0) / 2.0, 0.0);
    }
    let n = n as f64;
    let s = 2.0 * n + al + be;
    let a1 = 2.0 * (n + 1.0) * (n + al + be + 1.0) * s;
    let a2 = (s + 1.0) * (al * al - be * be);
    let a3 = s * (s + 1.0) * (s + 2.0);
    let a4 = 2.0 * (n + al) * (n + be) * (s + 2.0);
    (a2 / a1, a3 / a1, a4 / a1)
}

/// `P_n^{(α,β)}(x)`.
pub fn eval(n: usize, w: JacobiWeight, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let (a, b, c) = recurrence(k, w);
        let next = (a + b * x) * cur - c * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `[P_0(x), …, P_{n_max}(x)]`.
pub fn eval_all(n_max: usize, w: JacobiWeight, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    eval_all_into(n_max, w, x, &mut out);
    out
}

pub(crate) fn eval_all_into(n_max: usize, w: JacobiWeight, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    let mut prev = 0.0;
    for k in 0..n_max {
        let (a, b, c) = recurrence(k, w);
        let cur = out[k];
        let next = (a + b * x) * cur - c * prev;
        prev = cur;
        out.push(next);
    }
}

/// Homogenized values `sᵏ P_k(y/s)` for `k = 0..=n_max`.
///
/// The recurrence is multiplied through by powers of `s`, so the result is a
/// polynomial in `(y, s)` and stays finite as `s → 0`. This is what evaluates
/// collapsed-coordinate products such as `((1−η₂)/2)^p P_p(η₁)` at the
/// degenerate vertex of the Duffy map.
pub fn scaled_eval_all(n_max: usize, w: JacobiWeight, y: f64, s: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    let mut prev = 0.0;
    for k in 0..n_max {
        let (a, b, c) = recurrence(k, w);
        let cur = out[k];
        let next = (a * s + b * y) * cur - c * s * s * prev;
        prev = cur;
        out.push(next);
    }
    out
}

/// `d/dx P_n^{(α,β)}(x) = ½(n+α+β+1) P_{n−1}^{(α+1,β+1)}(x)`.
pub fn deriv(n: usize, w: JacobiWeight, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    0.5 * (n as f64 + w.alpha + w.beta + 1.0) * eval(n - 1, w.shifted(), x)
}

/// Derivatives of `P_0, …, P_{n_max}` at `x`.
pub fn deriv_all(n_max: usize, w: JacobiWeight, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    deriv_all_into(n_max, w, x, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn deriv_all_into(
    n_max: usize,
    w: JacobiWeight,
    x: f64,
    scratch: &mut Vec<f64>,
    out: &mut Vec<f64>,
) {
    out.clear();
    out.push(0.0);
    if n_max == 0 {
        return;
    }
    eval_all_into(n_max - 1, w.shifted(), x, scratch);
    for n in 1..=n_max {
        out.push(0.5 * (n as f64 + w.alpha + w.beta + 1.0) * scratch[n - 1]);
    }
}

/// Squared weighted norm
/// `γₙ^{(α,β)} = 2^{α+β+1}/(2n+α+β+1) · Γ(n+α+1)Γ(n+β+1) / (n! Γ(n+α+β+1))`.
///
/// For `β = 0` this is exactly `2^{α+1}/(2n+α+1)`.
pub fn norm_sq(n: usize, w: JacobiWeight) -> f64 {
    let (al, be) = (w.alpha, w.beta);
    let nf = n as f64;
    if be == 0.0 {
        return 2f64.powf(al + 1.0) / (2.0 * nf + al + 1.0);
    }
    let log_head = (al + be + 1.0) * std::f64::consts::LN_2;
    let log_tail = if n == 0 {
        ln_gamma(al + 1.0) + ln_gamma(be + 1.0) - ln_gamma(al + be + 2.0)
    } else {
        ln_gamma(nf + al + 1.0) + ln_gamma(nf + be + 1.0)
            - ln_gamma(nf + 1.0)
            - ln_gamma(nf + al + be + 1.0)
            - (2.0 * nf + al + be + 1.0).ln()
    };
    (log_head + log_tail).exp()
}

/// `P̂_n^{(α,0)}(x) = ∫_{−1}^x P_{n−1}^{(α,0)}(t) dt`.
///
/// Uses `g₁ Pₙ + g₂ P_{n−1} + g₃ P_{n−2}` for `n ≥ 2` and `x + 1` for `n = 1`.
pub fn antideriv(n: usize, alpha: u32, x: f64) -> Result<f64> {
    match n {
        0 => param("antiderivative index must be at least 1"),
        1 => Ok(x + 1.0),
        _ => {
            let f = identities::factors(n, alpha)?;
            let (g1, g2, g3) = (f.g1()?, f.g2()?, f.g3()?);
            let p = eval_all(n, JacobiWeight::one_sided(alpha), x);
            Ok(g1 * p[n] + g2 * p[n - 1] + g3 * p[n - 2])
        }
    }
}
