//! Convergence of `‖u − Π_N u‖_{L²(Γ)}` on the bottom edge of `T²`.
//!
//! Every family is written in terms of the offsets `d = ξ + (1, 1)` from the
//! vertex `(−1, −1)`, which lies on `Γ`. Quadrature nodes are generated as
//! offsets too, so a singularity at that vertex is resolved to full relative
//! precision.

use crate::error::{param, Error, Result};
use crate::jacobi::{gauss_legendre, graded_legendre};
use crate::simplex::{enumerate_basis, BasisEvaluator};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateFamily {
    /// `((1 + ξ₁ + 2ξ₂)/3)^k`; `None` takes `k = min N`.
    Polynomial(Option<usize>),
    /// `exp(ξ₁ + ξ₂)`.
    Analytic,
    /// `r^{s − 3/4}` with `r = |d|`, which lies in `H^{s'}(T²)` for every
    /// `s' < s + 1/4` and in no `H^{s'}` with `s' ≥ s + 1/4`.
    Sobolev(f64),
}

impl RateFamily {
    fn exponent(s: f64) -> f64 {
        s - 0.75
    }

    pub fn validate(&self) -> Result<()> {
        if let RateFamily::Sobolev(s) = *self {
            if !(s > 0.5) || !s.is_finite() {
                return param(format!("the Sobolev family needs s > 1/2, got {s}"));
            }
            let l = Self::exponent(s);
            if l >= 0.0 && l.fract() == 0.0 && (l as u64).is_multiple_of(2) {
                return param(format!("s = {s} makes r^(s-3/4) a polynomial"));
            }
        }
        Ok(())
    }

    fn is_singular(&self) -> bool {
        matches!(self, RateFamily::Sobolev(_))
    }

    /// Value at offsets `d = ξ + (1, 1)`.
    pub fn value_at_offsets(&self, d: [f64; 2], default_degree: usize) -> f64 {
        let (x, y) = (d[0] - 1.0, d[1] - 1.0);
        match *self {
            RateFamily::Polynomial(k) => {
                ((1.0 + x + 2.0 * y) / 3.0).powi(k.unwrap_or(default_degree) as i32)
            }
            RateFamily::Analytic => (x + y).exp(),
            RateFamily::Sobolev(s) => d[0].hypot(d[1]).powf(Self::exponent(s)),
        }
    }
}

impl fmt::Display for RateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RateFamily::Polynomial(None) => f.write_str("poly"),
            RateFamily::Polynomial(Some(k)) => write!(f, "poly:{k}"),
            RateFamily::Analytic => f.write_str("analytic"),
            RateFamily::Sobolev(s) => write!(f, "hs:{s}"),
        }
    }
}

impl FromStr for RateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let fam = match s {
            "poly" => RateFamily::Polynomial(None),
            "analytic" => RateFamily::Analytic,
            _ => {
                if let Some(k) = s.strip_prefix("poly:") {
                    RateFamily::Polynomial(Some(
                        k.parse()
                            .map_err(|_| Error::Parameter(format!("bad degree in '{s}'")))?,
                    ))
                } else if let Some(v) = s.strip_prefix("hs:") {
                    RateFamily::Sobolev(
                        v.parse()
                            .map_err(|_| Error::Parameter(format!("bad s in '{s}'")))?,
                    )
                } else {
                    return param(format!("unknown family '{s}'"));
                }
            }
        };
        fam.validate()?;
        Ok(fam)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub n: usize,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub family: RateFamily,
    pub points: Vec<RatePoint>,
    /// Least-squares slope of `ln error` against `ln(N+1)` over the upper half.
    pub slope: Option<f64>,
}

/// Least-squares slope of `ln e` against `ln(N+1)` over the upper half of the
/// points. `None` with fewer than two usable points.
pub fn fitted_slope(points: &[RatePoint]) -> Option<f64> {
    let tail = &points[points.len() / 2..];
    let xy: Vec<(f64, f64)> = tail
        .iter()
        .filter(|p| p.error > 0.0 && p.error.is_finite())
        .map(|p| (((p.n + 1) as f64).ln(), p.error.ln()))
        .collect();
    if xy.len() < 2 {
        return None;
    }
    let k = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Offsets in `(0, 2)` and weights for one direction.
fn axis_rule(singular: bool, n_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if singular {
        graded_legendre(18, 0.15, n_max / 2 + 10, 2.0)
    } else {
        let g = gauss_legendre(n_max + 25)?;
        Ok(g.mapped(0.0, 2.0))
    }
}

/// Trace errors of `Π_N u` for every `N` in `n_list`.
pub fn trace_error_rate(family: RateFamily, n_list: &[usize]) -> Result<RateReport> {
    family.validate()?;
    if n_list.is_empty() {
        return param("empty N list");
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return param("N list must be strictly increasing");
    }
    let n_min = n_list[0];
    let n_max = *n_list.last().unwrap_or(&0);
    let u = |d: [f64; 2]| family.value_at_offsets(d, n_min);

    let basis = enumerate_basis(n_max, 2)?;
    let mut ev = BasisEvaluator::new(&basis, true);
    let nb = basis.len();
    let mut vals = vec![0.0; nb];

    // orthonormal coefficients, in collapsed coordinates with η = t − 1
    let (t, w) = axis_rule(family.is_singular(), n_max)?;
    let mut coeffs = vec![0.0; nb];
    for (&t2, &w2) in t.iter().zip(&w) {
        let jac = (2.0 - t2) / 2.0;
        for (&t1, &w1) in t.iter().zip(&w) {
            ev.eval_eta(&[t1 - 1.0, t2 - 1.0], &mut vals, None)?;
            let fw = w1 * w2 * jac * u([t1 * jac, t2]);
            for (c, v) in coeffs.iter_mut().zip(&vals) {
                *c += fw * v;
            }
        }
    }

    // edge residuals, accumulated degree by degree
    let (te, we) = axis_rule(family.is_singular(), n_max)?;
    let mut err_sq = vec![0.0; n_list.len()];
    for (&x, &wx) in te.iter().zip(&we) {
        ev.eval_eta(&[x - 1.0, -1.0], &mut vals, None)?;
        let mut resid = u([x, 0.0]);
        let mut done = 0;
        for (slot, &n) in n_list.iter().enumerate() {
            let k = basis.prefix_len(n);
            resid -= coeffs[done..k]
                .iter()
                .zip(&vals[done..k])
                .map(|(c, v)| c * v)
                .sum::<f64>();
            done = k;
            err_sq[slot] += wx * resid * resid;
        }
    }

    let points: Vec<RatePoint> = n_list
        .iter()
        .zip(err_sq)
        .map(|(&n, e)| RatePoint { n, error: e.sqrt() })
        .collect();
    Ok(RateReport {
        family,
        slope: fitted_slope(&points),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn parse_families() {
        assert_eq!(
            "poly".parse::<RateFamily>().unwrap(),
            RateFamily::Polynomial(None)
        );
        assert_eq!(
            "poly:3".parse::<RateFamily>().unwrap(),
            RateFamily::Polynomial(Some(3))
        );
        assert_eq!(
            "analytic".parse::<RateFamily>().unwrap(),
            RateFamily::Analytic
        );
        assert_eq!(
            "hs:1.5".parse::<RateFamily>().unwrap(),
            RateFamily::Sobolev(1.5)
        );
        assert!("hs:0.4".parse::<RateFamily>().is_err());
        assert!("hs:2.75".parse::<RateFamily>().is_err());
        assert!("hs:1.75".parse::<RateFamily>().is_ok());
        assert!("wavelet".parse::<RateFamily>().is_err());
    }

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<_> = (1..9)
            .map(|n| RatePoint {
                n,
                error: 3.0 * ((n + 1) as f64).powf(-1.7),
            })
            .collect();
        assert_relative_eq!(fitted_slope(&pts).unwrap(), -1.7, epsilon = 1e-12);
        assert_eq!(fitted_slope(&pts[..1]), None);
    }

    #[test]
    fn polynomials_are_reproduced() {
        let r = trace_error_rate(RateFamily::Polynomial(None), &[3, 4, 6]).unwrap();
        assert!(r.points.iter().all(|p| p.error < 1e-12), "{r:?}");
    }

    #[test]
    fn degree_zero_projection_of_linear() {
        // u = (1 + ξ₁ + 2ξ₂)/3 has mean zero on T² and trace (x − 1)/3 on Γ
        let r = trace_error_rate(RateFamily::Polynomial(Some(1)), &[0, 1]).unwrap();
        let want = (8.0f64 / 27.0).sqrt();
        assert_relative_eq!(r.points[0].error, want, max_relative = 1e-12);
        assert!(r.points[1].error < 1e-13);
    }

    #[test]
    fn bad_lists_rejected() {
        assert!(trace_error_rate(RateFamily::Analytic, &[]).is_err());
        assert!(trace_error_rate(RateFamily::Analytic, &[4, 4]).is_err());
    }
}
