use super::{BasisEvaluator, BasisSet, CubeRule};
use crate::error::{param, Result};

/// Raw inner products `u_idx = ∫_{T^d} f ψ_idx` (not divided by the norms).
///
/// `f_degree` is the polynomial degree of `f`; the pulled-back rule is sized
/// so the result is exact when `f` is a polynomial of at most that degree.
pub fn analyze(f: impl Fn(&[f64]) -> f64, basis: &BasisSet, f_degree: usize) -> Result<Vec<f64>> {
    let rule = CubeRule::for_degree(basis.dim(), basis.degree() + f_degree, 2)?;
    analyze_with(f, basis, &rule)
}

/// [`analyze`] with a caller-supplied rule.
pub fn analyze_with(
    f: impl Fn(&[f64]) -> f64,
    basis: &BasisSet,
    rule: &CubeRule,
) -> Result<Vec<f64>> {
    if rule.dim() != basis.dim() {
        return param("quadrature and basis dimensions differ");
    }
    let mut ev = BasisEvaluator::new(basis, false);
    let mut vals = vec![0.0; basis.len()];
    let mut acc = vec![0.0; basis.len()];
    for i in 0..rule.len() {
        ev.eval_eta(rule.eta(i), &mut vals, None)?;
        let fw = rule.weight(i) * f(rule.xi(i));
        for (a, v) in acc.iter_mut().zip(&vals) {
            *a += fw * v;
        }
    }
    Ok(acc)
}

/// `Σ u_idx / ‖ψ_idx‖² · ψ_idx(ξ)`.
pub fn synthesize(coeffs: &[f64], basis: &BasisSet, xi: &[f64]) -> Result<f64> {
    if coeffs.len() != basis.len() {
        return param(format!(
            "coefficient vector has length {}, basis has {}",
            coeffs.len(),
            basis.len()
        ));
    }
    let mut ev = BasisEvaluator::new(basis, false);
    let mut vals = vec![0.0; basis.len()];
    ev.eval_xi(xi, &mut vals)?;
    Ok(coeffs
        .iter()
        .zip(&vals)
        .zip(basis.norms_sq())
        .map(|((c, v), n)| c / n * v)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::super::{dubiner_eval, enumerate_basis, SimplexIndex};
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn analyze_basis_function() {
        let b = enumerate_basis(4, 3).unwrap();
        let idx = SimplexIndex::new(1, 2, 0);
        let c = analyze(|x| dubiner_eval(idx, x).unwrap(), &b, 3).unwrap();
        for (k, &i) in b.indices().iter().enumerate() {
            let want = if i == idx { i.norm_sq(3) } else { 0.0 };
            assert!((c[k] - want).abs() < 1e-12, "{i:?}: {}", c[k]);
        }
    }

    #[test]
    fn constants() {
        for dim in 2..=3 {
            let b = enumerate_basis(3, dim).unwrap();
            let c = analyze(|_| 1.0, &b, 0).unwrap();
            assert_relative_eq!(c[0], b.volume(), epsilon = 1e-14);
            assert!(c[1..].iter().all(|v| v.abs() < 1e-14));
            let mut e = vec![0.0; b.len()];
            assert_eq!(synthesize(&e, &b, &vec![-0.5; dim]).unwrap(), 0.0);
            e[0] = b.volume();
            assert_relative_eq!(
                synthesize(&e, &b, &vec![-0.5; dim]).unwrap(),
                1.0,
                epsilon = 1e-15
            );
            assert!(synthesize(&e[1..], &b, &vec![-0.5; dim]).is_err());
        }
    }

    #[test]
    fn round_trip_polynomial() {
        let f = |x: &[f64]| 1.0 + x[0] - 2.0 * x[1] * x[2] + 0.5 * x[0] * x[0] * x[2];
        let b = enumerate_basis(3, 3).unwrap();
        let c = analyze(f, &b, 3).unwrap();
        for xi in [[-0.5, -0.5, -0.5], [-1.0, -1.0, 1.0], [0.2, -0.9, -0.6]] {
            assert_relative_eq!(synthesize(&c, &b, &xi).unwrap(), f(&xi), epsilon = 1e-12);
        }
    }
}
