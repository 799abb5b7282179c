//! Scalar test functions on the reference elements.

/// A scalar function with a gradient, defined on a `dim`-dimensional domain.
pub trait ScalarField {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
}

#[derive(Debug, Clone, PartialEq)]
struct Monomial {
    coeff: f64,
    exps: [u32; 3],
}

/// Sparse multivariate polynomial in monomial form, `Σ c x₁^a x₂^b x₃^c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        assert!(
            (1..=3).contains(&dim),
            "polynomial dimension must be 1, 2 or 3"
        );
        Self {
            dim,
            terms: Vec::new(),
        }
    }

    /// Append `coeff · Π x_i^{exps[i]}`; missing exponents are zero.
    pub fn term(mut self, coeff: f64, exps: &[u32]) -> Self {
        assert!(
            exps.len() <= self.dim,
            "exponent list longer than dimension"
        );
        let mut e = [0u32; 3];
        e[..exps.len()].copy_from_slice(exps);
        self.terms.push(Monomial { coeff, exps: e });
        self
    }

    /// Univariate polynomial from ascending coefficients.
    pub fn from_coeffs(coeffs: &[f64]) -> Self {
        coeffs
            .iter()
            .enumerate()
            .fold(Self::zero(1), |p, (k, &c)| p.term(c, &[k as u32]))
    }

    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .filter(|t| t.coeff != 0.0)
            .map(|t| t.exps.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Partial derivative along `axis`.
    pub fn derivative(&self, axis: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exps[axis] > 0)
            .map(|t| {
                let mut exps = t.exps;
                exps[axis] -= 1;
                Monomial {
                    coeff: t.coeff * t.exps[axis] as f64,
                    exps,
                }
            })
            .collect();
        Self {
            dim: self.dim,
            terms,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| (0..self.dim).fold(t.coeff, |acc, i| acc * x[i].powi(t.exps[i] as i32)))
            .sum()
    }
}

impl ScalarField for Polynomial {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|i| self.derivative(i).eval(x)).collect()
    }
}

/// Closure-backed field: value and gradient supplied separately.
pub struct FnField<F, G> {
    dim: usize,
    value: F,
    gradient: G,
}

impl<F, G> FnField<F, G>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    pub fn new(dim: usize, value: F, gradient: G) -> Self {
        Self {
            dim,
            value,
            gradient,
        }
    }
}

impl<F, G> ScalarField for FnField<F, G>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (self.gradient)(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_gradient() {
        // 3 x y² − z + 2
        let p = Polynomial::zero(3)
            .term(3.0, &[1, 2])
            .term(-1.0, &[0, 0, 1])
            .term(2.0, &[]);
        assert_eq!(p.degree(), 3);
        let x = [0.5, -2.0, 0.25];
        assert_eq!(p.value(&x), 3.0 * 0.5 * 4.0 - 0.25 + 2.0);
        assert_eq!(p.gradient(&x), vec![12.0, -6.0, -1.0]);
    }

    #[test]
    fn univariate_from_coeffs() {
        let p = Polynomial::from_coeffs(&[1.0, 0.0, -3.0]);
        assert_eq!(p.eval(&[2.0]), -11.0);
        assert_eq!(p.derivative(0).eval(&[2.0]), -12.0);
    }
}
