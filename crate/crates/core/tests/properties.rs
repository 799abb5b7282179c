use nalgebra::DVector;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use simplex_spectra::extremal::{
    mult_quotient, multiplicative_from_forms, ConstantKind, ConstantProblem, SolverSettings,
};
use simplex_spectra::forms::{h1_form, mass_form, AssemblyOptions};
use simplex_spectra::jacobi::{self, gauss_jacobi, JacobiWeight};
use simplex_spectra::simplex::{
    analyze, boundary_trace_direct, boundary_trace_eta, enumerate_basis, synthesize,
};
use simplex_spectra::verify::sample_polynomial;
use std::sync::OnceLock;

/// Five-point central difference; the O(h^4) error keeps high degrees honest.
fn diff(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = 1e-4;
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

fn weight() -> impl Strategy<Value = JacobiWeight> {
    (0.0f64..6.0, 0.0f64..6.0).prop_map(|(a, b)| JacobiWeight::new(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_reflection(n in 0usize..25, w in weight(), x in -1.0f64..1.0) {
        let lhs = jacobi::eval(n, w, -x);
        let rhs = if n % 2 == 0 { 1.0 } else { -1.0 } * jacobi::eval(n, w.swapped(), x);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
    }

    #[test]
    fn jacobi_derivative_matches_differences(n in 1usize..20, w in weight(), x in -0.95f64..0.95) {
        let fd = diff(|t| jacobi::eval(n, w, t), x);
        let d = jacobi::deriv(n, w, x);
        prop_assert!((fd - d).abs() <= 1e-6 * d.abs().max(1.0), "{fd} vs {d}");
    }

    #[test]
    fn antiderivative_differentiates_back(n in 1usize..16, alpha in 0u32..8, x in -0.95f64..0.95) {
        let fd = diff(|t| jacobi::antideriv(n, alpha, t).unwrap(), x);
        let want = jacobi::eval(n - 1, JacobiWeight::one_sided(alpha), x);
        prop_assert!((fd - want).abs() <= 1e-6 * want.abs().max(1.0), "{fd} vs {want}");
    }

    #[test]
    fn one_sided_orthogonality(i in 0usize..=12, j in 0usize..=12, alpha in 0u32..=8) {
        let w = JacobiWeight::one_sided(alpha);
        let rule = gauss_jacobi(14, w).unwrap();
        let got = rule.integrate(|x| jacobi::eval(i, w, x) * jacobi::eval(j, w, x));
        let want = if i == j { jacobi::norm_sq(i, w) } else { 0.0 };
        prop_assert!((got - want).abs() <= 1e-11 * jacobi::norm_sq(i.min(j), w));
    }

    #[test]
    fn boundary_isometry(dim in 2usize..=3, degree in 0usize..6, seed in any::<u64>()) {
        let f = sample_polynomial(dim, degree, seed);
        let a = boundary_trace_direct(|x| f.eval(x), dim, degree).unwrap();
        let b = boundary_trace_eta(|x| f.eval(x), dim, degree).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0), "{a} vs {b}");
    }

    #[test]
    fn synthesis_then_analysis_is_identity(degree in 0usize..=8, seed in any::<u64>()) {
        let basis = enumerate_basis(degree, 3).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let c: Vec<f64> = basis.norms_sq().iter().map(|n| n * rng.gen_range(-0.5..0.5)).collect();
        let back = analyze(|x| synthesize(&c, &basis, x).unwrap(), &basis, degree).unwrap();
        for (a, b) in c.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-11, "{a} vs {b}");
        }
    }
}

/// Shared small problems for the quotient properties.
fn problems() -> &'static Vec<ConstantProblem> {
    static P: OnceLock<Vec<ConstantProblem>> = OnceLock::new();
    P.get_or_init(|| {
        let o = AssemblyOptions::default();
        vec![
            ConstantProblem::assemble(1, 3, &o).unwrap(),
            ConstantProblem::assemble(2, 2, &o).unwrap(),
            ConstantProblem::assemble(2, 3, &o).unwrap(),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quotient_is_scale_free(which in 0usize..3, c in prop_oneof![-50.0f64..-0.02, 0.02f64..50.0], seed in any::<u64>()) {
        let p = &problems()[which];
        let mut rng = StdRng::seed_from_u64(seed);
        let v = DVector::from_fn(p.mass.len(), |_, _| rng.gen_range(-0.5..0.5));
        let q0 = mult_quotient(&p.projected, &p.mass, &p.h1, &v);
        let q1 = mult_quotient(&p.projected, &p.mass, &p.h1, &(&v * c));
        prop_assert!((q0 - q1).abs() <= 1e-12 * q0.abs().max(1.0));
    }

    #[test]
    fn maximum_dominates_random_vectors(which in 0usize..3, seed in any::<u64>()) {
        let p = &problems()[which];
        let best = p.multiplicative(&SolverSettings::default()).unwrap().value;
        let mut rng = StdRng::seed_from_u64(seed);
        for _ in 0..50 {
            let v = DVector::from_fn(p.mass.len(), |_, _| rng.gen_range(-0.5..0.5));
            prop_assert!(mult_quotient(&p.projected, &p.mass, &p.h1, &v) <= best + 1e-12);
        }
    }
}

#[test]
fn forms_rescaled_together_keep_the_constant() {
    let s = SolverSettings::default();
    for p in problems() {
        let base = p.multiplicative(&s).unwrap();
        for c in [1e-3, 0.37, 12.0, 4e4] {
            let r = multiplicative_from_forms(
                &p.projected.scaled(c),
                &p.mass.scaled(c),
                &p.h1.scaled(c),
                &s,
            )
            .unwrap();
            assert!(
                (r.value - base.value).abs() < 1e-10,
                "c={c}: {} vs {}",
                r.value,
                base.value
            );
        }
    }
}

#[test]
fn fixed_point_value_is_the_quotient_of_its_vector() {
    let s = SolverSettings::default();
    for p in problems() {
        let m = p.multiplicative(&s).unwrap();
        let q = mult_quotient(&p.projected, &p.mass, &p.h1, &m.vector);
        assert!((m.value - q).abs() < 1e-10);
        assert!(
            (m.eigen_value - q).abs() < 1e-10,
            "{} vs {q}",
            m.eigen_value
        );
        assert!(m.residual <= s.tol);
    }
}

#[test]
fn h1_dominates_mass() {
    for dim in 1..=3 {
        let o = AssemblyOptions::default();
        let d = h1_form(5, dim, &o).unwrap().matrix() - mass_form(5, dim, &o).unwrap().matrix();
        let min = d.symmetric_eigenvalues().min();
        assert!(min >= -1e-10, "dim={dim}: {min}");
    }
}

#[test]
fn one_dimensional_constants_are_ordered_and_monotone() {
    let s = SolverSettings::default();
    let mut last = 0.0;
    for n in 1..=30 {
        let p = ConstantProblem::assemble(1, n, &s.assembly).unwrap();
        let mult = p.solve(ConstantKind::Mult, &s).unwrap().value;
        let add = p.solve(ConstantKind::Add, &s).unwrap().value;
        assert!(add <= mult + 1e-12, "N={n}");
        assert!(mult >= last - 1e-6, "N={n}: {mult} < {last}");
        last = mult;
    }
}

#[test]
fn two_dimensional_constants_are_monotone() {
    let s = SolverSettings::default();
    let mut last = 0.0;
    for n in 1..=8 {
        let v = ConstantProblem::assemble(2, n, &s.assembly)
            .unwrap()
            .solve(ConstantKind::Mult, &s)
            .unwrap()
            .value;
        assert!(v >= last - 1e-6);
        last = v;
    }
}
