//! Named verification suites, runnable one at a time or all together.

use crate::error::{param, Result};
use crate::field::Polynomial;
use crate::forms::{h1_form, mass_form, trace_form, AssemblyOptions, SymmetricForm};
use crate::identities::{
    connection_corpus, hardy_corpus, verify_antiderivative_relations, verify_coefficient_bound,
    verify_connection, verify_deriv_norm_bound, verify_factor_identities_with, verify_hardy,
    Perturbation,
};
use crate::report::{rel_diff, SuiteReport};
use crate::simplex::{
    boundary_trace_direct, boundary_trace_parseval, dubiner_eval, enumerate_basis,
    trace_coefficient_sum, BasisEvaluator, Boundary, CubeRule, SimplexIndex,
};
use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const SUITES: [&str; 13] = [
    "ratio-identities",
    "cancellation",
    "h-sum",
    "antiderivative",
    "connection",
    "coefficient-bound",
    "deriv-bound",
    "hardy",
    "orthogonality",
    "quadrature-doubling",
    "finite-sum",
    "parseval",
    "trace-isometry",
];

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Run only the suite with this name.
    pub suite: Option<String>,
    pub tweak: Perturbation,
}

/// Seeded uniform samples in `(−1, 1)`.
fn scramble(seed: u64) -> impl FnMut() -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    move || rng.gen_range(-1.0..1.0)
}

/// A dense polynomial of total degree `degree` in `dim` variables.
pub fn sample_polynomial(dim: usize, degree: usize, seed: u64) -> Polynomial {
    let mut next = scramble(seed);
    let mut p = Polynomial::zero(dim);
    let mut exps = vec![0u32; dim];
    loop {
        if exps.iter().sum::<u32>() as usize <= degree {
            p = p.term(next(), &exps);
        }
        let mut i = 0;
        loop {
            if i == dim {
                return p;
            }
            exps[i] += 1;
            if exps[i] as usize <= degree {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Raw Dubiner Gram matrices are diagonal with the closed-form norms, and the
/// assembled (orthonormal) mass forms are the identity.
pub fn verify_orthogonality(degree: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("orthogonality", 1e-11);
    for dim in 1..=3 {
        let basis = enumerate_basis(degree, dim)?;
        let n = basis.len();
        let rule = CubeRule::for_degree(dim, 2 * degree, 2)?;
        let mut ev = BasisEvaluator::new(&basis, false);
        let mut vals = vec![0.0; n];
        let mut gram = DMatrix::<f64>::zeros(n, n);
        for k in 0..rule.len() {
            ev.eval_eta(rule.eta(k), &mut vals, None)?;
            let v = DVector::from_column_slice(&vals);
            gram.ger(rule.weight(k), &v, &v, 1.0);
        }
        let norms = basis.norms_sq();
        let idx = basis.indices();
        let mass = mass_form(degree, dim, &AssemblyOptions::default())?;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { norms[i] } else { 0.0 };
                let scale = (norms[i] * norms[j]).sqrt();
                rep.record((gram[(i, j)] - want).abs() / scale, || {
                    format!("dim={dim} {:?} {:?}", idx[i], idx[j])
                });
                let eye = if i == j { 1.0 } else { 0.0 };
                rep.record((mass.matrix()[(i, j)] - eye).abs(), || {
                    format!("mass dim={dim} ({i},{j})")
                });
            }
        }
    }
    Ok(rep)
}

/// Reassembling with twice the quadrature points leaves every entry unchanged.
pub fn verify_quadrature_doubling(degree: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("quadrature-doubling", 1e-12);
    let base = AssemblyOptions::default();
    let dbl = base.doubled();
    // entries are compared relative to max(1, |entry|)
    let mut check = |name: &str, dim: usize, a: SymmetricForm, b: SymmetricForm| {
        let (a, b) = (a.matrix(), b.matrix());
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                let d = (a[(i, j)] - b[(i, j)]).abs() / a[(i, j)].abs().max(1.0);
                rep.record(d, || format!("{name} dim={dim} ({i},{j})"));
            }
        }
    };
    for dim in 1..=3 {
        check(
            "mass",
            dim,
            mass_form(degree, dim, &base)?,
            mass_form(degree, dim, &dbl)?,
        );
        check(
            "h1",
            dim,
            h1_form(degree, dim, &base)?,
            h1_form(degree, dim, &dbl)?,
        );
        if dim > 1 {
            for b in [Boundary::Bottom, Boundary::Full] {
                check(
                    "trace",
                    dim,
                    trace_form(degree, dim, b, &base)?,
                    trace_form(degree, dim, b, &dbl)?,
                );
            }
        }
    }
    Ok(rep)
}

/// Tail sum against the three-term short form on sampled polynomials.
pub fn verify_finite_sum() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("finite-sum", 1e-10);
    let mut corpus = vec![(Polynomial::zero(3).term(1.0, &[0, 0, 3]), 3)];
    for (k, deg) in [4usize, 5, 6].iter().enumerate() {
        corpus.push((sample_polynomial(3, *deg, 17 + k as u64), *deg));
    }
    for (k, (f, deg)) in corpus.iter().enumerate() {
        for p in 0..=1 {
            for q in 0..=1 {
                for n in 1..=3 {
                    let s = trace_coefficient_sum(f, *deg, p, q, n)?;
                    rep.record(rel_diff(s.tail, s.short, 1.0), || {
                        format!("poly#{k} p={p} q={q} N={n}")
                    });
                }
            }
        }
    }
    Ok(rep)
}

fn parseval_corpus() -> Vec<(usize, usize, Polynomial)> {
    let mut out = Vec::new();
    for dim in 2..=3 {
        for (k, deg) in [0usize, 2, 4, 6].iter().enumerate() {
            out.push((
                dim,
                *deg,
                sample_polynomial(dim, *deg, 100 + 10 * dim as u64 + k as u64),
            ));
        }
    }
    out
}

/// Coefficient-side trace norm against quadrature on the bottom edge/face.
pub fn verify_parseval() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("parseval", 1e-10);
    for (k, (dim, deg, f)) in parseval_corpus().iter().enumerate() {
        let a = boundary_trace_parseval(|x| f.eval(x), *dim, *deg)?;
        let b = boundary_trace_direct(|x| f.eval(x), *dim, *deg)?;
        rep.record(rel_diff(a, b, 1e-300), || {
            format!("poly#{k} dim={dim} degree={deg}")
        });
    }
    for idx in [
        SimplexIndex::new(1, 1, 1),
        SimplexIndex::new(2, 0, 3),
        SimplexIndex::new(0, 3, 0),
    ] {
        let f = |x: &[f64]| dubiner_eval(idx, x).unwrap_or(f64::NAN);
        let a = boundary_trace_parseval(f, 3, idx.degree())?;
        let b = boundary_trace_direct(f, 3, idx.degree())?;
        rep.record(rel_diff(a, b, 1e-300), || format!("{idx:?}"));
    }
    Ok(rep)
}

/// The assembled trace form on `Γ` against direct quadrature of random
/// combinations of basis functions.
pub fn verify_trace_isometry(degree: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("trace-isometry", 1e-10);
    for dim in 2..=3 {
        let t = trace_form(degree, dim, Boundary::Bottom, &AssemblyOptions::default())?;
        let basis = enumerate_basis(degree, dim)?;
        let scaling = basis.scaling();
        let mut next = scramble(7 + dim as u64);
        for trial in 0..5 {
            let c: Vec<f64> = (0..basis.len()).map(|_| next()).collect();
            let f = |x: &[f64]| {
                basis
                    .indices()
                    .iter()
                    .zip(c.iter().zip(&scaling))
                    .map(|(i, (c, s))| c * s * dubiner_eval(*i, x).unwrap_or(f64::NAN))
                    .sum::<f64>()
            };
            let want = boundary_trace_direct(f, dim, degree)?;
            rep.record(rel_diff(t.quad(&c), want, 1e-300), || {
                format!("dim={dim} trial={trial}")
            });
        }
    }
    Ok(rep)
}

fn run_one(name: &str, tweak: Perturbation) -> Result<Vec<SuiteReport>> {
    Ok(match name {
        "ratio-identities" | "cancellation" | "h-sum" => {
            verify_factor_identities_with(200, 60, tweak)?
                .into_vec()
                .into_iter()
                .filter(|r| r.suite == name)
                .collect()
        }
        "antiderivative" => vec![verify_antiderivative_relations(10, 6, tweak)?],
        "connection" => vec![verify_connection(&connection_corpus(), 10, tweak)?],
        "coefficient-bound" => vec![verify_coefficient_bound(&connection_corpus(), 10)?],
        "deriv-bound" => vec![verify_deriv_norm_bound(60, 30)?],
        "hardy" => vec![verify_hardy(
            &[-0.5, 0.0, 0.5, 1.0, 2.0, 5.0],
            &hardy_corpus(),
        )?],
        "orthogonality" => vec![verify_orthogonality(6)?],
        "quadrature-doubling" => vec![verify_quadrature_doubling(6)?],
        "finite-sum" => vec![verify_finite_sum()?],
        "parseval" => vec![verify_parseval()?],
        "trace-isometry" => vec![verify_trace_isometry(5)?],
        other => {
            return param(format!(
                "unknown suite '{other}'; known: {}",
                SUITES.join(", ")
            ))
        }
    })
}

/// Run the selected suites in the fixed order of [`SUITES`].
pub fn run_suites(opts: &VerifyOptions) -> Result<Vec<SuiteReport>> {
    match &opts.suite {
        Some(name) => run_one(name, opts.tweak),
        None => {
            // the three factor suites share one sweep
            let mut out = verify_factor_identities_with(200, 60, opts.tweak)?.into_vec();
            for name in &SUITES[3..] {
                out.extend(run_one(name, opts.tweak)?);
            }
            Ok(out)
        }
    }
}
