//! Command-line front end. [`run`] returns the process exit code:
//! `0` success, `1` verification or solver failure, `2` usage error.

use crate::error::{Error, Result};
use crate::extremal::{
    trace_error_rate, ConstantKind, ConstantProblem, ConstantRecord, RateFamily, SolverSettings,
};
use crate::forms::AssemblyOptions;
use crate::identities::Perturbation;
use crate::verify::{run_suites, VerifyOptions};
use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Published row sets.
pub const TABLE1_N: [usize; 14] = [1, 2, 3, 4, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50];
pub const TABLE2_N: [usize; 19] = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55,
];

#[derive(Debug, Parser)]
#[command(
    name = "simplex-spectra",
    version,
    about = "Stability constants of the L2 projection on simplices"
)]
pub struct Cli {
    /// Extra Gauss points added to every quadrature rule.
    #[arg(long, global = true, default_value_t = 2)]
    pub quad_safety: usize,
    /// Relative tolerance of the multiplicative fixed point, in (0, 1e-6].
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// Write CSV here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for independent rows (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute constants for a range of N.
    Constants {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        dim: u8,
        /// `A..B` (inclusive) or a single `N`.
        #[arg(long)]
        n: String,
        /// Comma-separated kinds: mult, add, h1_stability, trace_ratio.
        #[arg(long, default_value = "mult,add")]
        kinds: String,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        /// Offset added to h2 inside the sweeps (sabotage check).
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb_h2: f64,
    },
    /// Trace-error decay of the projection on the bottom edge of the triangle.
    Rates {
        /// poly, poly:K, analytic or hs:S.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: String,
    },
    /// Reproduce a published table (1: interval, 2: triangle).
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        /// Skip rows above this N.
        #[arg(long)]
        max_n: Option<usize>,
    },
}

/// Parse `A..B` or `A` into an inclusive range.
pub fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parameter(format!("bad range '{s}', expected A..B"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let a: usize = a.parse().map_err(|_| bad())?;
    let b: usize = b.parse().map_err(|_| bad())?;
    if a < 1 {
        return Err(Error::Parameter("N must be at least 1".into()));
    }
    if a > b {
        return Err(Error::Parameter(format!("empty range {a}..{b}")));
    }
    Ok((a, b))
}

pub fn parse_kinds(s: &str) -> Result<Vec<ConstantKind>> {
    let mut kinds: Vec<ConstantKind> = s
        .split(',')
        .filter(|k| !k.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if kinds.is_empty() {
        return Err(Error::Parameter("no constant kinds given".into()));
    }
    kinds.sort();
    kinds.dedup();
    Ok(kinds)
}

/// At most 12 significant digits, then the shortest representation that
/// round-trips that rounded value.
pub fn format_value(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    let a = rounded.abs();
    if (1e-4..1e12).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub const CSV_HEADER: [&str; 6] = ["dim", "N", "kind", "value", "iterations", "residual"];

fn record_row(r: &ConstantRecord) -> [String; 6] {
    [
        r.dim.to_string(),
        r.n.to_string(),
        r.kind.to_string(),
        format_value(r.value),
        r.iterations.to_string(),
        format_value(r.residual),
    ]
}

/// Solve every `(N, kind)`; rows come back ordered by `N` then kind no matter
/// which worker finished first. The first failure cuts the table short.
pub fn constants_table(
    dim: usize,
    ns: &[usize],
    kinds: &[ConstantKind],
    settings: &SolverSettings,
    threads: usize,
) -> (Vec<ConstantRecord>, Option<(usize, ConstantKind, Error)>) {
    let workers = if threads == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        threads
    }
    .min(ns.len())
    .max(1);
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Vec<Result<ConstantRecord>>>>> =
        ns.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= ns.len() {
                    break;
                }
                let rows = match ConstantProblem::assemble(dim, ns[i], &settings.assembly) {
                    Ok(p) => kinds.iter().map(|k| p.solve(*k, settings)).collect(),
                    Err(e) => vec![Err(e)],
                };
                if let Ok(mut slot) = slots[i].lock() {
                    *slot = Some(rows);
                }
            });
        }
    });
    let mut out = Vec::new();
    for (i, slot) in slots.into_iter().enumerate() {
        let rows = slot.into_inner().ok().flatten().unwrap_or_default();
        for (j, row) in rows.into_iter().enumerate() {
            match row {
                Ok(r) => out.push(r),
                Err(e) => {
                    return (
                        out,
                        Some((ns[i], kinds.get(j).copied().unwrap_or(kinds[0]), e)),
                    )
                }
            }
        }
    }
    (out, None)
}

fn write_constants(
    sink: &mut dyn Write,
    err: &mut dyn Write,
    dim: usize,
    ns: &[usize],
    kinds: &[ConstantKind],
    settings: &SolverSettings,
    threads: usize,
) -> io::Result<i32> {
    let (rows, failure) = constants_table(dim, ns, kinds, settings, threads);
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for r in &rows {
        w.write_record(record_row(r))?;
    }
    let code = match failure {
        None => EXIT_OK,
        Some((n, kind, e)) => {
            let (iterations, residual) = match &e {
                Error::NoConvergence {
                    iterations,
                    residual,
                    ..
                } => (iterations.to_string(), format_value(*residual)),
                _ => (String::new(), String::new()),
            };
            w.write_record([
                dim.to_string(),
                n.to_string(),
                kind.to_string(),
                "error".to_string(),
                iterations,
                residual,
            ])?;
            writeln!(err, "error: N={n} kind={kind}: {e}")?;
            EXIT_FAILURE
        }
    };
    w.flush()?;
    Ok(code)
}

fn write_rates(sink: &mut dyn Write, family: RateFamily, n: (usize, usize)) -> Result<()> {
    let ns: Vec<usize> = (n.0..=n.1).collect();
    let rep = trace_error_rate(family, &ns)?;
    let io = |e: csv::Error| Error::Parameter(format!("write failed: {e}"));
    let mut w = csv::Writer::from_writer(sink);
    let fam = family.to_string();
    w.write_record(["family", "N", "error"]).map_err(io)?;
    for p in &rep.points {
        w.write_record([fam.clone(), p.n.to_string(), format_value(p.error)])
            .map_err(io)?;
    }
    let slope = rep.slope.map_or_else(|| "NaN".to_string(), format_value);
    w.write_record([fam, "slope".to_string(), slope])
        .map_err(io)?;
    w.flush()
        .map_err(|e| Error::Parameter(format!("write failed: {e}")))
}

fn open_sink<'a>(
    out: &Option<PathBuf>,
    stdout: &'a mut dyn Write,
) -> io::Result<Box<dyn Write + 'a>> {
    Ok(match out {
        Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
        None => Box::new(stdout),
    })
}

fn usage(err: &mut dyn Write, msg: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "error: {msg}");
    EXIT_USAGE
}

/// Parse `args` (program name first) and execute.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    if !(cli.tol > 0.0 && cli.tol <= 1e-6) {
        return usage(
            stderr,
            format!("--tol must lie in (0, 1e-6], got {}", cli.tol),
        );
    }
    let settings = SolverSettings {
        assembly: AssemblyOptions {
            safety: cli.quad_safety,
            ..AssemblyOptions::default()
        },
        tol: cli.tol,
        ..SolverSettings::default()
    };

    let outcome = match &cli.command {
        Command::Constants { dim, n, kinds } => {
            let (range, kinds) = match (parse_range(n), parse_kinds(kinds)) {
                (Ok(r), Ok(k)) => (r, k),
                (Err(e), _) | (_, Err(e)) => return usage(stderr, e),
            };
            let ns: Vec<usize> = (range.0..=range.1).collect();
            open_sink(&cli.out, stdout).and_then(|mut s| {
                write_constants(
                    &mut *s,
                    stderr,
                    *dim as usize,
                    &ns,
                    &kinds,
                    &settings,
                    cli.threads,
                )
            })
        }
        Command::Table { which, max_n } => {
            let (dim, all, kinds): (usize, &[usize], Vec<ConstantKind>) = if *which == 1 {
                (1, &TABLE1_N, vec![ConstantKind::Mult, ConstantKind::Add])
            } else {
                (
                    2,
                    &TABLE2_N,
                    vec![
                        ConstantKind::Mult,
                        ConstantKind::Add,
                        ConstantKind::H1Stability,
                    ],
                )
            };
            let ns: Vec<usize> = all
                .iter()
                .copied()
                .filter(|n| max_n.is_none_or(|m| *n <= m))
                .collect();
            if ns.is_empty() {
                return usage(stderr, "no table rows left after --max-n");
            }
            open_sink(&cli.out, stdout).and_then(|mut s| {
                write_constants(&mut *s, stderr, dim, &ns, &kinds, &settings, cli.threads)
            })
        }
        Command::Verify { suite, perturb_h2 } => {
            let opts = VerifyOptions {
                suite: suite.clone(),
                tweak: Perturbation { h2: *perturb_h2 },
            };
            let reports = match run_suites(&opts) {
                Ok(r) => r,
                Err(e @ Error::Parameter(_)) => return usage(stderr, e),
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    return EXIT_FAILURE;
                }
            };
            let mut failed = Vec::new();
            for r in &reports {
                let _ = writeln!(stdout, "{r}");
                if !r.passed() {
                    failed.push(format!("{} (worst at {})", r.suite, r.worst));
                }
            }
            if failed.is_empty() {
                let _ = writeln!(stdout, "all {} suites passed", reports.len());
                Ok(EXIT_OK)
            } else {
                let _ = writeln!(stderr, "failed suites: {}", failed.join("; "));
                Ok(EXIT_FAILURE)
            }
        }
        Command::Rates { family, n } => {
            let fam: RateFamily = match family.parse() {
                Ok(f) => f,
                Err(e) => return usage(stderr, e),
            };
            let range = match parse_range(n) {
                Ok(r) => r,
                Err(e) => return usage(stderr, e),
            };
            let result = open_sink(&cli.out, stdout).map(|mut s| write_rates(&mut *s, fam, range));
            match result {
                Ok(Ok(())) => Ok(EXIT_OK),
                Ok(Err(e)) => {
                    let _ = writeln!(stderr, "error: {e}");
                    Ok(EXIT_FAILURE)
                }
                Err(e) => Err(e),
            }
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..5").unwrap(), (1, 5));
        assert_eq!(parse_range("3").unwrap(), (3, 3));
        assert_eq!(parse_range("2..=4").unwrap(), (2, 4));
        assert!(parse_range("5..1").is_err());
        assert!(parse_range("0..3").is_err());
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn kinds_are_ordered_and_deduplicated() {
        let k = parse_kinds("add,mult,add").unwrap();
        assert_eq!(k, vec![ConstantKind::Mult, ConstantKind::Add]);
        assert!(parse_kinds("").is_err());
    }

    #[test]
    fn value_formatting() {
        assert_eq!(format_value(2.721976688790295), "2.72197668879");
        assert_eq!(format_value(0.875), "0.875");
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(1.1786653859213354e-16), "1.17866538592e-16");
        assert_eq!(format_value(f64::NAN), "NaN");
    }
}
