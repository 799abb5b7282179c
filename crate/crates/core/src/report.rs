use std::fmt;

/// Outcome of one verification sweep.
///
/// For identities `max_residual` is the largest normalized mismatch seen.
/// For inequalities it is the largest normalized violation `(lhs − rhs)/rhs`,
/// which is negative when every instance holds with margin.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: usize,
    pub max_residual: f64,
    pub worst: String,
    pub tolerance: f64,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, tolerance: f64) -> Self {
        Self {
            suite: suite.into(),
            checks: 0,
            max_residual: f64::NEG_INFINITY,
            worst: String::new(),
            tolerance,
        }
    }

    pub fn record(&mut self, residual: f64, at: impl FnOnce() -> String) {
        self.checks += 1;
        if residual > self.max_residual || residual.is_nan() {
            self.max_residual = if residual.is_nan() {
                f64::INFINITY
            } else {
                residual
            };
            self.worst = at();
        }
    }

    pub fn passed(&self) -> bool {
        self.checks > 0 && self.max_residual <= self.tolerance
    }

    /// Fold another report of the same suite into this one.
    pub fn merge(&mut self, other: SuiteReport) {
        self.checks += other.checks;
        if other.max_residual > self.max_residual {
            self.max_residual = other.max_residual;
            self.worst = other.worst;
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<20} {:>4} checks={:<7} max_residual={:+.3e} tol={:.1e} worst=[{}]",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks,
            self.max_residual,
            self.tolerance,
            self.worst
        )
    }
}

/// `|a − b| / max(|a|, |b|, floor)`.
pub(crate) fn rel_diff(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}

/// `(lhs − rhs)/rhs`, or `lhs` when `rhs` vanishes.
pub(crate) fn violation(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        (lhs - rhs) / rhs
    } else {
        lhs
    }
}
