//! Extremal problems: generalized Rayleigh quotients, the stability constants
//! of the `L²`-projection, and convergence-rate experiments.

mod constants;
mod eigen;
mod rates;

pub use constants::{
    additive_constant, compute_constants, form_sup, mult_quotient, multiplicative_constant,
    multiplicative_from_forms, ConstantKind, ConstantProblem, ConstantRecord, MultSolution,
    SolverSettings,
};
pub use eigen::{rayleigh_sup, rayleigh_sup_factored, EigenSolution};
pub use rates::{fitted_slope, trace_error_rate, RateFamily, RatePoint, RateReport};
