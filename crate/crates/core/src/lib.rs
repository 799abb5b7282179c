pub mod cli;
pub mod error;
pub mod extremal;
pub mod field;
pub mod forms;
pub mod identities;
pub mod jacobi;
pub mod report;
pub mod simplex;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FnField, Polynomial, ScalarField};
pub use jacobi::JacobiWeight;
pub use report::SuiteReport;
