//! Command-line front end and file formats for `censcov-core`.
//!
//! ```text
//! censcov simulate --scenario case1-heavy-n500 --k 2000 --seed 7 --workers 4
//! censcov analyze --data chol.csv --y ldl --value age --status event --methods mle,cox_multiple
//! ```

pub mod app;
pub mod config;
pub mod error;
pub mod io;
pub mod report;
pub mod simulate;

pub use app::{execute, main_with_args, run};
pub use config::RunConfig;
pub use error::{CliError, CliResult, EXIT_NUMERIC, EXIT_USAGE};
