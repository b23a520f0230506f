//! Subcommands of the `hyperzeta` binary, callable as library functions.
//!
//! Every command returns its standard output as a `String`; failures carry
//! the process exit code (1 usage, 2 verification, 3 budget, 4 precision).

pub mod cache;
pub mod compare;
pub mod identities;
pub mod moments;
pub mod predict;
pub mod table;
pub mod zeta;

use std::fmt;

use hyperzeta::algebra::FqContext;
use hyperzeta::Error;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_PRECISION: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        CliError { code: EXIT_VERIFICATION, message: message.into() }
    }

    /// Prefixes the message, keeping the exit code.
    pub fn with_context(self, context: &str) -> Self {
        CliError { code: self.code, message: format!("{context}: {}", self.message) }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::VerificationFailed(_) => EXIT_VERIFICATION,
            Error::BudgetExceeded { .. } | Error::ExtensionTooLarge { .. } => EXIT_BUDGET,
            Error::PrecisionInsufficient(_) => EXIT_PRECISION,
            _ => EXIT_USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// The field of order `q`, or a usage error.
pub fn field(q: u64) -> CliResult<FqContext> {
    FqContext::from_order(q).map_err(|e| CliError::usage(format!("q = {q}: {e}")))
}

/// Installs a global worker pool of the given size; later calls are ignored.
pub fn init_threads(threads: Option<usize>) {
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
}
