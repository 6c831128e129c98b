//! Exit-code classification.

use std::fmt;
use std::process::ExitCode;

/// Configuration or validation problem.
pub const EXIT_CONFIG: u8 = 2;
/// Numerical non-convergence.
pub const EXIT_NUMERICAL: u8 = 3;
/// Verification checks ran but at least one failed.
pub const EXIT_CHECKS_FAILED: u8 = 1;
/// Anything else, mostly I/O.
pub const EXIT_OTHER: u8 = 1;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn config(msg: impl fmt::Display) -> Self {
        Self {
            code: EXIT_CONFIG,
            error: anyhow::anyhow!("{msg}"),
        }
    }

    pub fn numerical(msg: impl fmt::Display) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            error: anyhow::anyhow!("{msg}"),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

impl From<trimotion::Error> for Failure {
    fn from(e: trimotion::Error) -> Self {
        use trimotion::Error::*;
        let code = match e {
            NotConverged { .. } | Breakdown { .. } | AccuracyNotReached { .. } => EXIT_NUMERICAL,
            _ => EXIT_CONFIG,
        };
        Self { code, error: e.into() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_OTHER,
            error: e.into(),
        }
    }
}

pub trait ResultExt<T> {
    fn classify(self) -> Result<T, Failure>;
}

impl<T> ResultExt<T> for trimotion::Result<T> {
    fn classify(self) -> Result<T, Failure> {
        self.map_err(Failure::from)
    }
}
