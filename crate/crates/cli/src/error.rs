// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::path::Path;

use ctc_core::Error;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG, message: message.into() }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self { code: EXIT_RUNTIME, message: format!("{}: {err}", path.display()) }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config { .. }
            | Error::Parse { .. }
            | Error::InvalidParameter { .. }
            | Error::InvalidDistribution(_)
            | Error::Assumption1Violation { .. }
            | Error::IndivisibleStubs { .. }
            | Error::EmptySequence => EXIT_CONFIG,
            _ => EXIT_RUNTIME,
        };
        Self { code, message: e.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;
