use std::fmt;

use fiberatlas_core::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INVALID: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    pub const UNKNOWN_SUBCOMMAND: i32 = 64;
    pub const MALFORMED_FILE: i32 = 65;
}

/// A failed run, classified by exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Bad arguments or inputs the algorithms reject.
    Invalid(String),
    /// A numerical procedure did not succeed.
    Numerical(String),
    /// An input file could not be read or has the wrong shape.
    Malformed(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => exit::INVALID,
            Failure::Numerical(_) => exit::NUMERICAL,
            Failure::Malformed(_) => exit::MALFORMED_FILE,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invalid(m) => write!(f, "invalid input: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
            Failure::Malformed(m) => write!(f, "malformed file: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}
