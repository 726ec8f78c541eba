//! Experiment harness, plain-text configuration, and machine-readable
//! output for the gAL/gDNLS lattice toolkit.

pub mod config;
pub mod harness;
pub mod output;

use std::fmt;

/// Failure of a dispatched run, mapped to the process exit contract:
/// configuration problems exit with 2, runtime/IO problems with 3.
#[derive(Debug)]
pub enum DispatchError {
    Config(config::ConfigError),
    Core(alnls_core::Error),
    Io(std::io::Error),
}

impl fmt::Display for DispatchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DispatchError::Config(e) => write!(f, "{e}"),
            DispatchError::Core(e) => write!(f, "{e}"),
            DispatchError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for DispatchError {}

impl DispatchError {
    pub fn exit_code(&self) -> u8 {
        match self {
            DispatchError::Config(_) => 2,
            DispatchError::Core(_) | DispatchError::Io(_) => 3,
        }
    }
}

impl From<config::ConfigError> for DispatchError {
    fn from(e: config::ConfigError) -> Self {
        DispatchError::Config(e)
    }
}

impl From<std::io::Error> for DispatchError {
    fn from(e: std::io::Error) -> Self {
        DispatchError::Io(e)
    }
}
