//! Exit-code mapping: 2 invalid arguments, 3 I/O failure, 4 kernel validity.

use std::fmt;

use shiftkern::io::{PgmError, ReportError};
use shiftkern::{FilterError, KernelError};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Validity(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Validity(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Io(msg) | CliError::Validity(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl From<PgmError> for CliError {
    fn from(err: PgmError) -> Self {
        CliError::Io(err.to_string())
    }
}

impl From<ReportError> for CliError {
    fn from(err: ReportError) -> Self {
        CliError::Io(err.to_string())
    }
}

impl From<KernelError> for CliError {
    fn from(err: KernelError) -> Self {
        CliError::Usage(err.to_string())
    }
}

impl From<FilterError> for CliError {
    fn from(err: FilterError) -> Self {
        match err {
            FilterError::WindowExceedsSupport { .. }
            | FilterError::RangeHalfwidthTooSmall { .. } => CliError::Validity(err.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}
