use std::fmt;
use std::io;
use std::process::ExitCode;

/// Why a subcommand did not succeed. Argument problems exit with 2, failed
/// checks and computation errors with 1.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Check(String),
    Compute(bspdc::Error),
    Io(io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "invalid arguments: {m}"),
            Failure::Check(m) => write!(f, "check failed: {m}"),
            Failure::Compute(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<bspdc::Error> for Failure {
    fn from(e: bspdc::Error) -> Self {
        use bspdc::Error::*;
        match e {
            InvalidTransmittance(_)
            | InvalidGain(_)
            | NoShots
            | UnsupportedSector { .. }
            | UnsupportedInput(_)
            | UnsupportedOrder(_)
            | OutsideTruncation { .. }
            | Parse { .. } => Failure::Usage(e.to_string()),
            e => Failure::Compute(e),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

pub type Outcome = Result<(), Failure>;
