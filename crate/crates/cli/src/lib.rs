//! Batch front end for cuelab: subcommand drivers, reproducible run records
//! and the self-test suite.

pub mod commands;
pub mod record;
pub mod selftest;

/// Artifact version stamped into every emitted row.
pub const VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"));

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const ACCURACY: i32 = 3;
}

/// Maps a library error to an exit code: bad input is a usage error,
/// numerical failures are accuracy failures.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    use cuelab_core::Error;
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidArgument(_) | Error::Parse { .. } | Error::Pole) => exit::USAGE,
        Some(Error::Accuracy { .. } | Error::NodeCollision(..) | Error::DegenerateAngles(..)) => exit::ACCURACY,
        _ if err.downcast_ref::<record::AccuracyFailure>().is_some() => exit::ACCURACY,
        _ => exit::FAILURE,
    }
}
