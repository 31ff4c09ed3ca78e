//! Error wrapper that carries the pipeline stage a failure came from, plus
//! the mapping from library errors to process exit codes.

use std::fmt;

use beamcluster::Error;

/// Exit code for usage and validation failures.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for I/O and file-format failures.
pub const EXIT_IO: i32 = 3;
/// Exit code for numerical convergence failures.
pub const EXIT_CONVERGENCE: i32 = 4;

/// A library error, optionally tagged with the pipeline stage (`generate`,
/// `train`, `eval`) that produced it so multi-stage commands can say where
/// they stopped.
#[derive(Debug)]
pub struct CliError {
    pub stage: Option<&'static str>,
    pub source: Error,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.stage {
            Some(stage) => write!(f, "{stage} stage: {}", self.source),
            None => write!(f, "{}", self.source),
        }
    }
}

impl std::error::Error for CliError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

impl From<Error> for CliError {
    fn from(source: Error) -> Self {
        CliError {
            stage: None,
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Attaches a stage name to an error, keeping an already-assigned stage.
pub trait StageExt<T> {
    fn stage(self, name: &'static str) -> CliResult<T>;
}

impl<T> StageExt<T> for Result<T, Error> {
    fn stage(self, name: &'static str) -> CliResult<T> {
        self.map_err(|source| CliError {
            stage: Some(name),
            source,
        })
    }
}

impl<T> StageExt<T> for CliResult<T> {
    fn stage(self, name: &'static str) -> CliResult<T> {
        self.map_err(|mut err| {
            err.stage.get_or_insert(name);
            err
        })
    }
}

/// Process exit code for a library error: validation problems are usage
/// errors, file problems are I/O errors, and eigensolver breakdowns get
/// their own code so scripted sweeps can tell them apart.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_)
        | Error::DimensionMismatch { .. }
        | Error::SizeLimit { .. }
        | Error::EmptyCluster => EXIT_USAGE,
        Error::Io(_) | Error::Parse { .. } | Error::Version(_) => EXIT_IO,
        Error::Convergence { .. } => EXIT_CONVERGENCE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_partition_the_error_space() {
        assert_eq!(exit_code(&Error::invalid("bad")), EXIT_USAGE);
        assert_eq!(
            exit_code(&Error::DimensionMismatch {
                expected: 4,
                got: 8
            }),
            EXIT_USAGE
        );
        assert_eq!(exit_code(&Error::parse(3, "junk")), EXIT_IO);
        assert_eq!(
            exit_code(&Error::Io(std::io::Error::other("disk"))),
            EXIT_IO
        );
    }

    #[test]
    fn stage_tag_prefixes_the_message_once() {
        let err: CliResult<()> = Err(Error::invalid("bad gap")).stage("train");
        let err = err.stage("compare").unwrap_err();
        assert_eq!(err.stage, Some("train"));
        assert_eq!(format!("{err}"), "train stage: invalid argument: bad gap");
    }
}
