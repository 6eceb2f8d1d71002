use std::fmt::Display;

pub const USAGE: u8 = 2;
pub const INVARIANT: u8 = 3;

/// An error together with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

pub type CliResult<T = ()> = Result<T, Failure>;

impl Failure {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: USAGE,
            error: error.into(),
        }
    }

    pub fn invariant(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: INVARIANT,
            error: error.into(),
        }
    }
}

/// Library errors reach the driver through bad flags or bad input files.
impl From<comdet::Error> for Failure {
    fn from(e: comdet::Error) -> Self {
        Self::usage(e)
    }
}

pub trait Context<T> {
    /// Wraps the error as a usage/input failure with extra context.
    fn input_context(self, msg: impl Display + Send + Sync + 'static) -> CliResult<T>;
    /// Wraps the error as an invariant failure with extra context.
    fn invariant_context(self, msg: impl Display + Send + Sync + 'static) -> CliResult<T>;
}

impl<T, E: Into<anyhow::Error>> Context<T> for Result<T, E> {
    fn input_context(self, msg: impl Display + Send + Sync + 'static) -> CliResult<T> {
        self.map_err(|e| Failure::usage(e.into().context(msg)))
    }

    fn invariant_context(self, msg: impl Display + Send + Sync + 'static) -> CliResult<T> {
        self.map_err(|e| Failure::invariant(e.into().context(msg)))
    }
}
