use thiserror::Error;

/// Errors surfaced by the library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range user input (edge lists, configs, flags).
    #[error("input error: {0}")]
    Input(String),

    /// An invalid model or bound parameter.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// An exhaustive procedure was asked to run above its size cap.
    #[error("capability error: {what} supports n <= {limit}, got n = {n}")]
    Capability {
        what: &'static str,
        limit: usize,
        n: usize,
    },

    /// A numerical routine failed to converge.
    #[error("computation error: {0}")]
    Computation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
