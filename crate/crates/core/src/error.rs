use thiserror::Error;

/// Errors raised by the combinatorial and moment routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A request exceeded a configured enumeration or search limit.
    #[error("{what}: requested {requested} exceeds the configured cap of {cap}")]
    SizeLimit {
        what: &'static str,
        requested: u128,
        cap: u128,
    },
    /// Malformed or incomplete input (missing sequence entries, bad grids, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The input is well formed but outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A computed quantity violated one of its stated contracts.
    #[error("numerical contract violated: {0}")]
    NumericalContract(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
