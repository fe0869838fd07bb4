use thiserror::Error;

/// Errors raised by the toolkit.
///
/// `Falsified` is special: it means one of the checked identities did not
/// hold, so callers (and the CLI) treat it as a verification failure rather
/// than a usage problem.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("outside the domain of the operation: {0}")]
    Domain(String),

    #[error("identity `{identity}` falsified: {detail}")]
    Falsified { identity: String, detail: String },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn falsified(identity: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Falsified {
            identity: identity.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
