use thiserror::Error;

/// Errors shared by all estimator and oracle modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A probability vector failed validation (negative entry, bad sum, empty).
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// An argument fell outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request exceeded a hard capability limit (e.g. enumeration dimension).
    #[error("capability limit: {0}")]
    Capability(String),

    /// A value left the representable range of the implementation.
    #[error("out of range: {0}")]
    Range(String),

    /// The operation could not produce a defined result for these inputs.
    #[error("evaluation failed: {0}")]
    Evaluation(String),

    /// An iterative procedure hit its iteration cap; the message carries the
    /// last state for diagnosis.
    #[error("iteration cap exceeded: {0}")]
    NonTermination(String),
}

pub type Result<T> = std::result::Result<T, Error>;
