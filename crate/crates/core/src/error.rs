use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live over different rings or have incompatible shapes.
    #[error("spec mismatch: {0}")]
    SpecMismatch(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("bad word: {0}")]
    BadWord(String),
    /// The element lies in the subgroup, so no separating representation exists.
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("element has no finite order over the integers")]
    NoFiniteOrder,
    #[error("bad conjugation target: {0}")]
    BadTarget(String),
    #[error("bad size: {0}")]
    BadSize(String),
    #[error("size or search budget exceeded: {0}")]
    TooLarge(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
