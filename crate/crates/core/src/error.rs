use thiserror::Error;

/// Errors raised by constructions whose inputs fail a checked invariant.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ill-defined map: {0}")]
    IllDefined(String),
    #[error("maps do not compose: {0}")]
    NotComposable(String),
    #[error("not an isomorphism: {0}")]
    NotIso(String),
    #[error("ring axiom violated: {0}")]
    RingAxiom(String),
    #[error("Mackey functor axiom violated: {0}")]
    MackeyAxiom(String),
    #[error("module axiom violated: {0}")]
    ModuleAxiom(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("infinite computation: {0}")]
    Infinite(String),
    #[error("truncation too shallow: {0}")]
    Truncation(String),
    #[error("degree outside the valid range: {0}")]
    OutOfRange(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("spec file: {0}")]
    SpecFile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
