use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("{0} is not a face of the complex")]
    FaceNotInComplex(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("module is not Cohen-Macaulay")]
    NotCohenMacaulay,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("simple-cycle enumeration exceeded the cap of {0}")]
    CycleCapExceeded(usize),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
}
