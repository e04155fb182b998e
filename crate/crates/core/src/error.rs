use thiserror::Error;

use crate::poly::PolyError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("operation requires a skew-symmetric (pre-Lie) structure")]
    NotSkew,
    #[error("operation requires a Lie algebroid: {0}")]
    NotLie(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("coefficient mentions fiber coordinates: {0}")]
    FiberVariable(String),
    #[error("tensor is not linear: component {component} = {value}")]
    NotLinear { component: String, value: String },
    #[error("total space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
