use thiserror::Error;

use crate::bicomplex::{Classification, Component};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BicomplexError {
    #[error("non-finite bicomplex component")]
    NonFinite,
    #[error("not invertible: {0}")]
    NotInvertible(Classification),
    #[error("polynomial must have degree at least 1")]
    DegreeTooLow,
    #[error("leading coefficient is not invertible: {0}")]
    LeadingNotInvertible(Classification),
    #[error("root residual {residual:e} exceeds bound {bound:e}")]
    RootResidual { residual: f64, bound: f64 },
    #[error("hyperbolic coordinates must be nonnegative, got ({h1}, {h2})")]
    InvalidHyperbolic { h1: f64, h2: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("measure space has no atoms")]
    Empty,
    #[error("atom {atom} has invalid weight {weight}")]
    InvalidWeight { atom: usize, weight: f64 },
    #[error("invalid weight rule: {0}")]
    InvalidRule(String),
    #[error("map has {got} entries but the space has {expected} atoms")]
    MapLength { expected: usize, got: usize },
    #[error("atom {atom} maps to {image}, outside 1..={len}")]
    MapOutOfRange { atom: usize, image: usize, len: usize },
    #[error("table maps require a finite space")]
    TableOnLazySpace,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrliczError {
    #[error("phi argument must be nonnegative, got {0}")]
    NegativeArgument(f64),
    #[error("invalid phi spec '{spec}': {reason}")]
    InvalidPhi { spec: String, reason: String },
    #[error("sequence has {got} terms but the space has {expected} atoms")]
    LengthMismatch { expected: usize, got: usize },
    #[error("no finite lambda found: the sequence is not in the Orlicz space")]
    NotInSpace,
    #[error("series diverges")]
    Divergent,
    #[error("convergence probe inconclusive at the truncation budget")]
    Inconclusive,
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("exponent must satisfy p > 1, got {0}")]
    InvalidExponent(f64),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix components must have equal shape")]
    ShapeMismatch,
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dense operators need a finite space")]
    DenseOnLazySpace,
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("operator is not invertible: singular {}", fmt_components(.singular))]
    NotInvertible { singular: Vec<Component> },
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Orlicz(#[from] OrliczError),
}

fn fmt_components(c: &[Component]) -> String {
    c.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" and ")
}

/// Failures while reading inputs from the wire formats.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{context}: {message}")]
    Schema { context: String, message: String },
}
