use thiserror::Error;

use crate::expr::{EvalError, ParseError};

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed expression: {0}")]
    Parse(#[from] ParseError),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("weight does not interpolate the coefficients: |h(n+1/2) - conj(c_n)| = {deviation:e} at n = {node}")]
    SymbolMismatch { node: usize, deviation: f64 },
    #[error("pole of the weight on the sampling grid at y = {0}")]
    PoleOnGrid(f64),
    #[error("not a self-map of the half-plane: Re phi = {re} at y = {y}")]
    NotSelfMap { y: f64, re: f64 },
    #[error("requested N = {requested} exceeds the {mode} mode cap of {cap}")]
    OracleCap { requested: usize, cap: usize, mode: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable class name used in CLI diagnostics.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Parse(_) => "expression-error",
            Error::Eval(_) => "evaluation-error",
            Error::InvalidSpec(_) | Error::SymbolMismatch { .. } => "spec-error",
            Error::PoleOnGrid(_) => "pole-on-grid",
            Error::NotSelfMap { .. } => "not-self-map",
            Error::OracleCap { .. } => "oracle-cap",
            Error::Config(_) | Error::Json(_) => "config-error",
            Error::Io(_) => "io-error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
