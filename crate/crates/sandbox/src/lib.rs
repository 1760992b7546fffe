//! Finite-dimensional models used to check the ideal calculus against actual
//! algebra elements.

pub mod finite_group_sandbox;
pub mod rotation_sandbox;
pub mod suites;

use rotalg_core::ideal_calculus::IdealError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SandboxError {
    #[error("elements are built over different angles")]
    AngleMismatch,
    #[error("no k with |k| <= {bound} puts kρ within tolerance of {target}")]
    PhaseSearchFailed { target: f64, bound: u64 },
    #[error("averaging stage r = {r} must exceed q = {q}")]
    BadStage { q: i64, r: i64 },
    #[error("frequency support {support:?} is not of the form {{q, -q}}")]
    NotTwoFrequency { support: Vec<i64> },
    #[error("center check needs a basic function with step 1 and an arc")]
    NotBasicArc,
    #[error("bad coefficient: {0}")]
    BadCoefficient(String),
    #[error("expected a {expected} element")]
    WrongMode { expected: &'static str },
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error("the trivial group has no proper augmentation ideal")]
    TrivialGroup,
    #[error("invalid group: {0}")]
    BadGroup(String),
    #[error("invalid action: {0}")]
    BadAction(String),
    #[error("invalid weights: {0}")]
    BadWeights(String),
    #[error("subspace is not a two-sided ideal")]
    NotAnIdeal,
    #[error("subspace is not invariant under the group")]
    NotInvariant,
    #[error("ideal must be nonzero and proper: {0}")]
    ImproperIdeal(String),
    #[error(transparent)]
    Json(#[from] JsonError),
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{0}")]
pub struct JsonError(pub String);

impl From<serde_json::Error> for SandboxError {
    fn from(e: serde_json::Error) -> Self {
        SandboxError::Json(JsonError(e.to_string()))
    }
}
