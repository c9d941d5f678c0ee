use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("s = {s} lies on a singular locus (a circle of the join collapses)")]
    SingularLocus { s: f64 },

    #[error("s = {s} is outside the interval ({lo}, {hi})")]
    OutOfInterval { s: f64, lo: f64, hi: f64 },

    #[error("the construction requires a_i = |k_i| for i = 1..4")]
    NotMorphismRegime,

    #[error("sin(alpha) vanishes at s = {s}; the profile sits on a pole")]
    PoleValue { s: f64 },

    #[error("quadrature did not reach tolerance after {evaluations} evaluations (error estimate {estimate:e})")]
    ToleranceNotMet { evaluations: usize, estimate: f64 },

    #[error("step size underflow at s = {s} (step {step:e})")]
    StepUnderflow { s: f64, step: f64 },

    #[error("no preimage: t = {t} is outside the profile range ({lo}, {hi})")]
    NoPreimage { t: f64, lo: f64, hi: f64 },

    #[error("grid profile is not strictly increasing at node {index}")]
    NonMonotone { index: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
