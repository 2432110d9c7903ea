//! Crate-wide error type. Variant messages name the subsystem that failed so
//! CLI diagnostics can point at the responsible stage of the pipeline.

use thiserror::Error;

/// Signal raised when a Stieltjes denominator (a Hankel determinant) vanishes,
/// which happens exactly when two adjacent peaks collide.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionSignal {
    /// Index `k` of the first vanishing determinant in the Stieltjes formulas.
    pub hankel_index: usize,
    /// Collision instant, once located along the spectral flow. Inversion of a
    /// bare data set has no time axis, so this starts out as `None`.
    pub time: Option<f64>,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("peakon-core: invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("peakon-core: non-finite kernel parameter")]
    NonFiniteKernel,

    #[error("dynamics: coincident peak positions")]
    CoincidentPositions,

    #[error("dynamics: step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("dynamics: requested time lies at or beyond the blow-up time t = {t_blowup}")]
    BeyondBlowup { t_blowup: f64 },

    #[error("dynamics: {0}")]
    Dynamics(String),

    #[error("spectral-forward: {0}")]
    Spectral(String),

    #[error("spectral-forward: Weyl function evaluated at a pole or vanishing denominator")]
    WeylPole,

    #[error("moment-inverse: {0}")]
    MomentInverse(String),

    #[error("moment-inverse: Hankel determinant {} vanishes{}",
        .0.hankel_index,
        .0.time.map(|t| format!(" near t = {t}")).unwrap_or_default())]
    Collision(CollisionSignal),

    #[error("isospectral-flow: {0}")]
    Flow(String),

    #[error("asymptotics: {0}")]
    Asymptotics(String),

    #[error("cli: bad input: {0}")]
    BadInput(String),

    #[error("cli: i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("cli: json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status for the CLI: 2 bad input, 3 collision without
    /// reconstruction, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BadInput(_) | Error::Io(_) | Error::Json(_) | Error::InvalidConfig(_) => 2,
            Error::Collision(_) => 3,
            _ => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
