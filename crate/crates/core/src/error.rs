use thiserror::Error;

/// Failures raised by the numerical routines.
///
/// Every variant carries a stable machine-readable tag (see [`Error::tag`])
/// which the command-line frontend reports on failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("moment functional lost positivity at degree {degree} (beta^2 = {beta2:e})")]
    LossOfPositivity { degree: usize, beta2: f64 },

    #[error("degenerate jump {jump}: a_{jump} = {value:e} is below the reconstruction threshold")]
    DegenerateJump { jump: usize, value: f64 },

    #[error("coupled Painleve II solution left the pole-free regime near x = {x}: {reason}")]
    PoleOrSignChange { x: f64, reason: String },

    #[error("Painleve II integration blew up near x = {x}")]
    BlowUp { x: f64 },

    #[error("step size underflow at x = {x} (h = {h:e})")]
    StepSizeUnderflow { x: f64, h: f64 },

    #[error("integration routes disagree: {first} vs {second} (|diff| = {diff:e})")]
    RouteDisagreement { first: f64, second: f64, diff: f64 },

    #[error("Fredholm determinant not converged: |det(m) - det(2m)| = {change:e}")]
    NonConvergence { change: f64 },

    #[error("only {accepted} samples satisfied the conditioning event (need {required})")]
    InsufficientConditioning { accepted: u64, required: u64 },
}

impl Error {
    pub fn tag(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::LossOfPositivity { .. } => "loss-of-positivity",
            Error::DegenerateJump { .. } => "degenerate-jump",
            Error::PoleOrSignChange { .. } => "pole-or-sign-change",
            Error::BlowUp { .. } => "blow-up",
            Error::StepSizeUnderflow { .. } => "step-size-underflow",
            Error::RouteDisagreement { .. } => "route-disagreement",
            Error::NonConvergence { .. } => "non-convergence",
            Error::InsufficientConditioning { .. } => "insufficient-conditioning",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
