use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} is invalid: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("no positive steady state: beta = {beta} must be below m + 1 = {}", m + 1.0)]
    NoPositiveSteadyState { beta: f64, m: f64 },

    #[error("delay must be positive, got {0}")]
    NonPositiveDelay(f64),

    #[error("division hazard: prey density {value:e} is at or below the floor {floor:e}")]
    DivisionHazard { value: f64, floor: f64 },

    #[error("2x2 solve refused: condition number {condition:e} exceeds the limit")]
    SingularSolve { condition: f64 },

    #[error("eigenvector denominator is near zero (|.| = {magnitude:e})")]
    NearSingularEigen { magnitude: f64 },

    #[error("wave number {n}: sin(omega tau) = {sin} is not positive, the principal arccos branch does not apply")]
    BranchViolation { n: u32, sin: f64 },

    #[error("wave number {n} has no Hopf frequency (Q_n >= 0)")]
    NoHopfFrequency { n: u32 },

    #[error("no Hopf point: Q_n >= 0 for every scanned wave number")]
    NoHopfPoint,

    #[error("n_max = {n_max} does not bracket the threshold minimiser (needs at least {needed})")]
    ThresholdWindow { n_max: u32, needed: u32 },

    #[error("operation requires the {expected} variant")]
    WrongVariant { expected: &'static str },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("non-finite field value at t = {t}")]
    NonFinite { t: f64 },

    #[error("blow-up at t = {t}: |field| = {value:e}")]
    BlowUp { t: f64, value: f64 },

    #[error("time step {dt:e} violates the diffusive CFL bound; use dt <= {suggested:e}")]
    CflViolation { dt: f64, suggested: f64 },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("config is missing required key `{0}`")]
    MissingKey(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable identifier, suitable for grepping CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "E_PARAM",
            Error::NoPositiveSteadyState { .. } => "E_STEADY_STATE",
            Error::NonPositiveDelay(_) => "E_DELAY",
            Error::DivisionHazard { .. } => "E_DIVISION",
            Error::SingularSolve { .. } => "E_SINGULAR",
            Error::NearSingularEigen { .. } => "E_EIGEN",
            Error::BranchViolation { .. } => "E_BRANCH",
            Error::NoHopfFrequency { .. } => "E_NO_FREQUENCY",
            Error::NoHopfPoint => "E_NO_HOPF",
            Error::ThresholdWindow { .. } => "E_WINDOW",
            Error::WrongVariant { .. } => "E_VARIANT",
            Error::Inconclusive(_) => "E_INCONCLUSIVE",
            Error::NonFinite { .. } => "E_NONFINITE",
            Error::BlowUp { .. } => "E_BLOWUP",
            Error::CflViolation { .. } => "E_CFL",
            Error::Config { .. } => "E_CONFIG",
            Error::MissingKey(_) => "E_CONFIG",
            Error::Io(_) => "E_IO",
        }
    }
}
