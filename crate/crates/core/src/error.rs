use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state is not a point of the simplex: {0}")]
    InvalidSimplex(String),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("config parse error: {0}")]
    Config(String),

    #[error("integration step too large: component {component} reached {value:e} at t = {time}")]
    StepTooLarge { time: f64, component: usize, value: f64 },

    #[error("closed-form denominator {value:e} vanishes ({what})")]
    DegenerateDenominator { what: &'static str, value: f64 },

    #[error("control-fixed HJB system is singular")]
    SingularSystem,

    #[error("denominator q_rec_U - beta_UU * x_DI vanishes at x_DI = {at}")]
    DenominatorPole { at: f64 },

    #[error("assumption violated: {0}")]
    AssumptionViolation(String),

    #[error("no valid HJB solution at x = {0:?}")]
    NoValidSolution([f64; 4]),
}

impl Error {
    /// Stable snake_case identifier used in machine-readable error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidSimplex(_) => "invalid_simplex",
            Error::InvalidParams(_) => "invalid_params",
            Error::Config(_) => "config_parse",
            Error::StepTooLarge { .. } => "step_too_large",
            Error::DegenerateDenominator { .. } => "degenerate_denominator",
            Error::SingularSystem => "singular_system",
            Error::DenominatorPole { .. } => "denominator_pole",
            Error::AssumptionViolation(_) => "assumption_violation",
            Error::NoValidSolution(_) => "no_valid_solution",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
