use thiserror::Error;

/// Errors raised by the covariance analysis and the steady-state solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("uncertainty bound violated: {quantity} = {value:e} is below the minimum {bound:e}")]
    UncertaintyViolation {
        quantity: &'static str,
        value: f64,
        bound: f64,
    },
    #[error("degenerate state: {0}")]
    DegenerateState(String),
    #[error("invalid covariance matrix: {0}")]
    InvalidCovariance(String),
    #[error("reduced purity formula inapplicable: {0}")]
    AssumptionViolated(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("correlated mechanical baths (gamma_x != gamma_y with eta_m != 0) have no white-noise surrogate")]
    CorrelatedBathUnsupported,
    #[error("unstable system: drift matrix has an eigenvalue with real part {max_real_part:e}")]
    UnstableSystem { max_real_part: f64 },
    #[error("linear solve failed: {0}")]
    SolveFailure(String),
    #[error("quadrature did not reach tolerance: estimate {estimate:e}, error {error:e}, requested {requested:e}")]
    QuadratureFailure {
        estimate: f64,
        error: f64,
        requested: f64,
    },
    #[error("optical-spring fixed point did not converge after {iterations} iterations")]
    FixedPointDivergence { iterations: usize },
    #[error("invalid regime: {0}")]
    InvalidRegime(String),
    #[error("unstable regime: {0}")]
    UnstableRegime(String),
    #[error("dark mode is undamped (delta_m = 0 or g_o = 0): no steady state")]
    UndampedDarkMode,
}

impl Error {
    /// True for the variants that signal a dynamically unstable parameter point.
    pub fn is_instability(&self) -> bool {
        matches!(
            self,
            Error::UnstableSystem { .. } | Error::UnstableRegime(_) | Error::UndampedDarkMode
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
