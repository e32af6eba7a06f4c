use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SecstError {
    /// An index or argument lies outside the supported envelope.
    #[error("{what} = {value} is outside the supported envelope (max {max})")]
    Envelope { what: &'static str, value: f64, max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// Argument is valid in principle but hits a removable or genuine singularity
    /// that the called routine does not handle.
    #[error("singular parameter: {0}")]
    Singular(String),

    /// The zero-temperature branch was requested while disabled.
    #[error("n_bar_t = 0 requires the zero-temperature branch, which is disabled")]
    ZeroTemperatureDisabled,

    #[error("truncated trace deficit {deficit:.3e} exceeds tolerance {tol:.3e} at n_max = {n_max}")]
    Truncation { deficit: f64, tol: f64, n_max: usize },

    /// Mean photon number is zero; Q and S_max are undefined.
    #[error("vacuum state: mean photon number is zero")]
    Vacuum,

    #[error("Q - 1 does not change sign for n_bar_t in [{lo}, {hi}]")]
    NoCrossing { lo: f64, hi: f64 },

    #[error("eigen-decomposition failed: {0}")]
    Eigen(String),
}

pub type Result<T> = std::result::Result<T, SecstError>;

/// Non-fatal numerical diagnostics. The CLI promotes these to failures
/// under `--strict`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// Probability mass missing from the truncated basis.
    Truncation { missing: f64, n_max: usize },
    /// Doubling the angular quadrature moved an element by more than the threshold.
    Convergence { max_change: f64 },
    /// A closed form was replaced by numeric integration near a singular point.
    NumericFallback { reason: String },
}

impl Warning {
    /// Truncation and convergence warnings; fallbacks are informational.
    pub fn is_accuracy_loss(&self) -> bool {
        matches!(self, Warning::Truncation { .. } | Warning::Convergence { .. })
    }
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::Truncation { missing, n_max } => {
                write!(f, "truncation at n_max = {n_max} leaves {missing:.3e} of the trace")
            }
            Warning::Convergence { max_change } => {
                write!(f, "angular node doubling changed an element by {max_change:.3e}")
            }
            Warning::NumericFallback { reason } => write!(f, "numeric fallback: {reason}"),
        }
    }
}
