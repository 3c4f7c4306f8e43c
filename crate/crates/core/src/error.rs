use std::path::PathBuf;

/// Errors raised by the solver library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A conserved state with non-positive density or pressure.
    #[error("non-physical state: mass={mass:e}, momentum={momentum:e}, energy={energy:e}")]
    NonPhysicalState {
        mass: f64,
        momentum: f64,
        energy: f64,
    },

    /// A cell went non-physical inside the time loop; the step was rejected.
    #[error(
        "solver blow-up in {phase} at step {step}, t={time:.9}: cell {cell} (r={r:.6}) \
         has mass={mass:e}, momentum={momentum:e}, energy={energy:e}"
    )]
    SolverBlowup {
        phase: &'static str,
        step: u64,
        time: f64,
        cell: usize,
        r: f64,
        mass: f64,
        momentum: f64,
        energy: f64,
    },

    /// The two states of an exact Riemann problem would generate vacuum.
    #[error("Riemann data generates vacuum: du={velocity_jump}, critical={critical}")]
    VacuumFormation { velocity_jump: f64, critical: f64 },

    /// Newton iteration of the exact Riemann solver failed to converge.
    #[error("exact Riemann solver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// Source term evaluated at or behind the symmetry axis.
    #[error("geometric source evaluated at singular radius r={r}")]
    SingularRadius { r: f64 },

    /// An invalid model or grid parameter.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Configuration parse or validation failure.
    #[error("{}", config_message(.line, .reason))]
    Config { line: Option<usize>, reason: String },

    #[error("cannot read {path}: {source}")]
    ConfigFile {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn config_message(line: &Option<usize>, reason: &str) -> String {
    match line {
        Some(line) => format!("config error at line {line}: {reason}"),
        None => format!("config error: {reason}"),
    }
}

impl Error {
    pub(crate) fn config(line: Option<usize>, reason: impl Into<String>) -> Self {
        Error::Config {
            line,
            reason: reason.into(),
        }
    }

    /// True for errors that indicate the numerical solution became unphysical.
    pub fn is_non_physical(&self) -> bool {
        matches!(
            self,
            Error::NonPhysicalState { .. } | Error::SolverBlowup { .. }
        )
    }

    /// True for configuration errors (including unreadable config files).
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config { .. } | Error::ConfigFile { .. } | Error::InvalidParameter(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
