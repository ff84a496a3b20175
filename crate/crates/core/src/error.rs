use crate::estimation::FitReport;

/// Crate-wide error type.
///
/// `Domain` covers invalid parameters, `Infeasible` covers fold geometry that
/// has no real solution, `Format`/`DataQuality` cover trace ingestion, and the
/// `Fit*` variants cover regression failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parameter domain: {0}")]
    Domain(String),

    #[error("geometry infeasible: {0}")]
    Infeasible(String),

    #[error("trace format: {0}")]
    Format(String),

    #[error("data quality: {0}")]
    DataQuality(String),

    #[error("fit failed: {0}")]
    Fit(String),

    /// Optimization ran but no start converged; carries the best result seen.
    #[error("fit did not converge: {message}")]
    FitNonConvergence {
        message: String,
        report: Box<FitReport>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for fit failures (as opposed to bad inputs or I/O).
    pub fn is_fit_error(&self) -> bool {
        matches!(self, Error::Fit(_) | Error::FitNonConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
