//! Ingestion of tracked rotor-angle time series and identification of the
//! load curve and motor parameters from them.
//!
//! The pipeline mirrors the bench procedure: record angle vs. time, smooth
//! and differentiate, use the unpowered spin-down to fit the quadratic load
//! curve, subtract the load from powered segments to expose motor torque,
//! then fit the electrical parameters to the torque-speed points.

mod fits;
mod savgol;
mod trace;

pub use fits::{
    fit_load_quadratic, fit_motor_params, linear_fit_speed_voltage, motor_torque_from_trace,
    FixedFieldParams, LinearFit, MotorFitOptions, MotorTorqueSample,
};
#[cfg(feature = "parallel")]
pub use fits::par_fit_motor_params;
pub use savgol::differentiate;
pub use trace::{
    ingest_trace, segment_spin_down, write_trace_csv, AngleUnit, SpeedTrace, TraceMeta,
    DEFAULT_SPIN_DOWN_FLOOR,
};

/// Smoothed kinematics derived from a [`SpeedTrace`]: speed and angular
/// acceleration at each interior sample. The smoothing half-window is
/// trimmed from each end.
#[derive(Debug, Clone, PartialEq)]
pub struct KinematicsTrace {
    pub(crate) times: Vec<f64>,
    pub(crate) omega: Vec<f64>,
    pub(crate) alpha_dot: Vec<f64>,
    /// Smoothing window (samples).
    pub window: usize,
    /// Local polynomial degree.
    pub poly_degree: usize,
}

impl KinematicsTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn alpha_dot(&self) -> &[f64] {
        &self.alpha_dot
    }
}

/// One fitted parameter with its unit.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedParam {
    pub name: &'static str,
    pub value: f64,
    pub unit: &'static str,
}

/// Outcome of a regression: parameter values, residual scale, and quality
/// flags. `converged == false` marks the parameters unreliable; `degenerate`
/// marks a fit whose information matrix is near-singular (confounded
/// parameters), so the covariance is wide in some direction.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub params: Vec<FittedParam>,
    /// Root-mean-square residual in the fitted quantity's units.
    pub residual_rms: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Row-major k x k covariance estimate, when the normal matrix inverts.
    pub covariance: Option<Vec<f64>>,
    pub degenerate: bool,
}

impl FitReport {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|p| p.name == name).map(|p| p.value)
    }
}
