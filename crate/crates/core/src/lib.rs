//! Design, simulation, and identification toolkit for foldable
//! Kresling-cylinder corona-discharge motors.
//!
//! - [`geometry`]: deployable fold geometry and rotor/stator nesting.
//! - [`corona`]: electrostatic induction torque model and torque-speed curves.
//! - [`dynamics`]: rotor speed-up/spin-down integration and operating points.
//! - [`estimation`]: trace ingestion, smoothed differentiation, load and
//!   motor-parameter fits.
//! - [`pattern`]: flat crease patterns with electrode layouts, SVG export.
//! - [`metrics`]: expansion ratio and torque-density report.
//!
//! The `parallel` feature (default) adds rayon-backed `par_*` variants of the
//! sweep and multi-start operations; results are bit-identical to the
//! sequential paths.

pub mod corona;
pub mod dynamics;
pub mod error;
pub mod estimation;
pub mod geometry;
pub mod metrics;
mod numeric;
pub mod pattern;

pub use error::{Error, Result};
