//! Headline performance figures: expansion ratio and torque densities.

use crate::error::{Error, Result};
use crate::geometry;

/// Bench-measured quantities the report is computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasuredPerformance {
    /// Peak active motor torque (N m).
    pub t_motor_max_nm: f64,
    /// Peak shaft output torque, load subtracted (N m).
    pub t_output_max_nm: f64,
    pub stowed_height_mm: f64,
    pub deployed_height_mm: f64,
    pub total_mass_kg: f64,
    /// Mass of the active circuit-board surfaces only (kg).
    pub active_mass_kg: f64,
    pub deployed_volume_m3: f64,
    pub stowed_volume_m3: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceReport {
    pub expansion_ratio: f64,
    /// Two-significant-figure display form, e.g. `"2.5:1"`.
    pub expansion_display: String,
    /// Motor torque per deployed volume (N m / m^3).
    pub volumetric_deployed: f64,
    /// Motor torque per stowed volume (N m / m^3).
    pub volumetric_stowed: f64,
    /// Motor torque per total system mass (N m / kg).
    pub torque_density_total: f64,
    /// Motor torque per active-component mass (N m / kg).
    pub torque_density_active: f64,
}

fn positive(name: &str, value: f64) -> Result<f64> {
    if !(value > 0.0) {
        return Err(Error::Domain(format!("{name} must be positive, got {value}")));
    }
    Ok(value)
}

/// Compute the performance report. Torque densities use the active motor
/// torque, matching how the headline figures are quoted.
pub fn performance_report(m: &MeasuredPerformance) -> Result<PerformanceReport> {
    let torque = positive("t_motor_max_nm", m.t_motor_max_nm)?;
    positive("t_output_max_nm", m.t_output_max_nm)?;
    let total_mass = positive("total_mass_kg", m.total_mass_kg)?;
    let active_mass = positive("active_mass_kg", m.active_mass_kg)?;
    let deployed_volume = positive("deployed_volume_m3", m.deployed_volume_m3)?;
    let stowed_volume = positive("stowed_volume_m3", m.stowed_volume_m3)?;
    let ratio = geometry::expansion_ratio(m.stowed_height_mm, m.deployed_height_mm)?;
    Ok(PerformanceReport {
        expansion_ratio: ratio,
        expansion_display: geometry::format_ratio(ratio),
        volumetric_deployed: torque / deployed_volume,
        volumetric_stowed: torque / stowed_volume,
        torque_density_total: torque / total_mass,
        torque_density_active: torque / active_mass,
    })
}
