//! `kcl metrics`: expansion ratio and torque densities from measured values.

use crate::config::ProjectConfig;
use crate::report::sig4;
use crate::CliError;
use kcl_core::metrics::performance_report;

pub fn run(config: &ProjectConfig) -> Result<(), CliError> {
    let measured = config.measured()?;
    let report = performance_report(&measured)?;
    println!(
        "expansion ratio        {} ({})",
        sig4(report.expansion_ratio),
        report.expansion_display,
    );
    println!("motor torque           {} N m", sig4(measured.t_motor_max_nm));
    println!("output torque          {} N m", sig4(measured.t_output_max_nm));
    println!(
        "volumetric density     {} N m/m^3 deployed, {} N m/m^3 stowed",
        sig4(report.volumetric_deployed),
        sig4(report.volumetric_stowed),
    );
    println!(
        "torque density         {} N m/kg total mass, {} N m/kg active mass",
        sig4(report.torque_density_total),
        sig4(report.torque_density_active),
    );
    Ok(())
}
