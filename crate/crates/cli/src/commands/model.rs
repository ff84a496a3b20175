//! `kcl model`: torque-speed table plus the closed-form and numeric maxima.

use crate::config::ProjectConfig;
use crate::report::sig4;
use crate::CliError;
use kcl_core::corona;
use std::fmt::Write as _;
use std::path::Path;

pub fn run(
    config: &ProjectConfig,
    out_dir: &Path,
    v_kv: Option<f64>,
    omega_max: f64,
    steps: usize,
) -> Result<(), CliError> {
    let params = config.electrical()?;
    let body = config.body()?;
    let volts = match v_kv {
        Some(kv) => kv * 1e3,
        None => config
            .first_drive_volts()
            .ok_or_else(|| CliError::data("no drive voltage: pass --v-kv or set drive.voltages_kV"))?,
    };

    let field = corona::effective_field(&params, body.radius(), volts);
    if field.below_onset {
        eprintln!(
            "warning: |{}| kV is below the {} kV onset; torque table is all zeros",
            volts / 1e3,
            params.v_onset().abs() / 1e3,
        );
    }

    #[cfg(feature = "parallel")]
    let table = corona::par_torque_speed_sweep(&params, &body, volts, (0.0, omega_max), steps)?;
    #[cfg(not(feature = "parallel"))]
    let table = corona::torque_speed_sweep(&params, &body, volts, (0.0, omega_max), steps)?;

    let mut csv = String::from("# model=corona_torque_speed\n");
    let _ = writeln!(csv, "# voltage_kV={}", volts / 1e3);
    csv.push_str("omega_rad_s,torque_Nm\n");
    for row in &table {
        let _ = writeln!(csv, "{},{}", row.omega_rad_s, row.torque_nm);
    }
    super::ensure_out_dir(out_dir)?;
    let path = out_dir.join("torque_speed.csv");
    std::fs::write(&path, csv)?;

    let closed = corona::max_torque(&params, &body, volts);
    let numeric = corona::max_torque_numeric(&params, &body, volts);
    println!("drive voltage          {} kV", sig4(volts / 1e3));
    println!("effective field        {} V/m", sig4(field.field_v_per_m));
    println!("closed-form max torque {} N m", sig4(closed));
    println!(
        "numeric max torque     {} N m at {} rad/s",
        sig4(numeric.torque_nm),
        sig4(numeric.omega_rad_s),
    );
    if numeric.torque_nm > 0.0 {
        println!(
            "closed/numeric gap     {} %",
            sig4((closed / numeric.torque_nm - 1.0) * 100.0),
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}
