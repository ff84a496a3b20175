//! `kcl fit-motor`: identify (sigma, V_onset, alpha) from powered traces.
//!
//! Each trace must carry its drive voltage (`# voltage_kV=` metadata). The
//! `KCL_SEED` environment variable permutes the multi-start order.

use crate::config::ProjectConfig;
use crate::report::sig4;
use crate::CliError;
use kcl_core::estimation::{self, AngleUnit, FixedFieldParams, MotorFitOptions, MotorTorqueSample};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var("KCL_SEED") {
        Ok(text) => text.trim().parse::<u64>().map_err(|_| {
            CliError::data(format!("KCL_SEED must be an unsigned integer, got `{text}`"))
        }),
        Err(_) => Ok(0),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn run(
    config: &ProjectConfig,
    out_dir: &Path,
    traces: &[PathBuf],
    window: usize,
    degree: usize,
    stride: usize,
    off_at: Option<f64>,
    angle_unit: Option<AngleUnit>,
    fps: Option<f64>,
) -> Result<(), CliError> {
    let seed = seed_from_env()?;
    let body = config.body()?;
    let load = config.load_model()?;
    let electrical = config.electrical()?;
    let known = FixedFieldParams {
        eps_g_f_per_m: electrical.eps_g(),
        eps_r_f_per_m: electrical.eps_r(),
        gap_m: electrical.gap(),
    };
    let paths = super::fit_load::trace_paths(config, traces)?;
    if stride == 0 {
        return Err(CliError::data("--stride must be at least 1"));
    }

    let mut points: Vec<MotorTorqueSample> = Vec::new();
    for path in &paths {
        let trace = estimation::ingest_trace(path, angle_unit, fps)
            .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        let volts = trace.meta.voltage_volts.ok_or_else(|| {
            CliError::data(format!(
                "{}: missing `# voltage_kV=` metadata needed to tag torque samples",
                path.display()
            ))
        })?;
        let powered = match off_at {
            Some(t_off) => trace.window(0.0, t_off).ok_or_else(|| {
                CliError::data(format!("{}: no samples before --off-at", path.display()))
            })?,
            None => trace,
        };
        let kin = estimation::differentiate(&powered, window, degree)?;
        for p in estimation::motor_torque_from_trace(&kin, body.inertia(), &load)
            .into_iter()
            .step_by(stride)
        {
            points.push(MotorTorqueSample {
                omega_rad_s: p.omega_rad_s,
                torque_nm: p.torque_nm,
                volts,
            });
        }
    }

    let options = MotorFitOptions {
        seed,
        ..Default::default()
    };
    #[cfg(feature = "parallel")]
    let (fit, report) = estimation::par_fit_motor_params(&points, &body, &known, &options)?;
    #[cfg(not(feature = "parallel"))]
    let (fit, report) = estimation::fit_motor_params(&points, &body, &known, &options)?;

    println!("torque samples         {}", points.len());
    println!("sigma                  {} S/m", sig4(fit.sigma()));
    println!("V_onset                {} kV", sig4(fit.v_onset() / 1e3));
    println!("alpha                  {} rad", sig4(fit.alpha()));
    println!("residual rms           {} N m", sig4(report.residual_rms));
    println!("iterations             {}", report.iterations);
    println!("converged              {}", report.converged);
    if report.degenerate {
        println!("note: parameters are partially confounded (wide covariance); add voltages or speed range");
    }

    // Plot-ready table of the points the fit consumed.
    super::ensure_out_dir(out_dir)?;
    let mut csv = String::from("# model=measured_minus_load\nomega_rad_s,torque_Nm\n");
    for p in &points {
        let _ = writeln!(csv, "{},{}", p.omega_rad_s, p.torque_nm);
    }
    let path = out_dir.join("motor_points.csv");
    std::fs::write(&path, csv)?;
    println!("wrote {}", path.display());
    Ok(())
}
