//! `kcl fit-load`: quadratic load curve from spin-down traces.

use crate::config::ProjectConfig;
use crate::report::sig4;
use crate::CliError;
use kcl_core::dynamics::VoltageSchedule;
use kcl_core::estimation::{self, AngleUnit, KinematicsTrace};
use std::path::{Path, PathBuf};

pub(crate) fn trace_paths(
    config: &ProjectConfig,
    args: &[PathBuf],
) -> Result<Vec<PathBuf>, CliError> {
    if !args.is_empty() {
        return Ok(args.to_vec());
    }
    let from_config: Vec<PathBuf> = config
        .paths
        .as_ref()
        .and_then(|p| p.trace_files.as_ref())
        .map(|files| files.iter().map(PathBuf::from).collect())
        .unwrap_or_default();
    if from_config.is_empty() {
        return Err(CliError::data(
            "no trace files: pass them as arguments or set paths.trace_files",
        ));
    }
    Ok(from_config)
}

/// Spin-down kinematics of one trace file; segments shorter than the
/// smoothing window are dropped.
#[allow(clippy::too_many_arguments)]
fn spin_down_kinematics(
    path: &Path,
    window: usize,
    degree: usize,
    floor: f64,
    off_at: f64,
    angle_unit: Option<AngleUnit>,
    fps: Option<f64>,
) -> Result<Vec<KinematicsTrace>, CliError> {
    let trace = estimation::ingest_trace(path, angle_unit, fps)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    let schedule = if off_at > 0.0 {
        // The pre-off voltage level is irrelevant for segmentation; only the
        // zero span marks spin-down.
        VoltageSchedule::on_off(trace.meta.voltage_volts.unwrap_or(1.0), off_at)?
    } else {
        VoltageSchedule::constant(0.0)
    };
    let mut out = Vec::new();
    for seg in estimation::segment_spin_down(&trace, &schedule, floor) {
        if seg.len() >= window {
            out.push(estimation::differentiate(&seg, window, degree)?);
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
pub fn run(
    config: &ProjectConfig,
    traces: &[PathBuf],
    window: usize,
    degree: usize,
    floor: f64,
    off_at: f64,
    angle_unit: Option<AngleUnit>,
    fps: Option<f64>,
) -> Result<(), CliError> {
    let body = config.body()?;
    let paths = trace_paths(config, traces)?;
    let mut segments = Vec::new();
    for path in &paths {
        let mut segs =
            spin_down_kinematics(path, window, degree, floor, off_at, angle_unit, fps)?;
        if segs.is_empty() {
            eprintln!(
                "warning: {} contributed no spin-down segment above {floor} rad/s",
                path.display()
            );
        }
        segments.append(&mut segs);
    }

    let (load, report) = estimation::fit_load_quadratic(&segments, body.inertia())?;
    println!("segments               {}", segments.len());
    println!("c0                     {} N m", sig4(load.c0()));
    println!("c1                     {} N m s/rad", sig4(load.c1()));
    println!("c2                     {} N m s^2/rad^2", sig4(load.c2()));
    println!("residual rms           {} N m", sig4(report.residual_rms));
    println!(
        "config snippet: \"load\": {{ \"c0_Nm\": {}, \"c1_Nm_s_per_rad\": {}, \"c2_Nm_s2_per_rad2\": {} }}",
        load.c0(),
        load.c1(),
        load.c2(),
    );
    Ok(())
}
