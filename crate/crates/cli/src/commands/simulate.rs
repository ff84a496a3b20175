//! `kcl simulate`: integrate a drive schedule and write the angle trace.

use crate::config::ProjectConfig;
use crate::report::sig4;
use crate::CliError;
use kcl_core::dynamics::{self, LoadModel, VoltageSchedule};
use kcl_core::estimation;
use std::path::Path;

#[allow(clippy::too_many_arguments)]
pub fn run(
    config: &ProjectConfig,
    out_dir: &Path,
    v_kv: Option<f64>,
    off_at: Option<f64>,
    t_end: f64,
    dt: f64,
    omega0: f64,
) -> Result<(), CliError> {
    let params = config.electrical()?;
    let body = config.body()?;
    let load = match &config.load {
        Some(_) => config.load_model()?,
        None => {
            eprintln!("warning: no load section in config; simulating without friction");
            LoadModel::zero()
        }
    };
    let volts = match v_kv {
        Some(kv) => kv * 1e3,
        None => config
            .first_drive_volts()
            .ok_or_else(|| CliError::data("no drive voltage: pass --v-kv or set drive.voltages_kV"))?,
    };
    let schedule = match off_at {
        Some(t_off) => VoltageSchedule::on_off(volts, t_off)?,
        None => VoltageSchedule::constant(volts),
    };

    let trace = dynamics::simulate(&params, &body, &load, &schedule, dt, t_end, omega0)?;
    super::ensure_out_dir(out_dir)?;
    let path = out_dir.join("trace.csv");
    let mut file = std::fs::File::create(&path)?;
    estimation::write_trace_csv(&trace, &mut file)?;

    let omega = trace.omega().expect("simulator emits a speed column");
    let peak = omega.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    println!("samples                {}", trace.len());
    println!("peak speed             {} rad/s", sig4(peak));
    println!("final speed            {} rad/s", sig4(*omega.last().unwrap()));
    println!("wrote {}", path.display());
    Ok(())
}
