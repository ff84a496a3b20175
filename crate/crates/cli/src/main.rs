//! `kcl`: design, simulate, and identify foldable Kresling corona motors.
//!
//! Subcommands: `design`, `model`, `simulate`, `fit-load`, `fit-motor`,
//! `pattern`, `metrics`. All read the shared JSON config (`--config`,
//! defaulting to the built-in prototype values). Exit codes: 0 success,
//! 2 data/config errors, 3 fit failures.

mod commands;
mod config;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "kcl", version, about = "Foldable Kresling corona-motor toolkit")]
struct Cli {
    /// JSON config; bundled prototype defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for generated files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChiralityArg {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum RoleArg {
    Rotor,
    Stator,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum AngleUnitArg {
    Rad,
    Deg,
}

#[derive(Subcommand)]
enum Command {
    /// Fold geometry, nesting clearances, and the expansion ratio.
    Design,
    /// Torque-speed table at one drive voltage.
    Model {
        /// Drive voltage (kV, negative); defaults to the first configured one.
        #[arg(long, allow_negative_numbers = true)]
        v_kv: Option<f64>,
        #[arg(long, default_value_t = 300.0)]
        omega_max: f64,
        #[arg(long, default_value_t = 301)]
        steps: usize,
    },
    /// Integrate a speed-up/spin-down run and write the angle trace.
    Simulate {
        #[arg(long, allow_negative_numbers = true)]
        v_kv: Option<f64>,
        /// Power-off time (s); stays powered when omitted.
        #[arg(long)]
        off_at: Option<f64>,
        #[arg(long, default_value_t = 20.0)]
        t_end: f64,
        #[arg(long, default_value_t = 5e-4)]
        dt: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        omega0: f64,
    },
    /// Fit the quadratic load curve from spin-down trace files.
    FitLoad {
        traces: Vec<PathBuf>,
        #[arg(long, default_value_t = 41)]
        window: usize,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Speed floor ending a spin-down segment (rad/s).
        #[arg(long, default_value_t = 5.0)]
        floor: f64,
        /// Power-off time within each trace (s); 0 treats the whole trace
        /// as unpowered.
        #[arg(long, default_value_t = 0.0)]
        off_at: f64,
        #[arg(long, value_enum)]
        angle_unit: Option<AngleUnitArg>,
        /// Frame rate override for frame-indexed files (Hz).
        #[arg(long)]
        fps: Option<f64>,
    },
    /// Identify sigma, V_onset, and alpha from powered trace files.
    FitMotor {
        traces: Vec<PathBuf>,
        #[arg(long, default_value_t = 41)]
        window: usize,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Keep every n-th torque sample.
        #[arg(long, default_value_t = 20)]
        stride: usize,
        /// Power-off time; only earlier samples count as powered.
        #[arg(long)]
        off_at: Option<f64>,
        #[arg(long, value_enum)]
        angle_unit: Option<AngleUnitArg>,
        #[arg(long)]
        fps: Option<f64>,
    },
    /// Emit crease-pattern SVG (and optional crease CSV) files.
    Pattern {
        #[arg(long, value_enum, default_value_t = ChiralityArg::Right)]
        chirality: ChiralityArg,
        #[arg(long, value_enum, default_value_t = RoleArg::Both)]
        role: RoleArg,
        /// Also write the flat crease list CSV.
        #[arg(long)]
        csv: bool,
        #[arg(long, default_value_t = 1.5)]
        strip_width_mm: f64,
        #[arg(long, default_value_t = 1.5)]
        pad_width_mm: f64,
        #[arg(long, default_value_t = 1.0)]
        pad_inset_mm: f64,
        #[arg(long, default_value_t = 4.0)]
        tab_depth_mm: f64,
    },
    /// Expansion ratio and torque densities from the measured values.
    Metrics,
}

/// CLI failure carrying its exit code: 2 for data errors, 3 for fit errors.
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub(crate) fn data(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<kcl_core::Error> for CliError {
    fn from(e: kcl_core::Error) -> Self {
        CliError {
            code: if e.is_fit_error() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

impl From<String> for CliError {
    fn from(message: String) -> Self {
        CliError::data(message)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::data(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (config, warnings) = config::load(cli.config.as_deref())?;
    for key in &warnings {
        eprintln!("warning: ignoring unknown config key `{key}`");
    }
    let out_dir = cli
        .out
        .clone()
        .or_else(|| {
            config
                .paths
                .as_ref()
                .and_then(|p| p.out_dir.as_ref())
                .map(PathBuf::from)
        })
        .unwrap_or_else(|| PathBuf::from("."));

    match cli.command {
        Command::Design => commands::design::run(&config, cli.out.as_deref()),
        Command::Model {
            v_kv,
            omega_max,
            steps,
        } => commands::model::run(&config, &out_dir, v_kv, omega_max, steps),
        Command::Simulate {
            v_kv,
            off_at,
            t_end,
            dt,
            omega0,
        } => commands::simulate::run(&config, &out_dir, v_kv, off_at, t_end, dt, omega0),
        Command::FitLoad {
            traces,
            window,
            degree,
            floor,
            off_at,
            angle_unit,
            fps,
        } => commands::fit_load::run(
            &config,
            &traces,
            window,
            degree,
            floor,
            off_at,
            angle_unit.map(Into::into),
            fps,
        ),
        Command::FitMotor {
            traces,
            window,
            degree,
            stride,
            off_at,
            angle_unit,
            fps,
        } => commands::fit_motor::run(
            &config,
            &out_dir,
            &traces,
            window,
            degree,
            stride,
            off_at,
            angle_unit.map(Into::into),
            fps,
        ),
        Command::Pattern {
            chirality,
            role,
            csv,
            strip_width_mm,
            pad_width_mm,
            pad_inset_mm,
            tab_depth_mm,
        } => {
            let style = kcl_core::pattern::PatternStyle {
                strip_width_mm,
                pad_width_mm,
                pad_inset_mm,
                tab_depth_mm,
                ..Default::default()
            };
            commands::pattern::run(&config, &out_dir, chirality.into(), role, csv, &style)
        }
        Command::Metrics => commands::metrics::run(&config),
    }
}

impl From<AngleUnitArg> for kcl_core::estimation::AngleUnit {
    fn from(a: AngleUnitArg) -> Self {
        match a {
            AngleUnitArg::Rad => kcl_core::estimation::AngleUnit::Radians,
            AngleUnitArg::Deg => kcl_core::estimation::AngleUnit::Degrees,
        }
    }
}

impl From<ChiralityArg> for kcl_core::pattern::Chirality {
    fn from(c: ChiralityArg) -> Self {
        match c {
            ChiralityArg::Left => kcl_core::pattern::Chirality::Left,
            ChiralityArg::Right => kcl_core::pattern::Chirality::Right,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
