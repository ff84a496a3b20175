//! End-to-end subcommand tests against the built binary: output contents,
//! file artifacts, exit codes, and reproducibility.

use kcl_core::corona::{ElectricalParams, RotorBody, EPSILON_0};
use kcl_core::dynamics::{self, LoadModel, VoltageSchedule};
use kcl_core::estimation::write_trace_csv;
use std::path::Path;
use std::process::{Command, Output};

fn kcl() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kcl"));
    cmd.env_remove("KCL_SEED");
    cmd
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process not signal-killed")
}

fn write_config(dir: &Path, json: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, json).unwrap();
    path
}

/// Field value printed on a `name   value unit` report line.
fn report_value(text: &str, name: &str) -> f64 {
    let line = text
        .lines()
        .find(|l| l.starts_with(name))
        .unwrap_or_else(|| panic!("no `{name}` line in:\n{text}"));
    line[name.len()..]
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn design_reports_reference_geometry() {
    let out = kcl().arg("design").output().unwrap();
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("29.768"), "rotor cell height missing:\n{text}");
    assert!(text.contains("33.646"), "stator cell height missing:\n{text}");
    assert!(text.contains("18.541") && text.contains("31.380"));
    assert!(text.contains("feasible"));
    assert!(text.contains("2.5:1"));
}

#[test]
fn design_rotor_only_omits_stator_rows() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{ "rotor": { "R_mm": 30.0, "N": 10, "theta0_deg": 57.0, "M": 2 } }"#,
    );
    let out = kcl().arg("design").arg("--config").arg(&config).output().unwrap();
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("rotor:"));
    assert!(!text.contains("stator:"));
    assert!(!text.contains("nesting:"));
}

#[test]
fn design_infeasible_fold_angle_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{ "rotor": { "R_mm": 30.0, "N": 10, "theta0_deg": 80.0, "M": 2 } }"#,
    );
    let out = kcl().arg("design").arg("--config").arg(&config).output().unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("infeasible"), "{}", stderr(&out));
}

#[test]
fn unknown_config_keys_warn_but_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{ "rotor": { "R_mm": 30.0, "N": 10, "theta0_deg": 57.0, "M": 2, "colour": "red" } }"#,
    );
    let out = kcl().arg("design").arg("--config").arg(&config).output().unwrap();
    assert_eq!(exit_code(&out), 0);
    assert!(stderr(&out).contains("rotor.colour"), "{}", stderr(&out));
}

#[test]
fn model_two_step_table_and_max_torque_echo() {
    let dir = tempfile::tempdir().unwrap();
    let out = kcl()
        .args(["model", "--v-kv", "-29", "--steps", "2", "--omega-max", "300"])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("2.133e-4"), "{}", stdout(&out));
    let csv = std::fs::read_to_string(dir.path().join("torque_speed.csv")).unwrap();
    let data_rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data_rows[0], "omega_rad_s,torque_Nm");
    assert_eq!(data_rows.len(), 3, "header plus two rows:\n{csv}");
}

#[test]
fn model_below_onset_warns_and_zeroes() {
    let dir = tempfile::tempdir().unwrap();
    let out = kcl()
        .args(["model", "--v-kv", "-5", "--steps", "11"])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0);
    assert!(stderr(&out).contains("below"), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("torque_speed.csv")).unwrap();
    for line in csv.lines().skip_while(|l| l.starts_with('#')).skip(1) {
        let torque: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(torque, 0.0);
    }
}

#[test]
fn simulate_power_cycle_rises_then_decays() {
    let dir = tempfile::tempdir().unwrap();
    let out = kcl()
        .args(["simulate", "--v-kv", "-29", "--off-at", "4", "--t-end", "8", "--dt", "0.001"])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0);
    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let samples: Vec<(f64, f64)> = csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("t_s"))
        .map(|l| {
            let mut parts = l.split(',');
            (
                parts.next().unwrap().parse().unwrap(),
                parts.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    let speed_near = |t: f64| {
        let i = samples.iter().position(|(ts, _)| *ts >= t).unwrap();
        (samples[i + 1].1 - samples[i - 1].1) / (samples[i + 1].0 - samples[i - 1].0)
    };
    let early = speed_near(0.5);
    let at_off = speed_near(3.99);
    let late = speed_near(7.5);
    assert!(at_off > early, "speed should rise while powered");
    assert!(late < at_off, "speed should decay after power-off");
}

fn bench_params() -> ElectricalParams {
    ElectricalParams::new(2e-9, EPSILON_0, EPSILON_0, 0.15, -10.5e3, 3.5e-3).unwrap()
}

fn bench_body() -> RotorBody {
    RotorBody::new(0.030, 0.052, 4.24e-6).unwrap()
}

fn snippet_value(text: &str, key: &str) -> f64 {
    let start = text.find(key).unwrap_or_else(|| panic!("no {key} in:\n{text}")) + key.len();
    let rest = &text[start..];
    let rest = rest.trim_start_matches([':', ' ', '"']);
    rest.split([',', ' ', '}'])
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn fit_load_recovers_bundled_synthetic_spin_downs() {
    let dir = tempfile::tempdir().unwrap();
    let params = bench_params();
    let body = bench_body();
    let truth = LoadModel::new(1e-5, 1e-7, 5e-9).unwrap();
    let mut paths = Vec::new();
    for (i, omega0) in [150.0, 120.0, 90.0].iter().enumerate() {
        let trace = dynamics::simulate(
            &params,
            &body,
            &truth,
            &VoltageSchedule::constant(0.0),
            5e-4,
            20.0,
            *omega0,
        )
        .unwrap();
        let path = dir.path().join(format!("spin_down_{i}.csv"));
        let mut file = std::fs::File::create(&path).unwrap();
        write_trace_csv(&trace, &mut file).unwrap();
        paths.push(path);
    }
    let out = kcl().arg("fit-load").args(&paths).output().unwrap();
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("residual rms"));
    assert!((snippet_value(&text, "c0_Nm") / 1e-5 - 1.0).abs() < 5e-3, "{text}");
    assert!((snippet_value(&text, "c1_Nm_s_per_rad") / 1e-7 - 1.0).abs() < 5e-3, "{text}");
    assert!((snippet_value(&text, "c2_Nm_s2_per_rad2") / 5e-9 - 1.0).abs() < 5e-3, "{text}");
}

#[test]
fn fit_load_rank_deficient_exits_3() {
    // Constant speed: the quadratic design collapses and the fit must fail.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("constant.csv");
    let mut csv = String::from("t_s,theta_rad\n");
    for i in 0..200 {
        let t = i as f64 * 5e-4;
        csv.push_str(&format!("{t},{}\n", 100.0 * t));
    }
    std::fs::write(&path, csv).unwrap();
    let out = kcl().arg("fit-load").arg(&path).output().unwrap();
    assert_eq!(exit_code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("rank-deficient"), "{}", stderr(&out));
}

#[test]
fn fit_motor_recovers_parameters_from_powered_traces() {
    let dir = tempfile::tempdir().unwrap();
    let params = bench_params();
    let body = bench_body();
    let load = LoadModel::new(1e-5, 1e-7, 5e-9).unwrap();
    let mut paths = Vec::new();
    for volts in [-25e3, -29e3] {
        let schedule = VoltageSchedule::on_off(volts, 12.0).unwrap();
        let trace =
            dynamics::simulate(&params, &body, &load, &schedule, 5e-4, 14.0, 50.0).unwrap();
        let path = dir.path().join(format!("run_{}.csv", -volts / 1e3));
        let mut file = std::fs::File::create(&path).unwrap();
        write_trace_csv(&trace, &mut file).unwrap();
        paths.push(path);
    }
    let out_dir = dir.path().join("out");
    let out = kcl()
        .arg("fit-motor")
        .args(&paths)
        .args(["--off-at", "12", "--stride", "40"])
        .arg("--out")
        .arg(&out_dir)
        .env("KCL_SEED", "3")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!((report_value(&text, "sigma") / 2e-9 - 1.0).abs() < 0.10, "{text}");
    assert!((report_value(&text, "V_onset") / -10.5 - 1.0).abs() < 0.10, "{text}");
    assert!((report_value(&text, "alpha") / 0.15 - 1.0).abs() < 0.10, "{text}");
    assert!(text.contains("converged              true"));
    let points = std::fs::read_to_string(out_dir.join("motor_points.csv")).unwrap();
    assert!(points.starts_with("# model="));
}

#[test]
fn fit_motor_without_load_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{
            "body": { "R_mm": 30.0, "L_mm": 52.0, "inertia_kg_m2": 4.24e-6 },
            "electrical": { "sigma_S_per_m": 2e-9, "eps_g_rel": 1.0, "eps_r_rel": 1.0,
                            "alpha_rad": 0.15, "V_onset_kV": -10.5, "G_mm": 3.5 }
        }"#,
    );
    let trace = dir.path().join("t.csv");
    std::fs::write(&trace, "t_s,theta_rad\n0,0\n0.0005,0.1\n").unwrap();
    let out = kcl()
        .arg("fit-motor")
        .arg(&trace)
        .arg("--config")
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("load"), "{}", stderr(&out));
}

#[test]
fn fit_motor_requires_voltage_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("no_volts.csv");
    let mut csv = String::from("t_s,theta_rad\n");
    for i in 0..100 {
        let t = i as f64 * 5e-4;
        csv.push_str(&format!("{t},{}\n", 50.0 * t * t));
    }
    std::fs::write(&path, csv).unwrap();
    let out = kcl().arg("fit-motor").arg(&path).output().unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("voltage_kV"), "{}", stderr(&out));
}

#[test]
fn invalid_kcl_seed_is_a_named_error() {
    let out = kcl()
        .arg("fit-motor")
        .env("KCL_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("KCL_SEED"), "{}", stderr(&out));
}

#[test]
fn metrics_reports_reference_densities() {
    let out = kcl().arg("metrics").output().unwrap();
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("2.5:1"));
    assert!(text.contains("0.5405"));
    assert!(text.contains("1.333"));
    assert!(text.contains("0.004444"));
    assert!(text.contains("0.04274"));
}

#[test]
fn metrics_zero_mass_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{ "measured": {
            "T_motor_max_Nm": 2.0e-4, "T_output_max_Nm": 1.5e-4,
            "stowed_height_mm": 26.5, "deployed_height_mm": 66.0,
            "total_mass_g": 0.0, "rotor_mass_g": 1.38, "stator_mass_g": 3.3,
            "deployed_volume_m3": 3.7e-4, "stowed_volume_m3": 1.5e-4 } }"#,
    );
    let out = kcl().arg("metrics").arg("--config").arg(&config).output().unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("total_mass"), "{}", stderr(&out));
}

#[test]
fn pattern_writes_both_svgs_reproducibly() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let out = kcl()
            .args(["pattern", "--csv"])
            .arg("--out")
            .arg(dir.path())
            .output()
            .unwrap();
        assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    }
    for name in [
        "rotor_pattern.svg",
        "stator_pattern.svg",
        "rotor_creases.csv",
        "stator_creases.csv",
    ] {
        let a = std::fs::read(dir_a.path().join(name)).unwrap();
        let b = std::fs::read(dir_b.path().join(name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name} must be byte-identical across runs");
    }
    let svg = std::fs::read_to_string(dir_a.path().join("rotor_pattern.svg")).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.ends_with("</svg>\n"));
}
