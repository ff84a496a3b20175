//! Project configuration: a single JSON document with unit-suffixed keys
//! (`R_mm`, `sigma_S_per_m`, `V_kV`) so millimeter/meter and kilovolt/volt
//! mix-ups stay visible. Angles enter in degrees and are converted to
//! radians at this boundary.

use kcl_core::corona::{ElectricalParams, RotorBody, EPSILON_0};
use kcl_core::dynamics::LoadModel;
use kcl_core::geometry::{CylinderSpec, KreslingCell, Role};
use kcl_core::metrics::MeasuredPerformance;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const DEFAULT_CONFIG_JSON: &str = include_str!("../assets/default_config.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderConfig {
    #[serde(rename = "R_mm")]
    pub r_mm: f64,
    #[serde(rename = "N")]
    pub segments: u32,
    pub theta0_deg: f64,
    #[serde(rename = "M")]
    pub axial_cells: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectricalConfig {
    #[serde(rename = "sigma_S_per_m")]
    pub sigma_s_per_m: f64,
    pub eps_g_rel: f64,
    pub eps_r_rel: f64,
    pub alpha_rad: f64,
    #[serde(rename = "V_onset_kV")]
    pub v_onset_kv: f64,
    #[serde(rename = "G_mm")]
    pub gap_mm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyConfig {
    #[serde(rename = "R_mm")]
    pub r_mm: f64,
    #[serde(rename = "L_mm")]
    pub l_mm: f64,
    pub inertia_kg_m2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadConfig {
    #[serde(rename = "c0_Nm")]
    pub c0_nm: f64,
    #[serde(rename = "c1_Nm_s_per_rad")]
    pub c1_nm_s_per_rad: f64,
    #[serde(rename = "c2_Nm_s2_per_rad2")]
    pub c2_nm_s2_per_rad2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriveConfig {
    #[serde(rename = "voltages_kV")]
    pub voltages_kv: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasuredConfig {
    #[serde(rename = "T_motor_max_Nm")]
    pub t_motor_max_nm: f64,
    #[serde(rename = "T_output_max_Nm")]
    pub t_output_max_nm: f64,
    pub stowed_height_mm: f64,
    pub deployed_height_mm: f64,
    pub total_mass_g: f64,
    pub rotor_mass_g: f64,
    pub stator_mass_g: f64,
    pub deployed_volume_m3: f64,
    pub stowed_volume_m3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct PathsConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_files: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ProjectConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotor: Option<CylinderConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stator: Option<CylinderConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub electrical: Option<ElectricalConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub body: Option<BodyConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub load: Option<LoadConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drive: Option<DriveConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<MeasuredConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paths: Option<PathsConfig>,
}

/// Known keys per config object, for the unknown-key warning.
const TOP_KEYS: &[&str] = &[
    "rotor", "stator", "electrical", "body", "load", "drive", "measured", "paths",
];

fn section_keys(section: &str) -> &'static [&'static str] {
    match section {
        "rotor" | "stator" => &["R_mm", "N", "theta0_deg", "M"],
        "electrical" => &[
            "sigma_S_per_m",
            "eps_g_rel",
            "eps_r_rel",
            "alpha_rad",
            "V_onset_kV",
            "G_mm",
        ],
        "body" => &["R_mm", "L_mm", "inertia_kg_m2"],
        "load" => &["c0_Nm", "c1_Nm_s_per_rad", "c2_Nm_s2_per_rad2"],
        "drive" => &["voltages_kV"],
        "measured" => &[
            "T_motor_max_Nm",
            "T_output_max_Nm",
            "stowed_height_mm",
            "deployed_height_mm",
            "total_mass_g",
            "rotor_mass_g",
            "stator_mass_g",
            "deployed_volume_m3",
            "stowed_volume_m3",
        ],
        "paths" => &["out_dir", "trace_files"],
        _ => &[],
    }
}

/// Keys present in the document but not in the schema. These are dropped
/// with a warning rather than failing the run.
pub fn unknown_keys(value: &serde_json::Value) -> Vec<String> {
    let mut unknown = Vec::new();
    let Some(map) = value.as_object() else {
        return unknown;
    };
    for (key, sub) in map {
        if !TOP_KEYS.contains(&key.as_str()) {
            unknown.push(key.clone());
            continue;
        }
        if let Some(obj) = sub.as_object() {
            let allowed = section_keys(key);
            for sub_key in obj.keys() {
                if !allowed.contains(&sub_key.as_str()) {
                    unknown.push(format!("{key}.{sub_key}"));
                }
            }
        }
    }
    unknown
}

/// Load a config file, or the built-in defaults when `path` is `None`.
/// Returns the config and any unknown-key warnings.
pub fn load(path: Option<&Path>) -> Result<(ProjectConfig, Vec<String>), String> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| format!("cannot read config {}: {e}", p.display()))?,
        None => DEFAULT_CONFIG_JSON.to_string(),
    };
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("config is not valid JSON: {e}"))?;
    let warnings = unknown_keys(&value);
    let config: ProjectConfig =
        serde_json::from_value(value).map_err(|e| format!("config: {e}"))?;
    Ok((config, warnings))
}

impl ProjectConfig {
    pub fn cylinder(&self, role: Role) -> Result<Option<CylinderSpec>, String> {
        let (section, name) = match role {
            Role::Rotor => (&self.rotor, "rotor"),
            Role::Stator => (&self.stator, "stator"),
        };
        let Some(c) = section else {
            return Ok(None);
        };
        let cell = KreslingCell::new(c.r_mm, c.segments, c.theta0_deg.to_radians())
            .map_err(|e| format!("config field {name}: {e}"))?;
        let spec = CylinderSpec::new(cell, c.axial_cells, role)
            .map_err(|e| format!("config field {name}.M: {e}"))?;
        Ok(Some(spec))
    }

    pub fn electrical(&self) -> Result<ElectricalParams, String> {
        let e = self
            .electrical
            .as_ref()
            .ok_or("config field electrical is missing")?;
        ElectricalParams::new(
            e.sigma_s_per_m,
            e.eps_g_rel * EPSILON_0,
            e.eps_r_rel * EPSILON_0,
            e.alpha_rad,
            e.v_onset_kv * 1e3,
            e.gap_mm * 1e-3,
        )
        .map_err(|e| format!("config field electrical: {e}"))
    }

    pub fn body(&self) -> Result<RotorBody, String> {
        let b = self.body.as_ref().ok_or("config field body is missing")?;
        RotorBody::new(b.r_mm * 1e-3, b.l_mm * 1e-3, b.inertia_kg_m2)
            .map_err(|e| format!("config field body: {e}"))
    }

    pub fn load_model(&self) -> Result<LoadModel, String> {
        let l = self.load.as_ref().ok_or("config field load is missing")?;
        LoadModel::new(l.c0_nm, l.c1_nm_s_per_rad, l.c2_nm_s2_per_rad2)
            .map_err(|e| format!("config field load: {e}"))
    }

    pub fn measured(&self) -> Result<MeasuredPerformance, String> {
        let m = self
            .measured
            .as_ref()
            .ok_or("config field measured is missing")?;
        Ok(MeasuredPerformance {
            t_motor_max_nm: m.t_motor_max_nm,
            t_output_max_nm: m.t_output_max_nm,
            stowed_height_mm: m.stowed_height_mm,
            deployed_height_mm: m.deployed_height_mm,
            total_mass_kg: m.total_mass_g * 1e-3,
            active_mass_kg: (m.rotor_mass_g + m.stator_mass_g) * 1e-3,
            deployed_volume_m3: m.deployed_volume_m3,
            stowed_volume_m3: m.stowed_volume_m3,
        })
    }

    /// First configured drive voltage (volts).
    pub fn first_drive_volts(&self) -> Option<f64> {
        self.drive
            .as_ref()
            .and_then(|d| d.voltages_kv.first())
            .map(|kv| kv * 1e3)
    }
}
