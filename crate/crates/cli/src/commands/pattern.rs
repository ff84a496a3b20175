//! `kcl pattern`: crease-pattern SVG files for the configured cylinders.

use crate::config::ProjectConfig;
use crate::{CliError, RoleArg};
use kcl_core::geometry::Role;
use kcl_core::pattern::{self, Chirality, PatternStyle};
use std::path::Path;

pub fn run(
    config: &ProjectConfig,
    out_dir: &Path,
    chirality: Chirality,
    role: RoleArg,
    csv: bool,
    style: &PatternStyle,
) -> Result<(), CliError> {
    let wanted: &[Role] = match role {
        RoleArg::Rotor => &[Role::Rotor],
        RoleArg::Stator => &[Role::Stator],
        RoleArg::Both => &[Role::Rotor, Role::Stator],
    };
    super::ensure_out_dir(out_dir)?;
    for &role in wanted {
        let name = match role {
            Role::Rotor => "rotor",
            Role::Stator => "stator",
        };
        let spec = config
            .cylinder(role)?
            .ok_or_else(|| CliError::data(format!("config has no {name} section")))?;
        let pat = pattern::generate_crease_pattern(&spec, chirality)?;
        let electrodes = pattern::generate_electrode_layout(&pat, role, style)?;
        let svg = pattern::emit_svg(&pat, &electrodes, style);
        let svg_path = out_dir.join(format!("{name}_pattern.svg"));
        std::fs::write(&svg_path, svg)?;
        println!("wrote {}", svg_path.display());
        if csv {
            let csv_path = out_dir.join(format!("{name}_creases.csv"));
            std::fs::write(&csv_path, pattern::crease_csv(&pat))?;
            println!("wrote {}", csv_path.display());
        }
    }
    Ok(())
}
