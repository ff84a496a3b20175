//! `kcl design`: fold geometry report for the configured cylinders.

use crate::config::ProjectConfig;
use crate::report::{mm, sig4};
use crate::CliError;
use kcl_core::geometry::{self, CylinderSpec, DeployedGeometry, Role};
use std::fmt::Write as _;
use std::path::Path;

fn describe(name: &str, spec: &CylinderSpec, geom: &DeployedGeometry, text: &mut String) {
    let cell = spec.cell();
    let _ = writeln!(
        text,
        "{name}: R {} mm  N {}  theta0 {:.2} deg  M {}",
        mm(cell.r_mm()),
        cell.segments(),
        cell.theta0_rad().to_degrees(),
        spec.axial_cells(),
    );
    let _ = writeln!(text, "  side length      {} mm", mm(geom.side_mm));
    let _ = writeln!(text, "  theta_max        {:.2} deg", geom.theta_max_rad.to_degrees());
    let _ = writeln!(text, "  cell height      {} mm", mm(geom.cell_height_mm));
    let _ = writeln!(text, "  body height      {} mm", mm(geom.body_height_mm));
    let _ = writeln!(text, "  circumradius     {} mm", mm(geom.circumradius_mm));
}

fn csv_rows(name: &str, geom: &DeployedGeometry, csv: &mut String) {
    let rows = [
        ("side_length", geom.side_mm, "mm"),
        ("theta_max", geom.theta_max_rad, "rad"),
        ("cell_height", geom.cell_height_mm, "mm"),
        ("body_height", geom.body_height_mm, "mm"),
        ("circumradius", geom.circumradius_mm, "mm"),
    ];
    for (quantity, value, unit) in rows {
        let _ = writeln!(csv, "{name},{quantity},{value},{unit}");
    }
}

pub fn run(config: &ProjectConfig, out_dir: Option<&Path>) -> Result<(), CliError> {
    let rotor = config.cylinder(Role::Rotor)?;
    let stator = config.cylinder(Role::Stator)?;
    if rotor.is_none() && stator.is_none() {
        return Err(CliError::data(
            "config needs a rotor or stator section for the design report",
        ));
    }

    let mut text = String::new();
    let mut csv = String::from("cylinder,quantity,value,unit\n");
    let mut geoms = Vec::new();
    for (name, spec) in [("rotor", &rotor), ("stator", &stator)] {
        if let Some(spec) = spec {
            let geom = geometry::deployed_geometry(spec)?;
            describe(name, spec, &geom, &mut text);
            csv_rows(name, &geom, &mut csv);
            geoms.push((name, *spec, geom));
        }
    }

    if let (Some(rotor), Some(stator)) = (&rotor, &stator) {
        let nest = geometry::nesting_check(rotor, stator);
        let _ = writeln!(
            text,
            "nesting: circum gap {} mm, inscribed gap {} mm, {}",
            mm(nest.circum_gap_mm),
            mm(nest.inscribed_gap_mm),
            if nest.feasible { "feasible" } else { "INFEASIBLE" },
        );
        let _ = writeln!(csv, "pair,circum_gap,{},mm", nest.circum_gap_mm);
        let _ = writeln!(csv, "pair,inscribed_gap,{},mm", nest.inscribed_gap_mm);
    }

    if let Some(m) = &config.measured {
        let ratio = geometry::expansion_ratio(m.stowed_height_mm, m.deployed_height_mm)?;
        let _ = writeln!(
            text,
            "expansion ratio: {} ({})",
            sig4(ratio),
            geometry::format_ratio(ratio),
        );
        let _ = writeln!(csv, "pair,expansion_ratio,{ratio},1");
    }

    print!("{text}");
    if let Some(dir) = out_dir {
        super::ensure_out_dir(dir)?;
        let path = dir.join("geometry.csv");
        std::fs::write(&path, csv)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
