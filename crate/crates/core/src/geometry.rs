//! Fold geometry of a deployable Kresling cylinder.
//!
//! A cylinder is defined by the inscribed-circle radius `R`, the segment
//! count `N` around the circumference, the base-to-diagonal angle `theta0`
//! of the parallelogram unit cell, and the axial cell count `M`. All angles
//! are radians; lengths are millimeters.

use crate::error::{Error, Result};
use std::f64::consts::PI;

pub const MIN_SEGMENTS: u32 = 3;
pub const MAX_SEGMENTS: u32 = 255;
pub const MIN_AXIAL_CELLS: u32 = 1;
pub const MAX_AXIAL_CELLS: u32 = 64;

/// One parallelogram unit cell of a Kresling cylinder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KreslingCell {
    r_mm: f64,
    segments: u32,
    theta0_rad: f64,
}

impl KreslingCell {
    /// Validates `R > 0`, `N >= 3`, and `0 < theta0 < pi - 2 pi / N`. The
    /// fabrication cap on `N` applies when a cell becomes a [`CylinderSpec`].
    pub fn new(r_mm: f64, segments: u32, theta0_rad: f64) -> Result<Self> {
        if !(r_mm > 0.0) || !r_mm.is_finite() {
            return Err(Error::Domain(format!(
                "inscribed radius R must be positive, got {r_mm} mm"
            )));
        }
        if segments < MIN_SEGMENTS {
            return Err(Error::Domain(format!(
                "segment count N must be at least {MIN_SEGMENTS}, got {segments}"
            )));
        }
        let theta_limit = PI - 2.0 * PI / segments as f64;
        if !(theta0_rad > 0.0 && theta0_rad < theta_limit) {
            return Err(Error::Domain(format!(
                "theta0 must be in (0, {theta_limit:.6}) rad for N={segments}, got {theta0_rad}"
            )));
        }
        Ok(KreslingCell {
            r_mm,
            segments,
            theta0_rad,
        })
    }

    pub fn r_mm(&self) -> f64 {
        self.r_mm
    }

    pub fn segments(&self) -> u32 {
        self.segments
    }

    pub fn theta0_rad(&self) -> f64 {
        self.theta0_rad
    }
}

/// Whether a cylinder acts as the spinning rotor or the fixed stator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Rotor,
    Stator,
}

/// A full cylinder: a unit cell replicated `M` times axially.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderSpec {
    cell: KreslingCell,
    axial_cells: u32,
    role: Role,
}

impl CylinderSpec {
    /// Caps `N` at 255 and `M` at 64: beyond-plausible fabrication limits.
    pub fn new(cell: KreslingCell, axial_cells: u32, role: Role) -> Result<Self> {
        if cell.segments() > MAX_SEGMENTS {
            return Err(Error::Domain(format!(
                "segment count N must be at most {MAX_SEGMENTS} for a buildable cylinder, got {}",
                cell.segments()
            )));
        }
        if !(MIN_AXIAL_CELLS..=MAX_AXIAL_CELLS).contains(&axial_cells) {
            return Err(Error::Domain(format!(
                "axial cell count M must be in {MIN_AXIAL_CELLS}..={MAX_AXIAL_CELLS}, got {axial_cells}"
            )));
        }
        Ok(CylinderSpec {
            cell,
            axial_cells,
            role,
        })
    }

    pub fn cell(&self) -> &KreslingCell {
        &self.cell
    }

    pub fn axial_cells(&self) -> u32 {
        self.axial_cells
    }

    pub fn role(&self) -> Role {
        self.role
    }
}

/// Derived fold geometry in the deployed state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeployedGeometry {
    /// Cell side length (mm).
    pub side_mm: f64,
    /// Polygon angle of the flat-folded configuration (rad).
    pub theta_max_rad: f64,
    /// Height of one unit cell (mm).
    pub cell_height_mm: f64,
    /// Height of the whole body, `M` cells (mm).
    pub body_height_mm: f64,
    /// Circumradius `R / cos(pi/N)` (mm).
    pub circumradius_mm: f64,
}

/// Side length of the unit cell: `2 R sin(pi/N)`.
pub fn side_length(cell: &KreslingCell) -> f64 {
    2.0 * cell.r_mm() * (PI / cell.segments() as f64).sin()
}

/// Angle between consecutive polygons in the flat-folded configuration:
/// `pi - 2 pi / N - theta0`. Errors when the result falls below `theta0`,
/// which would make the cell height imaginary.
pub fn max_fold_angle(cell: &KreslingCell) -> Result<f64> {
    let theta_max = PI - 2.0 * PI / cell.segments() as f64 - cell.theta0_rad();
    if theta_max < cell.theta0_rad() {
        return Err(Error::Infeasible(format!(
            "theta_max {theta_max:.6} rad is below theta0 {:.6} rad; no real cell height",
            cell.theta0_rad()
        )));
    }
    Ok(theta_max)
}

/// Deployed height of one unit cell: `R sqrt(2 [cos(theta0) - cos(theta_max)])`.
/// Zero at the flat-folded limit `theta0 = theta_max`.
pub fn cell_height(cell: &KreslingCell) -> Result<f64> {
    let theta_max = max_fold_angle(cell)?;
    let arg = 2.0 * (cell.theta0_rad().cos() - theta_max.cos());
    // theta0 <= theta_max is guaranteed above; clamp rounding at the boundary.
    Ok(cell.r_mm() * arg.max(0.0).sqrt())
}

/// All derived geometry for a cylinder.
pub fn deployed_geometry(spec: &CylinderSpec) -> Result<DeployedGeometry> {
    let cell = spec.cell();
    let h = cell_height(cell)?;
    Ok(DeployedGeometry {
        side_mm: side_length(cell),
        theta_max_rad: max_fold_angle(cell)?,
        cell_height_mm: h,
        body_height_mm: spec.axial_cells() as f64 * h,
        circumradius_mm: cell.r_mm() / (PI / cell.segments() as f64).cos(),
    })
}

/// Deployed-to-stowed body height ratio.
pub fn expansion_ratio(stowed_mm: f64, deployed_mm: f64) -> Result<f64> {
    if !(stowed_mm > 0.0) || !(deployed_mm > 0.0) {
        return Err(Error::Domain(format!(
            "heights must be positive, got stowed {stowed_mm} mm, deployed {deployed_mm} mm"
        )));
    }
    Ok(deployed_mm / stowed_mm)
}

/// Round to `digits` significant figures.
pub fn round_sig(x: f64, digits: u32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let d = digits as i32 - 1 - x.abs().log10().floor() as i32;
    let f = 10f64.powi(d);
    (x * f).round() / f
}

/// Display form of an expansion ratio, two significant figures: `"2.5:1"`.
pub fn format_ratio(ratio: f64) -> String {
    let r = round_sig(ratio, 2);
    let decimals = if r >= 10.0 { 0 } else { 1 };
    format!("{r:.decimals$}:1")
}

/// Radial clearance report for a rotor nested inside a stator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NestingReport {
    /// Stator inscribed radius minus rotor circumradius (mm). The binding
    /// clearance: rotor vertices against the stator's innermost faces.
    pub inscribed_gap_mm: f64,
    /// Stator inscribed radius minus rotor inscribed radius (mm).
    pub circum_gap_mm: f64,
    pub feasible: bool,
}

/// Conservative clearance check: the rotor's outermost points (vertices at
/// the circumradius) must clear the stator's innermost surface (its inscribed
/// circle). Advisory only; the electrical gap is a separate model input.
pub fn nesting_check(rotor: &CylinderSpec, stator: &CylinderSpec) -> NestingReport {
    let rotor_circum = rotor.cell().r_mm() / (PI / rotor.cell().segments() as f64).cos();
    let inscribed_gap_mm = stator.cell().r_mm() - rotor_circum;
    NestingReport {
        inscribed_gap_mm,
        circum_gap_mm: stator.cell().r_mm() - rotor.cell().r_mm(),
        feasible: inscribed_gap_mm > 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    fn rotor_cell() -> KreslingCell {
        KreslingCell::new(30.0, 10, deg(57.0)).unwrap()
    }

    fn stator_cell() -> KreslingCell {
        KreslingCell::new(41.0, 8, deg(57.0)).unwrap()
    }

    #[test]
    fn side_length_reference_values() {
        assert_relative_eq!(side_length(&rotor_cell()), 18.5410196624968, max_relative = 1e-12);
        assert_relative_eq!(side_length(&stator_cell()), 31.3800414539374, max_relative = 1e-12);
    }

    #[test]
    fn side_length_circle_limit() {
        let cell = KreslingCell::new(30.0, 10_000, deg(1.0)).unwrap();
        let a = side_length(&cell);
        let circumference_slice = 2.0 * PI * 30.0 / 10_000.0;
        assert!((a * 10_000.0 / (2.0 * PI * 30.0) - 1.0).abs() < 1e-6);
        assert_relative_eq!(a, circumference_slice, max_relative = 1e-6);
    }

    #[test]
    fn max_fold_angle_reference_values() {
        assert_relative_eq!(max_fold_angle(&rotor_cell()).unwrap(), deg(87.0), max_relative = 1e-12);
        assert_relative_eq!(max_fold_angle(&stator_cell()).unwrap(), deg(78.0), max_relative = 1e-12);
    }

    #[test]
    fn max_fold_angle_square_degenerate() {
        // N=4, theta0 -> 0 gives 90 deg; theta0=0 itself is outside the domain,
        // so evaluate the formula at a vanishing angle.
        let cell = KreslingCell::new(10.0, 4, 1e-12).unwrap();
        assert_relative_eq!(max_fold_angle(&cell).unwrap(), PI / 2.0, epsilon = 1e-9);
    }

    #[test]
    fn max_fold_angle_infeasible() {
        // theta0 beyond (pi - 2 pi/N)/2 leaves theta_max < theta0.
        let cell = KreslingCell::new(30.0, 10, deg(80.0)).unwrap();
        assert!(matches!(max_fold_angle(&cell), Err(Error::Infeasible(_))));
        assert!(matches!(cell_height(&cell), Err(Error::Infeasible(_))));
    }

    #[test]
    fn cell_height_reference_values() {
        assert_relative_eq!(cell_height(&rotor_cell()).unwrap(), 29.7681968179087, max_relative = 1e-12);
        assert_relative_eq!(cell_height(&stator_cell()).unwrap(), 33.646356878438, max_relative = 1e-12);
    }

    #[test]
    fn cell_height_flat_folded_limit() {
        // theta0 = theta_max = (pi - 2 pi / N) / 2 folds completely flat.
        let boundary = (PI - 2.0 * PI / 10.0) / 2.0;
        let cell = KreslingCell::new(30.0, 10, boundary).unwrap();
        assert_eq!(cell_height(&cell).unwrap(), 0.0);
    }

    #[test]
    fn deployed_geometry_body_heights() {
        let rotor = CylinderSpec::new(rotor_cell(), 2, Role::Rotor).unwrap();
        let stator = CylinderSpec::new(stator_cell(), 2, Role::Stator).unwrap();
        let rg = deployed_geometry(&rotor).unwrap();
        let sg = deployed_geometry(&stator).unwrap();
        assert_relative_eq!(rg.body_height_mm, 59.5363936358174, max_relative = 1e-12);
        assert_relative_eq!(sg.body_height_mm, 67.292713756876, max_relative = 1e-12);
        // Stator must be the axially taller body for the rotor to nest inside.
        assert!(sg.body_height_mm > rg.body_height_mm);
        assert!(rg.circumradius_mm > rotor.cell().r_mm());
    }

    #[test]
    fn deployed_geometry_single_cell() {
        let spec = CylinderSpec::new(rotor_cell(), 1, Role::Rotor).unwrap();
        let g = deployed_geometry(&spec).unwrap();
        assert_eq!(g.body_height_mm, g.cell_height_mm);
    }

    #[test]
    fn deployed_geometry_is_pure() {
        let spec = CylinderSpec::new(stator_cell(), 2, Role::Stator).unwrap();
        let a = deployed_geometry(&spec).unwrap();
        let b = deployed_geometry(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn expansion_ratio_values() {
        let r = expansion_ratio(26.5, 66.0).unwrap();
        assert_relative_eq!(r, 2.49056603773585, max_relative = 1e-12);
        assert_eq!(format_ratio(r), "2.5:1");
        assert_eq!(expansion_ratio(10.0, 10.0).unwrap(), 1.0);
        assert_eq!(expansion_ratio(10.0, 30.0).unwrap(), 3.0);
        assert_eq!(format_ratio(3.0), "3.0:1");
        assert!(matches!(expansion_ratio(0.0, 30.0), Err(Error::Domain(_))));
        assert!(matches!(expansion_ratio(10.0, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn nesting_reference_pair() {
        let rotor = CylinderSpec::new(rotor_cell(), 2, Role::Rotor).unwrap();
        let stator = CylinderSpec::new(stator_cell(), 2, Role::Stator).unwrap();
        let rep = nesting_check(&rotor, &stator);
        assert_relative_eq!(rep.circum_gap_mm, 11.0, max_relative = 1e-12);
        assert_relative_eq!(rep.inscribed_gap_mm, 9.45613327285198, max_relative = 1e-10);
        assert!(rep.feasible);
    }

    #[test]
    fn nesting_self_is_infeasible() {
        let spec = CylinderSpec::new(rotor_cell(), 2, Role::Rotor).unwrap();
        let rep = nesting_check(&spec, &spec);
        assert!(rep.inscribed_gap_mm < 0.0);
        assert!(!rep.feasible);
    }

    #[test]
    fn nesting_tight_pair() {
        let rotor = CylinderSpec::new(rotor_cell(), 2, Role::Rotor).unwrap();
        let stator_cell = KreslingCell::new(32.0, 8, deg(57.0)).unwrap();
        let stator = CylinderSpec::new(stator_cell, 2, Role::Stator).unwrap();
        let rep = nesting_check(&rotor, &stator);
        assert_relative_eq!(rep.inscribed_gap_mm, 0.456133272851982, max_relative = 1e-9);
        assert!(rep.feasible);
    }

    #[test]
    fn cell_height_decreases_to_flat_fold() {
        // h(theta0) falls monotonically to zero as theta0 approaches the
        // flat-fold boundary.
        let boundary = (PI - 2.0 * PI / 10.0) / 2.0;
        let mut last = f64::INFINITY;
        for k in 0..=30 {
            let theta0 = boundary - 0.3 + 0.01 * k as f64;
            let cell = KreslingCell::new(30.0, 10, theta0).unwrap();
            let h = cell_height(&cell).unwrap();
            assert!(h < last, "height must decrease, got {h} after {last}");
            last = h;
        }
        assert!(last < 1e-6);
    }

    #[test]
    fn invalid_cells_rejected() {
        assert!(KreslingCell::new(-1.0, 10, deg(57.0)).is_err());
        assert!(KreslingCell::new(30.0, 2, deg(57.0)).is_err());
        assert!(KreslingCell::new(30.0, 10, 0.0).is_err());
        assert!(KreslingCell::new(30.0, 10, deg(150.0)).is_err());
        let cell = rotor_cell();
        assert!(CylinderSpec::new(cell, 0, Role::Rotor).is_err());
        assert!(CylinderSpec::new(cell, 65, Role::Rotor).is_err());
        // The fabrication cap on N applies to cylinders, not bare cells.
        let fine = KreslingCell::new(30.0, 256, deg(0.5)).unwrap();
        assert!(CylinderSpec::new(fine, 2, Role::Rotor).is_err());
    }

    proptest! {
        #[test]
        fn side_length_increases_with_radius(
            r in 1.0f64..200.0,
            n in 3u32..=255,
            frac in 0.05f64..0.95,
        ) {
            let theta0 = frac * (PI - 2.0 * PI / n as f64);
            let a = side_length(&KreslingCell::new(r, n, theta0).unwrap());
            let b = side_length(&KreslingCell::new(r * 1.5, n, theta0).unwrap());
            prop_assert!(b > a);
            // Chord never exceeds the arc bound.
            prop_assert!(a < PI * r);
        }

        #[test]
        fn deployed_geometry_fields_positive(
            r in 1.0f64..200.0,
            n in 3u32..=255,
            frac in 0.05f64..0.9,
            m in 1u32..=64,
        ) {
            // Stay below the flat-fold boundary so a real height exists.
            let theta0 = frac * (PI - 2.0 * PI / n as f64) / 2.0;
            let cell = KreslingCell::new(r, n, theta0).unwrap();
            let spec = CylinderSpec::new(cell, m, Role::Rotor).unwrap();
            let g = deployed_geometry(&spec).unwrap();
            prop_assert!(g.side_mm > 0.0);
            prop_assert!(g.cell_height_mm > 0.0);
            prop_assert!((g.body_height_mm - m as f64 * g.cell_height_mm).abs() < 1e-12 * g.body_height_mm.max(1.0));
            prop_assert!(g.circumradius_mm > r);
        }
    }
}
