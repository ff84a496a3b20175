//! Flat crease patterns with electrode layouts, emitted as SVG.
//!
//! The pattern is a lattice of sheared parallelogram cells: base `a`, row
//! height `h`, shear `h / tan(theta0)` so the slanted cell sides meet the
//! base at `theta0`. One diagonal crease per cell, oriented by chirality.
//! The horizontal extent is `N + 1` cells; the extra column is the glued
//! overlap, drawn but excluded from the electrical count. Tabs run along
//! the top and bottom edges for the rigid end attachments.

use crate::error::{Error, Result};
use crate::geometry::{self, CylinderSpec, Role};
use std::fmt::Write as _;

/// Diagonal orientation of the cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chirality {
    /// Diagonals run bottom-left to top-right.
    Right,
    /// Diagonals run bottom-right to top-left.
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CreaseKind {
    Mountain,
    Valley,
    Border,
    Perforation,
}

impl CreaseKind {
    pub fn name(&self) -> &'static str {
        match self {
            CreaseKind::Mountain => "mountain",
            CreaseKind::Valley => "valley",
            CreaseKind::Border => "border",
            CreaseKind::Perforation => "perforation",
        }
    }
}

/// A crease between two lattice vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crease {
    pub a: usize,
    pub b: usize,
    pub kind: CreaseKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElectrodeKind {
    /// Discharge blade strip centered on a cell diagonal (stator).
    StatorStrip,
    /// Charge-collection pad beside a cell side edge (rotor).
    RotorPad,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElectrodeRegion {
    pub polygon: Polygon,
    pub kind: ElectrodeKind,
    /// False for overlap-column copies, which are mechanical only.
    pub electrical: bool,
    pub row: usize,
    pub column: usize,
}

/// Style knobs for electrode sizing and SVG emission (all mm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternStyle {
    pub strip_width_mm: f64,
    pub pad_width_mm: f64,
    pub pad_inset_mm: f64,
    pub tab_depth_mm: f64,
    pub margin_mm: f64,
}

impl Default for PatternStyle {
    fn default() -> Self {
        PatternStyle {
            strip_width_mm: 1.5,
            pad_width_mm: 1.5,
            pad_inset_mm: 1.0,
            tab_depth_mm: 4.0,
            margin_mm: 5.0,
        }
    }
}

/// Flat crease pattern of one cylinder: lattice vertices, tagged creases,
/// and attachment tabs. `columns` counts cells per row (`N + 1`), `rows`
/// counts axial cells (`M`).
#[derive(Debug, Clone, PartialEq)]
pub struct CreasePattern {
    spec: CylinderSpec,
    chirality: Chirality,
    vertices: Vec<[f64; 2]>,
    creases: Vec<Crease>,
    tabs: Vec<Polygon>,
    columns: usize,
    rows: usize,
    side_mm: f64,
    row_height_mm: f64,
    shear_mm: f64,
    tab_depth_mm: f64,
}

impl CreasePattern {
    pub fn spec(&self) -> &CylinderSpec {
        &self.spec
    }

    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn creases(&self) -> &[Crease] {
        &self.creases
    }

    pub fn tabs(&self) -> &[Polygon] {
        &self.tabs
    }

    /// Cells per row (`N + 1`, including the overlap column).
    pub fn columns(&self) -> usize {
        self.columns
    }

    /// Axial cell rows (`M`).
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn side_mm(&self) -> f64 {
        self.side_mm
    }

    pub fn row_height_mm(&self) -> f64 {
        self.row_height_mm
    }

    pub fn shear_mm(&self) -> f64 {
        self.shear_mm
    }

    /// Base-row width before margins: `(N + 1) a` exactly.
    pub fn width_mm(&self) -> f64 {
        self.columns as f64 * self.side_mm
    }

    pub fn diagonal_count(&self) -> usize {
        self.creases
            .iter()
            .filter(|c| c.kind == CreaseKind::Valley)
            .count()
    }

    fn vertex_index(&self, col: usize, row: usize) -> usize {
        row * (self.columns + 1) + col
    }

    /// Corner vertices of cell `(col, row)`:
    /// (bottom-left, bottom-right, top-right, top-left).
    fn cell_corners(&self, col: usize, row: usize) -> [[f64; 2]; 4] {
        [
            self.vertices[self.vertex_index(col, row)],
            self.vertices[self.vertex_index(col + 1, row)],
            self.vertices[self.vertex_index(col + 1, row + 1)],
            self.vertices[self.vertex_index(col, row + 1)],
        ]
    }

    /// Diagonal crease endpoints of cell `(col, row)` per the chirality.
    fn cell_diagonal(&self, col: usize, row: usize) -> ([f64; 2], [f64; 2]) {
        let c = self.cell_corners(col, row);
        match self.chirality {
            Chirality::Right => (c[0], c[2]),
            Chirality::Left => (c[1], c[3]),
        }
    }
}

/// Build the crease pattern for a cylinder. Fold-geometry errors (no real
/// cell height) propagate.
pub fn generate_crease_pattern(spec: &CylinderSpec, chirality: Chirality) -> Result<CreasePattern> {
    let cell = spec.cell();
    let side = geometry::side_length(cell);
    let height = geometry::cell_height(cell)?;
    let shear = height / cell.theta0_rad().tan();
    let columns = cell.segments() as usize + 1;
    let rows = spec.axial_cells() as usize;

    let mut vertices = Vec::with_capacity((columns + 1) * (rows + 1));
    for row in 0..=rows {
        for col in 0..=columns {
            vertices.push([
                col as f64 * side + row as f64 * shear,
                row as f64 * height,
            ]);
        }
    }

    let index = |col: usize, row: usize| row * (columns + 1) + col;
    let mut creases = Vec::new();
    // Horizontal polygon folds; outer rows are cut borders.
    for row in 0..=rows {
        let kind = if row == 0 || row == rows {
            CreaseKind::Border
        } else {
            CreaseKind::Mountain
        };
        for col in 0..columns {
            creases.push(Crease {
                a: index(col, row),
                b: index(col + 1, row),
                kind,
            });
        }
    }
    // Slanted side edges; interior ones are perforated fold lines.
    for col in 0..=columns {
        let kind = if col == 0 || col == columns {
            CreaseKind::Border
        } else {
            CreaseKind::Perforation
        };
        for row in 0..rows {
            creases.push(Crease {
                a: index(col, row),
                b: index(col, row + 1),
                kind,
            });
        }
    }
    // One valley diagonal per cell.
    for row in 0..rows {
        for col in 0..columns {
            let (a, b) = match chirality {
                Chirality::Right => (index(col, row), index(col + 1, row + 1)),
                Chirality::Left => (index(col + 1, row), index(col, row + 1)),
            };
            creases.push(Crease {
                a,
                b,
                kind: CreaseKind::Valley,
            });
        }
    }

    let style = PatternStyle::default();
    let width = columns as f64 * side;
    let top_y = rows as f64 * height;
    let top_x = rows as f64 * shear;
    let tabs = vec![
        Polygon {
            points: vec![
                [0.0, -style.tab_depth_mm],
                [width, -style.tab_depth_mm],
                [width, 0.0],
                [0.0, 0.0],
            ],
        },
        Polygon {
            points: vec![
                [top_x, top_y],
                [top_x + width, top_y],
                [top_x + width, top_y + style.tab_depth_mm],
                [top_x, top_y + style.tab_depth_mm],
            ],
        },
    ];

    Ok(CreasePattern {
        spec: *spec,
        chirality,
        vertices,
        creases,
        tabs,
        columns,
        rows,
        side_mm: side,
        row_height_mm: height,
        shear_mm: shear,
        tab_depth_mm: style.tab_depth_mm,
    })
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn add_scaled(a: [f64; 2], d: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * d[0], a[1] + t * d[1]]
}

fn unit(v: [f64; 2]) -> [f64; 2] {
    let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
    [v[0] / n, v[1] / n]
}

/// Clip `poly` to the half-plane `{p : (p - origin) . normal >= offset}`.
fn clip_half_plane(poly: &[[f64; 2]], origin: [f64; 2], normal: [f64; 2], offset: f64) -> Vec<[f64; 2]> {
    let dist = |p: [f64; 2]| (p[0] - origin[0]) * normal[0] + (p[1] - origin[1]) * normal[1] - offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for k in 0..poly.len() {
        let cur = poly[k];
        let next = poly[(k + 1) % poly.len()];
        let d_cur = dist(cur);
        let d_next = dist(next);
        if d_cur >= 0.0 {
            out.push(cur);
        }
        if (d_cur > 0.0) != (d_next > 0.0) && d_cur != d_next {
            let t = d_cur / (d_cur - d_next);
            out.push(add_scaled(cur, sub(next, cur), t));
        }
    }
    out
}

/// Electrode polygons for a pattern. The requested `role` must match the
/// spec the pattern was built from.
///
/// Stator: one strip per cell, centered on the diagonal crease. Rotor: one
/// pad per cell beside the left side edge, inset from every crease so no pad
/// touches a fold. Overlap-column regions are flagged non-electrical.
pub fn generate_electrode_layout(
    pattern: &CreasePattern,
    role: Role,
    style: &PatternStyle,
) -> Result<Vec<ElectrodeRegion>> {
    if pattern.spec().role() != role {
        return Err(Error::Domain(format!(
            "pattern was built for {:?}, electrode layout requested for {:?}",
            pattern.spec().role(),
            role
        )));
    }
    let n = pattern.spec().cell().segments() as usize;
    let mut regions = Vec::new();
    for row in 0..pattern.rows() {
        for col in 0..pattern.columns() {
            let electrical = col < n;
            let region = match role {
                Role::Stator => {
                    let (d0, d1) = pattern.cell_diagonal(col, row);
                    let dir = unit(sub(d1, d0));
                    let normal = [-dir[1], dir[0]];
                    let half = style.strip_width_mm / 2.0;
                    Polygon {
                        points: vec![
                            add_scaled(d0, normal, half),
                            add_scaled(d1, normal, half),
                            add_scaled(d1, normal, -half),
                            add_scaled(d0, normal, -half),
                        ],
                    }
                }
                Role::Rotor => {
                    let corners = pattern.cell_corners(col, row);
                    let edge_lo = corners[0];
                    let edge_hi = corners[3];
                    let e = unit(sub(edge_hi, edge_lo));
                    // Inward normal of the left side edge.
                    let m = [e[1], -e[0]];
                    let u0 = style.pad_inset_mm;
                    let u1 = style.pad_inset_mm + style.pad_width_mm;
                    let band = vec![
                        add_scaled(edge_lo, m, u0),
                        add_scaled(edge_lo, m, u1),
                        add_scaled(edge_hi, m, u1),
                        add_scaled(edge_hi, m, u0),
                    ];
                    let inset = style.pad_inset_mm;
                    // Keep clear of the horizontal folds.
                    let mut poly = clip_half_plane(&band, edge_lo, [0.0, 1.0], inset);
                    poly = clip_half_plane(&poly, edge_hi, [0.0, -1.0], inset);
                    // Keep clear of the right side edge.
                    poly = clip_half_plane(&poly, corners[1], [-m[0], -m[1]], inset);
                    // Keep to the left-edge side of the diagonal crease.
                    let (d0, d1) = pattern.cell_diagonal(col, row);
                    let dir = unit(sub(d1, d0));
                    let mut dn = [-dir[1], dir[0]];
                    let mid_edge = [
                        0.5 * (edge_lo[0] + edge_hi[0]),
                        0.5 * (edge_lo[1] + edge_hi[1]),
                    ];
                    let side_sign = (mid_edge[0] - d0[0]) * dn[0] + (mid_edge[1] - d0[1]) * dn[1];
                    if side_sign < 0.0 {
                        dn = [-dn[0], -dn[1]];
                    }
                    poly = clip_half_plane(&poly, d0, dn, inset);
                    if poly.len() < 3 {
                        continue;
                    }
                    Polygon { points: poly }
                }
            };
            regions.push(ElectrodeRegion {
                polygon: region,
                kind: match role {
                    Role::Stator => ElectrodeKind::StatorStrip,
                    Role::Rotor => ElectrodeKind::RotorPad,
                },
                electrical,
                row,
                column: col,
            });
        }
    }
    Ok(regions)
}

fn fmt_mm(v: f64) -> String {
    format!("{v:.4}")
}

/// Render the pattern (and optional electrodes) as an SVG 1.1 document in
/// millimeter units. Mountain creases are solid, valleys dashed,
/// perforations dotted, borders heavy; electrodes are filled polygons in
/// their own layer group. Output is deterministic byte-for-byte.
pub fn emit_svg(
    pattern: &CreasePattern,
    electrodes: &[ElectrodeRegion],
    style: &PatternStyle,
) -> String {
    let mut min = [f64::INFINITY, f64::INFINITY];
    let mut max = [f64::NEG_INFINITY, f64::NEG_INFINITY];
    let mut grow = |p: &[f64; 2]| {
        min[0] = min[0].min(p[0]);
        min[1] = min[1].min(p[1]);
        max[0] = max[0].max(p[0]);
        max[1] = max[1].max(p[1]);
    };
    for p in pattern.vertices() {
        grow(p);
    }
    for tab in pattern.tabs() {
        for p in &tab.points {
            grow(p);
        }
    }
    for region in electrodes {
        for p in &region.polygon.points {
            grow(p);
        }
    }
    let margin = style.margin_mm;
    let width = max[0] - min[0] + 2.0 * margin;
    let height = max[1] - min[1] + 2.0 * margin;
    let map = |p: [f64; 2]| [p[0] - min[0] + margin, max[1] - p[1] + margin];

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}mm\" height=\"{h}mm\" viewBox=\"0 0 {w} {h}\">",
        w = fmt_mm(width),
        h = fmt_mm(height),
    );

    let _ = writeln!(
        svg,
        "  <g id=\"tabs\" fill=\"none\" stroke=\"#888888\" stroke-width=\"0.2\">"
    );
    for tab in pattern.tabs() {
        let pts: Vec<String> = tab
            .points
            .iter()
            .map(|p| {
                let q = map(*p);
                format!("{},{}", fmt_mm(q[0]), fmt_mm(q[1]))
            })
            .collect();
        let _ = writeln!(svg, "    <polygon points=\"{}\"/>", pts.join(" "));
    }
    svg.push_str("  </g>\n");

    svg.push_str("  <g id=\"creases\" fill=\"none\">\n");
    let layers: [(CreaseKind, &str); 4] = [
        (
            CreaseKind::Border,
            "stroke=\"#000000\" stroke-width=\"0.4\"",
        ),
        (
            CreaseKind::Mountain,
            "stroke=\"#cc2222\" stroke-width=\"0.2\"",
        ),
        (
            CreaseKind::Valley,
            "stroke=\"#2244cc\" stroke-width=\"0.2\" stroke-dasharray=\"2,1\"",
        ),
        (
            CreaseKind::Perforation,
            "stroke=\"#227722\" stroke-width=\"0.2\" stroke-dasharray=\"0.4,0.8\"",
        ),
    ];
    for (kind, attrs) in layers {
        let _ = writeln!(svg, "    <g id=\"{}\" {attrs}>", kind.name());
        for crease in pattern.creases().iter().filter(|c| c.kind == kind) {
            let a = map(pattern.vertices()[crease.a]);
            let b = map(pattern.vertices()[crease.b]);
            let _ = writeln!(
                svg,
                "      <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                fmt_mm(a[0]),
                fmt_mm(a[1]),
                fmt_mm(b[0]),
                fmt_mm(b[1]),
            );
        }
        svg.push_str("    </g>\n");
    }
    svg.push_str("  </g>\n");

    svg.push_str("  <g id=\"electrodes\" stroke=\"none\" fill=\"#b87333\" fill-opacity=\"0.85\">\n");
    for region in electrodes {
        let pts: Vec<String> = region
            .polygon
            .points
            .iter()
            .map(|p| {
                let q = map(*p);
                format!("{},{}", fmt_mm(q[0]), fmt_mm(q[1]))
            })
            .collect();
        let _ = writeln!(
            svg,
            "    <polygon class=\"{}{}\" points=\"{}\"/>",
            match region.kind {
                ElectrodeKind::StatorStrip => "strip",
                ElectrodeKind::RotorPad => "pad",
            },
            if region.electrical { "" } else { " overlap" },
            pts.join(" "),
        );
    }
    svg.push_str("  </g>\n");
    svg.push_str("</svg>\n");
    svg
}

/// Flat crease list: `x1_mm,y1_mm,x2_mm,y2_mm,kind` per line.
pub fn crease_csv(pattern: &CreasePattern) -> String {
    let mut out = String::from("x1_mm,y1_mm,x2_mm,y2_mm,kind\n");
    for crease in pattern.creases() {
        let a = pattern.vertices()[crease.a];
        let b = pattern.vertices()[crease.b];
        let _ = writeln!(out, "{},{},{},{},{}", a[0], a[1], b[0], b[1], crease.kind.name());
    }
    out
}
