//! Frozen-output check for the pattern exporter: the bench rotor pattern
//! with its electrode layout must render byte-for-byte as reviewed.
//!
//! Regenerate with `BLESS=1 cargo test -p kcl-core --test pattern_golden`
//! after an intentional rendering change, and re-review the file.

use kcl_core::geometry::{CylinderSpec, KreslingCell, Role};
use kcl_core::pattern::{emit_svg, generate_crease_pattern, generate_electrode_layout, Chirality, PatternStyle};

fn render_rotor() -> String {
    let cell = KreslingCell::new(30.0, 10, 57f64.to_radians()).unwrap();
    let spec = CylinderSpec::new(cell, 2, Role::Rotor).unwrap();
    let style = PatternStyle::default();
    let pattern = generate_crease_pattern(&spec, Chirality::Right).unwrap();
    let pads = generate_electrode_layout(&pattern, Role::Rotor, &style).unwrap();
    emit_svg(&pattern, &pads, &style)
}

#[test]
fn rotor_pattern_matches_golden_file() {
    let svg = render_rotor();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/rotor_pattern.svg");
    if std::env::var_os("BLESS").is_some() {
        std::fs::create_dir_all(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data")).unwrap();
        std::fs::write(path, &svg).unwrap();
        return;
    }
    let golden = std::fs::read_to_string(path).expect("golden file present");
    assert_eq!(svg, golden, "rotor pattern SVG drifted from the reviewed rendering");
}
