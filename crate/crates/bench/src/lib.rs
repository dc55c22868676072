//! Fixtures shared by the benchmarks.

use conestab::flow::{FlowConfig, Tier};
use conestab::{build_radial_model, CrossSectionSpectrum, Pencil};

/// Mesh sizes swept by the radial benchmarks.
pub const MESH_SIZES: [usize; 3] = [1000, 4000, 16000];

pub fn radial_pencil(nu: f64, m: usize) -> Pencil {
    build_radial_model(nu, 0.0, m, 2.0)
        .expect("valid radial parameters")
        .pencil()
}

pub fn sphere(n: usize) -> CrossSectionSpectrum {
    CrossSectionSpectrum::round_sphere(n, 12).expect("valid sphere")
}

pub fn flow_config(tier: Tier) -> FlowConfig {
    FlowConfig {
        tier,
        c: if tier == Tier::A { 1.0 } else { 1.2 },
        min_legs: 11,
        ..FlowConfig::default()
    }
}
