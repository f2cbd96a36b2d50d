//! Fixed instances shared by the benchmarks.

use udgmcp_core::harness::{generate_instance, Distribution, InstanceSpec};
use udgmcp_core::PointSet;

/// Uniform points at roughly `density` per unit area.
pub fn uniform(n: usize, density: f64, seed: u64) -> PointSet {
    let side = (n as f64 / density).sqrt().max(1.0);
    generate_instance(&InstanceSpec::uniform(n, side, side, seed)).expect("valid box")
}

pub fn clustered(n: usize, side: f64, seed: u64) -> PointSet {
    generate_instance(&InstanceSpec {
        distribution: Distribution::Clustered,
        ..InstanceSpec::uniform(n, side, side, seed)
    })
    .expect("valid box")
}

/// Points in a single horizontal strip `[0, len) x [0, 0.86)`.
pub fn strip(n: usize, len: f64, seed: u64) -> PointSet {
    generate_instance(&InstanceSpec::uniform(n, len, 0.86, seed)).expect("valid box")
}
