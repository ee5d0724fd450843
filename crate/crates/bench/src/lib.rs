//! Shared fixtures for the criterion benches.

use overdg::cases::{build_grids, initialize, CaseConfig, CaseKind, OversetLayout};
use overdg::mesh::OversetAssembly;
use overdg::solver::FieldState;

/// Small overset entropy-wave configuration used by the benches.
pub fn bench_fixture(order: usize) -> (OversetAssembly, FieldState) {
    let cfg = CaseConfig::new(CaseKind::EntropyWave, order, 0.1).with_layout(OversetLayout::Type1);
    let grids = build_grids(&cfg).expect("grids");
    let assembly = OversetAssembly::build(grids, order, 1).expect("assembly");
    let state = initialize(&assembly, CaseKind::EntropyWave).expect("init");
    (assembly, state)
}
