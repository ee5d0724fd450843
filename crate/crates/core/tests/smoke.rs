use overdg::cases::{run_case, CaseConfig, CaseKind, OversetLayout};

#[test]
fn entropy_wave_p1_h20_single_grid() {
    let cfg = CaseConfig::new(CaseKind::EntropyWave, 1, 1.0 / 20.0);
    let art = run_case(&cfg).unwrap();
    let err = art.l2_density.unwrap();
    println!(
        "entropy P1 h=1/20 single: L2 = {err:.4e}, steps = {}, wall = {:.2}s, troubled_frac = {}",
        art.steps, art.wall_seconds, art.max_troubled_frac
    );
}

#[test]
fn entropy_wave_p1_h20_type1() {
    let cfg = CaseConfig::new(CaseKind::EntropyWave, 1, 1.0 / 20.0)
        .with_layout(OversetLayout::Type1);
    let art = run_case(&cfg).unwrap();
    let err = art.l2_density.unwrap();
    println!(
        "entropy P1 h=1/20 type1: L2 = {err:.4e}, steps = {}, wall = {:.2}s, troubled_frac = {}",
        art.steps, art.wall_seconds, art.max_troubled_frac
    );
}
