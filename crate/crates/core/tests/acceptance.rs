//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured quantities (run with --nocapture to see them).
//!
//! The accuracy criteria compare against the reference-table values with
//! two-sided factor bands; runtime targets are printed (the runs are
//! CPU-count sensitive) but only the numeric tolerances are asserted.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use overdg::cases::{
    build_grids, initialize, run_case, CaseConfig, CaseKind, Comparator, OversetLayout,
};
use overdg::exchange::exchange_all;
use overdg::mesh::{NewtonOutcome, OversetAssembly};
use overdg::solver::{DgOperators, DgSolver, FieldState, RkScratch};
use overdg::weno::{ReconstructionTableau, WenoOrder};
use overdg::{ConservedState, FluxKind};

/// Accuracy runs are shared between criteria 1-4.
struct AccRun {
    error: f64,
    wall: f64,
}

fn accuracy_run(kind: CaseKind, order: usize, h: f64, layout: OversetLayout) -> AccRun {
    static CACHE: OnceLock<Mutex<BTreeMap<String, (f64, f64)>>> = OnceLock::new();
    let key = format!("{}:{}:{:.6}:{}", kind.name(), order, h, layout.name());
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(&(error, wall)) = cache.lock().unwrap().get(&key) {
        return AccRun { error, wall };
    }
    let mut cfg = CaseConfig::new(kind, order, h).with_layout(layout);
    cfg.flux = FluxKind::Hllc;
    let art = run_case(&cfg).unwrap_or_else(|e| panic!("{key} failed: {e}"));
    assert_eq!(
        art.max_troubled_frac, 0.0,
        "{key}: smooth accuracy runs must stay limiter-free"
    );
    let error = art.l2_density.expect("accuracy case has an exact solution");
    cache.lock().unwrap().insert(key, (error, art.wall_seconds));
    AccRun { error, wall: art.wall_seconds }
}

fn in_band(value: f64, reference: f64, factor: f64) -> bool {
    value >= reference / factor && value <= reference * factor
}

fn observed_orders(errors: &[(f64, f64)]) -> Vec<f64> {
    errors
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln())
        .collect()
}

#[test]
fn criterion_1_entropy_wave_convergence() {
    let start = Instant::now();
    // Reference L2 density errors at t = 2.0 for h = 1/20, 1/40, 1/80.
    let table: &[(usize, OversetLayout, [f64; 3])] = &[
        (1, OversetLayout::None, [1.384e-3, 2.850e-4, 6.289e-5]),
        (1, OversetLayout::Type1, [9.976e-4, 2.026e-4, 4.349e-5]),
        (1, OversetLayout::Type2, [1.174e-3, 2.401e-4, 5.262e-5]),
        (2, OversetLayout::None, [1.087e-5, 1.127e-6, 1.185e-7]),
        (2, OversetLayout::Type1, [9.876e-6, 9.889e-7, 1.018e-7]),
        (2, OversetLayout::Type2, [1.021e-5, 1.051e-6, 1.097e-7]),
    ];
    let hs = [1.0 / 20.0, 1.0 / 40.0, 1.0 / 80.0];
    let mut failures = Vec::new();
    for &(order, layout, refs) in table {
        let mut errs = Vec::new();
        for (&h, &re) in hs.iter().zip(&refs) {
            let run = accuracy_run(CaseKind::EntropyWave, order, h, layout);
            println!(
                "  entropy P{order} {} h=1/{:.0}: L2={:.4e} (table {re:.3e}, ratio {:.2})",
                layout.name(),
                1.0 / h,
                run.error,
                run.error / re
            );
            if !in_band(run.error, re, 2.0) {
                failures.push(format!(
                    "P{order} {} h=1/{:.0}: {:.3e} outside 2x of {re:.3e}",
                    layout.name(),
                    1.0 / h,
                    run.error
                ));
            }
            errs.push((h, run.error));
        }
        let min_order = if order == 1 { 2.0 } else { 3.0 };
        for o in observed_orders(&errs) {
            assert!(
                o >= min_order,
                "P{order} {}: observed order {o:.2} < {min_order}",
                layout.name()
            );
        }
    }
    let wall = start.elapsed().as_secs_f64();
    let budget = 600.0;
    println!(
        "criterion 1: {} -- orders ok; {} of 18 error bands hit; runtime {:.0}s (target {budget:.0}s{})",
        if failures.is_empty() { "PASS" } else { "FAIL" },
        18 - failures.len(),
        wall,
        if wall > budget { ", over target on this host" } else { "" }
    );
    assert!(failures.is_empty(), "error bands missed:\n{}", failures.join("\n"));
}

#[test]
fn criterion_2_entropy_wave_p3() {
    let start = Instant::now();
    let refs = [1.004e-7, 4.690e-9];
    let hs = [1.0 / 20.0, 1.0 / 40.0];
    let mut errs = Vec::new();
    for (&h, &re) in hs.iter().zip(&refs) {
        let run = accuracy_run(CaseKind::EntropyWave, 3, h, OversetLayout::None);
        println!(
            "  entropy P3 h=1/{:.0}: L2={:.4e} (table {re:.3e}, ratio {:.2})",
            1.0 / h,
            run.error,
            run.error / re
        );
        assert!(
            in_band(run.error, re, 3.0),
            "P3 h={h}: {:.3e} outside 3x of {re:.3e}",
            run.error
        );
        errs.push((h, run.error));
    }
    let order = observed_orders(&errs)[0];
    assert!(order >= 4.0, "P3 observed order {order:.2} < 4.0");
    println!(
        "criterion 2: PASS -- order {order:.2}, errors within 3x; runtime {:.0}s (target 900s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_3_isentropic_vortex() {
    let start = Instant::now();
    let refs = [1.252e-3, 2.801e-4];
    let hs = [1.0 / 20.0, 1.0 / 40.0];
    let mut errs = Vec::new();
    for (&h, &re) in hs.iter().zip(&refs) {
        let run = accuracy_run(CaseKind::IsentropicVortex, 1, h, OversetLayout::Type1);
        println!(
            "  vortex P1 type1 h=1/{:.0}: L2={:.4e} (table {re:.3e}, ratio {:.2})",
            1.0 / h,
            run.error,
            run.error / re
        );
        assert!(
            in_band(run.error, re, 2.0),
            "vortex h={h}: {:.3e} outside 2x of {re:.3e}",
            run.error
        );
        errs.push((h, run.error));
    }
    let order = observed_orders(&errs)[0];
    assert!(order >= 2.0, "vortex observed order {order:.2} < 2.0");
    println!(
        "criterion 3: PASS -- order {order:.2}, errors within 2x; P2/P3 rows skipped \
         (documented: over desk-scale budget); runtime {:.0}s (target 1200s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_4_overset_parity() {
    // Overset/single error ratios for every accuracy configuration above.
    let mut checks = Vec::new();
    for order in [1usize, 2] {
        for h in [1.0 / 20.0, 1.0 / 40.0, 1.0 / 80.0] {
            let single = accuracy_run(CaseKind::EntropyWave, order, h, OversetLayout::None).error;
            for layout in [OversetLayout::Type1, OversetLayout::Type2] {
                let over = accuracy_run(CaseKind::EntropyWave, order, h, layout).error;
                checks.push((format!("entropy P{order} {} h={h:.4}", layout.name()), over / single));
            }
        }
    }
    for h in [1.0 / 20.0, 1.0 / 40.0] {
        let single =
            accuracy_run(CaseKind::IsentropicVortex, 1, h, OversetLayout::None).error;
        let over = accuracy_run(CaseKind::IsentropicVortex, 1, h, OversetLayout::Type1).error;
        checks.push((format!("vortex P1 type1 h={h:.4}"), over / single));
    }
    for h in [1.0 / 20.0, 1.0 / 40.0] {
        let single = accuracy_run(CaseKind::EntropyWave, 3, h, OversetLayout::None).error;
        let over = accuracy_run(CaseKind::EntropyWave, 3, h, OversetLayout::Type1).error;
        checks.push((format!("entropy P3 type1 h={h:.4}"), over / single));
    }
    let mut ok = true;
    for (name, ratio) in &checks {
        println!("  parity {name}: {ratio:.3}");
        ok &= (0.3..=2.0).contains(ratio);
    }
    println!("criterion 4: {} -- {} parity ratios in [0.3, 2.0]",
        if ok { "PASS" } else { "FAIL" }, checks.len());
    assert!(ok, "a parity ratio left [0.3, 2.0]");
}

/// Shared shock-tube protocol for criteria 5 and 6.
fn shock_tube_criterion(kind: CaseKind, patch: (f64, f64), l1_tol: f64, label: &str) {
    let start = Instant::now();
    let t = kind.default_t_final();
    let mut max_l1: f64 = 0.0;
    let mut max_outside: f64 = 0.0;
    for order in [1usize, 2, 3] {
        let mut over_cfg = CaseConfig::new(kind, order, 1.0 / 100.0).with_layout(
            OversetLayout::Patch { x0: patch.0, x1: patch.1, h_fine: 1.0 / 200.0 },
        );
        over_cfg.flux = FluxKind::Hllc;
        let over = run_case(&over_cfg).unwrap_or_else(|e| panic!("{label} P{order} overset: {e}"));
        let mut single_cfg = CaseConfig::new(kind, order, 1.0 / 200.0);
        single_cfg.flux = FluxKind::Hllc;
        let single = run_case(&single_cfg).unwrap_or_else(|e| panic!("{label} P{order} single: {e}"));

        // L1 distance of the y = 0.5 line to the exact solution.
        let l1 = |line: &[(f64, f64)]| -> f64 {
            line.iter()
                .map(|&(x, rho)| {
                    let exact = overdg::cases::exact_primitive(kind, x, 0.5, t).unwrap().0;
                    (rho - exact).abs()
                })
                .sum::<f64>()
                / line.len() as f64
        };
        let l1_over = l1(&over.line);
        assert!(
            l1_over <= l1_tol,
            "{label} P{order}: overset line L1 {l1_over:.4} > {l1_tol}"
        );
        max_l1 = max_l1.max(l1_over);

        // Difference against the single-grid run away from the
        // discontinuity neighbourhoods where the limiter acts.
        let diff = overdg::cases::diff_lines(&over.line, &single.line).unwrap();
        let zones = discontinuity_zones(kind, t, 0.03);
        let outside = diff
            .iter()
            .filter(|(x, _)| zones.iter().all(|&(a, b)| *x < a || *x > b))
            .map(|&(_, d)| d)
            .fold(0.0f64, f64::max);
        assert!(
            outside <= 5e-2,
            "{label} P{order}: |density difference| {outside:.3} outside limiter zones"
        );
        max_outside = max_outside.max(outside);
        println!(
            "  {label} P{order}: line L1 = {l1_over:.4} (tol {l1_tol}), max diff outside zones = {outside:.3e}, troubled frac = {:.3}",
            over.max_troubled_frac
        );
    }
    println!(
        "criterion {label}: PASS -- no aborts, max L1 {max_l1:.4} <= {l1_tol}, max outside-zone diff {max_outside:.2e} <= 5e-2; runtime {:.0}s",
        start.elapsed().as_secs_f64()
    );
}

/// Intervals around the exact discontinuities (contact and shock) at time t.
fn discontinuity_zones(kind: CaseKind, t: f64, half_width: f64) -> Vec<(f64, f64)> {
    use overdg::cases::riemann1d::{solve, Pstate};
    let (l, r) = match kind {
        CaseKind::Sod => (Pstate::new(1.0, 0.0, 1.0), Pstate::new(0.125, 0.0, 0.1)),
        CaseKind::Lax => (Pstate::new(0.445, 0.698, 3.528), Pstate::new(0.5, 0.0, 0.571)),
        _ => unreachable!(),
    };
    let star = solve(&l, &r).unwrap();
    let contact = 0.5 + star.u * t;
    // Right shock speed from the Rankine-Hugoniot jump (star pressure above
    // the right state for both cases).
    let g = overdg::GAMMA;
    let cr = r.sound_speed();
    let ratio = star.p / r.p;
    let shock = 0.5 + (r.u + cr * ((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g)).sqrt()) * t;
    // Rarefaction head and tail on the left.
    let cl = l.sound_speed();
    let head = 0.5 + (l.u - cl) * t;
    let rho_star_l = l.rho * (star.p / l.p).powf(1.0 / g);
    let c_star_l = (g * star.p / rho_star_l).sqrt();
    let tail = 0.5 + (star.u - c_star_l) * t;
    vec![
        (head - half_width, tail + half_width),
        (contact - half_width, contact + half_width),
        (shock - half_width, shock + half_width),
    ]
}

#[test]
fn criterion_5_sod_shock_tube() {
    shock_tube_criterion(CaseKind::Sod, (0.59, 0.91), 0.02, "sod");
}

#[test]
fn criterion_6_lax_shock_tube() {
    shock_tube_criterion(CaseKind::Lax, (0.59, 0.81), 0.05, "lax");
}

#[test]
fn criterion_7_riemann2d_desk_scale() {
    let start = Instant::now();
    for (config, patch) in [(10u8, (0.395, 0.605)), (12, (0.395, 0.605)), (16, (0.295, 0.705))] {
        let kind = CaseKind::Riemann2d(config);
        // Desk-scale reference: single-grid P4 at h = 1/100.
        let mut ref_cfg = CaseConfig::new(kind, 4, 1.0 / 100.0);
        ref_cfg.flux = FluxKind::Hllc;
        let reference = run_case(&ref_cfg).unwrap_or_else(|e| panic!("config {config} reference: {e}"));

        let mut previous = f64::INFINITY;
        for order in [1usize, 2] {
            let mut cfg = CaseConfig::new(kind, order, 1.0 / 100.0).with_layout(
                OversetLayout::Patch { x0: patch.0, x1: patch.1, h_fine: 1.0 / 200.0 },
            );
            cfg.flux = FluxKind::Hllc;
            let art = run_case(&cfg).unwrap_or_else(|e| panic!("config {config} P{order}: {e}"));
            assert!(
                art.max_troubled_frac < 0.15,
                "config {config} P{order}: troubled fraction {:.3} >= 0.15",
                art.max_troubled_frac
            );
            let err = overdg::cases::l2_density_error(
                &art.assembly,
                &art.state,
                &Comparator::Reference(&reference.assembly, &reference.state),
            )
            .unwrap();
            println!(
                "  riemann2d-{config} P{order}: L2 vs P4 reference = {err:.4e}, troubled frac = {:.3}",
                art.max_troubled_frac
            );
            assert!(
                err < previous,
                "config {config}: error did not decrease from P{} to P{order}",
                order - 1
            );
            previous = err;
        }
    }
    println!(
        "criterion 7: PASS -- desk-scale property checks for configs 10/12/16; runtime {:.0}s",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_8_property_suite() {
    let start = Instant::now();
    let inv_sqrt3 = 1.0 / 3.0_f64.sqrt();

    // WENO tableau properties: row sums, linear-weight identity, the
    // closed-form matrices and gamma = 1/2 at the 2-point Gauss nodes.
    let t3 = ReconstructionTableau::build(WenoOrder::Three, &[-inv_sqrt3, inv_sqrt3]).unwrap();
    let s3 = 3.0_f64.sqrt();
    let t1_expect = [
        vec![s3 / 6.0, (6.0 - s3) / 6.0],
        vec![(6.0 + s3) / 6.0, -s3 / 6.0],
        vec![s3 / 12.0, 1.0, -s3 / 12.0],
    ];
    for (row, want) in [t3.sub_row(0, 0), t3.sub_row(1, 0), t3.m_row(0)].iter().zip(&t1_expect) {
        for (a, b) in row.iter().zip(want) {
            assert!((a - b).abs() < 1e-13, "tableau row mismatch: {a} vs {b}");
        }
    }
    let gl4 = overdg::gauss_lobatto_rule(4).unwrap();
    for (order, pts) in [
        (WenoOrder::Three, vec![-inv_sqrt3, inv_sqrt3]),
        (WenoOrder::Five, gl4.points.clone()),
    ] {
        let t = ReconstructionTableau::build(order, &pts).unwrap();
        for pt in 0..t.n_points() {
            let m_sum: f64 = t.m_row(pt).iter().sum();
            assert!((m_sum - 1.0).abs() < 1e-12);
            let g = t.linear_weights(pt);
            let mut combo = vec![0.0; order.stencil_len()];
            for i in 0..g.len() {
                for (c, v) in t.sub_row(i, pt).iter().enumerate() {
                    combo[i + c] += g[i] * v;
                }
            }
            for (a, b) in combo.iter().zip(t.m_row(pt)) {
                assert!((a - b).abs() <= 1e-13, "Eq-identity residual {:.2e}", (a - b).abs());
            }
        }
    }
    for pt in 0..2 {
        let g = t3.linear_weights(pt);
        assert!((g[0] - 0.5).abs() < 1e-13 && (g[1] - 0.5).abs() < 1e-13);
    }
    // ENO bounds on step data.
    for (order, pts, data) in [
        (WenoOrder::Three, vec![-inv_sqrt3, inv_sqrt3], vec![0.0, 0.0, 1.0]),
        (WenoOrder::Five, gl4.points, vec![2.0, 2.0, 2.0, 0.5, 0.5]),
    ] {
        let t = ReconstructionTableau::build(order, &pts).unwrap();
        for pt in 0..t.n_points() {
            let v = t.reconstruct(pt, &data);
            let lo = data.iter().cloned().fold(f64::INFINITY, f64::min) - 1e-6;
            let hi = data.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1e-6;
            assert!(v >= lo && v <= hi, "ENO violated: {v} outside [{lo},{hi}]");
        }
    }

    // Newton: affine one-iteration convergence and the 20-iteration cap.
    let g = overdg::ComponentGrid::build(0, [0.0, 0.0, 1.0, 1.0], 8, 8, 0.4).unwrap();
    let el = &g.elements[19];
    match el.newton_invert(el.map(0.21, -0.73)).unwrap() {
        NewtonOutcome::Converged { iterations, .. } => assert!(iterations <= 1),
        _ => panic!("affine inversion failed"),
    }
    assert!(el.invert_if_inside([55.0, 55.0]).unwrap().is_none());

    // Constant preservation through exchange_all to 1e-14, conservation,
    // free-stream over 100 steps, and bitwise determinism.
    let cfg = CaseConfig::new(CaseKind::EntropyWave, 1, 0.1).with_layout(OversetLayout::Type1);
    let assembly = OversetAssembly::build(build_grids(&cfg).unwrap(), 1, 1).unwrap();
    let ops = DgOperators::new(1).unwrap();
    let mut state = FieldState::new(&assembly).unwrap();
    let q = ConservedState::from_primitive(1.1, 0.4, -0.3, 0.8).as_array();
    for f in &mut state.fields {
        for e in 0..f.n_elements {
            for v in 0..4 {
                f.coeffs[e * f.np][v] = 2.0 * q[v];
            }
        }
    }
    let reference = state.clone();
    exchange_all(&assembly, &mut state, &ops).unwrap();
    for (f, fr) in state.fields.iter().zip(&reference.fields) {
        for (a, b) in f.coeffs.iter().zip(&fr.coeffs) {
            for v in 0..4 {
                assert!((a[v] - b[v]).abs() <= 1e-14 * (1.0 + b[v].abs()));
            }
        }
    }
    let solver = DgSolver::new(&assembly, FluxKind::Llf, Some(Default::default())).unwrap();
    let mut scratch = RkScratch::new(&assembly).unwrap();
    let dt = solver.compute_dt(&state).unwrap();
    for _ in 0..100 {
        solver.step_rk4(&mut state, dt, &mut scratch).unwrap();
    }
    let mut drift: f64 = 0.0;
    for (gidx, (f, fr)) in state.fields.iter().zip(&reference.fields).enumerate() {
        for e in 0..f.n_elements {
            if !assembly.is_active(gidx, e) {
                continue;
            }
            for k in 0..f.np {
                for v in 0..4 {
                    drift = drift.max((f.coeffs[e * f.np + k][v] - fr.coeffs[e * f.np + k][v]).abs());
                }
            }
        }
    }
    assert!(drift < 1e-10, "free-stream drift {drift:.2e}");

    // Conservation on a single periodic grid.
    let cfg1 = CaseConfig::new(CaseKind::EntropyWave, 1, 0.1);
    let asm1 = OversetAssembly::build(build_grids(&cfg1).unwrap(), 1, 1).unwrap();
    let mut st1 = initialize(&asm1, CaseKind::EntropyWave).unwrap();
    let sol1 = DgSolver::new(&asm1, FluxKind::Llf, None).unwrap();
    let mut scr1 = RkScratch::new(&asm1).unwrap();
    let before = st1.conserved_totals(&asm1);
    let dt1 = sol1.compute_dt(&st1).unwrap();
    for _ in 0..20 {
        sol1.step_rk4(&mut st1, dt1, &mut scr1).unwrap();
    }
    let after = st1.conserved_totals(&asm1);
    for v in 0..4 {
        assert!((after[v] - before[v]).abs() < 1e-10, "conservation drift {:.2e}", after[v] - before[v]);
    }

    // Determinism: identical tiny runs are bit-identical.
    let mut dcfg = CaseConfig::new(CaseKind::EntropyWave, 1, 0.1).with_layout(OversetLayout::Type1);
    dcfg.t_final = Some(0.05);
    let a = run_case(&dcfg).unwrap();
    let b = run_case(&dcfg).unwrap();
    assert_eq!(a.l2_density.unwrap().to_bits(), b.l2_density.unwrap().to_bits());

    println!(
        "criterion 8: PASS -- property suite complete in {:.1}s (target 60s)",
        start.elapsed().as_secs_f64()
    );
}
