//! KXRCF troubled-cell detection and subcell-WENO limiting.
//!
//! The indicator integrates the solution jump over the inflow part of each
//! interior element's boundary and scales it by h^((N+1)/2), the inflow
//! perimeter and the cell's max norm; an element is troubled when the scaled
//! jump exceeds 1 on density or energy. Faces with no outward mean flow
//! (velocity.n <= 0) count as inflow, which covers stagnant initial data.
//!
//! Troubled interior cells are rebuilt exactly like fringe cells: keep the
//! mean, reconstruct the higher modes by directional characteristic WENO
//! over the immediate neighbours (halved into subcells for N >= 2), and
//! install the directional average. Fringe cells are skipped; the exchange
//! already rebuilds them each stage.

use rayon::prelude::*;

use crate::basis::gauss_rule;
use crate::error::{Error, Result};
use crate::euler::{ConservedState, Vec4};
use crate::exchange::{rebuild_directional, FringePlan, FringeUpdate};
use crate::mesh::{CellStatus, NeighborRef, OversetAssembly, Side, SIDES};
use crate::solver::{DgOperators, FieldState};

#[derive(Debug, Clone, Copy)]
pub struct LimiterConfig {
    /// Troubled threshold on the scaled jump indicator.
    pub threshold: f64,
}

impl Default for LimiterConfig {
    fn default() -> Self {
        Self { threshold: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LimiterReport {
    pub flagged: usize,
    /// Number of interior cells the indicator ran on.
    pub active: usize,
}

/// KXRCF indicator value for one element (max over density and energy).
/// Fringe cells pass their exchange plan so artificial faces can resolve
/// donor-fed exterior traces.
pub fn kxrcf_indicator(
    assembly: &OversetAssembly,
    g: usize,
    e: usize,
    state: &FieldState,
    ops: &DgOperators,
    plan: Option<&FringePlan>,
) -> Result<f64> {
    let grid = &assembly.grids[g];
    let field = &state.fields[g];
    let np = ops.np;
    let mean = ConservedState::from_array(field.mean(e));
    let (u, v) = mean.velocity();

    // Max norms of density and energy over the volume quadrature points.
    let mut norm = [0.0f64; 2];
    for p in 0..ops.vol_w.len() {
        let psi = &ops.vol_psi[p * np..(p + 1) * np];
        let mut rho = 0.0;
        let mut en = 0.0;
        for (c, pv) in field.elem(e).iter().zip(psi) {
            rho += c[0] * pv;
            en += c[3] * pv;
        }
        norm[0] = norm[0].max(rho.abs());
        norm[1] = norm[1].max(en.abs());
    }

    let h = grid.hx.max(grid.hy);
    let mut jump = [0.0f64; 2];
    let mut inflow_len = 0.0f64;
    for side in SIDES {
        let n = grid.side_normal(side);
        if u * n[0] + v * n[1] > 0.0 {
            continue; // outflow face
        }
        let half_len = 0.5 * grid.face_length(side);
        inflow_len += grid.face_length(side);
        let psi_face = &ops.face_psi[side.index()];
        let psi_opp = &ops.face_psi[side.opposite().index()];
        for (ti, &wt) in ops.face_w.iter().enumerate() {
            let psi = &psi_face[ti * np..(ti + 1) * np];
            let mut q_in = [0.0f64; 2];
            for (c, pv) in field.elem(e).iter().zip(psi) {
                q_in[0] += c[0] * pv;
                q_in[1] += c[3] * pv;
            }
            let q_out = match grid.neighbor(e, side) {
                NeighborRef::Cell(nb) if assembly.status[g][nb].is_active() => {
                    let pso = &psi_opp[ti * np..(ti + 1) * np];
                    let mut q = [0.0f64; 2];
                    for (c, pv) in field.elem(nb).iter().zip(pso) {
                        q[0] += c[0] * pv;
                        q[1] += c[3] * pv;
                    }
                    q
                }
                NeighborRef::NonReflecting => q_in,
                _ => {
                    // Artificial face: donor-fed exterior trace.
                    let donors = plan
                        .and_then(|p| p.face_exterior[side.index()].as_ref())
                        .ok_or_else(|| {
                            Error::Assembly(format!(
                                "indicator on grid {g} element {e}: unexpected hole neighbour"
                            ))
                        })?;
                    let d = &donors[ti];
                    let q = state.fields[d.grid].eval_point(d.element, d.r, d.s, &state.basis);
                    [q[0], q[3]]
                }
            };
            jump[0] += wt * half_len * (q_in[0] - q_out[0]);
            jump[1] += wt * half_len * (q_in[1] - q_out[1]);
        }
    }
    if inflow_len == 0.0 {
        return Ok(0.0);
    }
    let scale = h.powf((ops.order as f64 + 1.0) / 2.0) * inflow_len;
    let ind_rho = if norm[0] > 0.0 { jump[0].abs() / (scale * norm[0]) } else { 0.0 };
    let ind_e = if norm[1] > 0.0 { jump[1].abs() / (scale * norm[1]) } else { 0.0 };
    Ok(ind_rho.max(ind_e))
}

/// Replacement coefficients for one troubled interior cell: mean kept,
/// higher modes from the directional WENO over real neighbours
/// (zero-gradient means across non-reflecting physical boundaries).
pub fn limit_cell(
    assembly: &OversetAssembly,
    g: usize,
    e: usize,
    state: &FieldState,
) -> Result<FringeUpdate> {
    let order = assembly.order;
    let plans = &assembly.plans;
    let grid = &assembly.grids[g];
    let field = &state.fields[g];
    let mean = field.mean(e);
    let n_half = order / 2 + 1;
    let half_rule = gauss_rule(n_half)?;
    let weno5 = order >= 2;

    // Value of the stencil entry `k` (entries skip the centre slot) on the
    // transverse line `j` in direction `dir` (0 = x, 1 = y).
    let gather = |dirn: usize, j: usize, k: usize| -> Vec4 {
        let line = plans.eval_points[j];
        let (side, half) = if weno5 {
            let side = match (dirn, k / 2) {
                (0, 0) => Side::Left,
                (0, _) => Side::Right,
                (1, 0) => Side::Bottom,
                _ => Side::Top,
            };
            (side, Some(k % 2))
        } else {
            let side = match (dirn, k) {
                (0, 0) => Side::Left,
                (0, _) => Side::Right,
                (1, 0) => Side::Bottom,
                _ => Side::Top,
            };
            (side, None)
        };
        let nb = match grid.neighbor(e, side) {
            NeighborRef::Cell(n) => n,
            // Physical boundary: zero-gradient extension by the cell mean.
            _ => return mean,
        };
        let along_x = dirn == 0;
        let local = |t: f64| if along_x { (t, line) } else { (line, t) };
        match half {
            None => {
                let (r, s) = local(0.0);
                field.eval_point(nb, r, s, &state.basis)
            }
            Some(hk) => {
                // hk = 0: lower-coordinate half, 1: upper half.
                let (lo, hi) = if hk == 0 { (-1.0, 0.0) } else { (0.0, 1.0) };
                let mid = 0.5 * (lo + hi);
                let hw = 0.5 * (hi - lo);
                let mut acc = [0.0f64; 4];
                for (&t, &w) in half_rule.points.iter().zip(&half_rule.weights) {
                    let (r, s) = local(mid + hw * t);
                    let q = field.eval_point(nb, r, s, &state.basis);
                    for c in 0..4 {
                        acc[c] += 0.5 * w * q[c];
                    }
                }
                acc
            }
        }
    };
    rebuild_directional(assembly, g, e, state, true, gather)
}

/// Flag troubled interior cells and replace their higher modes. All flags are
/// computed against the pre-limit state, then installs happen at once.
pub fn apply_limiter(
    assembly: &OversetAssembly,
    state: &mut FieldState,
    ops: &DgOperators,
    cfg: &LimiterConfig,
) -> Result<LimiterReport> {
    let mut report = LimiterReport::default();
    let mut updates: Vec<(usize, FringeUpdate)> = Vec::new();
    for g in 0..assembly.n_grids() {
        let n_elem = assembly.grids[g].n_elements();
        let flags: Result<Vec<bool>> = (0..n_elem)
            .into_par_iter()
            .map(|e| -> Result<bool> {
                if assembly.status[g][e] != CellStatus::Interior {
                    return Ok(false);
                }
                Ok(kxrcf_indicator(assembly, g, e, state, ops, None)? > cfg.threshold)
            })
            .collect();
        let flags = flags?;
        report.active += (0..n_elem)
            .filter(|&e| assembly.status[g][e] == CellStatus::Interior)
            .count();
        let flagged: Vec<usize> =
            (0..n_elem).filter(|&e| flags[e]).collect();
        report.flagged += flagged.len();
        let grid_updates: Result<Vec<(usize, FringeUpdate)>> = flagged
            .par_iter()
            .map(|&e| Ok((g, limit_cell(assembly, g, e, state)?)))
            .collect();
        updates.extend(grid_updates?);
    }
    let np = state.np;
    for (g, up) in updates {
        let base = up.elem * np;
        for k in 1..np {
            state.fields[g].coeffs[base + k] = up.combined[k];
        }
    }
    Ok(report)
}
