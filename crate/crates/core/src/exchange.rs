//! Inter-grid data communication for overset assemblies.
//!
//! Each fringe cell keeps its cell average and has every higher modal degree
//! of freedom rebuilt per stage: point values on transverse quadrature lines
//! are reconstructed by 1D WENO in each grid direction from neighbour data
//! (real neighbours evaluated through their own DG polynomial, ghost
//! neighbours through stored donor-cell references into the other grid), then
//! projected back to modal coefficients. The two directional reconstructions
//! Q_x and Q_y are retained for the directional residual and their average is
//! installed as the cell's working representation.
//!
//! Evaluation point sets per order: 2-point Gauss lines for P1 (WENO3 on the
//! immediate neighbours), 4-point Gauss-Lobatto for P2 and 4-point Gauss for
//! P3 (WENO5 on neighbours halved into subcells; the Lobatto rule avoids the
//! centre point where the five-cell linear weights are unusable), 6-point
//! Gauss for P4.
//!
//! All gathering reads the pre-exchange state: updates are computed for every
//! fringe cell of all grids first and installed afterwards, so the result is
//! independent of traversal order.

use rayon::prelude::*;

use crate::basis::{gauss_lobatto_rule, gauss_rule, ModalBasis, QuadratureRule};
use crate::error::{Error, Result};
use crate::euler::{CharDecomp, ConservedState, Vec4};
use crate::mesh::{side_offset, CellStatus, DonorRef, Element, NeighborRef, OversetAssembly, Side};
use crate::solver::{FieldState, MAX_NP};
use crate::weno::{ReconstructionTableau, WenoOrder};

/// Largest per-direction evaluation point count (P4 uses 6-point Gauss).
pub const MAX_PTS: usize = 6;

/// Evaluation/projection rule and WENO flavour for a given solver order.
pub fn exchange_rule(order: usize) -> Result<(QuadratureRule, WenoOrder)> {
    match order {
        1 => Ok((gauss_rule(2)?, WenoOrder::Three)),
        2 => Ok((gauss_lobatto_rule(4)?, WenoOrder::Five)),
        3 => Ok((gauss_rule(4)?, WenoOrder::Five)),
        4 => Ok((gauss_rule(6)?, WenoOrder::Five)),
        n => Err(Error::UnsupportedOrder(n)),
    }
}

/// A point at which a stencil value is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum PointRef {
    /// Evaluate this grid's own field in element `elem` at local (r,s).
    Same { elem: usize, r: f64, s: f64 },
    /// Evaluate the donor grid's field at a stored donor location.
    Donor(DonorRef),
}

/// Source of one stencil slot value.
#[derive(Debug, Clone, PartialEq)]
pub enum SlotSource {
    /// Single point evaluation (WENO3 neighbours).
    Point(PointRef),
    /// Weighted combination of point evaluations (half-cell line averages
    /// for the subcell-halved WENO5 neighbours).
    Average(Vec<(PointRef, f64)>),
    /// Physical-boundary fallback: use the fringe cell's own mean
    /// (zero-gradient extension).
    OwnMean,
}

/// Reconstruction stencil sources along one transverse line (the centre slot
/// is always the fringe cell's own mean and is not stored).
#[derive(Debug, Clone, PartialEq)]
pub struct LinePlan {
    pub entries: Vec<SlotSource>,
}

/// Everything needed to rebuild one fringe cell.
#[derive(Debug, Clone)]
pub struct FringePlan {
    pub elem: usize,
    /// One plan per transverse line; x_lines[j] is the line s = points[j].
    pub x_lines: Vec<LinePlan>,
    /// y_lines[j] is the line r = points[j].
    pub y_lines: Vec<LinePlan>,
    /// Donor references at the face quadrature points of artificial faces,
    /// used as the exterior trace in the numerical flux.
    pub face_exterior: [Option<Vec<DonorRef>>; 4],
}

/// Registered donor point (for the debug dump and reciprocity checks).
#[derive(Debug, Clone)]
pub struct RegisteredDonorPoint {
    pub receptor_grid: usize,
    pub receptor_elem: usize,
    pub x: [f64; 2],
    pub donor: DonorRef,
}

/// All fringe plans of an assembly, plus the shared reconstruction tables.
#[derive(Debug, Clone, Default)]
pub struct ExchangePlans {
    pub per_grid: Vec<Vec<FringePlan>>,
    pub registry: Vec<RegisteredDonorPoint>,
    pub order: usize,
    pub eval_points: Vec<f64>,
    pub eval_weights: Vec<f64>,
    pub weno: WenoOrder,
    pub tableau: Option<ReconstructionTableau>,
}

impl ExchangePlans {
    pub fn build(assembly: &OversetAssembly, order: usize) -> Result<Self> {
        let (rule, weno) = exchange_rule(order)?;
        let tableau = ReconstructionTableau::build(weno, &rule.points)?;
        let face_rule = gauss_rule(order + 1)?;
        let mut registry = Vec::new();
        let mut per_grid = Vec::with_capacity(assembly.n_grids());
        for g in 0..assembly.n_grids() {
            let mut plans = Vec::with_capacity(assembly.fringe[g].len());
            for &e in &assembly.fringe[g] {
                plans.push(build_fringe_plan(
                    assembly,
                    g,
                    e,
                    &rule,
                    weno,
                    order,
                    &face_rule,
                    &mut registry,
                )?);
            }
            per_grid.push(plans);
        }
        Ok(Self {
            per_grid,
            registry,
            order,
            eval_points: rule.points,
            eval_weights: rule.weights,
            weno,
            tableau: Some(tableau),
        })
    }

    pub fn n_fringe(&self) -> usize {
        self.per_grid.iter().map(|p| p.len()).sum()
    }
}

/// What stands in for a neighbour role.
enum RoleResolution {
    Cell(usize),
    Ghost(Element),
    BoundaryMean,
}

fn resolve_role(assembly: &OversetAssembly, g: usize, e: usize, side: Side) -> RoleResolution {
    let grid = &assembly.grids[g];
    match grid.neighbor(e, side) {
        NeighborRef::Cell(n) => {
            if assembly.status[g][n] == CellStatus::Inactive {
                // Hole cell: geometrically present but not solved; treat as a
                // ghost fed by the other grid.
                RoleResolution::Ghost(grid.elements[n])
            } else {
                RoleResolution::Cell(n)
            }
        }
        NeighborRef::OutOfGrid => {
            let (ix, iy) = grid.elem_coords(e);
            let (di, dj) = side_offset(side);
            RoleResolution::Ghost(grid.element_geometry(ix as isize + di, iy as isize + dj))
        }
        NeighborRef::NonReflecting => RoleResolution::BoundaryMean,
    }
}

#[allow(clippy::too_many_arguments)]
fn make_point_ref(
    assembly: &OversetAssembly,
    g: usize,
    e: usize,
    reso: &RoleResolution,
    r: f64,
    s: f64,
    registry: &mut Vec<RegisteredDonorPoint>,
) -> Result<Option<PointRef>> {
    match reso {
        RoleResolution::Cell(n) => Ok(Some(PointRef::Same { elem: *n, r, s })),
        RoleResolution::Ghost(elem) => {
            let x = elem.map(r, s);
            let donor = assembly.find_donor(g, x)?;
            registry.push(RegisteredDonorPoint { receptor_grid: g, receptor_elem: e, x, donor });
            Ok(Some(PointRef::Donor(donor)))
        }
        RoleResolution::BoundaryMean => Ok(None),
    }
}

/// Build the slot sources contributed by the neighbour at `side` for the
/// transverse line at `line_coord`, in stencil order (outermost first for the
/// low side, innermost first for the high side).
#[allow(clippy::too_many_arguments)]
fn neighbor_slots(
    assembly: &OversetAssembly,
    g: usize,
    e: usize,
    side: Side,
    line_coord: f64,
    weno: WenoOrder,
    order: usize,
    registry: &mut Vec<RegisteredDonorPoint>,
) -> Result<Vec<SlotSource>> {
    let reso = resolve_role(assembly, g, e, side);
    let along_x = matches!(side, Side::Left | Side::Right);
    // Neighbour-local coordinates of a point on the line at position `t`
    // along the reconstruction direction.
    let local = |t: f64| -> (f64, f64) {
        if along_x {
            (t, line_coord)
        } else {
            (line_coord, t)
        }
    };
    match weno {
        WenoOrder::Three => {
            // Point value at the neighbour's mid-coordinate on this line.
            let (r, s) = local(0.0);
            Ok(vec![match make_point_ref(assembly, g, e, &reso, r, s, registry)? {
                Some(p) => SlotSource::Point(p),
                None => SlotSource::OwnMean,
            }])
        }
        WenoOrder::Five => {
            // Two half-cell line averages; Gauss rule exact for degree N.
            let n_half = order / 2 + 1;
            let hr = gauss_rule(n_half)?;
            let mut halves = Vec::with_capacity(2);
            for (lo, hi) in [(-1.0, 0.0), (0.0, 1.0)] {
                let mid = 0.5 * (lo + hi);
                let hw = 0.5 * (hi - lo);
                let mut pts = Vec::with_capacity(n_half);
                for (&t, &w) in hr.points.iter().zip(&hr.weights) {
                    let (r, s) = local(mid + hw * t);
                    match make_point_ref(assembly, g, e, &reso, r, s, registry)? {
                        Some(p) => pts.push((p, 0.5 * w)),
                        None => {
                            pts.clear();
                            break;
                        }
                    }
                }
                halves.push(if pts.is_empty() {
                    SlotSource::OwnMean
                } else {
                    SlotSource::Average(pts)
                });
            }
            // halves = [lower-coordinate half, upper-coordinate half], which
            // is already stencil order for both the low and the high side.
            Ok(halves)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn build_fringe_plan(
    assembly: &OversetAssembly,
    g: usize,
    e: usize,
    rule: &QuadratureRule,
    weno: WenoOrder,
    order: usize,
    face_rule: &QuadratureRule,
    registry: &mut Vec<RegisteredDonorPoint>,
) -> Result<FringePlan> {
    let mut x_lines = Vec::with_capacity(rule.len());
    let mut y_lines = Vec::with_capacity(rule.len());
    for &line in &rule.points {
        let mut entries = Vec::new();
        entries.extend(neighbor_slots(assembly, g, e, Side::Left, line, weno, order, registry)?);
        entries.extend(neighbor_slots(assembly, g, e, Side::Right, line, weno, order, registry)?);
        x_lines.push(LinePlan { entries });

        let mut entries = Vec::new();
        entries.extend(neighbor_slots(assembly, g, e, Side::Bottom, line, weno, order, registry)?);
        entries.extend(neighbor_slots(assembly, g, e, Side::Top, line, weno, order, registry)?);
        y_lines.push(LinePlan { entries });
    }

    // Donor-fed exterior traces at the face quadrature points of artificial
    // faces (out-of-grid or hole neighbours).
    let mut face_exterior: [Option<Vec<DonorRef>>; 4] = [None, None, None, None];
    let own = &assembly.grids[g].elements[e];
    for side in crate::mesh::SIDES {
        let is_artificial = matches!(
            resolve_role(assembly, g, e, side),
            RoleResolution::Ghost(_)
        );
        if !is_artificial {
            continue;
        }
        let mut donors = Vec::with_capacity(face_rule.len());
        for &t in &face_rule.points {
            let (r, s) = face_point(side, t);
            let x = own.map(r, s);
            let donor = assembly.find_donor(g, x)?;
            registry.push(RegisteredDonorPoint { receptor_grid: g, receptor_elem: e, x, donor });
            donors.push(donor);
        }
        face_exterior[side.index()] = Some(donors);
    }

    Ok(FringePlan { elem: e, x_lines, y_lines, face_exterior })
}

/// Local coordinates of a point on `side` at face parameter `t` in [-1,1].
pub fn face_point(side: Side, t: f64) -> (f64, f64) {
    match side {
        Side::Left => (-1.0, t),
        Side::Right => (1.0, t),
        Side::Bottom => (t, -1.0),
        Side::Top => (t, 1.0),
    }
}

/// Computed replacement for one fringe cell.
#[derive(Debug, Clone)]
pub struct FringeUpdate {
    pub elem: usize,
    pub combined: [Vec4; MAX_NP],
    pub qx: [Vec4; MAX_NP],
    pub qy: [Vec4; MAX_NP],
}

/// Refresh every fringe cell of every grid from the pre-exchange fields.
/// Double-buffered: all reads complete before any install, so the result is
/// deterministic regardless of traversal order and donors never observe a
/// partially updated state.
///
/// Smooth fringe cells receive the full high-order reconstruction; cells
/// flagged by the KXRCF indicator (a discontinuity is crossing the
/// artificial boundary) use the nonlinear WENO weights, which is where the
/// scheme acts as a limiter.
pub fn exchange_all(
    assembly: &OversetAssembly,
    state: &mut FieldState,
    ops: &crate::solver::DgOperators,
) -> Result<()> {
    let updates = compute_updates(assembly, state, ops)?;
    install_updates(assembly, state, updates);
    Ok(())
}

pub(crate) fn compute_updates(
    assembly: &OversetAssembly,
    state: &FieldState,
    ops: &crate::solver::DgOperators,
) -> Result<Vec<Vec<FringeUpdate>>> {
    let plans = &assembly.plans;
    let mut all = Vec::with_capacity(assembly.n_grids());
    for g in 0..assembly.n_grids() {
        let updates: Result<Vec<FringeUpdate>> = plans.per_grid[g]
            .par_iter()
            .map(|plan| {
                let troubled = crate::limiter::kxrcf_indicator(
                    assembly, g, plan.elem, state, ops, Some(plan),
                )? > 1.0;
                reconstruct_fringe_dofs(assembly, g, plan, state, troubled)
            })
            .collect();
        all.push(updates?);
    }
    Ok(all)
}

pub(crate) fn install_updates(
    assembly: &OversetAssembly,
    state: &mut FieldState,
    updates: Vec<Vec<FringeUpdate>>,
) {
    let np = state.np;
    for (g, ups) in updates.into_iter().enumerate() {
        for (slot, up) in ups.into_iter().enumerate() {
            debug_assert_eq!(assembly.fringe[g][slot], up.elem);
            let base = up.elem * np;
            // The cell average (mode 0) is never touched.
            for k in 1..np {
                state.fields[g].coeffs[base + k] = up.combined[k];
            }
            state.fringe_dir[g][slot].x[..np].copy_from_slice(&up.qx[..np]);
            state.fringe_dir[g][slot].y[..np].copy_from_slice(&up.qy[..np]);
        }
    }
}

/// Gather one stencil slot value (a conserved-variable 4-vector).
fn slot_value(source: &SlotSource, g: usize, state: &FieldState, mean: Vec4) -> Vec4 {
    match source {
        SlotSource::Point(p) => point_value(p, g, state),
        SlotSource::Average(pts) => {
            let mut acc = [0.0; 4];
            for (p, w) in pts {
                let v = point_value(p, g, state);
                for k in 0..4 {
                    acc[k] += w * v[k];
                }
            }
            acc
        }
        SlotSource::OwnMean => mean,
    }
}

#[inline]
fn point_value(p: &PointRef, g: usize, state: &FieldState) -> Vec4 {
    match p {
        PointRef::Same { elem, r, s } => state.fields[g].eval_point(*elem, *r, *s, &state.basis),
        PointRef::Donor(d) => state.fields[d.grid].eval_point(d.element, d.r, d.s, &state.basis),
    }
}

/// Rebuild the directional modal sets of one fringe cell from its plan.
fn reconstruct_fringe_dofs(
    assembly: &OversetAssembly,
    g: usize,
    plan: &FringePlan,
    state: &FieldState,
    nonlinear: bool,
) -> Result<FringeUpdate> {
    let mean = state.fields[g].mean(plan.elem);
    rebuild_directional(assembly, g, plan.elem, state, nonlinear, |dir, j, k| {
        let lines = if dir == 0 { &plan.x_lines } else { &plan.y_lines };
        slot_value(&lines[j].entries[k], g, state, mean)
    })
}

/// Core of the communication scheme, shared with the interior limiter:
/// characteristic WENO along each grid direction line by line, inverse
/// transform, tensor projection back to modal coefficients.
///
/// The centre entry of each line stencil is the cell's own average along
/// that transverse line (mean plus the current transverse modes), which
/// keeps the 1D data consistent: without the transverse offset the smooth
/// reconstruction error stalls at first order. Consequently each sweep
/// copies the pure transverse modes through unchanged and only the modes
/// varying in its own direction are genuinely reconstructed, so the install
/// takes pure x-modes from Q_x, pure y-modes from Q_y, and the average of
/// the two sweeps for the mixed modes. The cell mean is never touched.
///
/// `gather(dir, line, k)` supplies the k-th off-centre stencil entry on
/// transverse line `line` in direction `dir` (0 = x, 1 = y).
pub(crate) fn rebuild_directional(
    assembly: &OversetAssembly,
    g: usize,
    e: usize,
    state: &FieldState,
    nonlinear: bool,
    gather: impl Fn(usize, usize, usize) -> Vec4,
) -> Result<FringeUpdate> {
    let plans = &assembly.plans;
    let tableau = plans.tableau.as_ref().expect("plans built");
    let basis = &state.basis;
    let np = basis.np();
    let k1 = basis.order() + 1;
    let npts = plans.eval_points.len();
    let field = &state.fields[g];
    let coeffs = field.elem(e);
    let mean = field.mean(e);
    let mean_state = ConservedState::from_array(mean);
    let (ax, ay) = assembly.grids[g].local_axes();

    let stencil_len = plans.weno.stencil_len();
    let center = stencil_len / 2;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;

    // vals[dir][ir * npts + is] = reconstructed state at (r_ir, s_is).
    let mut vals = [[[0.0f64; 4]; MAX_PTS * MAX_PTS]; 2];
    for (dir, axis) in [ax, ay].into_iter().enumerate() {
        let dec = CharDecomp::new(&mean_state, axis[0], axis[1]).map_err(|_| {
            Error::InvalidStateAt { grid: g, element: e, reason: "invalid fringe mean state" }
        })?;
        for j in 0..npts {
            // Own average along this line: (1/2) Int Q(., t_line) over the
            // sweep direction = sum of transverse modes / sqrt(2).
            let t_line = plans.eval_points[j];
            let mut line_avg = [0.0f64; 4];
            for n in 0..k1 {
                let mode = if dir == 0 { basis.mode(0, n) } else { basis.mode(n, 0) };
                let w = inv_sqrt2 * crate::basis::phi(n, t_line);
                for v in 0..4 {
                    line_avg[v] += w * coeffs[mode][v];
                }
            }

            let mut st = [[0.0f64; 4]; 5];
            for k in 0..stencil_len - 1 {
                let slot = if k < center { k } else { k + 1 };
                st[slot] = dec.to_char(gather(dir, j, k));
            }
            st[center] = dec.to_char(line_avg);

            for i in 0..npts {
                let mut wrec = [0.0f64; 4];
                for comp in 0..4 {
                    let mut comp_st = [0.0f64; 5];
                    for (c, s) in comp_st.iter_mut().zip(&st) {
                        *c = s[comp];
                    }
                    wrec[comp] = if nonlinear {
                        tableau.reconstruct(i, &comp_st[..stencil_len])
                    } else {
                        tableau.reconstruct_linear(i, &comp_st[..stencil_len])
                    };
                }
                let q = dec.from_char(wrec);
                ConservedState::from_array(q).pressure().map_err(|_| Error::InvalidStateAt {
                    grid: g,
                    element: e,
                    reason: "invalid state after inverse characteristic transform",
                })?;
                let idx = if dir == 0 { i * npts + j } else { j * npts + i };
                vals[dir][idx] = q;
            }
        }
    }

    let qx = project_tensor(&vals[0], plans, basis, field, e);
    let qy = project_tensor(&vals[1], plans, basis, field, e);
    let mut combined = [[0.0f64; 4]; MAX_NP];
    combined[0] = field.coeffs[e * np];
    for m in 0..k1 {
        for n in 0..k1 {
            let k = basis.mode(m, n);
            if k == 0 {
                continue;
            }
            let pick = |v: usize| -> f64 {
                if n == 0 {
                    qx[k][v]
                } else if m == 0 {
                    qy[k][v]
                } else {
                    0.5 * (qx[k][v] + qy[k][v])
                }
            };
            for v in 0..4 {
                combined[k][v] = pick(v);
            }
        }
    }
    Ok(FringeUpdate { elem: e, combined, qx, qy })
}

/// Tensor projection of point values at the evaluation grid onto the modal
/// basis. Mode 0 is copied from the existing coefficients (the mean is kept).
fn project_tensor(
    vals: &[[f64; 4]; MAX_PTS * MAX_PTS],
    plans: &ExchangePlans,
    basis: &ModalBasis,
    field: &crate::solver::ModalField,
    e: usize,
) -> [Vec4; MAX_NP] {
    let npts = plans.eval_points.len();
    let k1 = basis.order() + 1;
    let mut phi_tab = [[0.0f64; MAX_PTS]; 5];
    for m in 0..k1 {
        for (i, &x) in plans.eval_points.iter().enumerate() {
            phi_tab[m][i] = crate::basis::phi(m, x);
        }
    }
    let mut out = [[0.0f64; 4]; MAX_NP];
    for m in 0..k1 {
        for n in 0..k1 {
            let mut acc = [0.0f64; 4];
            for ir in 0..npts {
                let wr = plans.eval_weights[ir] * phi_tab[m][ir];
                for is in 0..npts {
                    let w = wr * plans.eval_weights[is] * phi_tab[n][is];
                    let v = &vals[ir * npts + is];
                    for c in 0..4 {
                        acc[c] += w * v[c];
                    }
                }
            }
            out[basis.mode(m, n)] = acc;
        }
    }
    out[0] = field.coeffs[e * basis.np()];
    out
}

/// Diagnostic dump: per fringe cell, pre/post coefficients and the
/// directional WENO data (smoothness indicators and nonlinear weights for
/// the density characteristic component), 12 significant digits.
pub fn write_exchange_diagnostics(
    assembly: &OversetAssembly,
    state: &FieldState,
    ops: &crate::solver::DgOperators,
    mut w: impl std::io::Write,
) -> Result<()> {
    let plans = &assembly.plans;
    let tableau = match &plans.tableau {
        Some(t) => t,
        None => return Ok(()),
    };
    let np = state.np;
    let updates = compute_updates(assembly, state, ops)?;
    for g in 0..assembly.n_grids() {
        for (slot, plan) in plans.per_grid[g].iter().enumerate() {
            let e = plan.elem;
            writeln!(w, "# grid {g} fringe element {e}")?;
            for v in 0..4 {
                let pre: Vec<String> = (0..np)
                    .map(|k| format!("{:.12e}", state.fields[g].coeffs[e * np + k][v]))
                    .collect();
                let post: Vec<String> = (0..np)
                    .map(|k| format!("{:.12e}", updates[g][slot].combined[k][v]))
                    .collect();
                writeln!(w, "pre  var{v} {}", pre.join(" "))?;
                writeln!(w, "post var{v} {}", post.join(" "))?;
            }
            let mean = state.fields[g].mean(e);
            let mean_state = ConservedState::from_array(mean);
            let (ax, ay) = assembly.grids[g].local_axes();
            for (dir_name, lines, axis) in
                [("x", &plan.x_lines, ax), ("y", &plan.y_lines, ay)]
            {
                let dec = match CharDecomp::new(&mean_state, axis[0], axis[1]) {
                    Ok(d) => d,
                    Err(_) => continue,
                };
                let stencil_len = plans.weno.stencil_len();
                let center = stencil_len / 2;
                for (j, line) in lines.iter().enumerate() {
                    let mut st = [0.0f64; 5];
                    let mut k = 0;
                    for entry in &line.entries {
                        let slotk = if k < center { k } else { k + 1 };
                        st[slotk] = dec.to_char(slot_value(entry, g, state, mean))[0];
                        k += 1;
                    }
                    st[center] = dec.to_char(mean)[0];
                    let betas = tableau.smoothness(&st[..stencil_len]);
                    let bstr: Vec<String> = betas.iter().map(|b| format!("{b:.12e}")).collect();
                    writeln!(w, "{dir_name}-line {j} beta {}", bstr.join(" "))?;
                    for pt in 0..tableau.n_points() {
                        let gammas = tableau.linear_weights(pt);
                        let mut om: Vec<f64> = gammas
                            .iter()
                            .zip(&betas)
                            .map(|(&gm, &b)| {
                                let d = crate::weno::WENO_EPSILON + b;
                                gm / (d * d)
                            })
                            .collect();
                        let sum: f64 = om.iter().sum();
                        for o in &mut om {
                            *o /= sum;
                        }
                        let ostr: Vec<String> = om.iter().map(|o| format!("{o:.12e}")).collect();
                        writeln!(w, "{dir_name}-line {j} pt {pt} omega {}", ostr.join(" "))?;
                    }
                }
            }
        }
    }
    Ok(())
}
