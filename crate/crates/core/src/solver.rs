//! Modal DG spatial discretization and explicit time stepping.
//!
//! The weak form per element, with the orthonormal tensor Legendre basis and
//! affine element maps, reduces the mass matrix to detJ times the identity:
//!
//!   dQ_j/dt = ( Int F.grad(psi_j) dV - Int Fhat psi_j dS ) / detJ
//!
//! Volume terms use an (N+1)^2 Gauss rule, faces an (N+1)-point Gauss rule.
//! Fringe cells follow the directional variant of the weak form: x-fluxes
//! (local r-direction) are evaluated from the Q_x reconstruction and
//! y-fluxes from Q_y, while neighbours see the installed averaged
//! representation.
//!
//! A step of the classical RK4 scheme refreshes fringe data and applies the
//! limiter before every stage residual (exchange, then limit, then
//! residual); the accepted end-of-step state is prepared at the start of the
//! following step.

use rayon::prelude::*;

use crate::basis::{gauss_rule, ModalBasis, PSI0};
use crate::error::{Error, Result};
use crate::euler::{numerical_flux, ConservedState, FluxKind, Vec4};
use crate::exchange::{exchange_all, face_point};
use crate::limiter::{apply_limiter, LimiterConfig, LimiterReport};
use crate::mesh::{CellStatus, NeighborRef, OversetAssembly, Side, SIDES};

/// Largest mode count, (4+1)^2.
pub const MAX_NP: usize = 25;

/// Classical RK4 tableau, shared by the field and scalar integrators.
const RK4_STAGE_DT: [f64; 3] = [0.5, 0.5, 1.0];
const RK4_WEIGHTS: [f64; 4] = [1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0];

/// Modal coefficients of the four conserved variables on one grid.
/// Storage is element-major: `coeffs[e*np + mode]` is a 4-vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalField {
    pub order: usize,
    pub np: usize,
    pub n_elements: usize,
    pub coeffs: Vec<Vec4>,
}

impl ModalField {
    pub fn new(order: usize, n_elements: usize) -> Self {
        let np = (order + 1) * (order + 1);
        Self { order, np, n_elements, coeffs: vec![[0.0; 4]; np * n_elements] }
    }

    #[inline]
    pub fn elem(&self, e: usize) -> &[Vec4] {
        &self.coeffs[e * self.np..(e + 1) * self.np]
    }

    #[inline]
    pub fn elem_mut(&mut self, e: usize) -> &mut [Vec4] {
        &mut self.coeffs[e * self.np..(e + 1) * self.np]
    }

    /// Cell mean state (the constant mode scaled by psi_0).
    #[inline]
    pub fn mean(&self, e: usize) -> Vec4 {
        let c = self.coeffs[e * self.np];
        [c[0] * PSI0, c[1] * PSI0, c[2] * PSI0, c[3] * PSI0]
    }

    /// Evaluate the DG polynomial at a local point.
    pub fn eval_point(&self, e: usize, r: f64, s: f64, basis: &ModalBasis) -> Vec4 {
        let mut psi = [0.0; MAX_NP];
        basis.eval_into(r, s, &mut psi[..self.np]);
        let mut q = [0.0; 4];
        for (c, p) in self.elem(e).iter().zip(&psi) {
            for v in 0..4 {
                q[v] += c[v] * p;
            }
        }
        q
    }
}

/// Directional modal sets retained on a fringe cell after an exchange.
#[derive(Debug, Clone, PartialEq)]
pub struct DirPair {
    pub x: [Vec4; MAX_NP],
    pub y: [Vec4; MAX_NP],
}

impl Default for DirPair {
    fn default() -> Self {
        Self { x: [[0.0; 4]; MAX_NP], y: [[0.0; 4]; MAX_NP] }
    }
}

/// Solution state over all grids of an assembly.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub fields: Vec<ModalField>,
    pub fringe_dir: Vec<Vec<DirPair>>,
    pub basis: ModalBasis,
    pub np: usize,
}

impl FieldState {
    pub fn new(assembly: &OversetAssembly) -> Result<Self> {
        let basis = ModalBasis::new(assembly.order)?;
        let np = basis.np();
        let fields = assembly
            .grids
            .iter()
            .map(|g| ModalField::new(assembly.order, g.n_elements()))
            .collect();
        let fringe_dir = assembly
            .fringe
            .iter()
            .map(|f| vec![DirPair::default(); f.len()])
            .collect();
        Ok(Self { fields, fringe_dir, basis, np })
    }

    pub fn assign_from(&mut self, other: &FieldState) {
        for (dst, src) in self.fields.iter_mut().zip(&other.fields) {
            dst.coeffs.copy_from_slice(&src.coeffs);
        }
        for (dst, src) in self.fringe_dir.iter_mut().zip(&other.fringe_dir) {
            dst.clone_from_slice(src);
        }
    }

    /// self = base + a * k.
    pub fn assign_axpy(&mut self, base: &FieldState, a: f64, k: &[Vec<Vec4>]) {
        for g in 0..self.fields.len() {
            let dst = &mut self.fields[g].coeffs;
            let b = &base.fields[g].coeffs;
            let kk = &k[g];
            for i in 0..dst.len() {
                for v in 0..4 {
                    dst[i][v] = b[i][v] + a * kk[i][v];
                }
            }
        }
    }

    /// Total (mean x area) per conserved variable over active cells.
    pub fn conserved_totals(&self, assembly: &OversetAssembly) -> Vec4 {
        let mut tot = [0.0; 4];
        for (g, field) in self.fields.iter().enumerate() {
            let area = assembly.grids[g].hx * assembly.grids[g].hy;
            for e in 0..field.n_elements {
                if !assembly.is_active(g, e) {
                    continue;
                }
                let m = field.mean(e);
                for v in 0..4 {
                    tot[v] += m[v] * area;
                }
            }
        }
        tot
    }
}

/// Precomputed quadrature and basis tables for the residual.
#[derive(Debug, Clone)]
pub struct DgOperators {
    pub order: usize,
    pub np: usize,
    pub vol_pts: Vec<(f64, f64)>,
    pub vol_w: Vec<f64>,
    pub vol_psi: Vec<f64>,    // [pt * np + mode]
    pub vol_dpsi_r: Vec<f64>, // reference-space gradients
    pub vol_dpsi_s: Vec<f64>,
    pub face_t: Vec<f64>,
    pub face_w: Vec<f64>,
    pub face_psi: [Vec<f64>; 4], // [side][pt * np + mode]
    pub basis: ModalBasis,
}

impl DgOperators {
    pub fn new(order: usize) -> Result<Self> {
        let basis = ModalBasis::new(order)?;
        let np = basis.np();
        let q1 = gauss_rule(order + 1)?;

        let mut vol_pts = Vec::new();
        let mut vol_w = Vec::new();
        for (&r, &wr) in q1.points.iter().zip(&q1.weights) {
            for (&s, &ws) in q1.points.iter().zip(&q1.weights) {
                vol_pts.push((r, s));
                vol_w.push(wr * ws);
            }
        }
        let nvol = vol_pts.len();
        let mut vol_psi = vec![0.0; nvol * np];
        let mut vol_dpsi_r = vec![0.0; nvol * np];
        let mut vol_dpsi_s = vec![0.0; nvol * np];
        for (p, &(r, s)) in vol_pts.iter().enumerate() {
            basis.eval_into(r, s, &mut vol_psi[p * np..(p + 1) * np]);
            let (dr, ds) = (&mut vol_dpsi_r[p * np..(p + 1) * np], &mut vol_dpsi_s[p * np..(p + 1) * np]);
            basis.grad_into(r, s, dr, ds);
        }

        let face_psi = [Side::Left, Side::Right, Side::Bottom, Side::Top].map(|side| {
            let mut m = vec![0.0; q1.len() * np];
            for (p, &t) in q1.points.iter().enumerate() {
                let (r, s) = face_point(side, t);
                basis.eval_into(r, s, &mut m[p * np..(p + 1) * np]);
            }
            m
        });

        Ok(Self {
            order,
            np,
            vol_pts,
            vol_w,
            vol_psi,
            vol_dpsi_r,
            vol_dpsi_s,
            face_t: q1.points,
            face_w: q1.weights,
            face_psi,
            basis,
        })
    }
}

/// Per-grid constant geometry factors (uniform affine elements).
struct GridGeom {
    det_j: f64,
    /// |J| J^{-1} rows: metric factors for the contravariant fluxes.
    gr: [f64; 2],
    gs: [f64; 2],
    normal: [[f64; 2]; 4],
    face_len: [f64; 4],
}

impl GridGeom {
    fn new(grid: &crate::mesh::ComponentGrid) -> Self {
        let (ax, ay) = grid.local_axes();
        Self {
            det_j: 0.25 * grid.hx * grid.hy,
            gr: [0.5 * grid.hy * ax[0], 0.5 * grid.hy * ax[1]],
            gs: [0.5 * grid.hx * ay[0], 0.5 * grid.hx * ay[1]],
            normal: [
                grid.side_normal(Side::Left),
                grid.side_normal(Side::Right),
                grid.side_normal(Side::Bottom),
                grid.side_normal(Side::Top),
            ],
            face_len: [grid.hy, grid.hy, grid.hx, grid.hx],
        }
    }
}

/// Evaluate a modal expansion at a tabulated point.
#[inline(always)]
fn eval_coeffs(coeffs: &[Vec4], psi: &[f64]) -> Vec4 {
    let mut q = [0.0f64; 4];
    for (c, &p) in coeffs.iter().zip(psi) {
        for v in 0..4 {
            q[v] += c[v] * p;
        }
    }
    q
}

/// Time-step selection: plain CFL, or CFL capped by the accuracy law
/// dt ~ h^((N+1)/p) that keeps RK4 temporal error subdominant for N+1 > p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtLaw {
    Cfl,
    AccuracyCapped,
}

#[derive(Debug, Clone, Copy)]
pub struct TimeIntegrator {
    pub cfl: f64,
    pub dt_law: DtLaw,
}

impl Default for TimeIntegrator {
    fn default() -> Self {
        Self { cfl: 0.3, dt_law: DtLaw::Cfl }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StepStats {
    pub troubled: usize,
    pub troubled_frac: f64,
}

/// DG solver bound to an assembly.
pub struct DgSolver<'a> {
    pub assembly: &'a OversetAssembly,
    pub ops: DgOperators,
    pub flux: FluxKind,
    pub limiter: Option<LimiterConfig>,
    pub integrator: TimeIntegrator,
}

/// Reusable stage buffers for RK4.
pub struct RkScratch {
    stage: FieldState,
    k: [Vec<Vec<Vec4>>; 4],
}

impl RkScratch {
    pub fn new(assembly: &OversetAssembly) -> Result<Self> {
        let stage = FieldState::new(assembly)?;
        let sizes: Vec<usize> = stage.fields.iter().map(|f| f.coeffs.len()).collect();
        let zero = || sizes.iter().map(|&n| vec![[0.0; 4]; n]).collect::<Vec<_>>();
        Ok(Self { stage, k: [zero(), zero(), zero(), zero()] })
    }
}

impl<'a> DgSolver<'a> {
    pub fn new(assembly: &'a OversetAssembly, flux: FluxKind, limiter: Option<LimiterConfig>) -> Result<Self> {
        Ok(Self {
            assembly,
            ops: DgOperators::new(assembly.order)?,
            flux,
            limiter,
            integrator: TimeIntegrator::default(),
        })
    }

    /// Exchange fringe data (overset assemblies) and limit troubled cells:
    /// the preparation applied to every state a residual is evaluated on.
    pub fn prepare(&self, state: &mut FieldState) -> Result<LimiterReport> {
        if self.assembly.n_grids() > 1 {
            exchange_all(self.assembly, state, &self.ops)?;
        }
        match &self.limiter {
            Some(cfg) => apply_limiter(self.assembly, state, &self.ops, cfg),
            None => Ok(LimiterReport::default()),
        }
    }

    /// CFL time step: dt = cfl * min_e h_e / ((2N+1)(|u|+|v|+c)), with the
    /// accuracy cap h -> min(h, h^((N+1)/4)) when requested.
    pub fn compute_dt(&self, state: &FieldState) -> Result<f64> {
        let n = self.ops.order as f64;
        let factor = 2.0 * n + 1.0;
        let mut dt_min = f64::INFINITY;
        for (g, grid) in self.assembly.grids.iter().enumerate() {
            let h = grid.hx.min(grid.hy);
            let heff = match self.integrator.dt_law {
                DtLaw::Cfl => h,
                DtLaw::AccuracyCapped => h.min(h.powf((n + 1.0) / 4.0)),
            };
            let field = &state.fields[g];
            for e in 0..field.n_elements {
                if !self.assembly.is_active(g, e) {
                    continue;
                }
                let q = ConservedState::from_array(field.mean(e));
                let p = q.pressure()?;
                let (u, v) = q.velocity();
                let c = (crate::euler::GAMMA * p / q.rho).sqrt();
                let speed = u.abs() + v.abs() + c;
                dt_min = dt_min.min(heff / (factor * speed));
            }
        }
        Ok(self.integrator.cfl * dt_min)
    }

    /// Spatial residual dQ/dt for all active elements of all grids.
    pub fn residual(&self, state: &FieldState) -> Result<Vec<Vec<Vec4>>> {
        let mut out = Vec::with_capacity(self.assembly.n_grids());
        for g in 0..self.assembly.n_grids() {
            let field = &state.fields[g];
            let np = self.ops.np;
            let geom = GridGeom::new(&self.assembly.grids[g]);
            let mut res = vec![[0.0f64; 4]; field.coeffs.len()];
            res.par_chunks_mut(np)
                .enumerate()
                .try_for_each(|(e, chunk)| -> Result<()> {
                    if self.assembly.is_active(g, e) {
                        self.element_residual(g, e, state, &geom, chunk)?;
                    }
                    Ok(())
                })?;
            out.push(res);
        }
        Ok(out)
    }

    fn fringe_slot(&self, g: usize, e: usize) -> Option<usize> {
        self.assembly.fringe[g].binary_search(&e).ok()
    }

    fn element_residual(
        &self,
        g: usize,
        e: usize,
        state: &FieldState,
        geom: &GridGeom,
        out: &mut [Vec4],
    ) -> Result<()> {
        let grid = &self.assembly.grids[g];
        let field = &state.fields[g];
        let np = self.ops.np;
        let slot = if self.assembly.status[g][e] == CellStatus::Fringe {
            self.fringe_slot(g, e)
        } else {
            None
        };
        let dir = slot.map(|s| &state.fringe_dir[g][s]);

        let mut acc = [[0.0f64; 4]; MAX_NP];
        let invalid = |reason: &'static str| Error::InvalidStateAt { grid: g, element: e, reason };

        // Volume term: contravariant fluxes against reference gradients.
        let coeffs = field.elem(e);
        for (p, &w) in self.ops.vol_w.iter().enumerate() {
            let psi = &self.ops.vol_psi[p * np..(p + 1) * np];
            let (fx, fy) = match dir {
                None => {
                    let q = eval_coeffs(coeffs, psi);
                    let f = ConservedState::from_array(q)
                        .flux()
                        .map_err(|_| invalid("non-physical state at volume point"))?;
                    (f, f)
                }
                Some(d) => {
                    let fx = ConservedState::from_array(eval_coeffs(&d.x[..np], psi))
                        .flux()
                        .map_err(|_| invalid("non-physical state at volume point"))?;
                    let fy = ConservedState::from_array(eval_coeffs(&d.y[..np], psi))
                        .flux()
                        .map_err(|_| invalid("non-physical state at volume point"))?;
                    (fx, fy)
                }
            };
            let mut flux_r = [0.0f64; 4];
            let mut flux_s = [0.0f64; 4];
            for v in 0..4 {
                flux_r[v] = geom.gr[0] * fx.f[v] + geom.gr[1] * fx.g[v];
                flux_s[v] = geom.gs[0] * fy.f[v] + geom.gs[1] * fy.g[v];
            }
            let dr = &self.ops.vol_dpsi_r[p * np..(p + 1) * np];
            let ds = &self.ops.vol_dpsi_s[p * np..(p + 1) * np];
            for j in 0..np {
                let wr = w * dr[j];
                let ws = w * ds[j];
                for v in 0..4 {
                    acc[j][v] += wr * flux_r[v] + ws * flux_s[v];
                }
            }
        }

        // Surface term.
        for side in SIDES {
            let si = side.index();
            let n = geom.normal[si];
            let half_len = 0.5 * geom.face_len[si];
            let psi_face = &self.ops.face_psi[si];
            // Directional trace source: x-faces use Q_x, y-faces Q_y.
            let trace_coeffs: &[Vec4] = match (dir, side) {
                (Some(d), Side::Left | Side::Right) => &d.x[..np],
                (Some(d), Side::Bottom | Side::Top) => &d.y[..np],
                (None, _) => coeffs,
            };
            // Resolve the neighbour once per face.
            enum Exterior<'x> {
                Neighbor(&'x [Vec4], &'x [f64]),
                Mirror,
                Donors(&'x [crate::mesh::DonorRef]),
            }
            let ext = match grid.neighbor(e, side) {
                NeighborRef::Cell(nb) if self.assembly.status[g][nb].is_active() => {
                    Exterior::Neighbor(
                        state.fields[g].elem(nb),
                        &self.ops.face_psi[side.opposite().index()],
                    )
                }
                NeighborRef::NonReflecting => Exterior::Mirror,
                _ => {
                    let slot = slot.ok_or_else(|| {
                        Error::Assembly(format!(
                            "element {e} of grid {g} touches a hole but is not fringe"
                        ))
                    })?;
                    let plan = &self.assembly.plans.per_grid[g][slot];
                    let donors = plan.face_exterior[si].as_ref().ok_or_else(|| {
                        Error::Assembly(format!("missing face donors on grid {g} element {e}"))
                    })?;
                    Exterior::Donors(donors)
                }
            };

            for (ti, &wt) in self.ops.face_w.iter().enumerate() {
                let psi = &psi_face[ti * np..(ti + 1) * np];
                let q_in = eval_coeffs(trace_coeffs, psi);
                let q_out = match &ext {
                    Exterior::Neighbor(nb_coeffs, psi_opp) => {
                        eval_coeffs(nb_coeffs, &psi_opp[ti * np..(ti + 1) * np])
                    }
                    Exterior::Mirror => q_in,
                    Exterior::Donors(donors) => {
                        let d = &donors[ti];
                        state.fields[d.grid].eval_point(d.element, d.r, d.s, &state.basis)
                    }
                };
                let fl = numerical_flux(
                    self.flux,
                    &ConservedState::from_array(q_in),
                    &ConservedState::from_array(q_out),
                    n[0],
                    n[1],
                )
                .map_err(|_| invalid("non-physical state at face point"))?;
                let scale = half_len * wt;
                for j in 0..np {
                    let f = scale * psi[j];
                    for v in 0..4 {
                        acc[j][v] -= f * fl[v];
                    }
                }
            }
        }

        let inv_det = 1.0 / geom.det_j;
        for j in 0..np {
            for v in 0..4 {
                out[j][v] = acc[j][v] * inv_det;
            }
        }
        Ok(())
    }

    /// One classical RK4 step. Every stage state is prepared
    /// (exchange + limit) before its residual; the returned stats aggregate
    /// the limiter activity over the stages.
    pub fn step_rk4(
        &self,
        state: &mut FieldState,
        dt: f64,
        scratch: &mut RkScratch,
    ) -> Result<StepStats> {
        let mut stats = StepStats::default();
        let track = |rep: LimiterReport, stats: &mut StepStats| {
            stats.troubled = stats.troubled.max(rep.flagged);
            if rep.active > 0 {
                stats.troubled_frac =
                    stats.troubled_frac.max(rep.flagged as f64 / rep.active as f64);
            }
        };

        track(self.prepare(state)?, &mut stats);
        let k1 = self.residual(state)?;
        scratch.k[0] = k1;

        for stage in 0..3 {
            scratch.stage.assign_from(state);
            let a = RK4_STAGE_DT[stage] * dt;
            let kref = &scratch.k[stage];
            for g in 0..scratch.stage.fields.len() {
                let dst = &mut scratch.stage.fields[g].coeffs;
                let kk = &kref[g];
                for i in 0..dst.len() {
                    for v in 0..4 {
                        dst[i][v] += a * kk[i][v];
                    }
                }
            }
            track(self.prepare(&mut scratch.stage)?, &mut stats);
            scratch.k[stage + 1] = self.residual(&scratch.stage)?;
        }

        for g in 0..state.fields.len() {
            let dst = &mut state.fields[g].coeffs;
            for i in 0..dst.len() {
                for v in 0..4 {
                    let incr = RK4_WEIGHTS[0] * scratch.k[0][g][i][v]
                        + RK4_WEIGHTS[1] * scratch.k[1][g][i][v]
                        + RK4_WEIGHTS[2] * scratch.k[2][g][i][v]
                        + RK4_WEIGHTS[3] * scratch.k[3][g][i][v];
                    dst[i][v] += dt * incr;
                }
            }
        }
        Ok(stats)
    }
}

/// Classical RK4 on a scalar ODE y' = f(t, y); same tableau as the field
/// integrator.
pub fn rk4_scalar(f: impl Fn(f64, f64) -> f64, y0: f64, t0: f64, dt: f64) -> f64 {
    let k1 = f(t0, y0);
    let k2 = f(t0 + RK4_STAGE_DT[0] * dt, y0 + RK4_STAGE_DT[0] * dt * k1);
    let k3 = f(t0 + RK4_STAGE_DT[1] * dt, y0 + RK4_STAGE_DT[1] * dt * k2);
    let k4 = f(t0 + RK4_STAGE_DT[2] * dt, y0 + RK4_STAGE_DT[2] * dt * k3);
    y0 + dt
        * (RK4_WEIGHTS[0] * k1 + RK4_WEIGHTS[1] * k2 + RK4_WEIGHTS[2] * k3 + RK4_WEIGHTS[3] * k4)
}
