//! Experiment layer: case configurations, initial and exact solutions, error
//! norms, runners and file output.

pub mod output;
pub mod riemann1d;

use std::path::PathBuf;
use std::time::Instant;

use crate::basis::gauss_rule;
use crate::error::{Error, Result};
use crate::euler::{ConservedState, FluxKind, Vec4, GAMMA};
use crate::limiter::LimiterConfig;
use crate::mesh::{ComponentGrid, OversetAssembly, SideBc};
use crate::solver::{DgSolver, DtLaw, FieldState, RkScratch, TimeIntegrator};

/// Experiment selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    EntropyWave,
    IsentropicVortex,
    Sod,
    Lax,
    /// 2D Riemann problem configuration 10, 12 or 16.
    Riemann2d(u8),
}

impl CaseKind {
    pub fn name(&self) -> String {
        match self {
            CaseKind::EntropyWave => "entropy-wave".into(),
            CaseKind::IsentropicVortex => "isentropic-vortex".into(),
            CaseKind::Sod => "sod".into(),
            CaseKind::Lax => "lax".into(),
            CaseKind::Riemann2d(c) => format!("riemann2d-{c}"),
        }
    }

    /// Domain rectangle (x0, y0, x1, y1).
    pub fn domain(&self) -> [f64; 4] {
        match self {
            CaseKind::EntropyWave => [0.0, 0.0, 2.0, 2.0],
            CaseKind::IsentropicVortex => [0.0, -5.0, 10.0, 5.0],
            _ => [0.0, 0.0, 1.0, 1.0],
        }
    }

    pub fn default_t_final(&self) -> f64 {
        match self {
            CaseKind::EntropyWave => 2.0,
            CaseKind::IsentropicVortex => 10.0,
            CaseKind::Sod => 0.2,
            CaseKind::Lax => 0.1,
            CaseKind::Riemann2d(10) => 0.15,
            CaseKind::Riemann2d(12) => 0.25,
            CaseKind::Riemann2d(16) => 0.2,
            CaseKind::Riemann2d(_) => 0.2,
        }
    }

    /// Physical boundary conditions of the background grid
    /// (left, right, bottom, top).
    pub fn background_bc(&self) -> [SideBc; 4] {
        match self {
            CaseKind::EntropyWave | CaseKind::IsentropicVortex => [SideBc::Periodic; 4],
            CaseKind::Sod | CaseKind::Lax => [
                SideBc::NonReflecting,
                SideBc::NonReflecting,
                SideBc::Periodic,
                SideBc::Periodic,
            ],
            CaseKind::Riemann2d(_) => [SideBc::NonReflecting; 4],
        }
    }

    pub fn has_exact(&self) -> bool {
        !matches!(self, CaseKind::Riemann2d(_))
    }

    /// Shock cases run the plain CFL law; smooth accuracy cases cap the step
    /// so temporal error stays subdominant at every order.
    pub fn dt_law(&self) -> DtLaw {
        match self {
            CaseKind::EntropyWave | CaseKind::IsentropicVortex => DtLaw::AccuracyCapped,
            _ => DtLaw::Cfl,
        }
    }
}

impl std::str::FromStr for CaseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "entropy-wave" => Ok(CaseKind::EntropyWave),
            "isentropic-vortex" => Ok(CaseKind::IsentropicVortex),
            "sod" => Ok(CaseKind::Sod),
            "lax" => Ok(CaseKind::Lax),
            "riemann2d-10" => Ok(CaseKind::Riemann2d(10)),
            "riemann2d-12" => Ok(CaseKind::Riemann2d(12)),
            "riemann2d-16" => Ok(CaseKind::Riemann2d(16)),
            other => Err(Error::Config(format!("unknown case '{other}'"))),
        }
    }
}

/// Overset grid layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OversetLayout {
    None,
    /// Centered square patch of half the domain extent, same cell size.
    Type1,
    /// Type 1 rotated by 45 degrees about the domain centre.
    Type2,
    /// Refined strip x in [x0, x1] spanning the full y extent.
    Patch { x0: f64, x1: f64, h_fine: f64 },
}

impl OversetLayout {
    pub fn name(&self) -> String {
        match self {
            OversetLayout::None => "none".into(),
            OversetLayout::Type1 => "type1".into(),
            OversetLayout::Type2 => "type2".into(),
            OversetLayout::Patch { x0, x1, h_fine } => format!("patch:{x0},{x1},{h_fine}"),
        }
    }
}

impl std::str::FromStr for OversetLayout {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(OversetLayout::None),
            "type1" => Ok(OversetLayout::Type1),
            "type2" => Ok(OversetLayout::Type2),
            other => {
                if let Some(rest) = other.strip_prefix("patch:") {
                    let parts: Vec<&str> = rest.split(',').collect();
                    if parts.len() != 3 {
                        return Err(Error::Config(
                            "patch layout needs patch:<x0>,<x1>,<hfine>".into(),
                        ));
                    }
                    Ok(OversetLayout::Patch {
                        x0: parse_number(parts[0])?,
                        x1: parse_number(parts[1])?,
                        h_fine: parse_number(parts[2])?,
                    })
                } else {
                    Err(Error::Config(format!("unknown overset layout '{other}'")))
                }
            }
        }
    }
}

/// Parse "0.05" or a fraction like "1/20".
pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: f64 =
            a.trim().parse().map_err(|_| Error::Config(format!("bad number '{s}'")))?;
        let den: f64 =
            b.trim().parse().map_err(|_| Error::Config(format!("bad number '{s}'")))?;
        if den == 0.0 {
            return Err(Error::Config(format!("zero denominator in '{s}'")));
        }
        Ok(num / den)
    } else {
        s.parse().map_err(|_| Error::Config(format!("bad number '{s}'")))
    }
}

/// Full experiment description. Deterministic: no seeds anywhere.
#[derive(Debug, Clone)]
pub struct CaseConfig {
    pub kind: CaseKind,
    pub order: usize,
    pub h: f64,
    pub layout: OversetLayout,
    pub t_final: Option<f64>,
    pub cfl: Option<f64>,
    pub flux: FluxKind,
    pub out_dir: Option<PathBuf>,
    pub vtk: bool,
    pub fringe_width: usize,
}

impl CaseConfig {
    pub fn new(kind: CaseKind, order: usize, h: f64) -> Self {
        Self {
            kind,
            order,
            h,
            layout: OversetLayout::None,
            t_final: None,
            cfl: None,
            flux: FluxKind::Llf,
            out_dir: None,
            vtk: false,
            fringe_width: 1,
        }
    }

    pub fn with_layout(mut self, layout: OversetLayout) -> Self {
        self.layout = layout;
        self
    }

    pub fn t_final(&self) -> f64 {
        self.t_final.unwrap_or_else(|| self.kind.default_t_final())
    }

    /// Parse a key-value config file (one `key = value` per line, `#`
    /// comments). Keys mirror the CLI flags: case, order, h, overset,
    /// tfinal, flux, out, cfl, vtk.
    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut map = std::collections::BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("config line {} is not key = value", lineno + 1))
            })?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        let need = |k: &str| -> Result<String> {
            map.get(k).cloned().ok_or_else(|| Error::Config(format!("missing config key '{k}'")))
        };
        let mut cfg = CaseConfig::new(
            need("case")?.parse()?,
            need("order")?
                .parse()
                .map_err(|_| Error::Config("order must be an integer".into()))?,
            parse_number(&need("h")?)?,
        );
        if let Some(v) = map.get("overset") {
            cfg.layout = v.parse()?;
        }
        if let Some(v) = map.get("tfinal") {
            cfg.t_final = Some(parse_number(v)?);
        }
        if let Some(v) = map.get("cfl") {
            cfg.cfl = Some(parse_number(v)?);
        }
        if let Some(v) = map.get("flux") {
            cfg.flux = v.parse()?;
        }
        if let Some(v) = map.get("out") {
            cfg.out_dir = Some(PathBuf::from(v));
        }
        if let Some(v) = map.get("vtk") {
            cfg.vtk = v == "true" || v == "1";
        }
        Ok(cfg)
    }
}

/// Pointwise primitive initial state (rho, u, v, p).
pub fn initial_primitive(kind: CaseKind, x: f64, y: f64) -> (f64, f64, f64, f64) {
    exact_primitive(kind, x, y, 0.0).expect("t = 0 always defined")
}

/// Pointwise primitive exact solution, where one exists. The 2D Riemann
/// configurations return None (reference fields are used instead); the shock
/// tubes are exact for t >= 0 through the 1D Riemann solver.
pub fn exact_primitive(kind: CaseKind, x: f64, y: f64, t: f64) -> Option<(f64, f64, f64, f64)> {
    match kind {
        CaseKind::EntropyWave => {
            let rho = 1.0 + 0.2 * (std::f64::consts::PI * (x + y - t)).sin();
            Some((rho, 0.7, 0.3, 1.0))
        }
        CaseKind::IsentropicVortex => {
            let (x0, y0, beta) = (5.0, 0.0, 5.0);
            // Periodic traversal in x.
            let lx = 10.0;
            let mut dx = x - x0 - t;
            dx -= lx * (dx / lx).round();
            let dy = y - y0;
            let r2 = dx * dx + dy * dy;
            let e1 = (1.0 - r2).exp();
            let rho = (1.0
                - (GAMMA - 1.0) / (16.0 * GAMMA * std::f64::consts::PI.powi(2))
                    * beta
                    * beta
                    * (2.0 * (1.0 - r2)).exp())
            .powf(1.0 / (GAMMA - 1.0));
            let u = 1.0 - beta * e1 * dy / (2.0 * std::f64::consts::PI);
            let v = beta * e1 * dx / (2.0 * std::f64::consts::PI);
            let p = rho.powf(GAMMA);
            Some((rho, u, v, p))
        }
        CaseKind::Sod | CaseKind::Lax => {
            let (l, r) = shock_tube_states(kind);
            if t <= 0.0 {
                let s = if x < 0.5 { l } else { r };
                return Some((s.rho, s.u, 0.0, s.p));
            }
            let star = riemann1d::solve(&l, &r).ok()?;
            let s = riemann1d::sample(&l, &r, &star, (x - 0.5) / t);
            let _ = y;
            Some((s.rho, s.u, 0.0, s.p))
        }
        CaseKind::Riemann2d(c) => {
            if t > 0.0 {
                return None;
            }
            let q = |ne: (f64, f64, f64, f64),
                     nw: (f64, f64, f64, f64),
                     sw: (f64, f64, f64, f64),
                     se: (f64, f64, f64, f64)| {
                if x >= 0.5 {
                    if y >= 0.5 {
                        ne
                    } else {
                        se
                    }
                } else if y >= 0.5 {
                    nw
                } else {
                    sw
                }
            };
            match c {
                10 => Some(q(
                    (1.0, 0.0, 0.4297, 1.0),
                    (0.5, 0.0, 0.6076, 1.0),
                    (0.2281, 0.0, -0.6076, 0.3333),
                    (0.4562, 0.0, -0.4297, 0.3333),
                )),
                12 => Some(q(
                    (0.5313, 0.0, 0.0, 0.4),
                    (1.0, 0.7276, 0.0, 1.0),
                    (0.8, 0.0, 0.0, 1.0),
                    (1.0, 0.0, 0.7276, 1.0),
                )),
                16 => Some(q(
                    (0.5313, 0.1, 0.1, 0.4),
                    (1.0222, -0.6179, 0.1, 1.0),
                    (0.8, 0.1, 0.1, 1.0),
                    (1.0, 0.1, 0.8276, 1.0),
                )),
                _ => None,
            }
        }
    }
}

fn shock_tube_states(kind: CaseKind) -> (riemann1d::Pstate, riemann1d::Pstate) {
    match kind {
        CaseKind::Sod => {
            (riemann1d::Pstate::new(1.0, 0.0, 1.0), riemann1d::Pstate::new(0.125, 0.0, 0.1))
        }
        CaseKind::Lax => {
            (riemann1d::Pstate::new(0.445, 0.698, 3.528), riemann1d::Pstate::new(0.5, 0.0, 0.571))
        }
        _ => unreachable!("not a shock tube"),
    }
}

/// Exact conserved state where defined.
pub fn exact_state(kind: CaseKind, x: f64, y: f64, t: f64) -> Option<ConservedState> {
    exact_primitive(kind, x, y, t).map(|(rho, u, v, p)| ConservedState::from_primitive(rho, u, v, p))
}

fn cell_count(extent: f64, h: f64) -> Result<usize> {
    let n = extent / h;
    let rounded = n.round();
    if (n - rounded).abs() > 1e-9 * n.max(1.0) || rounded < 1.0 {
        return Err(Error::Config(format!(
            "cell size {h} does not tile an extent of {extent}"
        )));
    }
    Ok(rounded as usize)
}

/// Component grids for a configuration (background first).
pub fn build_grids(cfg: &CaseConfig) -> Result<Vec<ComponentGrid>> {
    let [dx0, dy0, dx1, dy1] = cfg.kind.domain();
    let bg_bc = cfg.kind.background_bc();
    let nx = cell_count(dx1 - dx0, cfg.h)?;
    let ny = cell_count(dy1 - dy0, cfg.h)?;
    let bg = ComponentGrid::build(0, [dx0, dy0, dx1, dy1], nx, ny, 0.0)?.with_side_bc(bg_bc);
    let mut grids = vec![bg];
    match cfg.layout {
        OversetLayout::None => {}
        OversetLayout::Type1 | OversetLayout::Type2 => {
            // Centered patch of half the domain extent at the same cell size.
            let (cx, cy) = (0.5 * (dx0 + dx1), 0.5 * (dy0 + dy1));
            let (wx, wy) = (0.25 * (dx1 - dx0), 0.25 * (dy1 - dy0));
            let rect = [cx - wx, cy - wy, cx + wx, cy + wy];
            let pnx = cell_count(2.0 * wx, cfg.h)?;
            let pny = cell_count(2.0 * wy, cfg.h)?;
            let rot = if cfg.layout == OversetLayout::Type2 {
                std::f64::consts::FRAC_PI_4
            } else {
                0.0
            };
            grids.push(ComponentGrid::build(1, rect, pnx, pny, rot)?);
        }
        OversetLayout::Patch { x0, x1, h_fine } => {
            if x0 <= dx0 || x1 >= dx1 || x1 <= x0 {
                return Err(Error::Config(format!(
                    "patch [{x0}, {x1}] must lie strictly inside the domain x-extent"
                )));
            }
            let pnx = cell_count(x1 - x0, h_fine)?;
            let pny = cell_count(dy1 - dy0, h_fine)?;
            // The strip spans the full y extent: its y-sides carry the same
            // physical conditions as the background, x-sides are artificial.
            let bc = [SideBc::Artificial, SideBc::Artificial, bg_bc[2], bg_bc[3]];
            grids.push(ComponentGrid::build(1, [x0, dy0, x1, dy1], pnx, pny, 0.0)?.with_side_bc(bc));
        }
    }
    Ok(grids)
}

/// L2 projection of the analytic initial state onto every element of every
/// grid, with an (N+2)^2 Gauss rule. Discontinuous data is projected per
/// element with no smoothing.
pub fn initialize(assembly: &OversetAssembly, kind: CaseKind) -> Result<FieldState> {
    let mut state = FieldState::new(assembly)?;
    let rule = gauss_rule(assembly.order + 2)?;
    let basis = state.basis.clone();
    let np = basis.np();
    let mut psi = vec![0.0; np];
    for (g, grid) in assembly.grids.iter().enumerate() {
        for e in 0..grid.n_elements() {
            let elem = &grid.elements[e];
            let coeffs = state.fields[g].elem_mut(e);
            for c in coeffs.iter_mut() {
                *c = [0.0; 4];
            }
            for (&r, &wr) in rule.points.iter().zip(&rule.weights) {
                for (&s, &ws) in rule.points.iter().zip(&rule.weights) {
                    let p = elem.map(r, s);
                    let (rho, u, v, pr) = initial_primitive(kind, p[0], p[1]);
                    let q = ConservedState::from_primitive(rho, u, v, pr).as_array();
                    basis.eval_into(r, s, &mut psi);
                    let w = wr * ws;
                    for i in 0..np {
                        let wp = w * psi[i];
                        for k in 0..4 {
                            coeffs[i][k] += wp * q[k];
                        }
                    }
                }
            }
        }
    }
    Ok(state)
}

/// Who owns a physical point: the highest-numbered grid covering it (the
/// patch wins over the background wherever it extends).
pub fn owner_grid(assembly: &OversetAssembly, p: [f64; 2]) -> usize {
    let mut owner = 0;
    for (g, grid) in assembly.grids.iter().enumerate().skip(1) {
        if grid.covers_point(p, 0.0) {
            owner = g;
        }
    }
    owner
}

/// Evaluate the DG solution at a physical point (owner grid's cell).
pub fn eval_solution(assembly: &OversetAssembly, state: &FieldState, p: [f64; 2]) -> Option<Vec4> {
    let g = owner_grid(assembly, p);
    let e = assembly.grids[g].cell_at(p)?;
    let elem = &assembly.grids[g].elements[e];
    let (r, s) = elem.invert_if_inside(p).ok().flatten().unwrap_or_else(|| {
        // Structured fallback for points on cell seams.
        let q = assembly.grids[g].to_unrotated(p);
        let c = assembly.grids[g].to_unrotated(elem.center());
        (
            (2.0 * (q[0] - c[0]) / assembly.grids[g].hx).clamp(-1.0, 1.0),
            (2.0 * (q[1] - c[1]) / assembly.grids[g].hy).clamp(-1.0, 1.0),
        )
    });
    Some(state.fields[g].eval_point(e, r, s, &state.basis))
}

/// Density comparator for the error norm.
pub enum Comparator<'a> {
    Exact(CaseKind, f64),
    Reference(&'a OversetAssembly, &'a FieldState),
}

impl<'a> Comparator<'a> {
    fn density_at(&self, p: [f64; 2]) -> Option<f64> {
        match self {
            Comparator::Exact(kind, t) => exact_state(*kind, p[0], p[1], *t).map(|q| q.rho),
            Comparator::Reference(asm, st) => eval_solution(asm, st, p).map(|q| q[0]),
        }
    }
}

/// Global L2 density error over the union of active cells, each physical
/// point counted once (quadrature points are attributed to their owner
/// grid). (N+2)^2 Gauss points per cell.
pub fn l2_density_error(
    assembly: &OversetAssembly,
    state: &FieldState,
    comparator: &Comparator,
) -> Result<f64> {
    let rule = gauss_rule(assembly.order + 2)?;
    let basis = &state.basis;
    let np = basis.np();
    let mut psi = vec![0.0; np];
    let mut total = 0.0;
    for (g, grid) in assembly.grids.iter().enumerate() {
        let det_j = 0.25 * grid.hx * grid.hy;
        for e in 0..grid.n_elements() {
            if !assembly.is_active(g, e) {
                continue;
            }
            let elem = &grid.elements[e];
            let coeffs = state.fields[g].elem(e);
            for (&r, &wr) in rule.points.iter().zip(&rule.weights) {
                for (&s, &ws) in rule.points.iter().zip(&rule.weights) {
                    let p = elem.map(r, s);
                    if owner_grid(assembly, p) != g {
                        continue;
                    }
                    let reference = comparator
                        .density_at(p)
                        .ok_or_else(|| Error::Config("comparator undefined at point".into()))?;
                    basis.eval_into(r, s, &mut psi);
                    let mut rho = 0.0;
                    for (c, pv) in coeffs.iter().zip(&psi) {
                        rho += c[0] * pv;
                    }
                    total += wr * ws * det_j * (rho - reference) * (rho - reference);
                }
            }
        }
    }
    Ok(total.sqrt())
}

/// Sample the density along a horizontal line at `n` uniform points
/// (midpoint offsets), using the owner grid's polynomial at each point.
pub fn sample_line(
    assembly: &OversetAssembly,
    state: &FieldState,
    y: f64,
    n: usize,
) -> Vec<(f64, f64)> {
    let [dx0, _, dx1, _] = [
        assembly.grids[0].rect[0],
        assembly.grids[0].rect[1],
        assembly.grids[0].rect[2],
        assembly.grids[0].rect[3],
    ];
    let len = dx1 - dx0;
    (0..n)
        .map(|i| {
            let x = dx0 + (i as f64 + 0.5) * len / n as f64;
            let rho = eval_solution(assembly, state, [x, y]).map(|q| q[0]).unwrap_or(f64::NAN);
            (x, rho)
        })
        .collect()
}

/// Everything a finished run hands back.
pub struct RunArtifacts {
    pub config: CaseConfig,
    pub assembly: OversetAssembly,
    pub state: FieldState,
    pub l2_density: Option<f64>,
    pub steps: usize,
    pub wall_seconds: f64,
    pub max_troubled_frac: f64,
    pub line: Vec<(f64, f64)>,
}

/// Assemble, initialize, advance to the final time and post-process.
/// Deterministic for a given configuration.
pub fn run_case(cfg: &CaseConfig) -> Result<RunArtifacts> {
    let start = Instant::now();
    let grids = build_grids(cfg)?;
    let assembly = OversetAssembly::build(grids, cfg.order, cfg.fringe_width)?;
    let mut state = initialize(&assembly, cfg.kind)?;

    let mut solver = DgSolver::new(&assembly, cfg.flux, Some(LimiterConfig::default()))?;
    solver.integrator = TimeIntegrator {
        cfl: cfg.cfl.unwrap_or(0.3),
        dt_law: cfg.kind.dt_law(),
    };

    let t_final = cfg.t_final();
    let mut scratch = RkScratch::new(&assembly)?;
    let mut t = 0.0;
    let mut steps = 0;
    let mut max_troubled_frac: f64 = 0.0;
    let mut log = cfg
        .out_dir
        .as_ref()
        .map(|dir| -> Result<std::io::BufWriter<std::fs::File>> {
            std::fs::create_dir_all(dir)?;
            Ok(std::io::BufWriter::new(std::fs::File::create(dir.join("run.log"))?))
        })
        .transpose()?;

    while t < t_final - 1e-12 {
        let mut dt = solver
            .compute_dt(&state)
            .map_err(|e| Error::Abort { time: t, step: steps, source: Box::new(e) })?;
        if t + dt > t_final {
            dt = t_final - t;
        }
        let stats = solver
            .step_rk4(&mut state, dt, &mut scratch)
            .map_err(|e| Error::Abort { time: t, step: steps, source: Box::new(e) })?;
        t += dt;
        steps += 1;
        max_troubled_frac = max_troubled_frac.max(stats.troubled_frac);
        if let Some(w) = log.as_mut() {
            use std::io::Write;
            writeln!(w, "step {steps} t {t:.9e} dt {dt:.9e} troubled {}", stats.troubled)?;
        }
    }
    // Final refresh so fringe cells reflect the end state for output.
    solver
        .prepare(&mut state)
        .map_err(|e| Error::Abort { time: t, step: steps, source: Box::new(e) })?;

    let l2_density = if cfg.kind.has_exact() {
        Some(l2_density_error(&assembly, &state, &Comparator::Exact(cfg.kind, t))?)
    } else {
        None
    };
    let line = sample_line(&assembly, &state, line_y(cfg.kind), 1000);

    let artifacts = RunArtifacts {
        config: cfg.clone(),
        assembly,
        state,
        l2_density,
        steps,
        wall_seconds: start.elapsed().as_secs_f64(),
        max_troubled_frac,
        line,
    };
    if let Some(dir) = &cfg.out_dir {
        output::write_run_outputs(&artifacts, dir)?;
    }
    Ok(artifacts)
}

/// The extraction line: y = 0.5 for the unit-square cases, the domain
/// mid-height otherwise.
pub fn line_y(kind: CaseKind) -> f64 {
    let [_, y0, _, y1] = kind.domain();
    if (y0, y1) == (0.0, 1.0) {
        0.5
    } else {
        0.5 * (y0 + y1)
    }
}

/// One row of a convergence study.
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub h: f64,
    pub error: f64,
    pub order: Option<f64>,
    pub wall_seconds: f64,
}

/// Run a case at a list of cell sizes and tabulate observed orders
/// log(e_prev/e_cur) / log(h_prev/h_cur).
pub fn convergence(base: &CaseConfig, h_list: &[f64]) -> Result<Vec<ConvergenceRow>> {
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &h in h_list {
        let mut cfg = base.clone();
        cfg.h = h;
        cfg.out_dir = None;
        let art = run_case(&cfg)?;
        let error = art.l2_density.ok_or_else(|| {
            Error::Config(format!("case {} has no exact solution for a convergence study", cfg.kind.name()))
        })?;
        let order = rows.last().map(|prev: &ConvergenceRow| {
            (prev.error / error).ln() / (prev.h / h).ln()
        });
        rows.push(ConvergenceRow { h, error, order, wall_seconds: art.wall_seconds });
    }
    Ok(rows)
}

/// Pointwise |density difference| between two saved line extractions.
/// The x-columns must agree (same domain and sampling).
pub fn diff_lines(a: &[(f64, f64)], b: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    if a.len() != b.len() {
        return Err(Error::Mismatch(format!("line lengths {} vs {}", a.len(), b.len())));
    }
    a.iter()
        .zip(b)
        .map(|(&(xa, ra), &(xb, rb))| {
            if (xa - xb).abs() > 1e-9 {
                return Err(Error::Mismatch(format!("mismatched domains: x {xa} vs {xb}")));
            }
            Ok((xa, (ra - rb).abs()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn entropy_wave_pointwise() {
        // sin(pi/2) = 1 at x + y = 0.5.
        let (rho, u, v, p) = initial_primitive(CaseKind::EntropyWave, 0.2, 0.3);
        assert_abs_diff_eq!(rho, 1.2, epsilon = 1e-14);
        assert_eq!((u, v, p), (0.7, 0.3, 1.0));
        // Period 2 in t: the exact solution at t = 2 equals the initial data.
        for (x, y) in [(0.3, 1.1), (1.7, 0.2)] {
            let a = exact_primitive(CaseKind::EntropyWave, x, y, 0.0).unwrap();
            let b = exact_primitive(CaseKind::EntropyWave, x, y, 2.0).unwrap();
            assert_abs_diff_eq!(a.0, b.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn vortex_far_field_and_period() {
        // Far from the core the state tends to the (1, 1, 0, 1) free stream.
        let (rho, u, v, p) = initial_primitive(CaseKind::IsentropicVortex, 0.01, 4.99);
        assert_abs_diff_eq!(rho, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(u, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-8);
        // One full periodic traversal at t = 10.
        for (x, y) in [(5.0, 0.0), (4.3, 0.7), (6.0, -1.0)] {
            let a = exact_primitive(CaseKind::IsentropicVortex, x, y, 0.0).unwrap();
            let b = exact_primitive(CaseKind::IsentropicVortex, x, y, 10.0).unwrap();
            assert_abs_diff_eq!(a.0, b.0, epsilon = 1e-12);
            assert_abs_diff_eq!(a.1, b.1, epsilon = 1e-12);
        }
    }

    #[test]
    fn riemann_quadrant_values() {
        let (rho, u, v, p) = initial_primitive(CaseKind::Riemann2d(12), 0.7, 0.9);
        assert_eq!((rho, u, v, p), (0.5313, 0.0, 0.0, 0.4));
        // Sod at t = 0 equals its initial data.
        let s = exact_primitive(CaseKind::Sod, 0.3, 0.5, 0.0).unwrap();
        assert_eq!(s, (1.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn projection_error_is_best_approximation_order() {
        // Initializing and measuring immediately gives the projection error,
        // which must shrink at O(h^(N+1)).
        let mut errs = Vec::new();
        for h in [0.1, 0.05] {
            let cfg = CaseConfig::new(CaseKind::EntropyWave, 1, h);
            let grids = build_grids(&cfg).unwrap();
            let assembly = OversetAssembly::build(grids, 1, 1).unwrap();
            let state = initialize(&assembly, CaseKind::EntropyWave).unwrap();
            let err = l2_density_error(
                &assembly,
                &state,
                &Comparator::Exact(CaseKind::EntropyWave, 0.0),
            )
            .unwrap();
            errs.push(err);
        }
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 1.8, "projection order {order}");
    }

    #[test]
    fn zero_field_error_is_zero() {
        let cfg = CaseConfig::new(CaseKind::EntropyWave, 1, 0.1);
        let grids = build_grids(&cfg).unwrap();
        let assembly = OversetAssembly::build(grids, 1, 1).unwrap();
        let state = initialize(&assembly, CaseKind::EntropyWave).unwrap();
        let err =
            l2_density_error(&assembly, &state, &Comparator::Reference(&assembly, &state)).unwrap();
        assert_abs_diff_eq!(err, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn config_file_round_trip() {
        let text = "case = sod\norder = 2\nh = 1/100\noverset = patch:0.59,0.91,1/200\nflux = hllc\ntfinal = 0.2\n# comment\n";
        let cfg = CaseConfig::from_key_values(text).unwrap();
        assert_eq!(cfg.kind, CaseKind::Sod);
        assert_eq!(cfg.order, 2);
        assert_abs_diff_eq!(cfg.h, 0.01, epsilon = 1e-15);
        assert_eq!(cfg.flux, crate::euler::FluxKind::Hllc);
        match cfg.layout {
            OversetLayout::Patch { x0, x1, h_fine } => {
                assert_eq!(x0, 0.59);
                assert_eq!(x1, 0.91);
                assert_abs_diff_eq!(h_fine, 0.005, epsilon = 1e-15);
            }
            other => panic!("unexpected layout {other:?}"),
        }
        assert!(CaseConfig::from_key_values("order = 1").is_err());
    }

    #[test]
    fn diff_lines_examples() {
        let a = vec![(0.1, 1.0), (0.2, 2.0)];
        let d = diff_lines(&a, &a).unwrap();
        assert!(d.iter().all(|&(_, v)| v == 0.0));
        let b = vec![(0.15, 1.0), (0.2, 2.0)];
        assert!(diff_lines(&a, &b).is_err());
    }
}
