//! Structured quadrilateral component grids and overset assembly: overlap
//! classification (hole cutting), ghost-cell synthesis at artificial
//! boundaries, k-d tree donor search and Newton inversion of element maps.
//!
//! An assembly holds one grid (plain single-grid run) or two: grid 0 is the
//! background grid carrying the physical boundary conditions, grid 1 an
//! overset patch. The patch cuts a hole in the background where the patch's
//! active core covers it; the surviving background layer next to the hole and
//! the patch's outermost layers form the fringe, whose degrees of freedom are
//! rebuilt from the other grid each stage.

use crate::error::{Error, Result};
use crate::exchange::ExchangePlans;

/// Containment tolerance for local coordinates: accepts edge and corner
/// points; the donor-search tie-break handles the resulting duplicates.
pub const CONTAINMENT_TOL: f64 = 1e-10;

/// Newton-iteration convergence tolerance on the physical residual.
pub const NEWTON_TOL: f64 = 1e-10;

/// Iteration cap after which a point is declared outside the element.
pub const NEWTON_MAX_ITER: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left = 0,
    Right = 1,
    Bottom = 2,
    Top = 3,
}

pub const SIDES: [Side; 4] = [Side::Left, Side::Right, Side::Bottom, Side::Top];

impl Side {
    /// Outward normal in the grid's local (unrotated) frame.
    pub fn local_normal(self) -> [f64; 2] {
        match self {
            Side::Left => [-1.0, 0.0],
            Side::Right => [1.0, 0.0],
            Side::Bottom => [0.0, -1.0],
            Side::Top => [0.0, 1.0],
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::Bottom => Side::Top,
            Side::Top => Side::Bottom,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Boundary treatment of one side of a component grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideBc {
    Periodic,
    NonReflecting,
    /// Interior to the other grid; coupling data is imposed here.
    Artificial,
}

/// What lies across a face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeighborRef {
    /// In-grid neighbour (possibly a periodic wrap).
    Cell(usize),
    /// Physical non-reflecting boundary.
    NonReflecting,
    /// Beyond an artificial boundary: no cell of this grid.
    OutOfGrid,
}

/// Bilinearly mapped quadrilateral. Vertices are ordered counter-clockwise
/// starting at local (-1,-1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub verts: [[f64; 2]; 4],
    // x(r,s) = a + b r + c s + d r s
    a: [f64; 2],
    b: [f64; 2],
    c: [f64; 2],
    d: [f64; 2],
}

/// Result of a Newton inversion attempt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NewtonOutcome {
    Converged { r: f64, s: f64, iterations: usize },
    NotConverged,
}

impl Element {
    pub fn new(verts: [[f64; 2]; 4]) -> Self {
        let comb = |f: fn([f64; 4]) -> f64| -> [f64; 2] {
            [
                f([verts[0][0], verts[1][0], verts[2][0], verts[3][0]]),
                f([verts[0][1], verts[1][1], verts[2][1], verts[3][1]]),
            ]
        };
        Self {
            verts,
            a: comb(|v| 0.25 * (v[0] + v[1] + v[2] + v[3])),
            b: comb(|v| 0.25 * (-v[0] + v[1] + v[2] - v[3])),
            c: comb(|v| 0.25 * (-v[0] - v[1] + v[2] + v[3])),
            d: comb(|v| 0.25 * (v[0] - v[1] + v[2] - v[3])),
        }
    }

    /// Forward bilinear map from local (r,s) to physical coordinates.
    pub fn map(&self, r: f64, s: f64) -> [f64; 2] {
        [
            self.a[0] + self.b[0] * r + self.c[0] * s + self.d[0] * r * s,
            self.a[1] + self.b[1] * r + self.c[1] * s + self.d[1] * r * s,
        ]
    }

    pub fn center(&self) -> [f64; 2] {
        self.a
    }

    /// Jacobian d(x,y)/d(r,s) at a local point.
    pub fn jacobian(&self, r: f64, s: f64) -> [[f64; 2]; 2] {
        [
            [self.b[0] + self.d[0] * s, self.c[0] + self.d[0] * r],
            [self.b[1] + self.d[1] * s, self.c[1] + self.d[1] * r],
        ]
    }

    pub fn det_jacobian(&self, r: f64, s: f64) -> f64 {
        let j = self.jacobian(r, s);
        j[0][0] * j[1][1] - j[0][1] * j[1][0]
    }

    /// Quadrilateral area (exact for the bilinear map: 4 * detJ at centre).
    pub fn area(&self) -> f64 {
        4.0 * self.det_jacobian(0.0, 0.0)
    }

    /// Radius of the smallest circle about the centre containing all vertices.
    pub fn circumradius(&self) -> f64 {
        let c = self.center();
        self.verts
            .iter()
            .map(|v| ((v[0] - c[0]).powi(2) + (v[1] - c[1]).powi(2)).sqrt())
            .fold(0.0, f64::max)
    }

    /// Newton iteration for the local coordinates of a physical point,
    /// starting from (0,0). Converges when the physical residual drops below
    /// [`NEWTON_TOL`]; gives up (NotConverged) after [`NEWTON_MAX_ITER`]
    /// iterations. A singular map Jacobian is a geometry error.
    pub fn newton_invert(&self, x: [f64; 2]) -> Result<NewtonOutcome> {
        let (mut r, mut s) = (0.0, 0.0);
        let scale = self.b[0].abs() + self.b[1].abs() + self.c[0].abs() + self.c[1].abs();
        for it in 0..NEWTON_MAX_ITER {
            let p = self.map(r, s);
            let fx = p[0] - x[0];
            let fy = p[1] - x[1];
            if (fx * fx + fy * fy).sqrt() < NEWTON_TOL {
                return Ok(NewtonOutcome::Converged { r, s, iterations: it });
            }
            let j = self.jacobian(r, s);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det.abs() <= 1e-14 * scale * scale {
                return Err(Error::GeometricDegeneracy(format!(
                    "singular map Jacobian (det={det:.3e}) at local ({r:.3}, {s:.3})"
                )));
            }
            r -= (j[1][1] * fx - j[0][1] * fy) / det;
            s -= (-j[1][0] * fx + j[0][0] * fy) / det;
        }
        // Final residual check after the last update.
        let p = self.map(r, s);
        if ((p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2)).sqrt() < NEWTON_TOL {
            return Ok(NewtonOutcome::Converged { r, s, iterations: NEWTON_MAX_ITER });
        }
        Ok(NewtonOutcome::NotConverged)
    }

    /// Newton inversion combined with the containment test
    /// |r|,|s| <= 1 + tolerance. Returns None for outside points.
    pub fn invert_if_inside(&self, x: [f64; 2]) -> Result<Option<(f64, f64)>> {
        match self.newton_invert(x)? {
            NewtonOutcome::Converged { r, s, .. }
                if r.abs() <= 1.0 + CONTAINMENT_TOL && s.abs() <= 1.0 + CONTAINMENT_TOL =>
            {
                Ok(Some((r, s)))
            }
            _ => Ok(None),
        }
    }
}

/// Uniform structured quadrilateral grid over a rectangle, optionally rotated
/// about the rectangle centre. Elements are stored row-major: e = ix + iy*nx.
#[derive(Debug, Clone)]
pub struct ComponentGrid {
    pub id: usize,
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub rotation: f64,
    /// Unrotated extents (x0, y0, x1, y1).
    pub rect: [f64; 4],
    pub side_bc: [SideBc; 4],
    pub elements: Vec<Element>,
    pivot: [f64; 2],
    cos_r: f64,
    sin_r: f64,
}

impl ComponentGrid {
    /// Build an nx-by-ny grid over `rect = (x0, y0, x1, y1)`, rotated by
    /// `rotation` radians about the rectangle centre. All sides start as
    /// [`SideBc::Artificial`]; callers tag physical sides afterwards.
    pub fn build(id: usize, rect: [f64; 4], nx: usize, ny: usize, rotation: f64) -> Result<Self> {
        let [x0, y0, x1, y1] = rect;
        if !(x1 > x0) || !(y1 > y0) {
            return Err(Error::DegenerateRectangle(format!("({x0},{y0})-({x1},{y1})")));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::DegenerateRectangle(format!("{nx}x{ny} elements")));
        }
        let mut grid = Self {
            id,
            nx,
            ny,
            hx: (x1 - x0) / nx as f64,
            hy: (y1 - y0) / ny as f64,
            rotation,
            rect,
            side_bc: [SideBc::Artificial; 4],
            elements: Vec::with_capacity(nx * ny),
            pivot: [0.5 * (x0 + x1), 0.5 * (y0 + y1)],
            cos_r: rotation.cos(),
            sin_r: rotation.sin(),
        };
        for iy in 0..ny {
            for ix in 0..nx {
                grid.elements.push(grid.element_geometry(ix as isize, iy as isize));
            }
        }
        Ok(grid)
    }

    pub fn with_side_bc(mut self, bc: [SideBc; 4]) -> Self {
        self.side_bc = bc;
        self
    }

    pub fn n_elements(&self) -> usize {
        self.nx * self.ny
    }

    pub fn rotate_about_pivot(&self, p: [f64; 2]) -> [f64; 2] {
        let dx = p[0] - self.pivot[0];
        let dy = p[1] - self.pivot[1];
        [
            self.pivot[0] + self.cos_r * dx - self.sin_r * dy,
            self.pivot[1] + self.sin_r * dx + self.cos_r * dy,
        ]
    }

    /// Map a physical point back to the unrotated frame.
    pub fn to_unrotated(&self, p: [f64; 2]) -> [f64; 2] {
        let dx = p[0] - self.pivot[0];
        let dy = p[1] - self.pivot[1];
        [
            self.pivot[0] + self.cos_r * dx + self.sin_r * dy,
            self.pivot[1] - self.sin_r * dx + self.cos_r * dy,
        ]
    }

    /// Geometry of the (possibly out-of-range) structured cell (ix, iy); the
    /// mesh lines extend beyond the boundary, which is how ghost cells are
    /// constructed.
    pub fn element_geometry(&self, ix: isize, iy: isize) -> Element {
        let [x0, y0, ..] = self.rect;
        let xa = x0 + ix as f64 * self.hx;
        let xb = xa + self.hx;
        let ya = y0 + iy as f64 * self.hy;
        let yb = ya + self.hy;
        Element::new([
            self.rotate_about_pivot([xa, ya]),
            self.rotate_about_pivot([xb, ya]),
            self.rotate_about_pivot([xb, yb]),
            self.rotate_about_pivot([xa, yb]),
        ])
    }

    pub fn elem_index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn elem_coords(&self, e: usize) -> (usize, usize) {
        (e % self.nx, e / self.nx)
    }

    /// Local axis unit vectors in physical space.
    pub fn local_axes(&self) -> ([f64; 2], [f64; 2]) {
        ([self.cos_r, self.sin_r], [-self.sin_r, self.cos_r])
    }

    /// What lies across `side` of element `e`.
    pub fn neighbor(&self, e: usize, side: Side) -> NeighborRef {
        let (ix, iy) = self.elem_coords(e);
        let (di, dj) = side_offset(side);
        let ni = ix as isize + di;
        let nj = iy as isize + dj;
        let in_x = ni >= 0 && ni < self.nx as isize;
        let in_y = nj >= 0 && nj < self.ny as isize;
        if in_x && in_y {
            return NeighborRef::Cell(self.elem_index(ni as usize, nj as usize));
        }
        match self.side_bc[side.index()] {
            SideBc::Periodic => {
                let wi = ni.rem_euclid(self.nx as isize) as usize;
                let wj = nj.rem_euclid(self.ny as isize) as usize;
                NeighborRef::Cell(self.elem_index(wi, wj))
            }
            SideBc::NonReflecting => NeighborRef::NonReflecting,
            SideBc::Artificial => NeighborRef::OutOfGrid,
        }
    }

    /// Whether a physical point lies within the grid's rectangle. `tol_cells`
    /// (in units of the cell size) expands (positive) or shrinks (negative)
    /// the rectangle.
    pub fn covers_point(&self, p: [f64; 2], tol_cells: f64) -> bool {
        let q = self.to_unrotated(p);
        let [x0, y0, x1, y1] = self.rect;
        q[0] >= x0 - tol_cells * self.hx
            && q[0] <= x1 + tol_cells * self.hx
            && q[1] >= y0 - tol_cells * self.hy
            && q[1] <= y1 + tol_cells * self.hy
    }

    /// Structured lookup of the cell containing a physical point.
    pub fn cell_at(&self, p: [f64; 2]) -> Option<usize> {
        let q = self.to_unrotated(p);
        let [x0, y0, x1, y1] = self.rect;
        if q[0] < x0 - 1e-12 || q[0] > x1 + 1e-12 || q[1] < y0 - 1e-12 || q[1] > y1 + 1e-12 {
            return None;
        }
        let ix = (((q[0] - x0) / self.hx).floor() as isize).clamp(0, self.nx as isize - 1) as usize;
        let iy = (((q[1] - y0) / self.hy).floor() as isize).clamp(0, self.ny as isize - 1) as usize;
        Some(self.elem_index(ix, iy))
    }

    /// Physical outward normal of `side` (same for every element).
    pub fn side_normal(&self, side: Side) -> [f64; 2] {
        let n = side.local_normal();
        [
            self.cos_r * n[0] - self.sin_r * n[1],
            self.sin_r * n[0] + self.cos_r * n[1],
        ]
    }

    pub fn face_length(&self, side: Side) -> f64 {
        match side {
            Side::Left | Side::Right => self.hy,
            Side::Bottom | Side::Top => self.hx,
        }
    }
}

pub fn side_offset(side: Side) -> (isize, isize) {
    match side {
        Side::Left => (-1, 0),
        Side::Right => (1, 0),
        Side::Bottom => (0, -1),
        Side::Top => (0, 1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Interior,
    Fringe,
    Inactive,
}

impl CellStatus {
    pub fn is_active(self) -> bool {
        !matches!(self, CellStatus::Inactive)
    }
}

/// Ghost cell attached to an artificial face of a fringe element.
#[derive(Debug, Clone)]
pub struct GhostCell {
    pub grid: usize,
    pub fringe_elem: usize,
    pub side: Side,
    pub element: Element,
}

/// 2D k-d tree over a fixed point set; radius queries return exactly the
/// points within the radius, in ascending index order.
#[derive(Debug, Clone)]
pub struct KdTree2 {
    // Entries arranged recursively; each subtree's median splits on
    // axis = depth % 2.
    entries: Vec<(f64, f64, usize)>,
}

impl KdTree2 {
    pub fn build(points: &[[f64; 2]]) -> Self {
        let mut entries: Vec<(f64, f64, usize)> =
            points.iter().enumerate().map(|(i, p)| (p[0], p[1], i)).collect();
        fn split(e: &mut [(f64, f64, usize)], axis: usize) {
            if e.len() <= 1 {
                return;
            }
            let mid = e.len() / 2;
            e.select_nth_unstable_by(mid, |a, b| {
                let (ka, kb) = if axis == 0 { (a.0, b.0) } else { (a.1, b.1) };
                ka.total_cmp(&kb).then(a.2.cmp(&b.2))
            });
            let (lo, rest) = e.split_at_mut(mid);
            split(lo, 1 - axis);
            split(&mut rest[1..], 1 - axis);
        }
        split(&mut entries, 0);
        Self { entries }
    }

    /// Indices of points within `radius` of `center`, in ascending order.
    pub fn within_radius(&self, center: [f64; 2], radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        let r2 = radius * radius;
        fn walk(
            e: &[(f64, f64, usize)],
            axis: usize,
            center: [f64; 2],
            radius: f64,
            r2: f64,
            out: &mut Vec<usize>,
        ) {
            if e.is_empty() {
                return;
            }
            let mid = e.len() / 2;
            let (px, py, id) = e[mid];
            let dx = px - center[0];
            let dy = py - center[1];
            if dx * dx + dy * dy <= r2 {
                out.push(id);
            }
            let delta = if axis == 0 { dx } else { dy };
            if delta >= -radius {
                walk(&e[..mid], 1 - axis, center, radius, r2, out);
            }
            if delta <= radius {
                walk(&e[mid + 1..], 1 - axis, center, radius, r2, out);
            }
        }
        walk(&self.entries, 0, center, radius, r2, &mut out);
        out.sort_unstable();
        out
    }
}

/// Donor reference: which cell of which grid supplies a receptor point, and
/// where in that cell's local coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DonorRef {
    pub grid: usize,
    pub element: usize,
    pub r: f64,
    pub s: f64,
}

/// Assembled overset configuration: grids, per-element status, fringe lists,
/// ghost cells and the (order-specific) exchange plans with their donor map.
#[derive(Debug, Clone)]
pub struct OversetAssembly {
    pub grids: Vec<ComponentGrid>,
    pub status: Vec<Vec<CellStatus>>,
    pub fringe: Vec<Vec<usize>>,
    pub ghosts: Vec<GhostCell>,
    pub order: usize,
    pub fringe_width: usize,
    pub plans: ExchangePlans,
    kd: Vec<KdTree2>,
    search_radius: Vec<f64>,
}

impl OversetAssembly {
    /// Assemble one or two grids for a solver of the given order. For two
    /// grids, grid 0 is the background and grid 1 the overset patch.
    pub fn build(grids: Vec<ComponentGrid>, order: usize, fringe_width: usize) -> Result<Self> {
        if grids.is_empty() || grids.len() > 2 {
            return Err(Error::Assembly(format!(
                "expected 1 or 2 component grids, got {}",
                grids.len()
            )));
        }
        if fringe_width == 0 {
            return Err(Error::Assembly("fringe width must be at least 1".into()));
        }
        for g in &grids {
            if grids.len() > 1 && (g.nx < 4 || g.ny < 4) {
                return Err(Error::Assembly(format!(
                    "grid {} is {}x{}; overset grids need at least 4 cells per direction",
                    g.id, g.nx, g.ny
                )));
            }
        }

        let status = classify_overlap(&grids, fringe_width)?;
        let fringe: Vec<Vec<usize>> = status
            .iter()
            .map(|st| {
                st.iter()
                    .enumerate()
                    .filter_map(|(e, &s)| (s == CellStatus::Fringe).then_some(e))
                    .collect()
            })
            .collect();
        let ghosts = synthesize_ghosts(&grids, &status)?;

        let kd: Vec<KdTree2> = grids
            .iter()
            .map(|g| KdTree2::build(&g.elements.iter().map(|e| e.center()).collect::<Vec<_>>()))
            .collect();
        let search_radius = grids
            .iter()
            .map(|g| g.elements.iter().map(|e| e.circumradius()).fold(0.0, f64::max))
            .collect();

        let mut assembly = Self {
            grids,
            status,
            fringe,
            ghosts,
            order,
            fringe_width,
            plans: ExchangePlans::default(),
            kd,
            search_radius,
        };
        assembly.plans = ExchangePlans::build(&assembly, order)?;

        // Donor reciprocity: every stored donor entry must reproduce its
        // receptor point through the donor's forward map.
        for reg in &assembly.plans.registry {
            let donor = &assembly.grids[reg.donor.grid].elements[reg.donor.element];
            let p = donor.map(reg.donor.r, reg.donor.s);
            let d = ((p[0] - reg.x[0]).powi(2) + (p[1] - reg.x[1]).powi(2)).sqrt();
            if d > NEWTON_TOL {
                return Err(Error::Assembly(format!(
                    "donor reciprocity violated at ({:.6}, {:.6}): {d:.3e}",
                    reg.x[0], reg.x[1]
                )));
            }
        }
        Ok(assembly)
    }

    pub fn n_grids(&self) -> usize {
        self.grids.len()
    }

    pub fn is_active(&self, grid: usize, elem: usize) -> bool {
        self.status[grid][elem].is_active()
    }

    /// Donor search for a receptor point: k-d tree candidates (exhaustive
    /// fallback when the candidate set is empty), Newton inversion per
    /// candidate in ascending element id; the first containing active cell
    /// wins, so ties on shared edges resolve to the lowest id.
    pub fn find_donor(&self, excluded_grid: usize, x: [f64; 2]) -> Result<DonorRef> {
        for (g, grid) in self.grids.iter().enumerate() {
            if g == excluded_grid {
                continue;
            }
            let radius = self.search_radius[g] * (1.0 + 1e-9) + NEWTON_TOL;
            let mut candidates = self.kd[g].within_radius(x, radius);
            if candidates.is_empty() {
                candidates = (0..grid.n_elements()).collect();
            }
            for e in candidates {
                if !self.status[g][e].is_active() {
                    continue;
                }
                if let Some((r, s)) = grid.elements[e].invert_if_inside(x)? {
                    return Ok(DonorRef { grid: g, element: e, r, s });
                }
            }
        }
        Err(Error::OrphanPoint { receptor_grid: excluded_grid, x: x[0], y: x[1] })
    }

    /// Delimited-text dump of per-element status and the registered donor
    /// map (12 significant digits), one grid section per component grid.
    pub fn write_debug_dump(&self, mut w: impl std::io::Write) -> Result<()> {
        for (g, st) in self.status.iter().enumerate() {
            writeln!(w, "# grid {g} elements: id status")?;
            for (e, s) in st.iter().enumerate() {
                let tag = match s {
                    CellStatus::Interior => "interior",
                    CellStatus::Fringe => "fringe",
                    CellStatus::Inactive => "inactive",
                };
                writeln!(w, "{e} {tag}")?;
            }
        }
        writeln!(w, "# donor map: receptor_grid receptor_elem donor_grid donor_elem r s")?;
        for reg in &self.plans.registry {
            writeln!(
                w,
                "{} {} {} {} {:.12e} {:.12e}",
                reg.receptor_grid,
                reg.receptor_elem,
                reg.donor.grid,
                reg.donor.element,
                reg.donor.r,
                reg.donor.s
            )?;
        }
        Ok(())
    }
}

/// Hole cutting and fringe marking.
///
/// Single grid: everything is interior. Two grids: the patch (grid 1) marks
/// its outermost `fringe_width` layers along artificial sides as fringe;
/// background cells whose centroid falls strictly inside the patch's active
/// core become inactive, and surviving cells edge-adjacent to an inactive
/// cell become fringe.
pub fn classify_overlap(
    grids: &[ComponentGrid],
    fringe_width: usize,
) -> Result<Vec<Vec<CellStatus>>> {
    if grids.len() == 1 {
        return Ok(vec![vec![CellStatus::Interior; grids[0].n_elements()]]);
    }
    let bg = &grids[0];
    let patch = &grids[1];
    let w = fringe_width;

    // The patch must genuinely overlap the background.
    let corners = {
        let [x0, y0, x1, y1] = patch.rect;
        [[x0, y0], [x1, y0], [x1, y1], [x0, y1]].map(|p| patch.rotate_about_pivot(p))
    };
    if !corners.iter().any(|&p| bg.covers_point(p, 0.0)) {
        return Err(Error::Assembly("component grids do not overlap".into()));
    }
    // Every artificial side of the patch must sit strictly inside the
    // background so ghosts extended past it find donors there. Coincident
    // grids fail this check.
    for side in SIDES {
        if patch.side_bc[side.index()] != SideBc::Artificial {
            continue;
        }
        let n = side.local_normal();
        let [x0, y0, x1, y1] = patch.rect;
        // Probe corners pulled a quarter-cell inward tangentially (a strip
        // patch may be flush with the background in the tangential
        // direction) and pushed one ghost-cell depth outward normally.
        let (tx, ty) = (0.25 * patch.hx, 0.25 * patch.hy);
        let probe_corners: [[f64; 2]; 2] = match side {
            Side::Left => [[x0, y0 + ty], [x0, y1 - ty]],
            Side::Right => [[x1, y0 + ty], [x1, y1 - ty]],
            Side::Bottom => [[x0 + tx, y0], [x1 - tx, y0]],
            Side::Top => [[x0 + tx, y1], [x1 - tx, y1]],
        };
        for c in probe_corners {
            let p = patch.rotate_about_pivot([c[0] + n[0] * patch.hx, c[1] + n[1] * patch.hy]);
            if !bg.covers_point(p, 0.0) {
                return Err(Error::Assembly(format!(
                    "insufficient distinct overlap: patch side {side:?} (plus ghost margin) \
                     is not interior to the background grid"
                )));
            }
        }
    }

    // Patch: fringe along artificial sides.
    let mut patch_status = vec![CellStatus::Interior; patch.n_elements()];
    let art = |side: Side| patch.side_bc[side.index()] == SideBc::Artificial;
    if ((art(Side::Left) || art(Side::Right)) && patch.nx < 2 * w + 1)
        || ((art(Side::Bottom) || art(Side::Top)) && patch.ny < 2 * w + 1)
    {
        return Err(Error::Assembly("patch too small to host the fringe band".into()));
    }
    for e in 0..patch.n_elements() {
        let (ix, iy) = patch.elem_coords(e);
        let near = (art(Side::Left) && ix < w)
            || (art(Side::Right) && ix >= patch.nx - w)
            || (art(Side::Bottom) && iy < w)
            || (art(Side::Top) && iy >= patch.ny - w);
        if near {
            patch_status[e] = CellStatus::Fringe;
        }
    }

    // Background: inactive where the centroid is strictly inside the patch
    // core (the patch rectangle shrunk by w fine-grid layers on artificial
    // sides).
    let [px0, py0, px1, py1] = patch.rect;
    let core = [
        if art(Side::Left) { px0 + w as f64 * patch.hx } else { px0 },
        if art(Side::Bottom) { py0 + w as f64 * patch.hy } else { py0 },
        if art(Side::Right) { px1 - w as f64 * patch.hx } else { px1 },
        if art(Side::Top) { py1 - w as f64 * patch.hy } else { py1 },
    ];
    let mut bg_status = vec![CellStatus::Interior; bg.n_elements()];
    let eps = 1e-12 * (patch.hx + patch.hy);
    for e in 0..bg.n_elements() {
        let c = patch.to_unrotated(bg.elements[e].center());
        if c[0] > core[0] + eps
            && c[0] < core[2] - eps
            && c[1] > core[1] + eps
            && c[1] < core[3] - eps
        {
            bg_status[e] = CellStatus::Inactive;
        }
    }
    for e in 0..bg.n_elements() {
        if bg_status[e] != CellStatus::Interior {
            continue;
        }
        let touches_hole = SIDES.iter().any(|&side| match bg.neighbor(e, side) {
            NeighborRef::Cell(n) => bg_status[n] == CellStatus::Inactive,
            _ => false,
        });
        if touches_hole {
            bg_status[e] = CellStatus::Fringe;
        }
    }

    Ok(vec![bg_status, patch_status])
}

/// One ghost cell per artificial face of each fringe element, congruent to
/// the extension of the grid's mesh lines past the boundary. A fringe face
/// whose neighbour is an inactive (hole) cell reuses that cell's geometry.
pub fn synthesize_ghosts(
    grids: &[ComponentGrid],
    status: &[Vec<CellStatus>],
) -> Result<Vec<GhostCell>> {
    let mut ghosts = Vec::new();
    for (g, grid) in grids.iter().enumerate() {
        for e in 0..grid.n_elements() {
            if status[g][e] != CellStatus::Fringe {
                continue;
            }
            let (ix, iy) = grid.elem_coords(e);
            for side in SIDES {
                let needs_ghost = match grid.neighbor(e, side) {
                    NeighborRef::OutOfGrid => true,
                    NeighborRef::Cell(n) => status[g][n] == CellStatus::Inactive,
                    NeighborRef::NonReflecting => false,
                };
                if needs_ghost {
                    let (di, dj) = side_offset(side);
                    ghosts.push(GhostCell {
                        grid: g,
                        fringe_elem: e,
                        side,
                        element: grid.element_geometry(ix as isize + di, iy as isize + dj),
                    });
                }
            }
        }
    }
    Ok(ghosts)
}
