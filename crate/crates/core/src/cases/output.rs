//! Text and legacy-VTK output for finished runs.

use std::io::Write;
use std::path::Path;

use super::RunArtifacts;
use crate::error::Result;
use crate::mesh::CellStatus;

/// Write the standard output set for a run: report, per-grid field dumps,
/// line extraction, assembly dump (overset runs), optional VTK.
pub fn write_run_outputs(art: &RunArtifacts, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_report(art, &mut std::fs::File::create(dir.join("report.txt"))?, &[])?;
    for g in 0..art.assembly.n_grids() {
        write_field_dump(art, g, &mut std::fs::File::create(dir.join(format!("field_grid{g}.txt")))?)?;
        if art.config.vtk {
            write_vtk(art, g, &mut std::fs::File::create(dir.join(format!("field_grid{g}.vtk")))?)?;
        }
    }
    let mut lf = std::fs::File::create(dir.join("line_y.txt"))?;
    writeln!(lf, "# x density (line y = {})", super::line_y(art.config.kind))?;
    for &(x, rho) in &art.line {
        writeln!(lf, "{x:.12e} {rho:.12e}")?;
    }
    if art.assembly.n_grids() > 1 {
        art.assembly
            .write_debug_dump(std::fs::File::create(dir.join("assembly.txt"))?)?;
    }
    Ok(())
}

/// Report rows are deterministic; the wall time lives on a comment line.
pub fn write_report(art: &RunArtifacts, w: &mut impl Write, notes: &[String]) -> Result<()> {
    let cfg = &art.config;
    writeln!(w, "# run report")?;
    for note in notes {
        writeln!(w, "# note: {note}")?;
    }
    writeln!(
        w,
        "# case={} order={} h={:.12e} layout={} flux={:?} tfinal={:.12e} steps={}",
        cfg.kind.name(),
        cfg.order,
        cfg.h,
        cfg.layout.name(),
        cfg.flux,
        cfg.t_final(),
        art.steps,
    )?;
    writeln!(w, "# wall_seconds: {:.3}", art.wall_seconds)?;
    writeln!(w, "# max_troubled_frac: {:.6}", art.max_troubled_frac)?;
    writeln!(w, "# columns: case order h layout l2_density_error")?;
    let err = art
        .l2_density
        .map(|e| format!("{e:.12e}"))
        .unwrap_or_else(|| "-".to_string());
    writeln!(
        w,
        "{} {} {:.12e} {} {}",
        cfg.kind.name(),
        cfg.order,
        cfg.h,
        cfg.layout.name(),
        err
    )?;
    Ok(())
}

/// Per-element means: `elem cx cy rho rho_u rho_v E status`.
pub fn write_field_dump(art: &RunArtifacts, g: usize, w: &mut impl Write) -> Result<()> {
    writeln!(w, "# grid {g}: elem cx cy rho rho_u rho_v energy status")?;
    let grid = &art.assembly.grids[g];
    let field = &art.state.fields[g];
    for e in 0..grid.n_elements() {
        let c = grid.elements[e].center();
        let m = field.mean(e);
        let status = match art.assembly.status[g][e] {
            CellStatus::Interior => "interior",
            CellStatus::Fringe => "fringe",
            CellStatus::Inactive => "inactive",
        };
        writeln!(
            w,
            "{e} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e} {status}",
            c[0], c[1], m[0], m[1], m[2], m[3]
        )?;
    }
    Ok(())
}

/// Legacy-VTK structured grid with cell-mean density and pressure, for
/// contour plotting.
pub fn write_vtk(art: &RunArtifacts, g: usize, w: &mut impl Write) -> Result<()> {
    let grid = &art.assembly.grids[g];
    let field = &art.state.fields[g];
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "grid {g} cell means")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_GRID")?;
    writeln!(w, "DIMENSIONS {} {} 1", grid.nx + 1, grid.ny + 1)?;
    writeln!(w, "POINTS {} double", (grid.nx + 1) * (grid.ny + 1))?;
    for iy in 0..=grid.ny {
        for ix in 0..=grid.nx {
            // Vertex shared by the adjacent elements; recompute from the
            // structured lattice so the rotation is included.
            let e = grid.element_geometry(ix as isize, iy as isize);
            let v = e.verts[0];
            writeln!(w, "{:.9e} {:.9e} 0.0", v[0], v[1])?;
        }
    }
    writeln!(w, "CELL_DATA {}", grid.n_elements())?;
    writeln!(w, "SCALARS density double 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for e in 0..grid.n_elements() {
        writeln!(w, "{:.9e}", field.mean(e)[0])?;
    }
    writeln!(w, "SCALARS pressure double 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for e in 0..grid.n_elements() {
        let q = crate::euler::ConservedState::from_array(field.mean(e));
        writeln!(w, "{:.9e}", q.pressure_raw())?;
    }
    writeln!(w, "SCALARS status int 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for e in 0..grid.n_elements() {
        let v = match art.assembly.status[g][e] {
            CellStatus::Interior => 0,
            CellStatus::Fringe => 1,
            CellStatus::Inactive => 2,
        };
        writeln!(w, "{v}")?;
    }
    Ok(())
}

/// Parse a line extraction file written by [`write_run_outputs`].
pub fn read_line_file(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let x: f64 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| crate::error::Error::Config(format!("bad line row: {line}")))?;
        let v: f64 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| crate::error::Error::Config(format!("bad line row: {line}")))?;
        out.push((x, v));
    }
    Ok(out)
}
