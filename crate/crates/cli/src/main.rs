//! Command-line driver: run single cases, convergence studies and line
//! diffs of the overset DG solver.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use overdg::cases::{
    self, convergence, diff_lines, output, parse_number, run_case, CaseConfig, CaseKind,
    OversetLayout,
};
use overdg::FluxKind;

#[derive(Parser)]
#[command(name = "overdg", about = "Overset-grid discontinuous Galerkin solver for the 2D Euler equations", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one case and write its report and field dumps.
    Run(RunArgs),
    /// Run a case across a list of cell sizes and tabulate observed orders.
    Convergence(ConvergenceArgs),
    /// Pointwise |density difference| between two saved line extractions.
    Diff(DiffArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Key-value config file mirroring the flags (case, order, h, overset,
    /// tfinal, flux, out, cfl, vtk). Flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Case name: entropy-wave | isentropic-vortex | sod | lax |
    /// riemann2d-10 | riemann2d-12 | riemann2d-16.
    #[arg(long)]
    case: Option<String>,
    /// Polynomial degree per direction (1..=4).
    #[arg(long)]
    order: Option<usize>,
    /// Cell size, decimal or fraction (e.g. 1/20).
    #[arg(long)]
    h: Option<String>,
    /// Overset layout: none | type1 | type2 | patch:<x0>,<x1>,<hfine>.
    #[arg(long)]
    overset: Option<String>,
    /// Final time (defaults to the case's standard value).
    #[arg(long)]
    tfinal: Option<String>,
    /// Numerical flux: llf | hllc.
    #[arg(long)]
    flux: Option<String>,
    /// CFL number (default 0.3).
    #[arg(long)]
    cfl: Option<String>,
    /// Output directory for report, field dumps and line extraction.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write legacy-VTK structured dumps for contouring.
    #[arg(long)]
    vtk: bool,
}

impl RunArgs {
    fn to_config(&self) -> Result<CaseConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                CaseConfig::from_key_values(&text)?
            }
            None => {
                let case = self.case.as_deref().context("--case is required")?;
                let order = self.order.context("--order is required")?;
                let h = parse_number(self.h.as_deref().context("--h is required")?)?;
                CaseConfig::new(case.parse::<CaseKind>()?, order, h)
            }
        };
        if let Some(case) = &self.case {
            cfg.kind = case.parse()?;
        }
        if let Some(order) = self.order {
            cfg.order = order;
        }
        if let Some(h) = &self.h {
            cfg.h = parse_number(h)?;
        }
        if let Some(ov) = &self.overset {
            cfg.layout = ov.parse::<OversetLayout>()?;
        }
        if let Some(t) = &self.tfinal {
            cfg.t_final = Some(parse_number(t)?);
        }
        if let Some(f) = &self.flux {
            cfg.flux = f.parse::<FluxKind>()?;
        }
        if let Some(c) = &self.cfl {
            cfg.cfl = Some(parse_number(c)?);
        }
        if let Some(out) = &self.out {
            cfg.out_dir = Some(out.clone());
        }
        if self.vtk {
            cfg.vtk = true;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct ConvergenceArgs {
    #[arg(long)]
    case: String,
    #[arg(long)]
    order: usize,
    /// Comma-separated cell sizes, e.g. 1/20,1/40,1/80.
    #[arg(long = "h-list")]
    h_list: String,
    #[arg(long)]
    overset: Option<String>,
    #[arg(long)]
    flux: Option<String>,
    #[arg(long)]
    tfinal: Option<String>,
    /// Optional report output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiffArgs {
    /// Output directory of the first run.
    #[arg(long)]
    a: PathBuf,
    /// Output directory of the second run.
    #[arg(long)]
    b: PathBuf,
    /// Line selector; only "y=0.5" style horizontal lines are produced by
    /// `run`, and the saved extraction is what gets compared.
    #[arg(long, default_value = "y=0.5")]
    line: String,
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.to_config()?;
            let art = run_case(&cfg).context("run failed")?;
            let mut stdout = std::io::stdout().lock();
            output::write_report(&art, &mut stdout, &[])?;
            Ok(())
        }
        Command::Convergence(args) => {
            let mut cfg = CaseConfig::new(
                args.case.parse::<CaseKind>()?,
                args.order,
                0.1, // replaced per row
            );
            if let Some(ov) = &args.overset {
                cfg.layout = ov.parse::<OversetLayout>()?;
            }
            if let Some(f) = &args.flux {
                cfg.flux = f.parse::<FluxKind>()?;
            }
            if let Some(t) = &args.tfinal {
                cfg.t_final = Some(parse_number(t)?);
            }
            let h_list: Vec<f64> = args
                .h_list
                .split(',')
                .map(parse_number)
                .collect::<overdg::error::Result<_>>()?;
            if h_list.is_empty() {
                bail!("empty --h-list");
            }
            let rows = convergence(&cfg, &h_list)?;
            println!("# case={} order={} layout={}", cfg.kind.name(), cfg.order, cfg.layout.name());
            println!("# columns: h l2_density_error observed_order");
            let mut lines = Vec::new();
            for row in &rows {
                let order = row.order.map(|o| format!("{o:.2}")).unwrap_or_else(|| "-".into());
                let line = format!("{:.12e} {:.12e} {order}", row.h, row.error);
                println!("{line}");
                lines.push(line);
            }
            if let Some(dir) = &args.out {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join("convergence.txt"), lines.join("\n") + "\n")?;
            }
            Ok(())
        }
        Command::Diff(args) => {
            if !args.line.starts_with("y=") {
                bail!("only horizontal lines (y=<value>) are supported");
            }
            let a = output::read_line_file(&args.a.join("line_y.txt"))?;
            let b = output::read_line_file(&args.b.join("line_y.txt"))?;
            let d = diff_lines(&a, &b)?;
            let max = d.iter().map(|&(_, v)| v).fold(0.0f64, f64::max);
            println!("# columns: x abs_density_difference");
            for (x, v) in &d {
                println!("{x:.12e} {v:.12e}");
            }
            eprintln!("max |difference| = {max:.6e}");
            Ok(())
        }
    }
}
