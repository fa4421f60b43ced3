use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::{ConfigFile, Globals};

/// Hyperbolic Poisson-Voronoi experiments.
#[derive(Debug, Parser)]
#[command(name = "pvlab", version)]
struct Cli {
    /// Master seed [default: 2024]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core. Never changes results [default: 0]
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// TOML config file with top-level globals and one table per subcommand
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory [default: $PVLAB_OUT_DIR or .]
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Exit with status 2 when an acceptance band is violated
    #[arg(long, global = true)]
    check: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mean area and perimeter of the typical cell
    TypicalCell(commands::TypicalCellArgs),
    /// Reference value of the mean typical-cell perimeter
    IsokawaRef(commands::IsokawaArgs),
    /// Perimeter-to-area ratio and boundary density at small intensity
    Density(commands::DensityArgs),
    /// Tessellation of a disk window, with optional SVG
    Tessellate(commands::TessellateArgs),
    /// Tessellations of the Bolza surface
    Surface(commands::SurfaceArgs),
    /// Random black/white colorings of surface tessellations
    Color(commands::ColorArgs),
    /// Random colorings of random regular graphs
    Graph(commands::GraphArgs),
    /// Exhaustive Cheeger constant of a small graph
    ExactCheeger(commands::ExactArgs),
    /// Numerical lemma checks
    Lemma(commands::LemmaArgs),
    /// Draw a saved tessellation as SVG
    Render(commands::RenderArgs),
}

const SECTIONS: [&str; 10] = [
    "typical-cell",
    "isokawa-ref",
    "density",
    "tessellate",
    "surface",
    "color",
    "graph",
    "exact-cheeger",
    "lemma",
    "render",
];

fn run(cli: Cli) -> Result<bool> {
    let file = ConfigFile::load(cli.config.as_deref())?;
    file.check_keys(&SECTIONS)?;
    let g = Globals::resolve(&file, cli.seed, cli.workers, cli.out_dir, cli.check)?;
    if g.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(g.workers)
            .build_global()
            .context("starting worker pool")?;
    }
    let checks = match &cli.command {
        Command::TypicalCell(a) => commands::typical_cell(&g, &file, a)?,
        Command::IsokawaRef(a) => commands::isokawa_ref(&file, a)?,
        Command::Density(a) => commands::density(&g, &file, a)?,
        Command::Tessellate(a) => commands::tessellate(&g, &file, a)?,
        Command::Surface(a) => commands::surface(&g, &file, a)?,
        Command::Color(a) => commands::color(&g, &file, a)?,
        Command::Graph(a) => commands::graph(&g, &file, a)?,
        Command::ExactCheeger(a) => commands::exact(&g, &file, a)?,
        Command::Lemma(a) => commands::lemma(&g, &file, a)?,
        Command::Render(a) => commands::render(&g, &file, a)?,
    };
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    for c in &failed {
        eprintln!("check failed: {}: {}", c.name, c.detail);
    }
    Ok(!(g.check && !failed.is_empty()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // help and version requests
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
