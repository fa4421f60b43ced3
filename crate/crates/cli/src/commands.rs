//! One function per subcommand. Each returns the acceptance checks it evaluated.

use std::f64::consts::{FRAC_2_PI, PI};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use pvlab::graphs::{
    exact_cheeger, half_coloring_estimate, random_regular, region_coloring_estimate, spanning_tree_regions,
    GraphTrial, RegularGraph,
};
use pvlab::hypmath::ball_area;
use pvlab::isokawa::{density_experiment, fmt, isokawa_perimeter_bounded, RatioRow};
use pvlab::lemmacheck::lemma_suite;
use pvlab::render::{render_svg, RenderSpec};
use pvlab::sampler::{poisson_disk, Seed};
use pvlab::surface::{bolza, coloring_experiment, surface_voronoi, variance_identity, ColoringOutcome};
use pvlab::voronoi::{tessellate_window, Piece, Tessellation};

use crate::config::{resolve, ConfigFile, Globals};
use crate::output::{summary_path, write_csv, write_json, write_svg, Check, Meta};

fn random_colors(n: usize, seed: Seed) -> Vec<bool> {
    let mut rng = seed.rng();
    (0..n).map(|_| rng.random::<bool>()).collect()
}

fn rel_err(x: f64, target: f64) -> f64 {
    (x / target - 1.0).abs()
}

// ---------------------------------------------------------------- typical-cell

#[derive(Debug, Args, Serialize)]
pub struct TypicalCellArgs {
    /// Intensities, comma separated [default: 1]
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    /// Replicas per intensity [default: 10000]
    #[arg(long)]
    replicas: Option<usize>,
    /// Output CSV [default: typical_cell.csv]
    #[arg(long)]
    out: Option<String>,
    /// Acceptance band in standard errors [default: 3]
    #[arg(long)]
    z: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TypicalCellConfig {
    lambda: Vec<f64>,
    replicas: usize,
    out: String,
    z: f64,
}

impl Default for TypicalCellConfig {
    fn default() -> Self {
        TypicalCellConfig {
            lambda: vec![1.0],
            replicas: 10_000,
            out: "typical_cell.csv".into(),
            z: 3.0,
        }
    }
}

fn ratio_summary(rows: &[RatioRow]) -> serde_json::Value {
    serde_json::to_value(rows).expect("rows serialize")
}

pub fn typical_cell(g: &Globals, file: &ConfigFile, args: &TypicalCellArgs) -> Result<Vec<Check>> {
    let cfg: TypicalCellConfig = resolve(file.section("typical-cell")?, args)?;
    let meta = Meta::new("typical-cell", g.seed, &cfg)?;
    let rows = density_experiment(&cfg.lambda, cfg.replicas, Seed::new(g.seed))?;
    let mut checks = Vec::new();
    for r in &rows {
        println!(
            "lambda {:<8} area {:.6} +- {:.6} (1/lambda {:.6})  perimeter {:.6} +- {:.6} (reference {:.6})",
            r.lambda,
            r.mean_area.mean,
            r.mean_area.stderr,
            1.0 / r.lambda,
            r.mean_perimeter.mean,
            r.mean_perimeter.stderr,
            r.reference_perimeter
        );
        checks.push(Check::new(
            "area",
            r.mean_area.covers(1.0 / r.lambda, cfg.z),
            format!("lambda={} z={:.3}", r.lambda, r.mean_area.z_score(1.0 / r.lambda)),
        ));
        checks.push(Check::new(
            "perimeter",
            r.mean_perimeter.covers(r.reference_perimeter, cfg.z),
            format!("lambda={} z={:.3}", r.lambda, r.mean_perimeter.z_score(r.reference_perimeter)),
        ));
    }
    let out = g.path(&cfg.out);
    write_csv(&out, &meta, &RatioRow::CSV_HEADER, rows.iter().map(|r| r.csv_fields()))?;
    write_json(&summary_path(&out), &meta, ratio_summary(&rows), &checks)?;
    Ok(checks)
}

// ---------------------------------------------------------------- isokawa-ref

#[derive(Debug, Args, Serialize)]
pub struct IsokawaArgs {
    /// Intensities, comma separated [default: 1]
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IsokawaConfig {
    lambda: Vec<f64>,
}

impl Default for IsokawaConfig {
    fn default() -> Self {
        IsokawaConfig { lambda: vec![1.0] }
    }
}

pub fn isokawa_ref(file: &ConfigFile, args: &IsokawaArgs) -> Result<Vec<Check>> {
    let cfg: IsokawaConfig = resolve(file.section("isokawa-ref")?, args)?;
    for &l in &cfg.lambda {
        if !(l > 0.0 && l.is_finite()) {
            bail!("intensity must be positive and finite, got {l}");
        }
        let v = isokawa_perimeter_bounded(l);
        if cfg.lambda.len() == 1 {
            println!("{:.10}", v.value);
        } else {
            println!("{l} {:.10}", v.value);
        }
    }
    Ok(vec![])
}

// ---------------------------------------------------------------- density

#[derive(Debug, Args, Serialize)]
pub struct DensityArgs {
    /// Intensities, comma separated [default: 0.01]
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    /// Replicas per intensity [default: 1000]
    #[arg(long)]
    replicas: Option<usize>,
    /// Output CSV [default: density.csv]
    #[arg(long)]
    out: Option<String>,
    /// Relative band around 4/pi and 2/pi [default: 0.05]
    #[arg(long)]
    rel_tol: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensityConfig {
    lambda: Vec<f64>,
    replicas: usize,
    out: String,
    rel_tol: f64,
}

impl Default for DensityConfig {
    fn default() -> Self {
        DensityConfig {
            lambda: vec![0.01],
            replicas: 1000,
            out: "density.csv".into(),
            rel_tol: 0.05,
        }
    }
}

pub const DENSITY_HEADER: [&str; 13] = [
    "lambda",
    "mean_area",
    "se_area",
    "mean_perimeter",
    "se_perimeter",
    "ratio",
    "reference_perimeter",
    "excluded",
    "seed",
    "density",
    "reference_density",
    "ratio_over_4_over_pi",
    "density_over_2_over_pi",
];

pub fn density(g: &Globals, file: &ConfigFile, args: &DensityArgs) -> Result<Vec<Check>> {
    let cfg: DensityConfig = resolve(file.section("density")?, args)?;
    let meta = Meta::new("density", g.seed, &cfg)?;
    let rows = density_experiment(&cfg.lambda, cfg.replicas, Seed::new(g.seed))?;
    let limit_ratio = 4.0 / PI;
    let mut checks = Vec::new();
    for r in &rows {
        println!(
            "lambda {:<8} ratio {:.6} ({:.4} x 4/pi)  density {:.6} ({:.4} x 2/pi)  reference density {:.6}",
            r.lambda,
            r.ratio,
            r.ratio / limit_ratio,
            r.density(),
            r.density() / FRAC_2_PI,
            r.reference_density()
        );
        checks.push(Check::new(
            "ratio_4_over_pi",
            rel_err(r.ratio, limit_ratio) <= cfg.rel_tol,
            format!("lambda={} ratio/(4/pi)={:.6}", r.lambda, r.ratio / limit_ratio),
        ));
        checks.push(Check::new(
            "density_2_over_pi",
            rel_err(r.density(), FRAC_2_PI) <= cfg.rel_tol,
            format!("lambda={} density/(2/pi)={:.6}", r.lambda, r.density() / FRAC_2_PI),
        ));
    }
    let out = g.path(&cfg.out);
    write_csv(
        &out,
        &meta,
        &DENSITY_HEADER,
        rows.iter().map(|r| {
            let mut f = r.csv_fields().to_vec();
            f.extend([
                fmt(r.density()),
                fmt(r.reference_density()),
                fmt(r.ratio / limit_ratio),
                fmt(r.density() / FRAC_2_PI),
            ]);
            f
        }),
    )?;
    write_json(&summary_path(&out), &meta, ratio_summary(&rows), &checks)?;
    Ok(checks)
}

// ---------------------------------------------------------------- tessellate

#[derive(Debug, Args, Serialize)]
pub struct TessellateArgs {
    /// Intensity [default: 1]
    #[arg(long)]
    lambda: Option<f64>,
    /// Window radius [default: 8]
    #[arg(long)]
    radius: Option<f64>,
    /// Per-cell CSV [default: tessellation.csv]
    #[arg(long)]
    out: Option<String>,
    /// Also draw the tessellation to this SVG file
    #[arg(long)]
    svg: Option<String>,
    /// Fill cells black or white at random
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    color: bool,
    /// Also save the tessellation as JSON, for `render`
    #[arg(long)]
    save: Option<String>,
    /// SVG width and height in pixels [default: 800]
    #[arg(long)]
    size: Option<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TessellateConfig {
    lambda: f64,
    radius: f64,
    out: String,
    svg: Option<String>,
    color: bool,
    save: Option<String>,
    size: u32,
}

impl Default for TessellateConfig {
    fn default() -> Self {
        TessellateConfig {
            lambda: 1.0,
            radius: 8.0,
            out: "tessellation.csv".into(),
            svg: None,
            color: false,
            save: None,
            size: 800,
        }
    }
}

const CELL_HEADER: [&str; 7] = ["cell", "nucleus_r", "nucleus_theta", "area", "side_length", "sides", "rim_sweep"];

fn cell_rows(t: &Tessellation) -> Vec<[String; 7]> {
    t.cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let rim: f64 = c
                .boundary
                .iter()
                .map(|p| match p {
                    Piece::Rim { sweep, .. } => *sweep,
                    Piece::Side { .. } => 0.0,
                })
                .sum();
            [
                i.to_string(),
                fmt(c.nucleus.radius()),
                fmt(c.nucleus.angle()),
                fmt(c.area),
                fmt(c.side_length()),
                c.sides().count().to_string(),
                fmt(rim),
            ]
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct SavedTessellation {
    artifact_version: u32,
    seed: u64,
    tessellation: Tessellation,
}

fn draw(g: &Globals, meta: &Meta, t: &Tessellation, color: bool, svg: &str, size: u32) -> Result<()> {
    let colors = color.then(|| random_colors(t.cells.len(), Seed::new(g.seed).child(1)));
    let spec = RenderSpec {
        width_px: size,
        height_px: size,
        ..RenderSpec::default()
    };
    let text = render_svg(t, colors.as_deref(), &spec)?;
    write_svg(&g.path(svg), meta, &text)
}

pub fn tessellate(g: &Globals, file: &ConfigFile, args: &TessellateArgs) -> Result<Vec<Check>> {
    let cfg: TessellateConfig = resolve(file.section("tessellate")?, args)?;
    let meta = Meta::new("tessellate", g.seed, &cfg)?;
    let cloud = poisson_disk(cfg.lambda, cfg.radius, Seed::new(g.seed).child(0))?;
    if cloud.is_empty() {
        bail!("the window holds no points; raise --lambda or --radius");
    }
    let t = tessellate_window(&cloud);
    let window = ball_area(cfg.radius);
    let inner = (cfg.radius - 3.0).max(0.0);
    let inner_density = if inner > 0.0 {
        t.boundary_length_within(inner) / ball_area(inner)
    } else {
        f64::NAN
    };
    let predicted = cfg.lambda / 2.0 * isokawa_perimeter_bounded(cfg.lambda).value;
    println!(
        "{} cells, area {:.6} of {:.6}, boundary density within radius {} = {:.6} (predicted {:.6})",
        t.cells.len(),
        t.total_area(),
        window,
        inner,
        inner_density,
        predicted
    );
    let checks = vec![Check::new(
        "area_partition",
        rel_err(t.total_area(), window) <= 1e-6,
        format!("total={:.10} window={:.10}", t.total_area(), window),
    )];
    let out = g.path(&cfg.out);
    write_csv(&out, &meta, &CELL_HEADER, cell_rows(&t))?;
    write_json(
        &summary_path(&out),
        &meta,
        json!({
            "cells": t.cells.len(),
            "total_area": t.total_area(),
            "window_area": window,
            "boundary_length": t.boundary_length,
            "inner_radius": inner,
            "inner_boundary_density": inner_density,
            "predicted_density": predicted,
        }),
        &checks,
    )?;
    if let Some(svg) = &cfg.svg {
        draw(g, &meta, &t, cfg.color, svg, cfg.size)?;
    }
    if let Some(save) = &cfg.save {
        let path = g.path(save);
        let doc = SavedTessellation {
            artifact_version: meta.artifact_version,
            seed: g.seed,
            tessellation: t,
        };
        std::fs::write(&path, serde_json::to_string(&doc)? + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(checks)
}

// ---------------------------------------------------------------- surface

#[derive(Debug, Args, Serialize)]
pub struct SurfaceArgs {
    /// Intensity [default: 2]
    #[arg(long)]
    lambda: Option<f64>,
    /// Independent tessellations [default: 500]
    #[arg(long)]
    draws: Option<usize>,
    /// Output CSV [default: surface.csv]
    #[arg(long)]
    out: Option<String>,
    /// Relative band for the boundary density [default: 0.05]
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Relative tolerance on the total area [default: 1e-6]
    #[arg(long)]
    area_tol: Option<f64>,
    /// Draw the first tessellation to this SVG file
    #[arg(long)]
    svg: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurfaceConfig {
    lambda: f64,
    draws: usize,
    out: String,
    rel_tol: f64,
    area_tol: f64,
    svg: Option<String>,
}

impl Default for SurfaceConfig {
    fn default() -> Self {
        SurfaceConfig {
            lambda: 2.0,
            draws: 500,
            out: "surface.csv".into(),
            rel_tol: 0.05,
            area_tol: 1e-6,
            svg: None,
        }
    }
}

const SURFACE_HEADER: [&str; 7] = ["draw", "N", "total_area", "area_rel_error", "boundary_length", "boundary_density", "seed"];

pub fn surface(g: &Globals, file: &ConfigFile, args: &SurfaceArgs) -> Result<Vec<Check>> {
    let cfg: SurfaceConfig = resolve(file.section("surface")?, args)?;
    let meta = Meta::new("surface", g.seed, &cfg)?;
    if cfg.draws == 0 {
        bail!("need at least one draw");
    }
    let surf = bolza();
    let seed = Seed::new(g.seed);
    let tess: Vec<Tessellation> = (0..cfg.draws as u64)
        .into_par_iter()
        .map(|i| surface_voronoi(cfg.lambda, &surf, seed.with_stream(i)))
        .collect::<Result<_, _>>()?;
    let rows: Vec<[String; 7]> = tess
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let total = t.total_area();
            [
                i.to_string(),
                t.nuclei.len().to_string(),
                fmt(total),
                fmt(rel_err(total, surf.area)),
                fmt(t.boundary_length),
                fmt(t.boundary_length / surf.area),
                seed.with_stream(i as u64).to_string(),
            ]
        })
        .collect();
    let worst_area = tess.iter().map(|t| rel_err(t.total_area(), surf.area)).fold(0.0, f64::max);
    let mean_density = tess.iter().map(|t| t.boundary_length).sum::<f64>() / tess.len() as f64 / surf.area;
    let predicted = cfg.lambda / 2.0 * isokawa_perimeter_bounded(cfg.lambda).value;
    println!(
        "{} draws, boundary density {:.6} (planar prediction {:.6}, ratio {:.4}), worst area error {:.2e}",
        cfg.draws,
        mean_density,
        predicted,
        mean_density / predicted,
        worst_area
    );
    let checks = vec![
        Check::new(
            "area_sum",
            worst_area <= cfg.area_tol,
            format!("worst relative area error {worst_area:.3e}"),
        ),
        Check::new(
            "boundary_density",
            rel_err(mean_density, predicted) <= cfg.rel_tol,
            format!("density={mean_density:.6} predicted={predicted:.6}"),
        ),
    ];
    let out = g.path(&cfg.out);
    write_csv(&out, &meta, &SURFACE_HEADER, rows)?;
    write_json(
        &summary_path(&out),
        &meta,
        json!({
            "draws": cfg.draws,
            "mean_boundary_density": mean_density,
            "predicted_density": predicted,
            "worst_area_error": worst_area,
        }),
        &checks,
    )?;
    if let Some(svg) = &cfg.svg {
        draw(g, &meta, &tess[0], false, svg, 800)?;
    }
    Ok(checks)
}

// ---------------------------------------------------------------- color

#[derive(Debug, Args, Serialize)]
pub struct ColorArgs {
    /// Intensity [default: 2]
    #[arg(long)]
    lambda: Option<f64>,
    /// Tessellation-and-coloring trials [default: 1000]
    #[arg(long)]
    trials: Option<usize>,
    /// Colorings per fixed tessellation in the variance check [default: 10000]
    #[arg(long)]
    colorings: Option<usize>,
    /// Fixed tessellations in the variance check [default: 5]
    #[arg(long)]
    tessellations: Option<usize>,
    /// Output CSV [default: color.csv]
    #[arg(long)]
    out: Option<String>,
    /// Acceptance band in standard errors [default: 3]
    #[arg(long)]
    z: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColorConfig {
    lambda: f64,
    trials: usize,
    colorings: usize,
    tessellations: usize,
    out: String,
    z: f64,
}

impl Default for ColorConfig {
    fn default() -> Self {
        ColorConfig {
            lambda: 2.0,
            trials: 1000,
            colorings: 10_000,
            tessellations: 5,
            out: "color.csv".into(),
            z: 3.0,
        }
    }
}

pub fn color(g: &Globals, file: &ConfigFile, args: &ColorArgs) -> Result<Vec<Check>> {
    let cfg: ColorConfig = resolve(file.section("color")?, args)?;
    let meta = Meta::new("color", g.seed, &cfg)?;
    if cfg.colorings < 2 {
        bail!("need at least two colorings");
    }
    let surf = bolza();
    let seed = Seed::new(g.seed);
    let outcomes = coloring_experiment(cfg.lambda, &surf, cfg.trials, seed.child(0))?;
    let areas: Vec<f64> = outcomes.iter().map(|o| o.black_area).collect();
    let est = pvlab::stats::MCEstimate::from_samples(&areas, 0, seed.child(0));
    let half = surf.area / 2.0;
    let mut checks = vec![Check::new(
        "black_area_mean",
        est.covers(half, cfg.z),
        format!("mean={:.6} se={:.6} target={half:.6}", est.mean, est.stderr),
    )];
    println!("black area {:.6} +- {:.6} (half the surface {:.6})", est.mean, est.stderr, half);
    let mut variance = Vec::new();
    for k in 0..cfg.tessellations as u64 {
        let t = surface_voronoi(cfg.lambda, &surf, seed.child(1).with_stream(k))?;
        let v = variance_identity(&t, cfg.colorings, seed.child(2).child(k));
        println!(
            "tessellation {k}: {} cells, variance {:.6} +- {:.6}, predicted {:.6}",
            t.nuclei.len(),
            v.variance,
            v.stderr,
            v.predicted
        );
        checks.push(Check::new(
            "variance_identity",
            v.within(cfg.z),
            format!("tessellation={k} variance={:.6} se={:.6} predicted={:.6}", v.variance, v.stderr, v.predicted),
        ));
        variance.push(v);
    }
    let out = g.path(&cfg.out);
    write_csv(&out, &meta, &ColoringOutcome::CSV_HEADER, outcomes.iter().map(|o| o.csv_fields()))?;
    write_json(
        &summary_path(&out),
        &meta,
        json!({ "black_area": est, "variance": variance }),
        &checks,
    )?;
    Ok(checks)
}

// ---------------------------------------------------------------- graph

#[derive(Debug, Args, Serialize)]
pub struct GraphArgs {
    /// Vertices of the region-coloring graph [default: 10000]
    #[arg(long)]
    n: Option<usize>,
    /// Degree [default: 3]
    #[arg(long)]
    d: Option<usize>,
    /// Target region size [default: 50]
    #[arg(long)]
    s: Option<usize>,
    /// Trials per estimate [default: 1000]
    #[arg(long)]
    trials: Option<usize>,
    /// Vertices of the half-coloring graph [default: 1000]
    #[arg(long)]
    half_n: Option<usize>,
    /// Output CSV [default: graph.csv]
    #[arg(long)]
    out: Option<String>,
    /// Allowed factor over (d - 2)/2 for the region bound [default: 1.15]
    #[arg(long)]
    h_factor: Option<f64>,
    /// Relative band for the half-coloring boundary [default: 0.03]
    #[arg(long)]
    half_band: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraphConfig {
    n: usize,
    d: usize,
    s: usize,
    trials: usize,
    half_n: usize,
    out: String,
    h_factor: f64,
    half_band: f64,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            n: 10_000,
            d: 3,
            s: 50,
            trials: 1000,
            half_n: 1000,
            out: "graph.csv".into(),
            h_factor: 1.15,
            half_band: 0.03,
        }
    }
}

pub fn graph(g: &Globals, file: &ConfigFile, args: &GraphArgs) -> Result<Vec<Check>> {
    let cfg: GraphConfig = resolve(file.section("graph")?, args)?;
    let meta = Meta::new("graph", g.seed, &cfg)?;
    let seed = Seed::new(g.seed);
    let big = random_regular(cfg.n, cfg.d, seed.child(0))?;
    let parts = spanning_tree_regions(&big, cfg.s, seed.child(1))?;
    let regions = region_coloring_estimate(&big, &parts, cfg.trials, seed.child(2))?;
    let small = random_regular(cfg.half_n, cfg.d, seed.child(3))?;
    let half = half_coloring_estimate(&small, cfg.trials, seed.child(4))?;
    let bound = cfg.h_factor * (cfg.d as f64 - 2.0) / 2.0;
    let half_target = (cfg.d * cfg.half_n) as f64 / 4.0;
    let inter = parts.inter_region_edges(&big) as f64 / cfg.n as f64;
    println!(
        "{} regions (sizes {}..{}), inter-region edges / n = {:.4}",
        parts.len(),
        parts.sizes.iter().min().unwrap_or(&0),
        parts.sizes.iter().max().unwrap_or(&0),
        inter
    );
    println!("region coloring: mean h* = {:.6} +- {:.6} (bound {bound:.4})", regions.h_star.mean, regions.h_star.stderr);
    println!(
        "half coloring: mean boundary = {:.4} ({:.4} x dn/4), mean h* = {:.6}",
        half.boundary.mean,
        half.boundary.mean / half_target,
        half.h_star.mean
    );
    let checks = vec![
        Check::new(
            "region_h_star",
            regions.h_star.mean <= bound,
            format!("mean={:.6} bound={bound:.6}", regions.h_star.mean),
        ),
        Check::new(
            "half_boundary",
            rel_err(half.boundary.mean, half_target) <= cfg.half_band,
            format!("mean/(dn/4)={:.6}", half.boundary.mean / half_target),
        ),
    ];
    let out = g.path(&cfg.out);
    let rows = regions.trials.iter().chain(&half.trials).map(GraphTrial::csv_fields);
    write_csv(&out, &meta, &GraphTrial::CSV_HEADER, rows)?;
    write_json(
        &summary_path(&out),
        &meta,
        json!({
            "regions": parts.len(),
            "inter_region_edges_per_vertex": inter,
            "region_h_star": regions.h_star,
            "region_boundary": regions.boundary,
            "half_h_star": half.h_star,
            "half_boundary": half.boundary,
        }),
        &checks,
    )?;
    Ok(checks)
}

// ---------------------------------------------------------------- exact-cheeger

#[derive(Debug, Args, Serialize)]
pub struct ExactArgs {
    /// k4, petersen, cycle:N, complete:N or random:N:D [default: petersen]
    #[arg(long)]
    graph: Option<String>,
    /// Edge list file with one `a b` pair per line; overrides --graph
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Randomized bounds sampled for comparison [default: 200]
    #[arg(long)]
    trials: Option<usize>,
    /// Output JSON [default: exact_cheeger.json]
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExactConfig {
    graph: String,
    edges: Option<PathBuf>,
    trials: usize,
    out: String,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            graph: "petersen".into(),
            edges: None,
            trials: 200,
            out: "exact_cheeger.json".into(),
        }
    }
}

fn named_graph(name: &str, seed: Seed) -> Result<RegularGraph> {
    let parts: Vec<&str> = name.split(':').collect();
    let num = |i: usize| -> Result<usize> {
        parts
            .get(i)
            .context("missing size")?
            .parse()
            .with_context(|| format!("bad number in graph name `{name}`"))
    };
    Ok(match parts[0] {
        "k4" => RegularGraph::complete(4),
        "petersen" => RegularGraph::petersen(),
        "complete" => match num(1)? {
            n if n >= 2 => RegularGraph::complete(n),
            n => bail!("complete graph needs at least 2 vertices, got {n}"),
        },
        "cycle" => match num(1)? {
            n if n >= 3 => RegularGraph::cycle(n),
            n => bail!("cycle needs at least 3 vertices, got {n}"),
        },
        "random" => random_regular(num(1)?, num(2)?, seed)?,
        other => bail!("unknown graph `{other}`"),
    })
}

fn read_edges(path: &PathBuf) -> Result<RegularGraph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut edges = Vec::new();
    let mut n = 0;
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: Vec<u32> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .with_context(|| format!("line {}: expected two vertex indices", k + 1))?;
        let [a, b] = v[..] else {
            bail!("line {}: expected two vertex indices", k + 1);
        };
        n = n.max(a.max(b) as usize + 1);
        edges.push((a, b));
    }
    Ok(RegularGraph::from_edges(n, edges)?)
}

pub fn exact(g: &Globals, file: &ConfigFile, args: &ExactArgs) -> Result<Vec<Check>> {
    let cfg: ExactConfig = resolve(file.section("exact-cheeger")?, args)?;
    let meta = Meta::new("exact-cheeger", g.seed, &cfg)?;
    let seed = Seed::new(g.seed);
    let graph = match &cfg.edges {
        Some(p) => read_edges(p)?,
        None => named_graph(&cfg.graph, seed.child(0))?,
    };
    let exact = exact_cheeger(&graph)?;
    let mut sampled = Vec::new();
    if graph.n % 2 == 0 {
        let h = half_coloring_estimate(&graph, cfg.trials, seed.child(1))?;
        sampled.extend(h.trials.iter().filter_map(|t| t.h_star));
    }
    if graph.n >= 4 {
        for (k, s) in (2..=graph.n / 2).enumerate() {
            let p = spanning_tree_regions(&graph, s, seed.child(2).child(k as u64))?;
            if p.len() >= 2 {
                let r = region_coloring_estimate(&graph, &p, cfg.trials, seed.child(3).child(k as u64))?;
                sampled.extend(r.trials.iter().filter_map(|t| t.h_star));
            }
        }
    }
    let min_sampled = sampled.iter().copied().fold(f64::INFINITY, f64::min);
    let witness: Vec<usize> = (0..graph.n).filter(|v| exact.witness >> v & 1 == 1).collect();
    println!("{:.10}", exact.value);
    let checks = vec![Check::new(
        "oracle_below_samples",
        exact.value <= min_sampled + 1e-12,
        format!("exact={:.10} min_sampled={min_sampled:.10} bounds={}", exact.value, sampled.len()),
    )];
    write_json(
        &g.path(&cfg.out),
        &meta,
        json!({
            "n": graph.n,
            "d": graph.d,
            "value": exact.value,
            "witness": witness,
            "sampled_bounds": sampled.len(),
            "min_sampled": min_sampled,
        }),
        &checks,
    )?;
    Ok(checks)
}

// ---------------------------------------------------------------- lemma

#[derive(Debug, Args, Serialize)]
pub struct LemmaArgs {
    /// Candidates per inclusion check [default: 100000]
    #[arg(long)]
    samples: Option<usize>,
    /// Output JSON [default: lemma.json]
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LemmaConfig {
    samples: usize,
    out: String,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        LemmaConfig {
            samples: 100_000,
            out: "lemma.json".into(),
        }
    }
}

pub fn lemma(g: &Globals, file: &ConfigFile, args: &LemmaArgs) -> Result<Vec<Check>> {
    let cfg: LemmaConfig = resolve(file.section("lemma")?, args)?;
    let meta = Meta::new("lemma", g.seed, &cfg)?;
    let reports = lemma_suite(cfg.samples, Seed::new(g.seed));
    let mut checks = Vec::new();
    for r in &reports {
        println!("{r}");
        checks.push(Check::new(&r.lemma, r.verdict, format!("max_slack={:.3e}", r.max_slack)));
    }
    write_json(&g.path(&cfg.out), &meta, serde_json::to_value(&reports)?, &checks)?;
    Ok(checks)
}

// ---------------------------------------------------------------- render

#[derive(Debug, Args, Serialize)]
pub struct RenderArgs {
    /// Tessellation saved by `tessellate --save` [default: tessellation.json]
    #[arg(long)]
    input: Option<String>,
    /// Output SVG [default: render.svg]
    #[arg(long)]
    svg: Option<String>,
    /// Fill cells black or white at random
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    color: bool,
    /// Mark the nuclei
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    nuclei: bool,
    /// Width and height in pixels [default: 800]
    #[arg(long)]
    size: Option<u32>,
    /// Stroke width in pixels [default: 0.8]
    #[arg(long)]
    stroke: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderConfig {
    input: String,
    svg: String,
    color: bool,
    nuclei: bool,
    size: u32,
    stroke: f64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            input: "tessellation.json".into(),
            svg: "render.svg".into(),
            color: false,
            nuclei: false,
            size: 800,
            stroke: 0.8,
        }
    }
}

pub fn render(g: &Globals, file: &ConfigFile, args: &RenderArgs) -> Result<Vec<Check>> {
    let cfg: RenderConfig = resolve(file.section("render")?, args)?;
    let meta = Meta::new("render", g.seed, &cfg)?;
    let path = g.path(&cfg.input);
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let saved: SavedTessellation = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let t = saved.tessellation;
    let colors = cfg.color.then(|| random_colors(t.cells.len(), Seed::new(g.seed).child(1)));
    let spec = RenderSpec {
        width_px: cfg.size,
        height_px: cfg.size,
        stroke_width: cfg.stroke,
        show_nuclei: cfg.nuclei,
        ..RenderSpec::default()
    };
    let svg = render_svg(&t, colors.as_deref(), &spec)?;
    write_svg(&g.path(&cfg.svg), &meta, &svg)?;
    Ok(vec![])
}
