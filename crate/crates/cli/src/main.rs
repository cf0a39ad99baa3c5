//! Command-line front end: deterministic, scriptable access to rank
//! computation, decomposition enumeration, ball export, exact
//! distances, the thresholded distance formula, quasi-flat checks,
//! coning, and hyperbolicity estimation.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use mcgraph_core::formula::{
    distance_formula, estimate_delta, fit_qi_constants, quasiflat, standard_ray, verify_quasiflat,
    BlockRay, ThresholdParams,
};
use mcgraph_core::graphcore::{self, BallLimits, MetricGraph, UNIT_WEIGHT};
use mcgraph_core::kernels::{
    adjacent, farey_distance, marking_distance, slopes_within, Marking11, Slope, SurfaceKind,
};
use mcgraph_core::regions::{
    make_region, region_ball, region_distance_closed_form, BlockKind, Coord, ProductRegion,
    RegionPoint, RegionUniverse,
};
use mcgraph_core::topology::{enumerate_decompositions, rank_at, Surface};
use mcgraph_core::{Error, ErrorKind, Result};

#[derive(Parser)]
#[command(
    name = "mcgraph",
    about = "Exact geometry of decomposition and marking graphs on small surfaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    /// Slope graph of the one-holed torus (edges at intersection 1).
    Farey,
    /// Slope graph of the four-holed sphere (same edges, intersection 2).
    Farey4,
    /// Marking graph of the one-holed torus (twists and flips).
    Marking,
    /// Product region move graph (requires --region).
    Region,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal number of disjoint just-above-threshold pieces, with an
    /// optional witness decomposition.
    Rank {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        punctures: u32,
        /// Complexity threshold, from -2 (marking level) up to one
        /// below the surface complexity.
        #[arg(long, allow_hyphen_values = true)]
        xi: i64,
        /// Also print a witness decomposition as JSON.
        #[arg(long)]
        witness: bool,
    },
    /// Enumerate all decomposition classes of a surface as JSON lines.
    Decomps {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        punctures: u32,
    },
    /// Export the ball of a given radius around a center vertex.
    Ball {
        #[arg(long, value_enum)]
        model: Model,
        /// Region description file (JSON), for --model region.
        #[arg(long)]
        region: Option<PathBuf>,
        /// Center vertex: a slope, a marking, or a region point key.
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        /// Radius in whole move units.
        #[arg(long)]
        radius: u64,
        #[arg(long, value_enum, default_value = "json")]
        out: OutFormat,
        /// Largest |numerator|, |denominator| admitted for slope vertices.
        #[arg(long, default_value_t = 8)]
        max_slope: u32,
        /// Twist coordinates range over [-twist-range, twist-range].
        #[arg(long, default_value_t = 8)]
        twist_range: i64,
    },
    /// Exact distance between two vertices of a model.
    Dist {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        region: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Thresholded projection-distance formula over a region, for one
    /// pair or for seeded samples with an optional constant fit.
    Formula {
        #[arg(long)]
        region: PathBuf,
        /// Override the region file's threshold.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<i64>,
        /// Contribution cutoff: projections of size <= K are dropped.
        #[arg(short = 'K', long = "threshold", default_value_t = 1)]
        k: u64,
        #[arg(long, allow_hyphen_values = true, requires = "to")]
        from: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "from")]
        to: Option<String>,
        /// Sample this many point pairs from a ball around the base
        /// point and print one CSV row per pair.
        #[arg(long, conflicts_with = "from")]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// After sampling, print the fitted two-sided constants as JSON.
        #[arg(long, requires = "samples")]
        fit: bool,
        /// Sampling ball radius in move units.
        #[arg(long, default_value_t = 4)]
        radius: u64,
        #[arg(long, default_value_t = 8)]
        max_slope: u32,
        #[arg(long, default_value_t = 8)]
        twist_range: i64,
    },
    /// Verify the flat-grid bounds over a region's geodesic grid.
    Quasiflat {
        #[arg(long)]
        region: PathBuf,
        /// Grid extent N: indices range over [-N, N] per flat block.
        #[arg(long)]
        grid: i64,
        /// Per-block geodesic file (JSON); defaults to the standard
        /// convergent ray anchored at 0/1.
        #[arg(long)]
        geodesic_file: Option<PathBuf>,
    },
    /// Cone subsets of a graph to apex vertices and export the result.
    Cone {
        #[arg(long)]
        graph: PathBuf,
        /// JSON file holding a list of vertex-name lists.
        #[arg(long)]
        subsets: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        out: OutFormat,
    },
    /// Four-point hyperbolicity defect of a graph.
    Delta {
        #[arg(long)]
        graph: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            match e.kind {
                ErrorKind::Validation => ExitCode::from(2),
                ErrorKind::Runtime => ExitCode::from(1),
            }
        }
    }
}

fn err_cli(message: impl Into<String>) -> Error {
    Error::validation("cli", message)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| err_cli(format!("cannot read {}: {e}", path.display())))
}

fn load_region(path: &Path) -> Result<ProductRegion> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| err_cli(format!("malformed region file {}: {e}", path.display())))
}

/// The canonical basepoint: 0/1 in slope blocks, (0/1; 1/0) in marking
/// blocks, twist 0, and the unit in pants blocks.
fn default_basepoint(region: &ProductRegion) -> Result<RegionPoint> {
    let origin: Slope = "0/1".parse()?;
    let coords = region
        .blocks()
        .iter()
        .map(|kind| match (kind, region.xi()) {
            (BlockKind::Pants, _) => Ok(Coord::Unit),
            (BlockKind::Annulus, _) => Ok(Coord::Twist(0)),
            (BlockKind::Torus1, -2) => Ok(Coord::Marking(Marking11::new(
                origin,
                "1/0".parse()?,
            )?)),
            _ => Ok(Coord::Slope(origin)),
        })
        .collect::<Result<Vec<_>>>()?;
    RegionPoint::new(region, coords)
}

fn slope_ball(kind: SurfaceKind, center: &str, radius: u64, max_slope: u32) -> Result<MetricGraph> {
    let center: Slope = center.parse()?;
    let universe = slopes_within(max_slope);
    if !universe.contains(&center) {
        return Err(err_cli(format!(
            "center {center} lies outside the --max-slope {max_slope} universe"
        )));
    }
    graphcore::ball(
        &center,
        radius,
        |s| {
            universe
                .iter()
                .filter(|t| adjacent(kind, *s, **t))
                .map(|t| (*t, UNIT_WEIGHT))
                .collect()
        },
        |s| s.to_string(),
        BallLimits::default(),
    )
}

fn marking_ball(center: &str, radius: u64) -> Result<MetricGraph> {
    let center: Marking11 = center.parse()?;
    graphcore::ball(
        &center,
        radius,
        |m| m.moves().iter().map(|n| (*n, UNIT_WEIGHT)).collect(),
        |m| m.to_string(),
        BallLimits::default(),
    )
}

fn emit_graph(graph: &MetricGraph, out: OutFormat) {
    match out {
        OutFormat::Json => println!("{}", graph.to_json()),
        OutFormat::Dot => print!("{}", graph.to_dot()),
    }
}

/// Geodesic file: an optional explicit basepoint plus one indexed
/// slope sequence per flat block.
#[derive(Deserialize)]
struct GeodesicFile {
    #[serde(default)]
    basepoint: Option<Vec<String>>,
    rays: Vec<GeodesicEntry>,
}

#[derive(Deserialize)]
struct GeodesicEntry {
    block: usize,
    center: String,
    positive: Vec<String>,
    negative: Vec<String>,
}

fn parse_slopes(items: &[String]) -> Result<Vec<Slope>> {
    items.iter().map(|s| s.parse()).collect()
}

fn load_geodesics(
    region: &ProductRegion,
    path: &Path,
) -> Result<(RegionPoint, BTreeMap<usize, BlockRay>)> {
    let file: GeodesicFile = serde_json::from_str(&read_text(path)?)
        .map_err(|e| err_cli(format!("malformed geodesic file {}: {e}", path.display())))?;
    let mut rays = BTreeMap::new();
    for entry in file.rays {
        let ray = BlockRay::new(
            parse_slopes(&entry.negative)?,
            entry.center.parse()?,
            parse_slopes(&entry.positive)?,
        )?;
        if rays.insert(entry.block, ray).is_some() {
            return Err(err_cli(format!("duplicate ray for block {}", entry.block)));
        }
    }
    let basepoint = match file.basepoint {
        Some(coords) => RegionPoint::from_key(region, &coords.join(","))?,
        None => {
            let mut base = default_basepoint(region)?;
            for (&block, ray) in &rays {
                let mut coords = base.coords().to_vec();
                if block >= coords.len() {
                    return Err(err_cli(format!("ray block index {block} out of range")));
                }
                coords[block] = Coord::Slope(ray.at(0)?);
                base = RegionPoint::new(region, coords)?;
            }
            base
        }
    };
    Ok((basepoint, rays))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Rank {
            genus,
            punctures,
            xi,
            witness,
        } => {
            let surface = Surface::new(genus, punctures)?;
            let (rank, decomposition) = rank_at(surface, xi)?;
            println!("{rank}");
            if witness {
                let json = serde_json::to_string(&decomposition)
                    .map_err(|e| Error::runtime("cli", format!("serialization failed: {e}")))?;
                println!("{json}");
            }
            Ok(())
        }
        Command::Decomps { genus, punctures } => {
            let surface = Surface::new(genus, punctures)?;
            for class in enumerate_decompositions(surface)? {
                let json = serde_json::to_string(&class)
                    .map_err(|e| Error::runtime("cli", format!("serialization failed: {e}")))?;
                println!("{json}");
            }
            Ok(())
        }
        Command::Ball {
            model,
            region,
            center,
            radius,
            out,
            max_slope,
            twist_range,
        } => {
            let graph = match model {
                Model::Farey => slope_ball(SurfaceKind::Torus1, &center, radius, max_slope)?,
                Model::Farey4 => slope_ball(SurfaceKind::Sphere4, &center, radius, max_slope)?,
                Model::Marking => marking_ball(&center, radius)?,
                Model::Region => {
                    let path = region
                        .ok_or_else(|| err_cli("--model region requires --region FILE"))?;
                    let region = load_region(&path)?;
                    let center = RegionPoint::from_key(&region, &center)?;
                    let universe = RegionUniverse::new(max_slope, twist_range);
                    region_ball(&region, &center, radius, &universe, BallLimits::default())?
                }
            };
            emit_graph(&graph, out);
            Ok(())
        }
        Command::Dist {
            model,
            region,
            from,
            to,
        } => {
            let distance = match model {
                Model::Farey | Model::Farey4 => {
                    farey_distance(from.parse()?, to.parse()?)
                }
                Model::Marking => marking_distance(from.parse()?, to.parse()?)?,
                Model::Region => {
                    let path = region
                        .ok_or_else(|| err_cli("--model region requires --region FILE"))?;
                    let region = load_region(&path)?;
                    let x = RegionPoint::from_key(&region, &from)?;
                    let y = RegionPoint::from_key(&region, &to)?;
                    region_distance_closed_form(&region, &x, &y)?
                }
            };
            println!("{distance}");
            Ok(())
        }
        Command::Formula {
            region,
            xi,
            k,
            from,
            to,
            samples,
            seed,
            fit,
            radius,
            max_slope,
            twist_range,
        } => {
            let mut region = load_region(&region)?;
            if let Some(xi) = xi {
                region = make_region(region.blocks().to_vec(), xi)?;
            }
            let params = ThresholdParams::new(k)?;
            match (from, samples) {
                (Some(from), None) => {
                    let to = to.expect("clap enforces --to with --from");
                    let x = RegionPoint::from_key(&region, &from)?;
                    let y = RegionPoint::from_key(&region, &to)?;
                    println!("{}", distance_formula(&region, params, &x, &y)?);
                    Ok(())
                }
                (None, Some(samples)) => {
                    run_formula_samples(
                        &region,
                        params,
                        samples,
                        seed,
                        fit,
                        radius,
                        max_slope,
                        twist_range,
                    )
                }
                _ => Err(err_cli("provide either --from/--to or --samples")),
            }
        }
        Command::Quasiflat {
            region,
            grid,
            geodesic_file,
        } => {
            let region = load_region(&region)?;
            let (basepoint, rays) = match geodesic_file {
                Some(path) => load_geodesics(&region, &path)?,
                None => {
                    if grid < 0 {
                        return Err(err_cli("--grid must be nonnegative"));
                    }
                    let basepoint = default_basepoint(&region)?;
                    let rays = region
                        .blocks()
                        .iter()
                        .enumerate()
                        .filter(|(_, kind)| kind.complexity() == region.xi() + 1)
                        .map(|(i, _)| (i, standard_ray(grid as u32)))
                        .collect();
                    (basepoint, rays)
                }
            };
            let spec = quasiflat(region, basepoint, rays)?;
            let report = verify_quasiflat(&spec, grid)?;
            println!("{report}");
            Ok(())
        }
        Command::Cone {
            graph,
            subsets,
            out,
        } => {
            let graph = MetricGraph::from_json(&read_text(&graph)?)?;
            let subsets: Vec<Vec<String>> = serde_json::from_str(&read_text(&subsets)?)
                .map_err(|e| err_cli(format!("malformed subsets file: {e}")))?;
            let coned = graph.cone(&subsets)?;
            emit_graph(&coned, out);
            Ok(())
        }
        Command::Delta { graph } => {
            let graph = MetricGraph::from_json(&read_text(&graph)?)?;
            println!("{}", estimate_delta(&graph)?);
            Ok(())
        }
    }
}

/// Samples point pairs from the radius ball around the canonical base
/// point, prints one CSV row per pair (point keys quoted, then the
/// graph distance and the formula value), and optionally a JSON fit
/// summary. Graph distances are measured inside an enclosing ball of
/// twice the radius so that sampled pairs are joined by true geodesics.
#[allow(clippy::too_many_arguments)]
fn run_formula_samples(
    region: &ProductRegion,
    params: ThresholdParams,
    samples: u64,
    seed: u64,
    fit: bool,
    radius: u64,
    max_slope: u32,
    twist_range: i64,
) -> Result<()> {
    let universe = RegionUniverse::new(max_slope, twist_range);
    let center = default_basepoint(region)?;
    let inner = region_ball(region, &center, radius, &universe, BallLimits::default())?;
    let enclosing = region_ball(region, &center, 2 * radius, &universe, BallLimits::default())?;
    let vertices = inner.vertices();
    if vertices.len() < 2 {
        return Err(Error::runtime(
            "cli",
            "sampling ball has fewer than two points",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for _ in 0..samples {
        let x = &vertices[rng.gen_range(0..vertices.len())];
        let y = &vertices[rng.gen_range(0..vertices.len())];
        pairs.push((x.clone(), y.clone()));
    }
    let mut fitted: Vec<(u64, u64)> = Vec::new();
    for (xk, yk) in &pairs {
        let d_graph = enclosing.distance(xk, yk)? / UNIT_WEIGHT;
        let x = RegionPoint::from_key(region, xk)?;
        let y = RegionPoint::from_key(region, yk)?;
        let d_formula = distance_formula(region, params, &x, &y)?;
        println!("\"{xk}\",\"{yk}\",{d_graph},{d_formula}");
        fitted.push((d_graph, d_formula));
    }
    if fit {
        let fit = fit_qi_constants(&fitted)?;
        let violations = fitted
            .iter()
            .filter(|&&(d1, d2)| !fit.admits(&[(d1, d2)]))
            .count();
        println!(
            "{{\"a\":{},\"b\":{},\"K\":{},\"violations\":{}}}",
            fit.a(),
            fit.b(),
            params.k(),
            violations
        );
    }
    Ok(())
}
