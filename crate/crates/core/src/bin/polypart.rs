use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use polypart::configgen::{generate, GeneratorSpec};
use polypart::hypersurface::{build_surface_partition, SurfaceConfig};
use polypart::incidence::{
    rows_to_csv, run_pipeline, sweep, unit_distance_report, NondegeneracyParams, PipelineConfig, SweepConfig,
    SweepFamily,
};
use polypart::io::{read_json, read_points, read_surfaces, write_json, PointsFile, SurfacesFile};
use polypart::partition::{build_partition, PartitionConfig};
use polypart::poly::rational::parse_rational;
use polypart::poly::{MultiPoly, Rational};
use polypart::realideal::{is_real_principal, realify_family, RealBudget};
use polypart::{Error, Result};

#[derive(Parser)]
#[command(name = "polypart", version, about = "Polynomial partitioning and exact incidence counting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition a point set with t rounds of simultaneous bisection.
    Partition {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        rounds: usize,
        #[arg(long, default_value = "1/10", value_parser = rational)]
        slack: Rational,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition points lying on the zero set of a base polynomial.
    SurfacePartition {
        #[arg(long)]
        base_poly: String,
        #[arg(long)]
        points: PathBuf,
        #[arg(long = "E")]
        e: u32,
        #[arg(long, default_value = "1/4", value_parser = rational)]
        rho: Rational,
        #[arg(long, default_value = "1/10", value_parser = rational)]
        slack: Rational,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the irreducible/real check of the base polynomial.
        #[arg(long)]
        trust_base: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify polynomials and replace those without real ideals.
    Realify {
        /// JSON `{"polys": [...]}` or plain text with one polynomial per line.
        #[arg(long)]
        polys: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the two-level incidence decomposition and compare with brute force.
    Incidences {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        surfaces: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long = "C", default_value_t = 2)]
        c: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run even when the nondegeneracy check fails.
        #[arg(long)]
        waive_nondegeneracy: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count unit-distance pairs exactly.
    UnitDistances {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep configuration families and emit measured/bound CSV rows.
    VerifyBound {
        #[arg(long, value_delimiter = ',', default_value = "grid,random")]
        families: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "27,64,125,216,343,512,729,1000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run the full pipeline on configurations up to this size.
        #[arg(long, default_value_t = 0)]
        pipeline_up_to: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate points (and surfaces) from a generator spec.
    Gen {
        /// Inline JSON or a path to a JSON file.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        surfaces_out: Option<PathBuf>,
    },
}

fn rational(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn emit<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    match out {
        Some(p) => write_json(p, value),
        None => {
            let text = serde_json::to_string_pretty(value)?;
            writeln!(std::io::stdout(), "{text}")?;
            Ok(())
        }
    }
}

fn read_poly_list(path: &Path) -> Result<Vec<MultiPoly>> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        let f: SurfacesFile = read_json(path)?;
        return Ok(f.polys);
    }
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| MultiPoly::parse_auto(l, 3))
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Partition {
            points,
            rounds,
            slack,
            seed,
            out,
        } => {
            let pts = read_points(&points)?;
            let r = build_partition(&pts, &PartitionConfig::new(rounds, slack, seed))?;
            emit(out.as_deref(), &r)
        }
        Command::SurfacePartition {
            base_poly,
            points,
            e,
            rho,
            slack,
            seed,
            trust_base,
            out,
        } => {
            let pts = read_points(&points)?;
            let dim = pts.first().map(|p| p.dim()).unwrap_or(3);
            let p = MultiPoly::parse_auto(&base_poly, dim)?;
            let mut cfg = SurfaceConfig::new(e, slack, seed);
            cfg.rho = rho;
            cfg.trust_base = trust_base;
            let r = build_surface_partition(&p, &pts, &cfg)?;
            emit(out.as_deref(), &r)
        }
        Command::Realify { polys, seed, out } => {
            let list = read_poly_list(&polys)?;
            let verdicts: Vec<_> = list
                .iter()
                .map(|p| json!({"poly": p, "verdict": is_real_principal(p, &RealBudget::default(), seed)}))
                .collect();
            let report = realify_family(&list, seed)?;
            emit(out.as_deref(), &json!({"verdicts": verdicts, "realify": report}))
        }
        Command::Incidences {
            points,
            surfaces,
            k,
            c,
            seed,
            waive_nondegeneracy,
            out,
        } => {
            let pts = read_points(&points)?;
            let surfs = read_surfaces(&surfaces)?;
            let params = NondegeneracyParams::new(k, c)?;
            let mut cfg = PipelineConfig::new(seed);
            cfg.waive_nondegeneracy = waive_nondegeneracy;
            let r = run_pipeline(&pts, &surfs, &params, &cfg)?;
            emit(out.as_deref(), &r)
        }
        Command::UnitDistances { points, out } => {
            let pts = read_points(&points)?;
            emit(out.as_deref(), &unit_distance_report(&pts))
        }
        Command::VerifyBound {
            families,
            sizes,
            k,
            seed,
            pipeline_up_to,
            out,
        } => {
            let mut cfg = SweepConfig::new(seed);
            cfg.families = families
                .iter()
                .map(|f| match f.as_str() {
                    "grid" => Ok(SweepFamily::Grid),
                    "random" => Ok(SweepFamily::Random),
                    other => Err(Error::InvalidInput(format!("unknown family {other:?}"))),
                })
                .collect::<Result<_>>()?;
            cfg.sizes = sizes;
            cfg.k = k;
            cfg.pipeline_up_to = pipeline_up_to;
            let csv = rows_to_csv(&sweep(&cfg)?);
            match out {
                Some(p) => fs::write(p, csv)?,
                None => write!(std::io::stdout(), "{csv}")?,
            }
            Ok(())
        }
        Command::Gen {
            spec,
            out,
            surfaces_out,
        } => {
            let text = if spec.trim_start().starts_with('{') {
                spec
            } else {
                fs::read_to_string(&spec)?
            };
            let spec: GeneratorSpec = serde_json::from_str(&text)?;
            let g = generate(&spec)?;
            emit(out.as_deref(), &PointsFile::new(g.points))?;
            if let Some(p) = surfaces_out {
                write_json(&p, &SurfacesFile::new(&g.surfaces))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
