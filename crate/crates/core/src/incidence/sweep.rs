//! Measured incidence counts against the unit-constant bound over growing
//! configurations.

use serde::{Deserialize, Serialize};

use super::bounds::theoretical_bound;
use super::count::incidences_bruteforce;
use super::nondegen::NondegeneracyParams;
use super::pipeline::{run_pipeline, PipelineConfig};
use crate::configgen::{generate, GeneratorSpec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    /// Integer grid with a unit sphere at every grid point; uses the largest
    /// cube not above the target size.
    Grid,
    /// Distinct random lattice points at density about 1/2, with a unit
    /// sphere at every point.
    Random,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub families: Vec<SweepFamily>,
    /// Target values of `m = n`.
    pub sizes: Vec<usize>,
    pub k: usize,
    pub seed: u64,
    /// Also run the full pipeline (and compare totals) up to this many points.
    pub pipeline_up_to: usize,
}

impl SweepConfig {
    pub fn new(seed: u64) -> Self {
        SweepConfig {
            families: vec![SweepFamily::Grid, SweepFamily::Random],
            sizes: vec![27, 64, 125, 216, 343, 512, 729, 1000],
            k: 3,
            seed,
            pipeline_up_to: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: SweepFamily,
    pub m: usize,
    pub n: usize,
    pub measured: usize,
    pub bound: f64,
    pub ratio: f64,
}

fn spec_for(family: SweepFamily, target: usize, seed: u64) -> GeneratorSpec {
    let inner = match family {
        SweepFamily::Grid => {
            let mut side = 1;
            while (side + 1) * (side + 1) * (side + 1) <= target {
                side += 1;
            }
            GeneratorSpec::Grid {
                n_per_side: side,
                spacing: "1".into(),
            }
        }
        SweepFamily::Random => GeneratorSpec::RandomLattice {
            m: target,
            seed,
            side: ((2 * target) as f64).cbrt().ceil() as i64,
        },
    };
    GeneratorSpec::UnitSpheresAt { of: Box::new(inner) }
}

pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &family in &cfg.families {
        for (i, &target) in cfg.sizes.iter().enumerate() {
            let g = generate(&spec_for(family, target, cfg.seed.wrapping_add(i as u64)))?;
            let (m, n) = (g.points.len(), g.surfaces.len());
            let (measured, _) = incidences_bruteforce(&g.points, &g.surfaces)?;
            if m <= cfg.pipeline_up_to {
                let params = NondegeneracyParams::new(cfg.k, 2)?;
                let r = run_pipeline(&g.points, &g.surfaces, &params, &PipelineConfig::new(cfg.seed))?;
                if r.total_incidences != measured {
                    return Err(Error::CountMismatch {
                        pipeline: r.total_incidences,
                        brute_force: measured,
                    });
                }
            }
            let bound = theoretical_bound(m, n, cfg.k);
            rows.push(SweepRow {
                family,
                m,
                n,
                measured,
                bound,
                ratio: if bound > 0.0 { measured as f64 / bound } else { 0.0 },
            });
        }
    }
    Ok(rows)
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("family,m,n,measured,bound,ratio\n");
    for r in rows {
        let family = match r.family {
            SweepFamily::Grid => "grid",
            SweepFamily::Random => "random",
        };
        out.push_str(&format!("{family},{},{},{},{:.3},{:.6}\n", r.m, r.n, r.measured, r.bound, r.ratio));
    }
    out
}
