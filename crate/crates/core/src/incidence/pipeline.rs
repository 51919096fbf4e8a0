//! Two-level partition of a point-surface configuration with exact counting
//! inside every piece.
//!
//! The decomposition only reorganizes the count: every incidence is counted
//! exactly once, in the cell, zero-set component or boundary that holds its
//! point, and the total is checked against brute force.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use serde::Serialize;

use super::bounds::{bucket_of, canham_bounds, choose_d, choose_e, regime, theoretical_bound, Bucket, Regime};
use super::count::incidence_lists;
use super::nondegen::{check_nondegeneracy, NondegeneracyParams, NondegeneracyReport};
use crate::error::{Error, Result};
use crate::hypersurface::{build_surface_partition, sample_surface_points_in, SurfaceConfig};
use crate::partition::cells::GENERAL_SAMPLING_BOX;
use crate::partition::{build_partition, sign_conditions_met, sign_conditions_on_curve, Cells, PartitionConfig};
use crate::poly::rational::{ratio, serde_rational};
use crate::poly::{FloatPoly, MultiPoly, Point, Rational};
use crate::realideal::{irreducibility_heuristic, realify_family, Irreducibility};
use crate::surface::Surface;

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub slack: Rational,
    pub seed: u64,
    /// `c` in the regime guard `n < c m^k, m < c n^3` and in the bucket predicates.
    pub regime_constant: Rational,
    /// Samples per surface for the `n_i`, `n_ij` estimates.
    pub density: usize,
    pub waive_nondegeneracy: bool,
    pub restarts: usize,
    /// Polynomials of total degree above this are not expanded for the
    /// containment test of general surfaces; sampling is used instead.
    pub max_expand_degree: u32,
}

impl PipelineConfig {
    pub fn new(seed: u64) -> Self {
        PipelineConfig {
            slack: ratio(1, 10),
            seed,
            regime_constant: Rational::one(),
            density: 96,
            waive_nondegeneracy: false,
            restarts: 12,
            max_expand_degree: 24,
        }
    }

    fn partition_config(&self, rounds: usize, seed: u64) -> PartitionConfig {
        let mut p = PartitionConfig::new(rounds, self.slack.clone(), seed);
        p.restarts = self.restarts;
        p
    }
}

fn mix(seed: u64, tag: u64) -> u64 {
    seed ^ tag.wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

/// `clamp(⌈3 log2 x⌉, 0, ⌊log2 m⌋)`.
pub fn rounds_for(x: f64, m: usize) -> usize {
    if x <= 1.0 || m < 2 {
        return 0;
    }
    let want = (3.0 * x.log2()).ceil() as usize;
    want.min(m.ilog2() as usize)
}

#[derive(Clone, Debug, Serialize)]
pub struct CellEntry {
    pub signs: String,
    pub m_i: usize,
    /// Surfaces seen meeting the cell (sampled, plus incident points).
    pub n_i: usize,
    pub incidences: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Level1 {
    /// The closed-form `D`.
    pub d: f64,
    pub t: usize,
    pub polys: Vec<MultiPoly>,
    /// `Σ deg Q_i`.
    pub total_degree: u32,
    pub certified: bool,
    pub piece_bound: u64,
    pub cells: Vec<CellEntry>,
    pub sum_ni: usize,
    pub residual: usize,
    pub cell_incidences: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PieceEntry {
    pub signs: String,
    pub m_ij: usize,
    pub n_ij: usize,
    pub incidences: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondLevelKind {
    /// A product of ham sandwich cuts in space.
    Space,
    /// A partition of the points along `Z_j`.
    OnSurface,
}

#[derive(Clone, Debug, Serialize)]
pub struct SecondLevel {
    pub kind: SecondLevelKind,
    pub polys: Vec<MultiPoly>,
    /// Degree parameter handed to the construction.
    pub e_used: u32,
    pub certified: bool,
    /// Per polynomial: `P_j` does not divide it.
    pub not_multiple_of_base: Vec<bool>,
    pub pieces: Vec<PieceEntry>,
    pub sum_nij: usize,
    pub boundary_points: usize,
    pub boundary_incidences: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentEntry {
    pub j: usize,
    pub poly: MultiPoly,
    pub d_j: u32,
    pub points: usize,
    pub bucket: Bucket,
    pub e_j: f64,
    /// Incidences between the points assigned here and surfaces not contained in `Z`.
    pub incidences: usize,
    pub second_level: Option<SecondLevel>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Buckets {
    pub a1: Vec<ComponentEntry>,
    pub a2: Vec<ComponentEntry>,
    pub a3: Vec<ComponentEntry>,
}

impl Buckets {
    pub fn all(&self) -> impl Iterator<Item = &ComponentEntry> {
        self.a1.iter().chain(&self.a2).chain(&self.a3)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundTerm {
    pub name: String,
    pub measured: usize,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IncidenceReport {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    #[serde(with = "serde_rational")]
    pub regime_constant: Rational,
    pub regime: Regime,
    pub total_incidences: usize,
    pub brute_force_total: usize,
    pub nondegeneracy: Option<NondegeneracyReport>,
    pub level1: Option<Level1>,
    /// Surfaces contained in the level-one zero set.
    pub surfaces_in_zero_set: Vec<usize>,
    pub zero_set_incidences: usize,
    pub buckets: Buckets,
    /// Zero-set points on none of the components.
    pub unassigned_points: usize,
    pub unassigned_incidences: usize,
    pub bound_terms: Vec<BoundTerm>,
    pub theoretical_bound: f64,
    pub ratio: f64,
    pub flags: Vec<String>,
}

struct Ctx<'a> {
    points: &'a [Point],
    surfaces: &'a [Surface],
    lists: &'a [Vec<usize>],
    in_s2: &'a [bool],
    cfg: &'a PipelineConfig,
    flags: Vec<String>,
}

impl Ctx<'_> {
    fn incidences(&self, idx: &[usize], only_s2: bool) -> usize {
        idx.iter()
            .map(|&p| self.lists[p].iter().filter(|&&s| !only_s2 || self.in_s2[s]).count())
            .sum()
    }

    /// Surfaces certainly meeting a piece: those through one of its points.
    fn witnesses(&self, idx: &[usize]) -> BTreeSet<usize> {
        idx.iter()
            .flat_map(|&p| self.lists[p].iter().copied())
            .filter(|&s| self.in_s2[s])
            .collect()
    }

    fn n_estimate(&self, signs: &[i8], idx: &[usize], seen: &[Option<BTreeSet<Vec<i8>>>]) -> usize {
        let mut hit = self.witnesses(idx);
        for (s, set) in seen.iter().enumerate() {
            if set.as_ref().is_some_and(|set| set.contains(signs)) {
                hit.insert(s);
            }
        }
        hit.len()
    }

    fn second_level(
        &mut self,
        j: usize,
        base: &MultiPoly,
        bucket: Bucket,
        idx: &[usize],
        e_j: f64,
    ) -> Result<Option<SecondLevel>> {
        let sub: Vec<Point> = idx.iter().map(|&i| self.points[i].clone()).collect();
        let seed = mix(self.cfg.seed, 1000 + j as u64);
        let mut built = None;
        if bucket == Bucket::A3 {
            let e_used = (e_j.ceil() as u32).max(base.degree().div_ceil(4)).max(1);
            let mut scfg = SurfaceConfig::new(e_used, self.cfg.slack.clone(), seed);
            scfg.restarts = self.cfg.restarts;
            match build_surface_partition(base, &sub, &scfg) {
                Ok(r) => built = Some((SecondLevelKind::OnSurface, r.polys, e_used, r.certified, r.realizations, r.boundary_residual)),
                Err(e) => self
                    .flags
                    .push(format!("component {j}: on-surface partition unavailable ({e}); using cuts in space")),
            }
        }
        let (kind, polys, e_used, certified, pieces, boundary) = match built {
            Some(b) => b,
            None => {
                let t = rounds_for(e_j, sub.len());
                if t == 0 {
                    return Ok(None);
                }
                let r = build_partition(&sub, &self.cfg.partition_config(t, seed))?;
                (SecondLevelKind::Space, r.round_polys, e_j.ceil() as u32, r.certified, r.pieces, r.residual)
            }
        };
        if !certified {
            self.flags.push(format!("component {j}: second-level partition not certified"));
        }
        let not_multiple: Vec<bool> = polys.iter().map(|q| !base.divides(q)).collect();
        if not_multiple.iter().any(|ok| !ok) {
            self.flags.push(format!("component {j}: a second-level polynomial vanishes on the component"));
        }
        let to_global = |v: &[usize]| v.iter().map(|&i| idx[i]).collect::<Vec<usize>>();
        let mut seen = Vec::with_capacity(self.surfaces.len());
        for (s, surface) in self.surfaces.iter().enumerate() {
            if !self.in_s2[s] {
                seen.push(None);
                continue;
            }
            match sign_conditions_on_curve(surface, base, &polys, self.cfg.density) {
                Ok(set) => seen.push(Some(set)),
                Err(Error::SurfaceInZeroSet { .. }) => seen.push(None),
                Err(e) => return Err(e),
            }
        }
        let entries = piece_entries(self, &pieces, &seen, &to_global);
        let boundary = to_global(&boundary);
        Ok(Some(SecondLevel {
            kind,
            e_used,
            certified,
            not_multiple_of_base: not_multiple,
            sum_nij: entries.iter().map(|e| e.n_ij).sum(),
            pieces: entries,
            boundary_points: boundary.len(),
            boundary_incidences: self.incidences(&boundary, true),
            polys,
        }))
    }
}

/// Whether surface `s` lies inside `Z(Π polys)`.
fn contained_in_zero_set(
surfaces: &[Surface],
s: usize,
polys: &[MultiPoly],
product: &Option<MultiPoly>,
cfg: &PipelineConfig,
flags: &mut Vec<String>,
) -> bool {
    let f = surfaces[s].defining_poly().normalize();
    if polys.iter().any(|q| f.divides(q)) {
        return true;
    }
    if matches!(surfaces[s], Surface::Sphere { .. }) {
        // Spheres are irreducible, so dividing the product means dividing a factor.
        return false;
    }
    if let Some(p) = product {
        return f.degree() <= p.degree() && f.divides(p);
    }
    let fp: Vec<FloatPoly> = polys.iter().map(FloatPoly::new).collect();
    let center = vec![0.0; f.num_vars()];
    let samples = match sample_surface_points_in(&f, 64, cfg.seed, &center, GENERAL_SAMPLING_BOX) {
        Ok(s) => s,
        Err(_) => return false,
    };
    let inside = !samples.is_empty()
        && samples
            .iter()
            .all(|x| fp.iter().any(|q| q.near_zero(&x.coords, 1e-8)));
    flags.push(format!(
        "containment of surface {s} in the zero set decided by sampling ({})",
        if inside { "contained" } else { "not contained" }
    ));
    inside
}

fn piece_entries(
    ctx: &Ctx,
    pieces: &Cells,
    seen: &[Option<BTreeSet<Vec<i8>>>],
    to_global: &dyn Fn(&[usize]) -> Vec<usize>,
) -> Vec<PieceEntry> {
    pieces
        .iter()
        .map(|(cond, local)| {
            let idx = to_global(local);
            PieceEntry {
                signs: cond.to_string(),
                m_ij: idx.len(),
                n_ij: ctx.n_estimate(&cond.signs, &idx, seen),
                incidences: ctx.incidences(&idx, true),
            }
        })
        .collect()
}

fn check_dims(points: &[Point], surfaces: &[Surface]) -> Result<usize> {
    let d = points
        .first()
        .map(Point::dim)
        .or_else(|| surfaces.first().map(Surface::dim))
        .unwrap_or(3);
    for p in points {
        if p.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
        }
    }
    for s in surfaces {
        if s.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: s.dim() });
        }
    }
    Ok(d)
}

/// Irreducible pieces of the cut polynomials, normalized and without repeats.
fn split_factors(polys: &[MultiPoly], seed: u64, flags: &mut Vec<String>) -> Vec<MultiPoly> {
    let mut out: Vec<MultiPoly> = Vec::new();
    for (i, q) in polys.iter().enumerate() {
        let parts = match irreducibility_heuristic(q, mix(seed, 500 + i as u64)) {
            Irreducibility::Reducible { factors } => factors,
            Irreducibility::Unknown { reason } => {
                flags.push(format!("factorization of cut {i} unknown: {reason}"));
                vec![q.clone()]
            }
            Irreducibility::IrreducibleLikely { .. } => vec![q.clone()],
        };
        for f in parts {
            let f = f.normalize();
            if !f.is_constant() && !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out
}

/// Runs the two-level decomposition and counts every incidence exactly.
pub fn run_pipeline(
    points: &[Point],
    surfaces: &[Surface],
    params: &NondegeneracyParams,
    cfg: &PipelineConfig,
) -> Result<IncidenceReport> {
    check_dims(points, surfaces)?;
    let (m, n, k) = (points.len(), surfaces.len(), params.k);
    let lists = incidence_lists(points, surfaces)?;
    let brute: usize = lists.iter().map(Vec::len).sum();
    let nondegeneracy = if cfg.waive_nondegeneracy {
        None
    } else {
        let r = check_nondegeneracy(surfaces, points, params)?;
        if !r.passed {
            return Err(Error::Degenerate(format!(
                "{} common circles, {} overloaded {}-point sets, {} duplicate pairs",
                r.common_circles.len(),
                r.overloaded_count,
                k,
                r.duplicates.len()
            )));
        }
        Some(r)
    };
    let mut flags = vec!["surface smoothness is not checked".to_string()];
    if cfg.waive_nondegeneracy {
        flags.push("nondegeneracy check waived".into());
    }
    let reg = regime(m, n, k, &cfg.regime_constant);
    let theory = theoretical_bound(m, n, k);
    let mut report = IncidenceReport {
        m,
        n,
        k,
        regime_constant: cfg.regime_constant.clone(),
        regime: reg,
        total_incidences: 0,
        brute_force_total: brute,
        nondegeneracy,
        level1: None,
        surfaces_in_zero_set: Vec::new(),
        zero_set_incidences: 0,
        buckets: Buckets::default(),
        unassigned_points: 0,
        unassigned_incidences: 0,
        bound_terms: Vec::new(),
        theoretical_bound: theory,
        ratio: if theory > 0.0 { brute as f64 / theory } else { 0.0 },
        flags: Vec::new(),
    };
    if reg != Regime::Partition {
        let (b1, b2) = canham_bounds(m, n, k);
        report.total_incidences = brute;
        report.bound_terms = vec![
            BoundTerm { name: "threshold_surfaces".into(), measured: brute, bound: b1 },
            BoundTerm { name: "threshold_points".into(), measured: brute, bound: b2 },
        ];
        if reg != Regime::Empty {
            flags.push("threshold regime: counted without partitioning".into());
        }
        report.flags = flags;
        return Ok(report);
    }

    let d = choose_d(m, n, k);
    let t = rounds_for(d, m);
    let part = build_partition(points, &cfg.partition_config(t, cfg.seed))?;
    if !part.certified {
        flags.push("level-one partition not certified".into());
    }
    let polys = part.round_polys.clone();
    let total_degree: u32 = polys.iter().map(MultiPoly::degree).sum();
    let needs_product = surfaces.iter().any(|s| !matches!(s, Surface::Sphere { .. }));
    let product = (needs_product && total_degree <= cfg.max_expand_degree && !polys.is_empty()).then(|| {
        polys
            .iter()
            .fold(MultiPoly::one(polys[0].num_vars()), |acc, q| &acc * q)
    });
    let mut s1 = Vec::new();
    if !polys.is_empty() {
        for s in 0..n {
            if contained_in_zero_set(surfaces, s, &polys, &product, cfg, &mut flags) {
                s1.push(s);
            }
        }
    }
    let mut in_s2 = vec![true; n];
    for &s in &s1 {
        in_s2[s] = false;
    }
    let mut ctx = Ctx {
        points,
        surfaces,
        lists: &lists,
        in_s2: &in_s2,
        cfg,
        flags,
    };

    // Level one: cells off the zero set.
    let mut seen = Vec::with_capacity(n);
    for (s, surface) in surfaces.iter().enumerate() {
        if !in_s2[s] || polys.is_empty() {
            seen.push(None);
            continue;
        }
        match sign_conditions_met(surface, &polys, cfg.density) {
            Ok(set) => seen.push(Some(set)),
            Err(Error::SurfaceInZeroSet { .. }) => seen.push(None),
            Err(e) => return Err(e),
        }
    }
    let cells: Vec<CellEntry> = part
        .pieces
        .iter()
        .map(|(cond, idx)| CellEntry {
            signs: cond.to_string(),
            m_i: idx.len(),
            n_i: ctx.n_estimate(&cond.signs, idx, &seen),
            incidences: ctx.incidences(idx, false),
        })
        .collect();
    let cell_incidences: usize = cells.iter().map(|c| c.incidences).sum();
    let residual = part.residual.clone();
    let zero_set_incidences: usize = residual
        .iter()
        .map(|&p| lists[p].iter().filter(|&&s| !in_s2[s]).count())
        .sum();

    // Zero-set components with real ideals.
    let mut components = Vec::new();
    if !residual.is_empty() {
        let factors = split_factors(&polys, cfg.seed, &mut ctx.flags);
        let realified = realify_family(&factors, mix(cfg.seed, 77))?;
        for f in &realified.flagged {
            ctx.flags.push(format!("real-ideal status of {f} unknown; kept"));
        }
        components = realified.members;
    }
    let mut assigned: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut unassigned = Vec::new();
    for &p in &residual {
        let mut home = None;
        for (j, c) in components.iter().enumerate() {
            if c.sign_at(&points[p])? == 0 {
                home = Some(j);
                break;
            }
        }
        match home {
            Some(j) => assigned.entry(j).or_default().push(p),
            None => unassigned.push(p),
        }
    }
    if !unassigned.is_empty() {
        ctx.flags.push(format!("{} zero-set points lie on no component", unassigned.len()));
    }
    let mut buckets = Buckets::default();
    for (j, base) in components.iter().enumerate() {
        let idx = assigned.remove(&j).unwrap_or_default();
        let d_j = base.degree();
        let bucket = bucket_of(idx.len(), d_j, n, k, &cfg.regime_constant);
        let e_j = if idx.is_empty() { 0.0 } else { choose_e(idx.len(), n, d_j, k) };
        let second_level = match bucket {
            Bucket::A1 => None,
            _ => ctx.second_level(j, base, bucket, &idx, e_j)?,
        };
        let entry = ComponentEntry {
            j,
            poly: base.clone(),
            d_j,
            points: idx.len(),
            bucket,
            e_j,
            incidences: ctx.incidences(&idx, true),
            second_level,
        };
        match bucket {
            Bucket::A1 => buckets.a1.push(entry),
            Bucket::A2 => buckets.a2.push(entry),
            Bucket::A3 => buckets.a3.push(entry),
        }
    }
    let unassigned_incidences = ctx.incidences(&unassigned, true);
    let mut flags = ctx.flags;

    let component_total: usize = buckets.all().map(|c| c.incidences).sum();
    let total = cell_incidences + zero_set_incidences + component_total + unassigned_incidences;
    if total != brute {
        return Err(Error::CountMismatch { pipeline: total, brute_force: brute });
    }
    for c in buckets.all() {
        if let Some(sl) = &c.second_level {
            let inner: usize = sl.pieces.iter().map(|p| p.incidences).sum::<usize>() + sl.boundary_incidences;
            if inner != c.incidences {
                return Err(Error::CountMismatch { pipeline: inner, brute_force: c.incidences });
            }
        }
    }

    let (mf, nf, kf) = (m as f64, n as f64, k as f64);
    let a1: usize = buckets.a1.iter().map(|c| c.incidences).sum();
    let a23: usize = buckets.a2.iter().chain(&buckets.a3).map(|c| c.incidences).sum();
    let e2 = 2.0 * kf - 1.0;
    report.bound_terms = vec![
        BoundTerm {
            name: "cells".into(),
            measured: cell_incidences,
            bound: mf * nf.powf(1.0 - 1.0 / kf) / d.powf(1.0 - 1.0 / kf) + d * d * nf,
        },
        BoundTerm {
            name: "surfaces_in_zero_set".into(),
            measured: zero_set_incidences,
            bound: d * mf.powf(2.0 / 3.0) + mf,
        },
        BoundTerm {
            name: "a1".into(),
            measured: a1,
            bound: nf * d,
        },
        BoundTerm {
            name: "a2_a3".into(),
            measured: a23,
            bound: mf.powf(kf / e2) * nf.powf((2.0 * kf - 2.0) / e2) * d.powf((kf - 1.0) / e2) + mf,
        },
    ];
    if unassigned_incidences > 0 {
        flags.push(format!("{unassigned_incidences} incidences on unassigned zero-set points"));
    }
    let sum_ni = cells.iter().map(|c| c.n_i).sum();
    report.level1 = Some(Level1 {
        d,
        t,
        total_degree,
        certified: part.certified,
        piece_bound: part.piece_bound,
        cells,
        sum_ni,
        residual: residual.len(),
        cell_incidences,
        polys,
    });
    report.total_incidences = total;
    report.surfaces_in_zero_set = s1;
    report.zero_set_incidences = zero_set_incidences;
    report.buckets = buckets;
    report.unassigned_points = unassigned.len();
    report.unassigned_incidences = unassigned_incidences;
    report.flags = flags;
    Ok(report)
}
