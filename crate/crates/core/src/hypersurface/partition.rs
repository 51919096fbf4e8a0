//! Partitioning points that lie on `Z(P)` by polynomials that do not vanish
//! identically on `Z(P)`.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::bisect::{bisect_in_span, BisectConfig, BisectionCertificate, Strategy};
use crate::partition::build::{refine_cells, round_seed, serialize_cells};
use crate::partition::sign::{assign_cells, Cells, SignCondition};
use crate::poly::graded::graded_slice;
use crate::poly::rational::{ceil_scaled, ratio, serde_rational, to_f64};
use crate::poly::{MultiPoly, Point, Rational};
use crate::realideal::{irreducibility_heuristic, is_real_principal, Irreducibility, RealBudget, RealStatus};

#[derive(Clone, Debug)]
pub struct SurfaceConfig {
    /// Target degree `E`.
    pub e: u32,
    pub rho: Rational,
    pub slack: Rational,
    pub seed: u64,
    /// Additive allowance on the number of rounds.
    pub c0: u32,
    /// `Σ deg Q_i ≤ c1·E`.
    pub c1: u32,
    pub degree_constant: f64,
    /// Skip the real/irreducible check of the base polynomial. The caller
    /// vouches for it.
    pub trust_base: bool,
    pub restarts: usize,
}

impl SurfaceConfig {
    pub fn new(e: u32, slack: Rational, seed: u64) -> Self {
        SurfaceConfig {
            e,
            rho: ratio(1, 4),
            slack,
            seed,
            c0: 2,
            c1: 8,
            degree_constant: 2.0,
            trust_base: false,
            restarts: 12,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfacePartitionResult {
    pub base_poly: MultiPoly,
    pub base_degree: u32,
    pub e: u32,
    pub polys: Vec<MultiPoly>,
    pub t: usize,
    /// `⌈log₂(D·E^{d-1})⌉`.
    pub t_formula: usize,
    pub round_budgets: Vec<u32>,
    #[serde(serialize_with = "serialize_cells")]
    pub realizations: Cells,
    pub boundary_residual: Vec<usize>,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub rho: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub slack: Rational,
    pub c0: u32,
    pub c1: u32,
    pub certificates: Vec<BisectionCertificate>,
    pub strategies: Vec<Strategy>,
    /// Each `Q_i` reduces to a nonzero vector modulo the ideal slice at its budget.
    pub non_member: Vec<bool>,
    pub degree_sum: u32,
    pub bucket_bound: u64,
    pub certified: bool,
}

impl SurfacePartitionResult {
    pub fn max_bucket(&self) -> usize {
        self.realizations.values().map(Vec::len).max().unwrap_or(0)
    }
}

/// Smallest `t` with `2^t ≥ D·E^{d-1}`.
pub fn surface_rounds(base_degree: u32, e: u32, dim: usize) -> usize {
    let target = BigInt::from(base_degree) * num_traits::pow(BigInt::from(e), dim.saturating_sub(1));
    let mut t = 0;
    let mut p = BigInt::one();
    while p < target {
        p *= 2;
        t += 1;
    }
    t
}

/// `⌈c·max((2^i/D)^{1/(d-1)}, 2^{i/d})⌉`.
pub fn surface_round_degree(i: usize, base_degree: u32, dim: usize, c: f64) -> u32 {
    let a = (2f64.powi(i as i32) / base_degree as f64).powf(1.0 / (dim as f64 - 1.0));
    let b = 2f64.powf(i as f64 / dim as f64);
    (c * a.max(b)).ceil() as u32
}

fn check_on_surface(p: &MultiPoly, points: &[Point]) -> Result<()> {
    for (i, x) in points.iter().enumerate() {
        if p.sign_at(x)? != 0 {
            return Err(Error::PointOffSurface { index: i });
        }
    }
    Ok(())
}

/// Sign-vector buckets of points on `Z(P)`; zero signs go to the boundary.
pub fn realizations_on_surface(
    points: &[Point],
    p: &MultiPoly,
    polys: &[MultiPoly],
) -> Result<(Cells, Vec<usize>)> {
    check_on_surface(p, points)?;
    assign_cells(points, polys)
}

/// Round `i` draws its bisector from the monomial complement of the degree
/// `e_i` slice of `(P†)`, so no `Q_i` can vanish identically on `Z(P)` when
/// `(P)` is real.
pub fn build_surface_partition(
    p: &MultiPoly,
    points: &[Point],
    cfg: &SurfaceConfig,
) -> Result<SurfacePartitionResult> {
    if p.is_constant() {
        return Err(Error::BaseRejected("constant base polynomial".into()));
    }
    let dim = p.num_vars();
    if dim < 2 {
        return Err(Error::BaseRejected("ambient dimension must be at least 2".into()));
    }
    check_on_surface(p, points)?;
    let d_base = p.degree();
    if Rational::from_integer(BigInt::from(cfg.e)) < &cfg.rho * Rational::from_integer(BigInt::from(d_base)) {
        return Err(Error::DegreeTooSmall {
            e: cfg.e,
            bound: to_f64(&cfg.rho) * d_base as f64,
        });
    }
    if !cfg.trust_base {
        let verdict = is_real_principal(p, &RealBudget::default(), cfg.seed);
        if verdict.status != RealStatus::Real {
            return Err(Error::BaseRejected(format!("ideal not certified real: {:?}", verdict.status)));
        }
        if let Irreducibility::Reducible { factors } = irreducibility_heuristic(p, cfg.seed) {
            let names: Vec<String> = factors.iter().map(|f| f.to_string()).collect();
            return Err(Error::BaseRejected(format!("reducible: {}", names.join(" | "))));
        }
    }
    let t_formula = surface_rounds(d_base, cfg.e, dim);
    let m = points.len();
    let mut cells = Cells::new();
    if m > 0 {
        cells.insert(SignCondition::empty(), (0..m).collect());
    }
    let mut residual = Vec::new();
    let mut polys = Vec::new();
    let mut budgets = Vec::new();
    let mut certificates = Vec::new();
    let mut strategies = Vec::new();
    let mut non_member = Vec::new();
    let mut all_certified = true;
    for i in 1..=t_formula {
        let families: Vec<Vec<usize>> = cells.values().cloned().collect();
        let mut e_i = surface_round_degree(i, d_base, dim, cfg.degree_constant);
        let mut slice = graded_slice(p, e_i);
        let mut raised = 0;
        while slice.complement_basis.len() < families.len() + 1 {
            raised += 1;
            if raised > 8 {
                return Err(Error::ComplementTooSmall {
                    dim: slice.complement_basis.len(),
                    families: families.len(),
                    degree: e_i,
                });
            }
            e_i += 1;
            slice = graded_slice(p, e_i);
        }
        let basis: Vec<_> = slice
            .complement_affine()
            .iter()
            .map(|m| m.terms().next().expect("monomial").0.clone())
            .collect();
        let mut bc = BisectConfig::new(cfg.slack.clone(), round_seed(cfg.seed, i));
        bc.restarts = cfg.restarts;
        let b = bisect_in_span(points, &families, &basis, &bc)?;
        let nm = slice.certifies_non_member(&b.poly);
        all_certified &= b.certified && nm;
        cells = refine_cells(cells, &b.poly, points, &mut residual)?;
        polys.push(b.poly);
        budgets.push(e_i);
        certificates.push(b.certificate);
        strategies.push(b.strategy);
        non_member.push(nm);
    }
    residual.sort_unstable();
    let bucket_bound = ceil_scaled(m, &num_traits::pow(ratio(1, 2) + &cfg.slack, t_formula));
    let degree_sum: u32 = polys.iter().map(MultiPoly::degree).sum();
    let max_bucket = cells.values().map(Vec::len).max().unwrap_or(0) as u64;
    let within = degree_sum <= cfg.c1 * cfg.e && !cfg.slack.is_negative();
    Ok(SurfacePartitionResult {
        base_poly: p.clone(),
        base_degree: d_base,
        e: cfg.e,
        t: polys.len(),
        polys,
        t_formula,
        round_budgets: budgets,
        realizations: cells,
        boundary_residual: residual,
        rho: cfg.rho.clone(),
        slack: cfg.slack.clone(),
        c0: cfg.c0,
        c1: cfg.c1,
        certificates,
        strategies,
        non_member,
        degree_sum,
        bucket_bound,
        certified: all_certified && within && max_bucket <= bucket_bound,
    })
}
