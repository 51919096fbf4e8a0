use num_traits::Zero;
use serde::Serialize;

use super::bisect::{bisect_in_span, side_cap, BisectConfig, BisectionCertificate, Strategy};
use super::sign::{cell_reports, Cells, SignCondition};
use crate::error::{Error, Result};
use crate::poly::graded::{binomial, monomials_up_to};
use crate::poly::rational::{ceil_scaled, ratio, serde_rational};
use crate::poly::{MultiPoly, Point, Rational};

#[derive(Clone, Debug)]
pub struct PartitionConfig {
    pub rounds: usize,
    pub slack: Rational,
    pub seed: u64,
    /// `c` in the degree schedule `⌈c·2^{i/d}⌉`.
    pub degree_constant: f64,
    pub enumeration_budget: u64,
    pub restarts: usize,
}

impl PartitionConfig {
    pub fn new(rounds: usize, slack: Rational, seed: u64) -> Self {
        PartitionConfig {
            rounds,
            slack,
            seed,
            degree_constant: 2.0,
            enumeration_budget: 5000,
            restarts: 12,
        }
    }

    pub(crate) fn bisect_config(&self, round: usize) -> BisectConfig {
        let mut b = BisectConfig::new(self.slack.clone(), round_seed(self.seed, round));
        b.enumeration_budget = self.enumeration_budget;
        b.restarts = self.restarts;
        b
    }
}

pub(crate) fn round_seed(seed: u64, round: usize) -> u64 {
    seed ^ (round as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Degree budget of round `i` (1-based): `⌈c·2^{i/d}⌉`.
pub fn round_degree(i: usize, dim: usize, c: f64) -> u32 {
    (c * 2f64.powf(i as f64 / dim as f64)).ceil() as u32
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionResult {
    pub round_polys: Vec<MultiPoly>,
    /// Degree budget used in each round.
    pub round_budgets: Vec<u32>,
    /// `Σ deg Q_i`.
    pub total_degree: u32,
    #[serde(serialize_with = "serialize_cells")]
    pub pieces: Cells,
    pub residual: Vec<usize>,
    pub certificates: Vec<BisectionCertificate>,
    pub strategies: Vec<Strategy>,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub slack: Rational,
    /// `⌈m·(1/2+ε)^t⌉`.
    pub piece_bound: u64,
    pub certified: bool,
}

pub(crate) fn serialize_cells<S: serde::Serializer>(
    cells: &Cells,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    cell_reports(cells).serialize(s)
}

impl PartitionResult {
    pub fn max_piece(&self) -> usize {
        self.pieces.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn rounds(&self) -> usize {
        self.round_polys.len()
    }
}

/// Splits every current piece by one more polynomial; zero signs move points
/// to `residual`.
pub(crate) fn refine_cells(
    cells: Cells,
    q: &MultiPoly,
    points: &[Point],
    residual: &mut Vec<usize>,
) -> Result<Cells> {
    let mut next = Cells::new();
    for (cond, idx) in cells {
        for i in idx {
            match q.sign_at(&points[i])? {
                0 => residual.push(i),
                s => next.entry(cond.extended(s)).or_default().push(i),
            }
        }
    }
    Ok(next)
}

/// Iterated simultaneous bisection of all current pieces, `t` rounds.
pub fn build_partition(points: &[Point], cfg: &PartitionConfig) -> Result<PartitionResult> {
    let m = points.len();
    let dim = points.first().map(|p| p.dim()).unwrap_or(3);
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    if cfg.slack < Rational::zero() {
        return Err(Error::InvalidInput("slack must be nonnegative".into()));
    }
    let mut cells = Cells::new();
    if m > 0 {
        cells.insert(SignCondition::empty(), (0..m).collect());
    }
    let mut residual = Vec::new();
    let mut round_polys = Vec::new();
    let mut round_budgets = Vec::new();
    let mut certificates = Vec::new();
    let mut strategies = Vec::new();
    let mut all_certified = true;
    for i in 1..=cfg.rounds {
        let families: Vec<Vec<usize>> = cells.values().cloned().collect();
        let mut e = round_degree(i, dim, cfg.degree_constant);
        while (binomial(e as u64 + dim as u64, dim as u64) as usize) < families.len() + 1 {
            e += 1;
        }
        let basis = monomials_up_to(dim, e);
        let b = bisect_in_span(points, &families, &basis, &cfg.bisect_config(i))?;
        all_certified &= b.certified;
        cells = refine_cells(cells, &b.poly, points, &mut residual)?;
        round_polys.push(b.poly);
        round_budgets.push(e);
        certificates.push(b.certificate);
        strategies.push(b.strategy);
    }
    residual.sort_unstable();
    let factor = num_traits::pow(ratio(1, 2) + &cfg.slack, cfg.rounds);
    let piece_bound = ceil_scaled(m, &factor);
    let max_piece = cells.values().map(Vec::len).max().unwrap_or(0) as u64;
    Ok(PartitionResult {
        total_degree: round_polys.iter().map(MultiPoly::degree).sum(),
        round_polys,
        round_budgets,
        pieces: cells,
        residual,
        certificates,
        strategies,
        slack: cfg.slack.clone(),
        piece_bound,
        certified: all_certified && max_piece <= piece_bound,
    })
}

/// Per-round cap chain `s_{i} = ⌈(1/2+ε)·s_{i-1}⌉` starting from `m`.
pub fn cap_chain(m: usize, slack: &Rational, rounds: usize) -> Vec<u64> {
    let mut out = vec![m as u64];
    for _ in 0..rounds {
        let prev = *out.last().unwrap();
        out.push(side_cap(prev as usize, slack));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::sign::assign_cells;
    use crate::poly::rational::int;

    fn example_1() -> Vec<Point> {
        let mut pts = Vec::new();
        for a in [1, 2] {
            for s2 in [-1, 1] {
                for s3 in [-1, 1] {
                    pts.push(Point::from_ints(&[0, s2 * a, s3 * a]));
                    for s1 in [-1, 1] {
                        pts.push(Point::from_ints(&[s1 * a, s2 * a, s3 * a]));
                    }
                }
            }
        }
        pts
    }

    #[test]
    fn example_1_coordinate_planes() {
        let pts = example_1();
        let r = build_partition(&pts, &PartitionConfig::new(3, int(0), 1)).unwrap();
        let names: Vec<String> = r.round_polys.iter().map(|q| q.to_string()).collect();
        assert_eq!(names, ["1 * x1", "1 * x2", "1 * x3"]);
        assert_eq!(r.pieces.len(), 8);
        assert!(r.pieces.values().all(|v| v.len() == 2));
        assert_eq!(r.residual.len(), 8);
        assert!(r.certified);
        assert_eq!(r.total_degree, 3);
    }

    #[test]
    fn single_point_no_rounds() {
        let r = build_partition(&[Point::from_ints(&[1, 2, 3])], &PartitionConfig::new(0, int(0), 0)).unwrap();
        assert_eq!(r.pieces.len(), 1);
        assert_eq!(r.pieces[&SignCondition::empty()], vec![0]);
        assert!(r.residual.is_empty());
        assert_eq!(r.piece_bound, 1);
    }

    #[test]
    fn pieces_reproduce_their_signs() {
        let pts: Vec<Point> = (0..60)
            .map(|k| Point::new(vec![ratio(k * 7 % 31, 5), ratio(k * 11 % 37, 7), ratio(k * k % 41, 3)]))
            .collect();
        let r = build_partition(&pts, &PartitionConfig::new(3, ratio(1, 10), 4)).unwrap();
        let (cells, residual) = assign_cells(&pts, &r.round_polys).unwrap();
        assert_eq!(cells, r.pieces);
        assert_eq!(residual, r.residual);
        let total: usize = r.pieces.values().map(Vec::len).sum::<usize>() + r.residual.len();
        assert_eq!(total, 60);
    }

    #[test]
    fn cap_chain_for_512() {
        assert_eq!(cap_chain(512, &ratio(1, 10), 7), vec![512, 308, 185, 111, 67, 41, 25, 15]);
    }

    #[test]
    fn degree_schedule() {
        let e: Vec<u32> = (1..=7).map(|i| round_degree(i, 3, 2.0)).collect();
        assert_eq!(e, vec![3, 4, 4, 6, 7, 8, 11]);
    }
}
