//! Simultaneous bisection of point families by one polynomial.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::search::{Frame, Lifted, Objective, Search};
use crate::error::{Error, Result};
use crate::poly::graded::{binomial, monomials_up_to};
use crate::poly::linalg::Echelon;
use crate::poly::rational::{ceil_scaled, ratio, serde_rational, sign_of, to_f64};
use crate::poly::{Exponents, MultiPoly, Point, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyCount {
    pub positive: usize,
    pub negative: usize,
    pub on_zero: usize,
}

impl FamilyCount {
    pub fn size(&self) -> usize {
        self.positive + self.negative + self.on_zero
    }
}

/// Exact per-family tallies of a bisecting polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BisectionCertificate {
    pub per_family_counts: Vec<FamilyCount>,
    /// `max(0, max_F max(pos, neg)/|F| - 1/2)` over nonempty families.
    #[serde(serialize_with = "serde_rational::serialize")]
    pub slack_used: Rational,
}

/// `⌈(1/2 + ε)·size⌉`.
pub fn side_cap(size: usize, slack: &Rational) -> u64 {
    ceil_scaled(size, &(ratio(1, 2) + slack))
}

impl BisectionCertificate {
    pub fn from_signs(families: &[Vec<usize>], sign: impl Fn(usize) -> i8) -> Self {
        let per_family_counts: Vec<FamilyCount> = families
            .iter()
            .map(|f| {
                let mut c = FamilyCount {
                    positive: 0,
                    negative: 0,
                    on_zero: 0,
                };
                for &i in f {
                    match sign(i) {
                        1 => c.positive += 1,
                        -1 => c.negative += 1,
                        _ => c.on_zero += 1,
                    }
                }
                c
            })
            .collect();
        let half = ratio(1, 2);
        let mut slack_used = Rational::zero();
        for c in &per_family_counts {
            if c.size() == 0 {
                continue;
            }
            let s = ratio(c.positive.max(c.negative) as i64, c.size() as i64) - &half;
            if s > slack_used {
                slack_used = s;
            }
        }
        BisectionCertificate {
            per_family_counts,
            slack_used,
        }
    }

    /// Recounts `poly` against every family with exact signs.
    pub fn recount(poly: &MultiPoly, families: &[Vec<usize>], points: &[Point]) -> Result<Self> {
        let mut signs = std::collections::HashMap::new();
        for f in families {
            for &i in f {
                if let std::collections::hash_map::Entry::Vacant(e) = signs.entry(i) {
                    let p = points
                        .get(i)
                        .ok_or_else(|| Error::InvalidInput(format!("point index {i} out of range")))?;
                    e.insert(poly.sign_at(p)?);
                }
            }
        }
        Ok(BisectionCertificate::from_signs(families, |i| signs[&i]))
    }

    pub fn holds_at(&self, slack: &Rational) -> bool {
        self.violation(slack) == 0
    }

    /// Total excess over the side caps at `slack`.
    pub fn violation(&self, slack: &Rational) -> u64 {
        self.per_family_counts
            .iter()
            .map(|c| {
                let cap = side_cap(c.size(), slack);
                (c.positive as u64).saturating_sub(cap) + (c.negative as u64).saturating_sub(cap)
            })
            .sum()
    }

    fn key(&self, slack: &Rational) -> (u64, Rational) {
        (self.violation(slack), self.slack_used.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Monomial,
    Interpolation,
    Enumeration,
    Heuristic,
}

#[derive(Clone, Debug)]
pub struct BisectConfig {
    pub slack: Rational,
    pub seed: u64,
    /// Largest number of point subsets the exact hyperplane enumeration may visit.
    pub enumeration_budget: u64,
    /// Enumeration is skipped when a hyperplane needs more points than this.
    pub enumeration_max_rank: usize,
    /// Exact interpolation of target signs is tried up to this many rows.
    pub interpolation_limit: usize,
    pub restarts: usize,
    pub descent_passes: usize,
}

impl BisectConfig {
    pub fn new(slack: Rational, seed: u64) -> Self {
        BisectConfig {
            slack,
            seed,
            enumeration_budget: 5000,
            enumeration_max_rank: 20,
            interpolation_limit: 40,
            restarts: 12,
            descent_passes: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Bisection {
    pub poly: MultiPoly,
    pub certificate: BisectionCertificate,
    pub certified: bool,
    pub strategy: Strategy,
}

fn degree(e: &Exponents) -> u32 {
    e.iter().sum()
}

fn monomial_sign(e: &Exponents, p: &Point) -> i8 {
    let mut s = 1i8;
    for (&k, c) in e.iter().zip(&p.coords) {
        if k == 0 {
            continue;
        }
        let cs = sign_of(c);
        if cs == 0 {
            return 0;
        }
        if cs < 0 && k % 2 == 1 {
            s = -s;
        }
    }
    s
}

/// A bisector that vanishes on every point of some family with two or more
/// members splits nothing there.
fn degenerate(cert: &BisectionCertificate) -> bool {
    cert.per_family_counts
        .iter()
        .any(|c| c.size() >= 2 && c.positive + c.negative == 0)
}

struct Best {
    slack: Rational,
    found: Option<Bisection>,
}

impl Best {
    fn offer(&mut self, b: Bisection) {
        let better = match &self.found {
            None => true,
            Some(cur) => b.certificate.key(&self.slack) < cur.certificate.key(&self.slack),
        };
        if better {
            self.found = Some(b);
        }
    }
}

fn lifted_row(p: &Point, basis: &[Exponents]) -> Vec<Rational> {
    basis
        .iter()
        .map(|e| {
            let mut v = Rational::one();
            for (&k, c) in e.iter().zip(&p.coords) {
                for _ in 0..k {
                    v *= c;
                }
            }
            v
        })
        .collect()
}

fn poly_from(basis: &[Exponents], coeffs: &[Rational], dim: usize) -> MultiPoly {
    MultiPoly::from_terms(
        dim,
        basis
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e.clone(), c.clone())),
    )
    .normalize()
}

/// Finds a polynomial in the span of the monomials `basis` whose positive and
/// negative sets each hold at most `⌈(1/2+ε)|F|⌉` points of every family.
///
/// Strategies, in order: single basis monomials (lowest degree first; the
/// first exact bisection wins), exact interpolation of a balanced sign
/// pattern on small inputs, enumeration of hyperplanes through lifted points
/// when the number of subsets fits the budget, and finally the seeded
/// floating-point search. Every candidate is recounted exactly.
pub fn bisect_in_span(
    points: &[Point],
    families: &[Vec<usize>],
    basis: &[Exponents],
    cfg: &BisectConfig,
) -> Result<Bisection> {
    let dim = points.first().map(|p| p.dim()).or_else(|| basis.first().map(|e| e.len())).unwrap_or(0);
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
    }
    for f in families {
        if let Some(&i) = f.iter().find(|&&i| i >= points.len()) {
            return Err(Error::InvalidInput(format!("point index {i} out of range")));
        }
    }
    let nonempty = families.iter().filter(|f| !f.is_empty()).count();
    if basis.len() < nonempty + 1 {
        return Err(Error::BisectionPrecondition {
            dim: basis.len(),
            families: nonempty,
        });
    }
    let zero = Rational::zero();
    let mut best = Best {
        slack: cfg.slack.clone(),
        found: None,
    };

    let mut candidates: Vec<&Exponents> = basis.iter().filter(|e| degree(e) > 0).collect();
    candidates.sort_by(|a, b| degree(a).cmp(&degree(b)).then(b.cmp(a)));
    for e in &candidates {
        let cert = BisectionCertificate::from_signs(families, |i| monomial_sign(e, &points[i]));
        if degenerate(&cert) {
            continue;
        }
        let done = cert.holds_at(&zero);
        best.offer(Bisection {
            poly: MultiPoly::monomial((*e).clone(), Rational::one()),
            certified: cert.holds_at(&cfg.slack),
            certificate: cert,
            strategy: Strategy::Monomial,
        });
        if done {
            return Ok(best.found.unwrap());
        }
    }
    if nonempty == 0 {
        let poly = candidates
            .first()
            .map(|e| MultiPoly::monomial((*e).clone(), Rational::one()))
            .unwrap_or_else(|| MultiPoly::one(dim));
        let certificate = BisectionCertificate::from_signs(families, |_| 0);
        return Ok(Bisection {
            poly,
            certificate,
            certified: true,
            strategy: Strategy::Monomial,
        });
    }

    // Rows are family memberships, so a point listed in two families counts in both.
    let mut rows: Vec<(usize, usize)> = Vec::new();
    for (f, fam) in families.iter().enumerate() {
        for &i in fam {
            rows.push((i, f));
        }
    }
    let mut distinct: Vec<usize> = rows.iter().map(|r| r.0).collect();
    distinct.sort_unstable();
    distinct.dedup();

    let coords: Vec<Vec<f64>> = rows.iter().map(|&(i, _)| points[i].to_f64()).collect();
    let objective = Objective {
        family_of: rows.iter().map(|r| r.1).collect(),
        caps: families.iter().map(|f| side_cap(f.len(), &cfg.slack)).collect(),
    };

    if distinct.len() <= cfg.interpolation_limit && distinct.len() < basis.len() {
        if let Some(b) = interpolate(points, families, basis, &distinct, &coords, &rows, dim) {
            let done = b.certificate.holds_at(&zero) && !degenerate(&b.certificate);
            let mut b = b;
            b.certified = b.certificate.holds_at(&cfg.slack) && !degenerate(&b.certificate);
            best.offer(b);
            if done {
                return Ok(best.found.unwrap());
            }
        }
    }

    let k = basis.len() - 1;
    if k <= cfg.enumeration_max_rank && distinct.len() > k && binomial(distinct.len() as u64, k as u64) <= cfg.enumeration_budget {
        if let Some(b) = enumerate(points, families, basis, &distinct, k, dim, cfg, &mut best) {
            return Ok(b);
        }
    }

    if let Some(b) = best.found.as_ref().filter(|b| b.certified) {
        return Ok(b.clone());
    }

    let full = basis.len() as u64 == binomial(basis.iter().map(degree).max().unwrap_or(0) as u64 + dim as u64, dim as u64);
    let frame = Frame::fit(distinct.iter().map(|&i| &points[i]), dim, full);
    let framed: Vec<Vec<Rational>> = rows.iter().map(|&(i, _)| frame.apply(&points[i])).collect();
    let lifted = Lifted::new(&framed, basis);
    let search = Search::new(&lifted, &objective, coords);
    let mut winner: Option<Bisection> = None;
    search.run(cfg.seed, cfg.restarts, cfg.descent_passes, |ints: &[BigInt], signs: Vec<i8>| {
        let raw = frame.compose(basis, ints, dim);
        let poly = raw.normalize();
        // Normalizing may flip the sign; the certificate must describe `poly`.
        let flip = match raw.leading_term() {
            Some((e, c)) => sign_of(c) != sign_of(&poly.coefficient(e)),
            None => false,
        };
        let mut by_point = std::collections::HashMap::new();
        for (r, &(i, _)) in rows.iter().enumerate() {
            by_point.insert(i, if flip { -signs[r] } else { signs[r] });
        }
        let cert = BisectionCertificate::from_signs(families, |i| by_point[&i]);
        let ok = cert.holds_at(&cfg.slack) && !degenerate(&cert);
        let b = Bisection {
            poly,
            certified: ok,
            certificate: cert,
            strategy: Strategy::Heuristic,
        };
        if ok {
            winner = Some(b);
            true
        } else {
            best.offer(b);
            false
        }
    });
    if let Some(b) = winner {
        return Ok(b);
    }
    Ok(best.found.expect("at least one candidate was examined"))
}

/// Solves exactly for a polynomial taking value ±1 on a balanced split of each
/// family.
fn interpolate(
    points: &[Point],
    families: &[Vec<usize>],
    basis: &[Exponents],
    distinct: &[usize],
    coords: &[Vec<f64>],
    rows: &[(usize, usize)],
    dim: usize,
) -> Option<Bisection> {
    let mut target = std::collections::HashMap::new();
    for (f, fam) in families.iter().enumerate() {
        let member_rows: Vec<usize> = rows.iter().enumerate().filter(|(_, r)| r.1 == f).map(|(k, _)| k).collect();
        let axis = (0..dim)
            .max_by(|&a, &b| {
                let spread = |i: usize| {
                    let vals: Vec<f64> = member_rows.iter().map(|&r| coords[r][i]).collect();
                    let mean = vals.iter().sum::<f64>() / vals.len().max(1) as f64;
                    vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
                };
                spread(a).total_cmp(&spread(b)).then(b.cmp(&a))
            })
            .unwrap_or(0);
        let mut order: Vec<usize> = fam.clone();
        order.sort_by(|&a, &b| points[a].coords[axis].cmp(&points[b].coords[axis]).then(a.cmp(&b)));
        let half = order.len() / 2;
        for (k, &i) in order.iter().enumerate() {
            let t = if k < half { -1 } else { 1 };
            if *target.entry(i).or_insert(t) != t {
                return None;
            }
        }
    }
    let n = basis.len();
    let system: Vec<Vec<Rational>> = distinct
        .iter()
        .map(|&i| {
            let mut r = lifted_row(&points[i], basis);
            r.push(Rational::from_integer(BigInt::from(target[&i] as i64)));
            r
        })
        .collect();
    let ech = Echelon::new(system, n + 1);
    if ech.pivots.contains(&n) {
        return None;
    }
    let mut coeffs = vec![Rational::zero(); n];
    for (row, &c) in ech.rows.iter().zip(&ech.pivots) {
        coeffs[c] = row[n].clone();
    }
    let poly = poly_from(basis, &coeffs, dim);
    let cert = BisectionCertificate::recount(&poly, families, points).ok()?;
    Some(Bisection {
        poly,
        certified: false,
        certificate: cert,
        strategy: Strategy::Interpolation,
    })
}

/// Hyperplanes in the lifted space through `k = dim(span) - 1` of the lifted
/// points, visited in lexicographic subset order.
#[allow(clippy::too_many_arguments)]
fn enumerate(
    points: &[Point],
    families: &[Vec<usize>],
    basis: &[Exponents],
    distinct: &[usize],
    k: usize,
    dim: usize,
    cfg: &BisectConfig,
    best: &mut Best,
) -> Option<Bisection> {
    let zero = Rational::zero();
    let lifted: Vec<Vec<Rational>> = distinct.iter().map(|&i| lifted_row(&points[i], basis)).collect();
    let n = distinct.len();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let ech = Echelon::new(idx.iter().map(|&j| lifted[j].clone()).collect(), basis.len());
        let ns = ech.nullspace();
        if ns.len() == 1 {
            let poly = poly_from(basis, &ns[0], dim);
            if !poly.is_constant() {
                if let Ok(cert) = BisectionCertificate::recount(&poly, families, points) {
                    let done = cert.holds_at(&zero) && !degenerate(&cert);
                    let b = Bisection {
                        poly,
                        certified: cert.holds_at(&cfg.slack) && !degenerate(&cert),
                        certificate: cert,
                        strategy: Strategy::Enumeration,
                    };
                    if done {
                        return Some(b);
                    }
                    best.offer(b);
                }
            }
        }
        // Next k-subset of 0..n.
        let mut pos = k;
        while pos > 0 && idx[pos - 1] == n - k + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            return None;
        }
        idx[pos - 1] += 1;
        for j in pos..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Bisects `families` with a polynomial of degree at most `e` in the point
/// coordinates, failing when no candidate reaches slack `ε`.
pub fn bisect_families(
    families: &[Vec<usize>],
    points: &[Point],
    e: u32,
    slack: &Rational,
    seed: u64,
) -> Result<(MultiPoly, BisectionCertificate)> {
    let dim = points.first().map(|p| p.dim()).unwrap_or(3);
    let basis = monomials_up_to(dim, e);
    let b = bisect_in_span(points, families, &basis, &BisectConfig::new(slack.clone(), seed))?;
    if b.certified {
        Ok((b.poly, b.certificate))
    } else {
        Err(Error::Uncertified {
            slack: to_f64(slack),
            best_slack: to_f64(&b.certificate.slack_used),
            best: b.poly.to_string(),
        })
    }
}
