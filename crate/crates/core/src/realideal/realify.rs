//! Replacing members whose ideals are not real by lower-degree polynomials
//! whose zero sets contain theirs, and dropping non-real factors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::classify::{is_real_principal, probe_zeros, RealBudget, RealIdealVerdict, RealStatus};
use super::irreducible::{irreducibility_heuristic, Irreducibility};
use crate::error::{Error, Result};
use crate::poly::rational::int;
use crate::poly::{FactoredPoly, MultiPoly, Rational};

#[derive(Clone, Debug, Serialize)]
pub struct Replacement {
    pub original: MultiPoly,
    pub direction: Vec<String>,
    pub derivative: MultiPoly,
    pub produced: Vec<MultiPoly>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealifyReport {
    pub members: Vec<MultiPoly>,
    pub replacements: Vec<Replacement>,
    /// Members whose classification stayed unknown; passed through unchanged.
    pub flagged: Vec<MultiPoly>,
    pub degree_before: u32,
    pub degree_after: u32,
}

struct Realifier {
    rng: ChaCha8Rng,
    first_direction: Option<Vec<Rational>>,
    seed: u64,
    report: RealifyReport,
}

impl Realifier {
    fn direction(&mut self, d: usize) -> Vec<Rational> {
        if let Some(v) = self.first_direction.take() {
            return v;
        }
        loop {
            let v: Vec<Rational> = (0..d).map(|_| int(self.rng.gen_range(-5..=5))).collect();
            if v.iter().any(|c| *c != int(0)) {
                return v;
            }
        }
    }

    fn push_member(&mut self, p: MultiPoly) {
        if !self.report.members.contains(&p) {
            self.report.members.push(p);
        }
    }

    fn process(&mut self, p: MultiPoly) -> Result<()> {
        let p = p.normalize();
        let verdict = is_real_principal(&p, &RealBudget::default(), self.seed);
        match verdict.status {
            RealStatus::Real => {
                self.push_member(p);
                return Ok(());
            }
            RealStatus::Unknown => {
                self.report.flagged.push(p.clone());
                self.push_member(p);
                return Ok(());
            }
            RealStatus::NotReal => {}
        }
        let d = p.num_vars();
        let mut probe_rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5eed);
        let zeros = probe_zeros(&p, 20, &mut probe_rng).exact;
        for _ in 0..16 {
            let v = self.direction(d);
            let grad = p.directional_derivative(&v)?;
            if grad.is_zero() {
                continue;
            }
            // Genericity check: the derivative must vanish on every known zero.
            if zeros.iter().any(|z| grad.sign_at(z).map(|s| s != 0).unwrap_or(true)) {
                continue;
            }
            let grad = grad.normalize();
            let produced: Vec<MultiPoly> = if grad.is_constant() {
                Vec::new()
            } else {
                match irreducibility_heuristic(&grad, self.seed) {
                    Irreducibility::Reducible { factors } => {
                        let mut uniq: Vec<MultiPoly> = Vec::new();
                        for f in factors {
                            if !uniq.contains(&f) {
                                uniq.push(f);
                            }
                        }
                        uniq
                    }
                    _ => vec![grad.clone()],
                }
            };
            self.report.replacements.push(Replacement {
                original: p.clone(),
                direction: v.iter().map(|c| c.to_string()).collect(),
                derivative: grad,
                produced: produced.clone(),
            });
            for q in produced {
                self.process(q)?;
            }
            return Ok(());
        }
        self.report.flagged.push(p.clone());
        self.push_member(p);
        Ok(())
    }
}

fn realify(a: &[MultiPoly], direction: Option<Vec<Rational>>, seed: u64) -> Result<RealifyReport> {
    if let Some(p) = a.iter().find(|p| p.is_constant()) {
        return Err(Error::InvalidInput(format!("constant member {p}")));
    }
    let mut r = Realifier {
        rng: ChaCha8Rng::seed_from_u64(seed),
        first_direction: direction,
        seed,
        report: RealifyReport {
            members: Vec::new(),
            replacements: Vec::new(),
            flagged: Vec::new(),
            degree_before: a.iter().map(MultiPoly::degree).sum(),
            degree_after: 0,
        },
    };
    for p in a {
        r.process(p.clone())?;
    }
    r.report.degree_after = r.report.members.iter().map(MultiPoly::degree).sum();
    Ok(r.report)
}

/// Every member whose ideal is not real is replaced by the factors of a
/// directional derivative `∇_v P` (seeded generic `v`), recursively, until all
/// members are real or unknown. Zero sets only grow and `Σ deg` never increases.
pub fn realify_family(a: &[MultiPoly], seed: u64) -> Result<RealifyReport> {
    realify(a, None, seed)
}

/// As [`realify_family`], with `v` used for the first replacement.
pub fn realify_family_with_direction(a: &[MultiPoly], v: &[Rational], seed: u64) -> Result<RealifyReport> {
    if v.iter().all(|c| *c == int(0)) {
        return Err(Error::ZeroDirection);
    }
    realify(a, Some(v.to_vec()), seed)
}

#[derive(Clone, Debug, Serialize)]
pub struct HatReport {
    pub hat: FactoredPoly,
    pub verdicts: Vec<(MultiPoly, RealIdealVerdict)>,
    /// Factors with unknown classification, kept conservatively.
    pub flagged: Vec<MultiPoly>,
}

/// Keeps the factors whose ideals are real (and, flagged, the unknown ones);
/// the empty product stands for the constant 1.
pub fn hat_poly(p: &FactoredPoly, seed: u64) -> Result<HatReport> {
    let mut kept = Vec::new();
    let mut verdicts = Vec::new();
    let mut flagged = Vec::new();
    for (f, m) in p.factors() {
        let v = is_real_principal(f, &RealBudget::default(), seed);
        match v.status {
            RealStatus::Real => kept.push((f.clone(), *m)),
            RealStatus::Unknown => {
                flagged.push(f.clone());
                kept.push((f.clone(), *m));
            }
            RealStatus::NotReal => {}
        }
        verdicts.push((f.clone(), v));
    }
    Ok(HatReport {
        hat: FactoredPoly::new(p.num_vars(), kept)?,
        verdicts,
        flagged,
    })
}
