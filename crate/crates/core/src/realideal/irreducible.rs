//! A one-sided irreducibility test: reducibility is only ever reported with
//! verified factors.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::classify::{random_direction, random_rational};
use crate::poly::linalg::Echelon;
use crate::poly::rational::int;
use crate::poly::{MultiPoly, Point, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Irreducibility {
    /// No factor found. `certified_over_q` is set when a line restriction of
    /// full degree at most 3 has no rational root, which rules out any
    /// factorization over the rationals.
    IrreducibleLikely { certified_over_q: bool },
    /// `P` equals a constant times the product of `factors` (with repetition).
    Reducible { factors: Vec<MultiPoly> },
    Unknown { reason: String },
}

/// Splits off monomial factors `x_i^k`, returning them with the cofactor.
fn monomial_factors(p: &MultiPoly) -> (Vec<MultiPoly>, MultiPoly) {
    let d = p.num_vars();
    let mins: Vec<u32> = (0..d)
        .map(|i| p.terms().map(|(e, _)| e[i]).min().unwrap_or(0))
        .collect();
    if mins.iter().all(|&m| m == 0) {
        return (Vec::new(), p.clone());
    }
    let mut factors = Vec::new();
    for (i, &m) in mins.iter().enumerate() {
        for _ in 0..m {
            factors.push(MultiPoly::var(d, i));
        }
    }
    let cofactor = MultiPoly::from_terms(
        d,
        p.terms().map(|(e, c)| (e.iter().zip(&mins).map(|(a, b)| a - b).collect(), c.clone())),
    );
    (factors, cofactor)
}

/// The affine hyperplane through `d` points, if they span one.
fn hyperplane_through(points: &[&Point]) -> Option<MultiPoly> {
    let d = points[0].dim();
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            let mut r = p.coords.clone();
            r.push(int(1));
            r
        })
        .collect();
    let ns = Echelon::new(rows, d + 1).nullspace();
    if ns.len() != 1 {
        return None;
    }
    let v = &ns[0];
    if v[..d].iter().all(Zero::is_zero) {
        return None;
    }
    Some(MultiPoly::linear(v[d].clone(), &v[..d]).normalize())
}

/// Linear factors found through rational zeros on seeded lines.
fn linear_factors(p: &MultiPoly, rng: &mut ChaCha8Rng, lines: usize, budget: usize) -> Vec<MultiPoly> {
    let d = p.num_vars();
    let mut zeros: Vec<Point> = Vec::new();
    for _ in 0..lines {
        let base = random_rational(rng, d, 3, 2);
        let dir = random_direction(rng, d);
        let Ok(u) = p.restrict_to_line(&base, &dir) else {
            continue;
        };
        if u.is_zero() {
            continue;
        }
        let b = Point::new(base);
        for r in u.rational_roots() {
            zeros.push(b.along(&dir, &r));
        }
    }
    let mut found: Vec<MultiPoly> = Vec::new();
    let mut rest = p.clone();
    let n = zeros.len();
    if n < d {
        return found;
    }
    let mut idx: Vec<usize> = (0..d).collect();
    let mut tried = 0;
    'outer: loop {
        tried += 1;
        if tried > budget || rest.degree() <= 1 {
            break;
        }
        let pts: Vec<&Point> = idx.iter().map(|&i| &zeros[i]).collect();
        if let Some(l) = hyperplane_through(&pts) {
            if !found.contains(&l) {
                while let Some(q) = rest.exact_div(&l) {
                    found.push(l.clone());
                    rest = q;
                    if rest.is_constant() {
                        break 'outer;
                    }
                }
            }
        }
        let mut pos = d;
        while pos > 0 && idx[pos - 1] == n - d + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        idx[pos - 1] += 1;
        for j in pos..d {
            idx[j] = idx[j - 1] + 1;
        }
    }
    found
}

/// Looks for monomial and linear factors; falls back to a line-restriction
/// certificate or "likely irreducible". Never reports reducible without exact
/// division witnesses.
pub fn irreducibility_heuristic(p: &MultiPoly, seed: u64) -> Irreducibility {
    if p.is_constant() {
        return Irreducibility::Unknown {
            reason: "constant polynomial".into(),
        };
    }
    let d = p.num_vars();
    let (mut factors, rest) = monomial_factors(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rest = rest;
    if rest.degree() >= 2 {
        for l in linear_factors(&rest, &mut rng, 40, 4000) {
            rest = rest.exact_div(&l).expect("factor was verified");
            factors.push(l);
        }
    }
    if !factors.is_empty() {
        if !rest.is_constant() {
            factors.push(rest.normalize());
        }
        if factors.len() >= 2 {
            return Irreducibility::Reducible { factors };
        }
        return Irreducibility::IrreducibleLikely {
            certified_over_q: factors[0].degree() == 1,
        };
    }
    if p.degree() == 1 {
        return Irreducibility::IrreducibleLikely { certified_over_q: true };
    }
    let mut certified = false;
    if p.degree() <= 3 {
        for _ in 0..20 {
            let base = random_rational(&mut rng, d, 3, 2);
            let dir = random_direction(&mut rng, d);
            let Ok(u) = p.restrict_to_line(&base, &dir) else {
                continue;
            };
            if u.degree() == Some(p.degree() as usize) && u.rational_roots().is_empty() {
                certified = true;
                break;
            }
        }
    }
    Irreducibility::IrreducibleLikely {
        certified_over_q: certified,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s, 3).unwrap()
    }

    fn product(fs: &[MultiPoly]) -> MultiPoly {
        fs.iter().fold(MultiPoly::one(3), |acc, f| &acc * f)
    }

    #[test]
    fn monomial_is_reducible() {
        match irreducibility_heuristic(&p("x1 x2 x3"), 0) {
            Irreducibility::Reducible { factors } => {
                assert_eq!(factors, vec![p("x1"), p("x2"), p("x3")]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn difference_of_squares() {
        let q = p("x1^2 - x2^2");
        match irreducibility_heuristic(&q, 0) {
            Irreducibility::Reducible { factors } => {
                assert_eq!(factors.len(), 2);
                assert!(factors.contains(&p("x1 - x2")) && factors.contains(&p("x1 + x2")));
                assert_eq!(product(&factors).normalize(), q.normalize());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sphere_is_irreducible_over_q() {
        assert_eq!(
            irreducibility_heuristic(&p("x1^2 + x2^2 + x3^2 - 1"), 0),
            Irreducibility::IrreducibleLikely { certified_over_q: true }
        );
    }

    #[test]
    fn repeated_linear_factor() {
        let q = p("(x1 + x2 - 1)^2 * (x3 - 2)");
        match irreducibility_heuristic(&q, 5) {
            Irreducibility::Reducible { factors } => {
                assert_eq!(product(&factors).normalize(), q.normalize());
            }
            other => panic!("{other:?}"),
        }
    }
}
