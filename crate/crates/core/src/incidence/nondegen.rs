//! Hypothesis checks on a point-surface configuration.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::count::incidence_lists;
use crate::error::{Error, Result};
use crate::poly::rational::serde_rational;
use crate::poly::{MultiPoly, Point, Rational};
use crate::surface::Surface;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NondegeneracyParams {
    /// Any `k` points lie on at most `c` common surfaces.
    pub k: usize,
    pub c: usize,
}

impl NondegeneracyParams {
    pub fn new(k: usize, c: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidInput(format!("k must be at least 3, got {k}")));
        }
        if c < 1 {
            return Err(Error::InvalidInput("C must be at least 1".into()));
        }
        Ok(NondegeneracyParams { k, c })
    }
}

/// Work limits for the brute-force checks.
#[derive(Clone, Copy, Debug)]
pub struct CheckLimits {
    pub max_sphere_pairs: usize,
    pub max_search_nodes: usize,
    /// Overloaded point sets listed in the report (all are counted).
    pub max_listed: usize,
}

impl Default for CheckLimits {
    fn default() -> Self {
        CheckLimits {
            max_sphere_pairs: 5_000_000,
            max_search_nodes: 5_000_000,
            max_listed: 20,
        }
    }
}

/// Three or more spheres through one circle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommonCircle {
    pub spheres: Vec<usize>,
    /// The radical plane, normalized so its first nonzero linear coefficient is 1.
    pub plane: MultiPoly,
    pub center: Point,
    #[serde(with = "serde_rational")]
    pub radius_sq: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverloadedSet {
    pub points: Vec<usize>,
    pub surfaces: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NondegeneracyReport {
    pub params: NondegeneracyParams,
    pub common_circles: Vec<CommonCircle>,
    pub overloaded: Vec<OverloadedSet>,
    pub overloaded_count: usize,
    /// Pairs `(i, j)`, `i < j`, with the same zero set description.
    pub duplicates: Vec<(usize, usize)>,
    /// Common curves among triples involving general surfaces are not tested.
    pub general_triples_unchecked: bool,
    /// Smoothness of the surfaces is never checked.
    pub smoothness_checked: bool,
    pub passed: bool,
}

type CircleKey = (Vec<Rational>, Rational);

struct Circle {
    plane_normal: Vec<Rational>,
    plane_rhs: Rational,
    center: Point,
    radius_sq: Rational,
}

/// The circle `S_i ∩ S_j`, when it is a real circle of positive radius.
fn pair_circle(ci: &Point, ri: &Rational, cj: &Point, rj: &Rational) -> Option<Circle> {
    // f_i - f_j = 0  <=>  2 (c_j - c_i)·x = |c_j|^2 - |c_i|^2 + r_i^2 - r_j^2.
    let normal: Vec<Rational> = cj.coords.iter().zip(&ci.coords).map(|(a, b)| a - b).collect();
    let lead = normal.iter().find(|v| !v.is_zero())?.clone();
    let norm_sq = |p: &Point| p.coords.iter().fold(Rational::zero(), |acc, v| acc + v * v);
    let rhs = (norm_sq(cj) - norm_sq(ci) + ri - rj) / (Rational::from_integer(2.into()) * &lead);
    let n: Vec<Rational> = normal.iter().map(|v| v / &lead).collect();
    let nn = n.iter().fold(Rational::zero(), |acc, v| acc + v * v);
    let offset = &rhs - n.iter().zip(&ci.coords).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
    let dist_sq = &offset * &offset / &nn;
    let radius_sq = ri - dist_sq;
    if !radius_sq.is_positive() {
        return None;
    }
    let t = &offset / &nn;
    let center = Point::new(ci.coords.iter().zip(&n).map(|(c, v)| c + v * &t).collect());
    Some(Circle {
        plane_normal: n,
        plane_rhs: rhs,
        center,
        radius_sq,
    })
}

fn common_circles(surfaces: &[Surface], limits: &CheckLimits) -> Result<Vec<CommonCircle>> {
    let spheres: Vec<(usize, &Point, &Rational)> = surfaces
        .iter()
        .enumerate()
        .filter_map(|(i, s)| match s {
            Surface::Sphere { center, radius_sq } => Some((i, center, radius_sq)),
            _ => None,
        })
        .collect();
    let pairs = spheres.len() * spheres.len().saturating_sub(1) / 2;
    if pairs > limits.max_sphere_pairs {
        return Err(Error::Feasibility(format!("{pairs} sphere pairs exceed {}", limits.max_sphere_pairs)));
    }
    let mut groups: BTreeMap<(CircleKey, Vec<Rational>, Rational), BTreeSet<usize>> = BTreeMap::new();
    for a in 0..spheres.len() {
        for b in a + 1..spheres.len() {
            let (i, ci, ri) = spheres[a];
            let (j, cj, rj) = spheres[b];
            if let Some(c) = pair_circle(ci, ri, cj, rj) {
                let key = ((c.plane_normal, c.plane_rhs), c.center.coords, c.radius_sq);
                let g = groups.entry(key).or_default();
                g.insert(i);
                g.insert(j);
            }
        }
    }
    Ok(groups
        .into_iter()
        .filter(|(_, g)| g.len() >= 3)
        .map(|(((normal, rhs), center, radius_sq), g)| CommonCircle {
            spheres: g.into_iter().collect(),
            plane: MultiPoly::linear(-rhs, &normal),
            center: Point::new(center),
            radius_sq,
        })
        .collect())
}

fn duplicates(surfaces: &[Surface]) -> Vec<(usize, usize)> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut out = Vec::new();
    let mut by_key: Vec<(usize, String)> = surfaces
        .iter()
        .enumerate()
        .map(|(i, s)| (i, s.defining_poly().normalize().to_string()))
        .collect();
    by_key.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    for (i, key) in by_key {
        match seen.get(&key) {
            Some(&first) => out.push((first, i)),
            None => {
                seen.insert(key, i);
            }
        }
    }
    out.sort_unstable();
    out
}

struct Search<'a> {
    lists: &'a [Vec<usize>],
    candidates: Vec<usize>,
    k: usize,
    c: usize,
    nodes: usize,
    limits: &'a CheckLimits,
    found: Vec<OverloadedSet>,
    count: usize,
}

impl Search<'_> {
    fn run(&mut self, start: usize, chosen: &mut Vec<usize>, common: &[usize]) -> Result<()> {
        if chosen.len() == self.k {
            self.count += 1;
            if self.found.len() < self.limits.max_listed {
                self.found.push(OverloadedSet {
                    points: chosen.clone(),
                    surfaces: common.to_vec(),
                });
            }
            return Ok(());
        }
        for idx in start..self.candidates.len() {
            if self.candidates.len() - idx < self.k - chosen.len() {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.limits.max_search_nodes {
                return Err(Error::Feasibility(format!(
                    "k-point search exceeded {} nodes",
                    self.limits.max_search_nodes
                )));
            }
            let p = self.candidates[idx];
            let next: Vec<usize> = if chosen.is_empty() {
                self.lists[p].clone()
            } else {
                let set: BTreeSet<usize> = self.lists[p].iter().copied().collect();
                common.iter().copied().filter(|s| set.contains(s)).collect()
            };
            if next.len() > self.c {
                chosen.push(p);
                self.run(idx + 1, chosen, &next)?;
                chosen.pop();
            }
        }
        Ok(())
    }
}

/// Flags sphere triples through a common circle, `k`-point sets on more
/// than `C` surfaces, and repeated surfaces.
pub fn check_nondegeneracy(
    surfaces: &[Surface],
    points: &[Point],
    params: &NondegeneracyParams,
) -> Result<NondegeneracyReport> {
    check_nondegeneracy_with(surfaces, points, params, &CheckLimits::default())
}

pub fn check_nondegeneracy_with(
    surfaces: &[Surface],
    points: &[Point],
    params: &NondegeneracyParams,
    limits: &CheckLimits,
) -> Result<NondegeneracyReport> {
    let circles = common_circles(surfaces, limits)?;
    let dups = duplicates(surfaces);
    let lists = incidence_lists(points, surfaces)?;
    let candidates: Vec<usize> = (0..points.len()).filter(|&i| lists[i].len() > params.c).collect();
    let mut search = Search {
        lists: &lists,
        candidates,
        k: params.k,
        c: params.c,
        nodes: 0,
        limits,
        found: Vec::new(),
        count: 0,
    };
    search.run(0, &mut Vec::new(), &[])?;
    let general = surfaces.iter().filter(|s| matches!(s, Surface::General { .. })).count();
    let passed = circles.is_empty() && dups.is_empty() && search.count == 0;
    Ok(NondegeneracyReport {
        params: *params,
        common_circles: circles,
        overloaded: search.found,
        overloaded_count: search.count,
        duplicates: dups,
        general_triples_unchecked: general > 0 && surfaces.len() >= 3,
        smoothness_checked: false,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, ratio};
    use rand::{Rng, SeedableRng};

    fn sphere(c: &[i64], r2: i64) -> Surface {
        Surface::sphere(Point::from_ints(c), int(r2)).unwrap()
    }

    fn params() -> NondegeneracyParams {
        NondegeneracyParams::new(3, 2).unwrap()
    }

    #[test]
    fn pencil_triple_is_flagged() {
        let s = vec![sphere(&[0, 0, 0], 2), sphere(&[0, 0, 1], 1), sphere(&[0, 0, 2], 2)];
        let r = check_nondegeneracy(&s, &[], &params()).unwrap();
        assert!(!r.passed);
        assert_eq!(r.common_circles.len(), 1);
        let c = &r.common_circles[0];
        assert_eq!(c.spheres, vec![0, 1, 2]);
        assert_eq!(c.plane, MultiPoly::parse("x3 - 1", 3).unwrap());
        assert_eq!(c.center, Point::from_ints(&[0, 0, 1]));
        assert_eq!(c.radius_sq, int(1));
        // Oracle: rational points of that circle lie on all three spheres.
        for p in [[ratio(3, 5), ratio(4, 5)], [int(0), int(-1)], [ratio(-5, 13), ratio(12, 13)]] {
            let x = Point::new(vec![p[0].clone(), p[1].clone(), int(1)]);
            assert!(s.iter().all(|s| s.contains(&x).unwrap()));
        }
    }

    #[test]
    fn collinear_centers_without_shared_circle_pass() {
        let s = vec![sphere(&[0, 0, 0], 2), sphere(&[0, 0, 1], 1), sphere(&[0, 0, 2], 3)];
        assert!(check_nondegeneracy(&s, &[], &params()).unwrap().passed);
        let s = vec![sphere(&[0, 0, 0], 1), sphere(&[1, 0, 0], 1), sphere(&[0, 1, 0], 1)];
        assert!(check_nondegeneracy(&s, &[], &params()).unwrap().passed);
    }

    #[test]
    fn tangent_spheres_share_no_circle() {
        let s = vec![sphere(&[0, 0, 0], 1), sphere(&[0, 0, 2], 1), sphere(&[0, 0, 3], 4)];
        assert!(check_nondegeneracy(&s, &[], &params()).unwrap().common_circles.is_empty());
    }

    #[test]
    fn repeated_spheres_are_flagged() {
        let s: Vec<Surface> = (0..3).map(|_| sphere(&[0, 0, 0], 1)).collect();
        let pts = vec![Point::from_ints(&[1, 0, 0]), Point::from_ints(&[0, 1, 0]), Point::from_ints(&[0, 0, 1])];
        let r = check_nondegeneracy(&s, &pts, &params()).unwrap();
        assert!(!r.passed);
        assert_eq!(r.duplicates, vec![(0, 1), (0, 2)]);
        assert_eq!(r.overloaded_count, 1);
        assert_eq!(r.overloaded[0].surfaces, vec![0, 1, 2]);
    }

    #[test]
    fn random_generic_triples_pass() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut tested = 0;
        while tested < 50 {
            let centers: Vec<[i64; 3]> = (0..3)
                .map(|_| [0; 3].map(|_| rng.gen_range(-20..=20)))
                .collect();
            let u: Vec<i64> = (0..3).map(|i| centers[1][i] - centers[0][i]).collect();
            let v: Vec<i64> = (0..3).map(|i| centers[2][i] - centers[0][i]).collect();
            let cross = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
            if cross == [0, 0, 0] {
                continue;
            }
            let s: Vec<Surface> = centers.iter().map(|c| sphere(c, rng.gen_range(1..=400))).collect();
            assert!(check_nondegeneracy(&s, &[], &params()).unwrap().common_circles.is_empty());
            tested += 1;
        }
    }

    #[test]
    fn search_guard() {
        let s: Vec<Surface> = (0..4).map(|_| sphere(&[0, 0, 0], 1)).collect();
        let pts: Vec<Point> = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, 0, 0]].iter().map(|c| Point::from_ints(c)).collect();
        let tight = CheckLimits {
            max_search_nodes: 2,
            ..CheckLimits::default()
        };
        assert!(matches!(
            check_nondegeneracy_with(&s, &pts, &params(), &tight),
            Err(Error::Feasibility(_))
        ));
        assert!(NondegeneracyParams::new(2, 1).is_err());
    }
}
