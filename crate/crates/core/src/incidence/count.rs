//! Exact incidence counting.

use num_traits::One;
use serde::Serialize;

use crate::error::Result;
use crate::poly::{FloatPoly, Point, Rational};
use crate::surface::Surface;

/// Surfaces with a cheap floating-point rejection test in front of the exact
/// membership check.
struct Prepared<'a> {
    surface: &'a Surface,
    center: Option<(Vec<f64>, f64)>,
    poly: Option<FloatPoly>,
}

impl<'a> Prepared<'a> {
    fn new(surface: &'a Surface) -> Self {
        match surface {
            Surface::Sphere { center, radius_sq } => Prepared {
                surface,
                center: Some((center.to_f64(), crate::poly::rational::to_f64(radius_sq))),
                poly: None,
            },
            Surface::General { poly } => Prepared {
                surface,
                center: None,
                poly: Some(FloatPoly::new(poly)),
            },
        }
    }

    fn contains(&self, p: &Point, pf: &[f64]) -> Result<bool> {
        let maybe = match (&self.center, &self.poly) {
            (Some((c, r2)), _) => {
                let d2: f64 = c.iter().zip(pf).map(|(a, b)| (a - b) * (a - b)).sum();
                let gap = (d2 - r2).abs();
                !(gap.is_finite() && gap > 1e-9 * (1.0 + d2 + r2))
            }
            (_, Some(f)) => {
                let (v, mag) = f.eval_with_magnitude(pf);
                !(v.is_finite() && mag.is_finite() && v.abs() > 1e-9 * mag)
            }
            _ => true,
        };
        if !maybe {
            return Ok(false);
        }
        self.surface.contains(p)
    }
}

/// For each point, the indices of the surfaces through it.
pub fn incidence_lists(points: &[Point], surfaces: &[Surface]) -> Result<Vec<Vec<usize>>> {
    let prepared: Vec<Prepared> = surfaces.iter().map(Prepared::new).collect();
    points
        .iter()
        .map(|p| {
            let pf = p.to_f64();
            let mut hits = Vec::new();
            for (j, s) in prepared.iter().enumerate() {
                if s.contains(p, &pf)? {
                    hits.push(j);
                }
            }
            Ok(hits)
        })
        .collect()
}

/// Number of pairs `(p, S)` with `f_S(p) = 0`, and the pairs as
/// `(point index, surface index)`.
pub fn incidences_bruteforce(points: &[Point], surfaces: &[Surface]) -> Result<(usize, Vec<(usize, usize)>)> {
    let lists = incidence_lists(points, surfaces)?;
    let pairs: Vec<(usize, usize)> = lists
        .iter()
        .enumerate()
        .flat_map(|(i, l)| l.iter().map(move |&j| (i, j)))
        .collect();
    Ok((pairs.len(), pairs))
}

/// Unordered pairs at squared distance exactly 1.
pub fn unit_distance_pairs(points: &[Point]) -> usize {
    let pf: Vec<Vec<f64>> = points.iter().map(Point::to_f64).collect();
    let one = Rational::one();
    let mut count = 0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d2: f64 = pf[i].iter().zip(&pf[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2.is_finite() && (d2 - 1.0).abs() > 1e-9 * (1.0 + d2) {
                continue;
            }
            if points[i].dist_sq(&points[j]) == one {
                count += 1;
            }
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitDistanceReport {
    pub m: usize,
    pub pairs: usize,
    /// `m^{3/2}`.
    pub bound: f64,
    pub ratio: f64,
}

pub fn unit_distance_report(points: &[Point]) -> UnitDistanceReport {
    let m = points.len();
    let pairs = unit_distance_pairs(points);
    let bound = (m as f64).powf(1.5);
    UnitDistanceReport {
        m,
        pairs,
        bound,
        ratio: if m > 0 { pairs as f64 / bound } else { 0.0 },
    }
}
