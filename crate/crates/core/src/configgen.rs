//! Deterministic point and surface families.
//!
//! Random generators draw integers from a seeded lattice and divide by a
//! fixed denominator, so every coordinate is an exact rational.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::rational::{int, parse_rational, ratio};
use crate::poly::{MultiPoly, Point, Rational};
use crate::surface::Surface;

fn default_half_width() -> i64 {
    8
}

fn default_denominator() -> i64 {
    16
}

fn default_side() -> i64 {
    10
}

fn default_one() -> String {
    "1".into()
}

fn default_zero_point() -> Vec<String> {
    vec!["0".into(); 3]
}

fn default_max_radius_sq() -> i64 {
    6
}

fn default_circle_points() -> usize {
    8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// `n^3` points `spacing · (i, j, l)`, `0 <= i, j, l < n`.
    Grid {
        n_per_side: usize,
        #[serde(default = "default_one")]
        spacing: String,
    },
    /// `m` distinct points with coordinates `k / denominator`, `|k| <= half_width · denominator`.
    RandomBox {
        m: usize,
        seed: u64,
        #[serde(default = "default_half_width")]
        half_width: i64,
        #[serde(default = "default_denominator")]
        denominator: i64,
    },
    /// `m` distinct integer points in `[0, side)^3`.
    RandomLattice {
        m: usize,
        seed: u64,
        #[serde(default = "default_side")]
        side: i64,
    },
    /// `m` distinct rational points on one sphere, plus that sphere.
    SphereRationalPoints {
        m: usize,
        seed: u64,
        #[serde(default = "default_zero_point")]
        center: Vec<String>,
        /// Rational radius (not squared).
        #[serde(default = "default_one")]
        radius: String,
    },
    /// `n` spheres with integer centers in `[0, side)^3` and integer radius
    /// squared in `1..=max_radius_sq`.
    RandomSpheres {
        n: usize,
        seed: u64,
        #[serde(default = "default_side")]
        side: i64,
        #[serde(default = "default_max_radius_sq")]
        max_radius_sq: i64,
    },
    /// The points of `of` together with a unit sphere centered at each.
    UnitSpheresAt { of: Box<GeneratorSpec> },
    /// Three spheres through the circle `x3 = 1, x1^2 + x2^2 = 1`, and
    /// `points` rational points on that circle.
    DegenerateCirclePencil {
        #[serde(default = "default_circle_points")]
        points: usize,
    },
    /// The 24-point set `(0,±1,±1), (0,±2,±2), (±1,±1,±1), (±2,±2,±2)`.
    #[serde(rename = "example_1", alias = "example1")]
    Example1,
    /// The 8 points of the first example on `x1 = 0`, with the plane `x1`.
    #[serde(rename = "example_2", alias = "example2")]
    Example2,
    /// Concatenation of several specs.
    Union { parts: Vec<GeneratorSpec> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Generated {
    pub points: Vec<Point>,
    pub surfaces: Vec<Surface>,
}

fn distinct_points<F: FnMut(&mut ChaCha8Rng) -> Point>(
    m: usize,
    capacity: Option<u128>,
    seed: u64,
    mut draw: F,
) -> Result<Vec<Point>> {
    if let Some(cap) = capacity {
        if (m as u128) > cap {
            return Err(Error::InvalidSpec(format!("cannot draw {m} distinct points from {cap}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(m);
    let mut attempts = 0usize;
    while out.len() < m {
        attempts += 1;
        if attempts > 1000 * (m + 10) {
            return Err(Error::InvalidSpec(format!("only {} distinct points found", out.len())));
        }
        let p = draw(&mut rng);
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Rational point on the unit sphere from a Pythagorean quadruple
/// parameterization of `(a, b, c, d)`.
pub fn quadruple_point(a: i64, b: i64, c: i64, d: i64) -> Option<Point> {
    let n = a * a + b * b + c * c + d * d;
    if n == 0 {
        return None;
    }
    Some(Point::new(vec![
        ratio(a * a + b * b - c * c - d * d, n),
        ratio(2 * (a * d + b * c), n),
        ratio(2 * (b * d - a * c), n),
    ]))
}

fn three_coords(raw: &[String]) -> Result<Point> {
    if raw.len() != 3 {
        return Err(Error::InvalidSpec(format!("expected 3 coordinates, got {}", raw.len())));
    }
    Point::from_strings(raw).map_err(|e| Error::InvalidSpec(e.to_string()))
}

pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    let mut out = Generated {
        points: Vec::new(),
        surfaces: Vec::new(),
    };
    match spec {
        GeneratorSpec::Grid { n_per_side, spacing } => {
            let s = parse_rational(spacing).map_err(|e| Error::InvalidSpec(e.to_string()))?;
            if !s.is_positive() {
                return Err(Error::InvalidSpec("grid spacing must be positive".into()));
            }
            let n = *n_per_side as i64;
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        out.points.push(Point::new(vec![&s * int(i), &s * int(j), &s * int(l)]));
                    }
                }
            }
        }
        GeneratorSpec::RandomBox {
            m,
            seed,
            half_width,
            denominator,
        } => {
            if *half_width <= 0 || *denominator <= 0 {
                return Err(Error::InvalidSpec("half_width and denominator must be positive".into()));
            }
            let k = half_width * denominator;
            let side = (2 * k + 1) as u128;
            out.points = distinct_points(*m, Some(side * side * side), *seed, |rng| {
                Point::new((0..3).map(|_| ratio(rng.gen_range(-k..=k), *denominator)).collect())
            })?;
        }
        GeneratorSpec::RandomLattice { m, seed, side } => {
            if *side <= 0 {
                return Err(Error::InvalidSpec("side must be positive".into()));
            }
            let cap = (*side as u128).pow(3);
            out.points = distinct_points(*m, Some(cap), *seed, |rng| {
                Point::new((0..3).map(|_| int(rng.gen_range(0..*side))).collect())
            })?;
        }
        GeneratorSpec::SphereRationalPoints {
            m,
            seed,
            center,
            radius,
        } => {
            let c = three_coords(center)?;
            let r = parse_rational(radius).map_err(|e| Error::InvalidSpec(e.to_string()))?;
            if !r.is_positive() {
                return Err(Error::InvalidSpec("radius must be positive".into()));
            }
            let bound = 4 + (*m as f64).powf(0.25).ceil() as i64 * 3;
            out.points = distinct_points(*m, None, *seed, |rng| loop {
                let q: Vec<i64> = (0..4).map(|_| rng.gen_range(-bound..=bound)).collect();
                if let Some(u) = quadruple_point(q[0], q[1], q[2], q[3]) {
                    return Point::new(
                        u.coords.iter().zip(&c.coords).map(|(x, ci)| ci + &r * x).collect(),
                    );
                }
            })?;
            out.surfaces.push(Surface::sphere(c, &r * &r)?);
        }
        GeneratorSpec::RandomSpheres {
            n,
            seed,
            side,
            max_radius_sq,
        } => {
            if *side <= 0 || *max_radius_sq <= 0 {
                return Err(Error::InvalidSpec("side and max_radius_sq must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            for _ in 0..*n {
                let c = Point::new((0..3).map(|_| int(rng.gen_range(0..*side))).collect());
                out.surfaces.push(Surface::sphere(c, int(rng.gen_range(1..=*max_radius_sq)))?);
            }
        }
        GeneratorSpec::UnitSpheresAt { of } => {
            let inner = generate(of)?;
            out.surfaces = inner.points.iter().cloned().map(Surface::unit_sphere).collect();
            out.points = inner.points;
        }
        GeneratorSpec::DegenerateCirclePencil { points } => {
            for (z, r2) in [(0, 2), (1, 1), (2, 2)] {
                out.surfaces.push(Surface::sphere(Point::from_ints(&[0, 0, z]), int(r2))?);
            }
            // (cos, sin) from (1 - s^2, 2s) / (1 + s^2), s = 0, 1, -1, 1/2, ...
            let mut params: Vec<Rational> = vec![Rational::zero()];
            let mut k = 1;
            while params.len() < *points {
                for sgn in [1, -1] {
                    params.push(ratio(sgn, 1) * ratio(k, 1));
                    params.push(ratio(sgn, 1) * ratio(1, k + 1));
                }
                k += 1;
            }
            let mut seen = BTreeSet::new();
            for s in params {
                if out.points.len() == *points {
                    break;
                }
                let den = int(1) + &s * &s;
                let p = Point::new(vec![(int(1) - &s * &s) / &den, (int(2) * &s) / &den, int(1)]);
                if seen.insert(p.clone()) {
                    out.points.push(p);
                }
            }
        }
        GeneratorSpec::Example1 => out.points = example_1(),
        GeneratorSpec::Example2 => {
            out.points = example_1()
                .into_iter()
                .filter(|p| p.coords[0].is_zero())
                .collect();
            out.surfaces.push(Surface::general(MultiPoly::var(3, 0))?);
        }
        GeneratorSpec::Union { parts } => {
            for part in parts {
                let g = generate(part)?;
                out.points.extend(g.points);
                out.surfaces.extend(g.surfaces);
            }
        }
    }
    Ok(out)
}

fn example_1() -> Vec<Point> {
    let mut pts = Vec::with_capacity(24);
    for a in [1i64, 2] {
        for s2 in [1, -1] {
            for s3 in [1, -1] {
                pts.push(Point::from_ints(&[0, s2 * a, s3 * a]));
            }
        }
    }
    for a in [1i64, 2] {
        for s1 in [1, -1] {
            for s2 in [1, -1] {
                for s3 in [1, -1] {
                    pts.push(Point::from_ints(&[s1 * a, s2 * a, s3 * a]));
                }
            }
        }
    }
    pts
}
