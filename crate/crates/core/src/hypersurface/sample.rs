//! Floating-point samples of a real zero set by line shooting. Never used on
//! a certified path.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::rational::{dyadic, int, to_f64};
use crate::poly::{MultiPoly, Rational};

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceSample {
    pub coords: Vec<f64>,
    /// `|P(x)|` at the rounded coordinates.
    pub residual: f64,
}

/// Default half-width of the sampling box centered at the origin.
pub const DEFAULT_BOX: f64 = 4.0;

/// Up to `count` points near `Z(P)` inside `[-4, 4]^d`.
pub fn sample_surface_points(p: &MultiPoly, count: usize, seed: u64) -> Result<Vec<SurfaceSample>> {
    let center = vec![0.0; p.num_vars()];
    sample_surface_points_in(p, count, seed, &center, DEFAULT_BOX)
}

/// Shoots seeded rational lines through the box `center ± half_width`,
/// isolates the real roots of each restriction exactly and refines them to
/// floating-point accuracy. Samples come out in a fixed sequence, so a larger
/// `count` only appends.
pub fn sample_surface_points_in(
    p: &MultiPoly,
    count: usize,
    seed: u64,
    center: &[f64],
    half_width: f64,
) -> Result<Vec<SurfaceSample>> {
    let d = p.num_vars();
    if center.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: center.len(),
        });
    }
    if p.is_constant() {
        return if p.is_zero() {
            Err(Error::InvalidInput("zero polynomial has no isolated zero set".into()))
        } else {
            Err(Error::EmptyZeroSet { attempts: 0 })
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts = 40 * count + 100;
    let width = Rational::new(BigInt::one(), BigInt::from(1u64 << 40));
    let mut out = Vec::with_capacity(count);
    for _ in 0..attempts {
        if out.len() >= count {
            break;
        }
        let base: Vec<Rational> = center
            .iter()
            .map(|&c| dyadic(c + rng.gen_range(-half_width..half_width), 16))
            .collect();
        let mut dir: Vec<Rational> = (0..d).map(|_| int(rng.gen_range(-4..=4))).collect();
        if dir.iter().all(|v| *v == int(0)) {
            dir[0] = int(1);
        }
        let u = p.restrict_to_line(&base, &dir)?;
        let bf: Vec<f64> = base.iter().map(to_f64).collect();
        let df: Vec<f64> = dir.iter().map(to_f64).collect();
        let inside = |x: &[f64]| x.iter().zip(center).all(|(a, c)| (a - c).abs() <= half_width);
        if u.is_zero() {
            out.push(SurfaceSample {
                residual: p.eval_f64(&bf).abs(),
                coords: bf,
            });
            continue;
        }
        for iv in u.isolate_real_roots() {
            if out.len() >= count {
                break;
            }
            let iv = u.refine(&iv, &width);
            let t = to_f64(&iv.midpoint());
            let x: Vec<f64> = bf.iter().zip(&df).map(|(b, v)| b + t * v).collect();
            if inside(&x) {
                out.push(SurfaceSample {
                    residual: p.eval_f64(&x).abs(),
                    coords: x,
                });
            }
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyZeroSet { attempts });
    }
    Ok(out)
}
