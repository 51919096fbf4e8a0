//! Sampled estimates of how many sign-condition cells a surface enters.
//! Instrumentation only: nothing certified depends on these numbers.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hypersurface::sample::sample_surface_points_in;
use crate::poly::{FloatPoly, MultiPoly};
use crate::surface::Surface;

const ZERO_TOL: f64 = 1e-10;

/// Sign vector of `polys` at `x`, or `None` when some value is too close to
/// zero to trust in floating point.
pub(crate) fn robust_signs(polys: &[FloatPoly], x: &[f64]) -> Option<Vec<i8>> {
    polys
        .iter()
        .map(|q| {
            let (v, mag) = q.eval_with_magnitude(x);
            if v.abs() <= ZERO_TOL * mag.max(f64::MIN_POSITIVE) {
                None
            } else {
                Some(if v > 0.0 { 1 } else { -1 })
            }
        })
        .collect()
}

/// Half-width of the box used to sample general surfaces.
pub const GENERAL_SAMPLING_BOX: f64 = 8.0;

fn check_polys(f: &MultiPoly, polys: &[MultiPoly]) -> Result<()> {
    for (i, q) in polys.iter().enumerate() {
        if q.num_vars() != f.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: f.num_vars(),
                found: q.num_vars(),
            });
        }
        if f.divides(q) {
            return Err(Error::SurfaceInZeroSet { index: i });
        }
    }
    Ok(())
}

fn surface_samples(surface: &Surface, f: &MultiPoly, density: usize) -> Result<Vec<Vec<f64>>> {
    if let Some(s) = surface.sphere_samples(density) {
        return Ok(s);
    }
    let center = vec![0.0; f.num_vars()];
    match sample_surface_points_in(f, density, 0, &center, GENERAL_SAMPLING_BOX) {
        Ok(s) => Ok(s.into_iter().map(|s| s.coords).collect()),
        Err(Error::EmptyZeroSet { .. }) => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

/// Strict sign conditions of `polys` seen at `density` nested samples of
/// `surface`.
pub fn sign_conditions_met(
    surface: &Surface,
    polys: &[MultiPoly],
    density: usize,
) -> Result<BTreeSet<Vec<i8>>> {
    let f = surface.defining_poly().normalize();
    check_polys(&f, polys)?;
    let samples = surface_samples(surface, &f, density)?;
    let fp: Vec<FloatPoly> = polys.iter().map(FloatPoly::new).collect();
    Ok(samples.iter().filter_map(|x| robust_signs(&fp, x)).collect())
}

/// Lower-bound estimate of the number of distinct strict sign conditions of
/// `polys` realized on `surface`, from `density` nested samples.
pub fn count_cells_met_by_surface(surface: &Surface, polys: &[MultiPoly], density: usize) -> Result<usize> {
    Ok(sign_conditions_met(surface, polys, density)?.len())
}

/// Gauss-Newton projection of `x` onto `{f = 0, g = 0}` using the
/// minimum-norm step of the 2 x d Jacobian.
fn project_to_curve(f: &FloatPoly, g: &FloatPoly, mut x: Vec<f64>) -> Option<Vec<f64>> {
    let start_norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    for _ in 0..40 {
        if f.near_zero(&x, ZERO_TOL) && g.near_zero(&x, ZERO_TOL) {
            return Some(x);
        }
        let (r1, r2) = (f.eval(&x), g.eval(&x));
        let (a, b) = (f.gradient(&x), g.gradient(&x));
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
        let (aa, ab, bb) = (dot(&a, &a), dot(&a, &b), dot(&b, &b));
        let det = aa * bb - ab * ab;
        if !det.is_finite() || det.abs() <= 1e-14 * (aa * bb).max(f64::MIN_POSITIVE) {
            return None;
        }
        let l1 = (bb * r1 - ab * r2) / det;
        let l2 = (aa * r2 - ab * r1) / det;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi -= l1 * a[i] + l2 * b[i];
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() || norm > 4.0 * (start_norm + GENERAL_SAMPLING_BOX) {
            return None;
        }
    }
    (f.near_zero(&x, ZERO_TOL) && g.near_zero(&x, ZERO_TOL)).then_some(x)
}

/// Strict sign conditions of `polys` seen on the curve `surface ∩ Z(base)`:
/// samples of the surface are pushed onto the curve by Gauss-Newton.
/// Instrumentation only, like [`sign_conditions_met`].
pub fn sign_conditions_on_curve(
    surface: &Surface,
    base: &MultiPoly,
    polys: &[MultiPoly],
    density: usize,
) -> Result<BTreeSet<Vec<i8>>> {
    let f = surface.defining_poly().normalize();
    check_polys(&f, polys)?;
    if f.divides(base) {
        return Err(Error::SurfaceInZeroSet { index: 0 });
    }
    let samples = surface_samples(surface, &f, density)?;
    let (ff, gf) = (FloatPoly::new(&f), FloatPoly::new(&base.normalize()));
    let fp: Vec<FloatPoly> = polys.iter().map(FloatPoly::new).collect();
    Ok(samples
        .into_iter()
        .filter_map(|x| project_to_curve(&ff, &gf, x))
        .filter_map(|x| robust_signs(&fp, &x))
        .collect())
}

/// Per-surface estimates and their sum `Σ n_i`.
pub fn cells_met_by_surfaces(
    surfaces: &[Surface],
    polys: &[MultiPoly],
    density: usize,
) -> Result<(Vec<usize>, usize)> {
    let per = surfaces
        .iter()
        .map(|s| count_cells_met_by_surface(s, polys, density))
        .collect::<Result<Vec<_>>>()?;
    let total = per.iter().sum();
    Ok((per, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::int;
    use crate::poly::Point;

    fn planes(k: usize) -> Vec<MultiPoly> {
        (0..k).map(|i| MultiPoly::var(3, i)).collect()
    }

    #[test]
    fn unit_sphere_meets_all_octants() {
        let s = Surface::unit_sphere(Point::origin(3));
        assert_eq!(count_cells_met_by_surface(&s, &planes(3), 400).unwrap(), 8);
        assert_eq!(count_cells_met_by_surface(&s, &planes(1), 400).unwrap(), 2);
    }

    #[test]
    fn far_sphere_meets_one_cell() {
        let s = Surface::unit_sphere(Point::from_ints(&[10, 10, 10]));
        assert_eq!(count_cells_met_by_surface(&s, &planes(3), 400).unwrap(), 1);
    }

    #[test]
    fn estimates_are_monotone_in_density() {
        let s = Surface::sphere(Point::from_ints(&[0, 0, 1]), int(2)).unwrap();
        let q = vec![MultiPoly::parse("x1*x2 - x3", 3).unwrap(), MultiPoly::parse("x1 + x2^2 - 1", 3).unwrap()];
        let mut prev = 0;
        for density in [1, 5, 20, 80, 320] {
            let n = count_cells_met_by_surface(&s, &q, density).unwrap();
            assert!(n >= prev);
            prev = n;
        }
    }

    #[test]
    fn contained_surface_is_reported() {
        let s = Surface::unit_sphere(Point::origin(3));
        let q = vec![MultiPoly::parse("(x1^2+x2^2+x3^2-1)*x1", 3).unwrap()];
        assert!(matches!(
            count_cells_met_by_surface(&s, &q, 10),
            Err(Error::SurfaceInZeroSet { index: 0 })
        ));
    }

    #[test]
    fn sphere_meets_plane_in_a_circle() {
        let s = Surface::unit_sphere(Point::origin(3));
        let base = MultiPoly::parse("x3", 3).unwrap();
        // The equator crosses the four quadrants of the x1, x2 signs.
        let seen = sign_conditions_on_curve(&s, &base, &planes(2), 200).unwrap();
        assert_eq!(seen.len(), 4);
        // A plane missing the sphere yields nothing.
        let far = MultiPoly::parse("x3 - 5", 3).unwrap();
        assert!(sign_conditions_on_curve(&s, &far, &planes(2), 200).unwrap().is_empty());
    }

    #[test]
    fn general_surface_plane() {
        let s = Surface::general(MultiPoly::parse("x3", 3).unwrap()).unwrap();
        assert_eq!(count_cells_met_by_surface(&s, &planes(2), 200).unwrap(), 4);
    }
}
