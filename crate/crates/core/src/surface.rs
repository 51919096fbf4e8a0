//! Algebraic surfaces with exact membership.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::rational::{int, serde_rational, to_f64};
use crate::poly::{MultiPoly, Point, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Surface {
    Sphere {
        center: Point,
        #[serde(with = "serde_rational")]
        radius_sq: Rational,
    },
    General {
        poly: MultiPoly,
    },
}

impl Surface {
    pub fn sphere(center: Point, radius_sq: Rational) -> Result<Surface> {
        if !radius_sq.is_positive() {
            return Err(Error::InvalidInput("sphere radius_sq must be positive".into()));
        }
        Ok(Surface::Sphere { center, radius_sq })
    }

    pub fn unit_sphere(center: Point) -> Surface {
        Surface::Sphere {
            center,
            radius_sq: Rational::one(),
        }
    }

    pub fn general(poly: MultiPoly) -> Result<Surface> {
        if poly.is_constant() {
            return Err(Error::InvalidInput("surface polynomial must be nonconstant".into()));
        }
        Ok(Surface::General { poly })
    }

    pub fn dim(&self) -> usize {
        match self {
            Surface::Sphere { center, .. } => center.dim(),
            Surface::General { poly } => poly.num_vars(),
        }
    }

    /// `f_S`; for a sphere `Σ (x_i - c_i)^2 - r^2`.
    pub fn defining_poly(&self) -> MultiPoly {
        match self {
            Surface::Sphere { center, radius_sq } => {
                let d = center.dim();
                let mut f = MultiPoly::constant(d, -radius_sq.clone());
                for (i, c) in center.coords.iter().enumerate() {
                    let mut dir = vec![Rational::zero(); d];
                    dir[i] = int(1);
                    let lin = MultiPoly::linear(-c.clone(), &dir);
                    f = &f + &(&lin * &lin);
                }
                f
            }
            Surface::General { poly } => poly.clone(),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Surface::Sphere { .. } => 2,
            Surface::General { poly } => poly.degree(),
        }
    }

    /// Exact membership `f_S(p) = 0`.
    pub fn contains(&self, p: &Point) -> Result<bool> {
        match self {
            Surface::Sphere { center, radius_sq } => {
                if p.dim() != center.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: center.dim(),
                        found: p.dim(),
                    });
                }
                Ok(&p.dist_sq(center) == radius_sq)
            }
            Surface::General { poly } => Ok(poly.evaluate(p)?.is_zero()),
        }
    }

    /// Deterministic, nested floating-point samples on a sphere (a Halton
    /// sequence pushed through the area-preserving cylinder map). `None` for
    /// general surfaces.
    pub fn sphere_samples(&self, count: usize) -> Option<Vec<Vec<f64>>> {
        let Surface::Sphere { center, radius_sq } = self else {
            return None;
        };
        if center.dim() != 3 {
            return None;
        }
        let c = center.to_f64();
        let r = to_f64(radius_sq).sqrt();
        Some(
            (1..=count)
                .map(|k| {
                    let z = 1.0 - 2.0 * halton(k, 2);
                    let phi = 2.0 * std::f64::consts::PI * halton(k, 3);
                    let rho = (1.0 - z * z).max(0.0).sqrt();
                    vec![c[0] + r * rho * phi.cos(), c[1] + r * rho * phi.sin(), c[2] + r * z]
                })
                .collect(),
        )
    }
}

/// Radical inverse of `k` in base `b`.
pub fn halton(mut k: usize, b: usize) -> f64 {
    let mut f = 1.0;
    let mut out = 0.0;
    while k > 0 {
        f /= b as f64;
        out += f * (k % b) as f64;
        k /= b;
    }
    out
}
