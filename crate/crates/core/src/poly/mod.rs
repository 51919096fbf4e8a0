//! Exact polynomial arithmetic over the rationals.

pub mod factored;
pub mod float;
pub mod graded;
pub mod linalg;
pub mod multipoly;
pub mod rational;
pub mod resultant;
pub mod text;
pub mod univariate;

pub use factored::FactoredPoly;
pub use float::FloatPoly;
pub use graded::{graded_slice, GradedSliceBasis};
pub use multipoly::{Exponents, MultiPoly};
pub use rational::{Point, Rational};
pub use resultant::resultant_wrt_last;
pub use univariate::{RootInterval, UniPoly};

use crate::error::{Error, Result};

/// Isolating intervals, in the line parameter `t`, for the real roots of
/// `p(base + t·dir)`.
pub fn isolate_real_roots_on_line(
    p: &MultiPoly,
    base: &Point,
    dir: &[Rational],
) -> Result<Vec<RootInterval>> {
    let u = p.restrict_to_line(&base.coords, dir)?;
    if u.is_zero() {
        return Err(Error::IdenticallyZeroRestriction);
    }
    Ok(u.isolate_real_roots())
}
