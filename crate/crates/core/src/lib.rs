//! Polynomial partitioning of finite point sets in `Q^d` and exact
//! point-surface incidence counting built on it.
//!
//! Signs, certificates and counts are exact; `f64` is only used to sample
//! surfaces and steer searches.

pub mod configgen;
pub mod error;
pub mod hypersurface;
pub mod incidence;
pub mod io;
pub mod partition;
pub mod poly;
pub mod realideal;
pub mod surface;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/partitioning.md")]
    mod partitioning {}
    #[doc = include_str!("../../../book/src/surface_partition.md")]
    mod surface_partition {}
    #[doc = include_str!("../../../book/src/real_ideals.md")]
    mod real_ideals {}
    #[doc = include_str!("../../../book/src/incidences.md")]
    mod incidences {}
    #[doc = include_str!("../../../book/src/configurations.md")]
    mod configurations {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
