//! Real principal ideals: classification, family repair and hat-P.

pub mod classify;
pub mod irreducible;
pub mod realify;

pub use classify::{is_real_principal, Evidence, RealBudget, RealIdealVerdict, RealStatus};
pub use irreducible::{irreducibility_heuristic, Irreducibility};
pub use realify::{hat_poly, realify_family, realify_family_with_direction, HatReport, RealifyReport, Replacement};
