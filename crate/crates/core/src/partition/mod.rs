//! Polynomial ham sandwich partitions of finite point sets.

pub mod bisect;
pub mod build;
pub mod cells;
pub(crate) mod search;
pub mod sign;

pub use bisect::{bisect_families, bisect_in_span, BisectConfig, Bisection, BisectionCertificate, FamilyCount, Strategy};
pub use build::{build_partition, PartitionConfig, PartitionResult};
pub use cells::{cells_met_by_surfaces, count_cells_met_by_surface, sign_conditions_met, sign_conditions_on_curve};
pub use sign::{assign_cells, Cells, SignCondition};
