pub mod bounds;
pub mod count;
pub mod nondegen;
pub mod pipeline;
pub mod sweep;

pub use bounds::{canham_bounds, choose_d, choose_e, kst_threshold, theoretical_bound, Bucket, Regime};
pub use count::{incidence_lists, incidences_bruteforce, unit_distance_pairs, unit_distance_report, UnitDistanceReport};
pub use nondegen::{check_nondegeneracy, NondegeneracyParams, NondegeneracyReport};
pub use pipeline::{run_pipeline, IncidenceReport, PipelineConfig};
pub use sweep::{rows_to_csv, sweep, SweepConfig, SweepFamily, SweepRow};
