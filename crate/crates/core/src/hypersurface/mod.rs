//! Partitions of point sets lying on a real hypersurface.

pub mod partition;
pub mod sample;

pub use partition::{build_surface_partition, realizations_on_surface, SurfaceConfig, SurfacePartitionResult};
pub use sample::{sample_surface_points, sample_surface_points_in, SurfaceSample};
