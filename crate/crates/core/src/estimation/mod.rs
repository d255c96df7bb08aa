//! Density estimation and the analysis metrics applied to trained codebooks.

mod density;
mod knn;
mod metrics;
mod phase;
mod powerlaw;

pub use density::{
    density_table, estimate_density, optimal_m0, unit_ball_volume, DensityIndex, DensityRow,
    DensityTable,
};
pub use knn::{brute_force_knn, KdTree, Neighbor};
pub use metrics::{directed_proximity, entropy, hausdorff, proximity, winner_histogram, Reference};
pub use phase::{radial_profile_classify, PhaseLabel, PhaseThresholds};
pub use powerlaw::{fit_power_law, PowerLawFit, DEFAULT_TRIM};
