//! Neural Gas vector quantization and the tooling needed to study its
//! magnification and shape effects: seeded dataset generators, an exact
//! distance-to-measure density estimator, geometric metrics, persistence
//! formats and a batch experiment harness.
//!
//! The crate is organized bottom-up:
//!
//! * [`ng`] trains a [`Codebook`] with the rank-based soft-competitive update.
//! * [`distributions`] generates the benchmark point clouds.
//! * [`estimation`] holds the density estimator and every analysis metric.
//! * [`io`] reads and writes clouds, density tables and run reports.
//! * [`harness`] wires everything into single runs, sweeps and transition
//!   detection.

pub mod cloud;
pub mod distributions;
pub mod error;
pub mod estimation;
pub mod harness;
pub mod io;
pub mod ng;
pub mod seed;

pub use cloud::PointCloud;
pub use distributions::{DatasetSpec, MeshShape, NoiseSpec, ShapeSpec};
pub use error::{Error, Result};
pub use estimation::{DensityIndex, DensityRow, DensityTable, PhaseLabel, PowerLawFit, Reference};
pub use harness::{ExperimentConfig, RunReport, SweepConfig, SweepRow};
pub use ng::{Codebook, LambdaMode, RankVector, TrainingSchedule};
