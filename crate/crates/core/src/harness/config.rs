use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::distributions::{NoiseSpec, DEFAULT_POINTS};
use crate::error::{Error, Result};
use crate::estimation::DEFAULT_TRIM;
use crate::ng::{LambdaMode, TrainingSchedule};

/// Training length per unit when no explicit step count is configured.
pub const DEFAULT_STEPS_PER_UNIT: u64 = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ShapeConfig {
    Point {
        center: Vec<f64>,
    },
    Circle,
    Disk,
    Sphere,
    Ball {
        #[serde(default = "one")]
        radius: f64,
        center: Vec<f64>,
    },
    Mesh {
        path: PathBuf,
        #[serde(default)]
        normalize: bool,
    },
}

fn one() -> f64 {
    1.0
}

fn default_points() -> usize {
    DEFAULT_POINTS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DatasetSource {
    Generated {
        shape: ShapeConfig,
        #[serde(default = "no_noise")]
        noise: NoiseSpec,
        #[serde(default = "default_points")]
        n_points: usize,
        #[serde(default)]
        seed: u64,
    },
    File {
        path: PathBuf,
        #[serde(default)]
        dim: Option<usize>,
    },
}

fn no_noise() -> NoiseSpec {
    NoiseSpec::None
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScheduleConfig {
    pub eps_initial: f64,
    pub eps_final: f64,
    pub lambda: LambdaMode,
    /// Explicit step count; overrides `steps_per_unit`.
    pub total_steps: Option<u64>,
    pub steps_per_unit: u64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig {
            eps_initial: TrainingSchedule::EPS_INITIAL,
            eps_final: TrainingSchedule::EPS_FINAL,
            lambda: LambdaMode::Constant { lambda: 0.0 },
            total_steps: None,
            steps_per_unit: DEFAULT_STEPS_PER_UNIT,
        }
    }
}

impl ScheduleConfig {
    pub fn resolve(&self, k: usize) -> Result<TrainingSchedule> {
        let total_steps = self
            .total_steps
            .unwrap_or(self.steps_per_unit.saturating_mul(k as u64));
        let s = TrainingSchedule {
            eps_initial: self.eps_initial,
            eps_final: self.eps_final,
            lambda: self.lambda,
            total_steps,
        };
        s.validate()?;
        Ok(s)
    }
}

/// A set that units are compared against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ReferenceConfig {
    /// The noiseless shape of a generated dataset: exact for circle, sphere,
    /// ball, disk and point; the (normalized) cloud for meshes.
    Shape,
    Sphere {
        center: Vec<f64>,
        radius: f64,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Cloud {
        path: PathBuf,
    },
    /// The training cloud itself.
    Data,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisConfig {
    /// Monte-Carlo energy and distortion over `energy_signals` data points.
    pub energy: bool,
    pub energy_signals: usize,
    pub density_table: bool,
    /// Fit the magnification exponent (implies the density table).
    pub power_law: bool,
    pub trim: f64,
    pub entropy: bool,
    pub eval_signals: usize,
    pub proximity: Option<ReferenceConfig>,
    pub hausdorff: Option<ReferenceConfig>,
    /// Points sampled on analytic shapes when a cloud reference is needed.
    pub reference_points: usize,
    /// Radial phase classification about this center.
    pub phase_center: Option<Vec<f64>>,
    pub write_snapshots: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            energy: false,
            energy_signals: 10_000,
            density_table: false,
            power_law: false,
            trim: DEFAULT_TRIM,
            entropy: false,
            eval_signals: 100_000,
            proximity: None,
            hausdorff: None,
            reference_points: 20_000,
            phase_center: None,
            write_snapshots: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub dataset: DatasetSource,
    pub k: usize,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub seed: u64,
    /// Record a trace point every this many steps; 0 disables tracing.
    #[serde(default)]
    pub trace_every: u64,
    #[serde(default)]
    pub analysis: AnalysisConfig,
}

impl ExperimentConfig {
    pub fn new(dataset: DatasetSource, k: usize, lambda: f64) -> Self {
        ExperimentConfig {
            name: None,
            dataset,
            k,
            schedule: ScheduleConfig {
                lambda: LambdaMode::Constant { lambda },
                ..ScheduleConfig::default()
            },
            seed: 0,
            trace_every: 0,
            analysis: AnalysisConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.analysis.trim) {
            return Err(Error::invalid("trim must lie in [0, 1)"));
        }
        if self.analysis.entropy && self.analysis.eval_signals == 0 {
            return Err(Error::invalid(
                "entropy needs at least one evaluation signal",
            ));
        }
        self.schedule.resolve(self.k).map(|_| ())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub base: ExperimentConfig,
    pub lambdas: Vec<f64>,
    pub ks: Vec<usize>,
    #[serde(default = "one_usize")]
    pub repetitions: usize,
    #[serde(default = "one_usize")]
    pub workers: usize,
}

fn one_usize() -> usize {
    1
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty() || self.ks.is_empty() || self.repetitions == 0 {
            return Err(Error::invalid(
                "sweep grid is empty: need at least one lambda, one k and one repetition",
            ));
        }
        if self.lambdas.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
            return Err(Error::invalid("sweep lambdas must be finite and >= 0"));
        }
        Ok(())
    }

    /// Integer grid `0..=max`.
    pub fn integer_lambdas(max: u32) -> Vec<f64> {
        (0..=max).map(f64::from).collect()
    }
}
