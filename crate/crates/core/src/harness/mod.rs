//! Experiment orchestration: single runs, λ/k sweeps and transition detection.

mod config;
mod run;
mod sweep;
mod transition;

pub use config::{
    AnalysisConfig, DatasetSource, ExperimentConfig, ReferenceConfig, ScheduleConfig, ShapeConfig,
    SweepConfig, DEFAULT_STEPS_PER_UNIT,
};
pub use run::{
    analyze_codebook, load_dataset, run_experiment, run_with_dataset, Dataset, Metrics,
    OutputFiles, Run, RunReport, RunStatus, Seeds, Stage, Timings, TracePoint,
};
pub use sweep::{sweep, SweepOutcome, SweepRow};
pub use transition::{detect_transition, Transition, TransitionMode};

/// Loads a JSON or TOML config, chosen by file extension.
pub fn load_config<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> crate::Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::Error::io(path, e))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("toml") => Ok(toml::from_str(&text)?),
        _ => Ok(serde_json::from_str(&text)?),
    }
}
