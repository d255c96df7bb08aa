use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SweepConfig;
use super::run::{load_dataset, run_with_dataset, RunReport, RunStatus};
use crate::error::{Error, Result};
use crate::ng::LambdaMode;
use crate::seed;
use crate::PhaseLabel;

/// One line of a sweep summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: usize,
    pub lambda: f64,
    pub repetition: usize,
    pub seed: u64,
    pub entropy: Option<f64>,
    pub proximity: Option<f64>,
    pub hausdorff: Option<f64>,
    pub alpha: Option<f64>,
    pub phase: Option<PhaseLabel>,
    /// `ok`, or `failed:<stage>`.
    pub status: String,
}

impl SweepRow {
    fn from_report(k: usize, lambda: f64, repetition: usize, report: &RunReport) -> Self {
        let m = &report.metrics;
        SweepRow {
            k,
            lambda,
            repetition,
            seed: report.seeds.run,
            entropy: m.entropy,
            proximity: m.proximity,
            hausdorff: m.hausdorff,
            alpha: m.power_law.map(|f| f.alpha),
            phase: m.phase,
            status: match &report.status {
                RunStatus::Completed => "ok".into(),
                RunStatus::Failed { stage, .. } => format!("failed:{}", stage.as_str()),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    /// Rows in cell order: k outermost, then lambda, then repetition.
    pub rows: Vec<SweepRow>,
    pub reports: Vec<RunReport>,
}

struct Cell {
    index: usize,
    k: usize,
    lambda: f64,
    repetition: usize,
}

fn cell_dir(root: &Path, cell: &Cell) -> PathBuf {
    root.join(format!(
        "cell_{:04}_k{}_lambda{}_rep{}",
        cell.index, cell.k, cell.lambda, cell.repetition
    ))
}

/// Runs every (k, lambda, repetition) cell with constant lambda.
///
/// Cell seeds derive from the base seed and the cell's grid position, so the
/// results do not depend on execution order or worker count.
pub fn sweep(config: &SweepConfig, out_dir: Option<&Path>) -> Result<SweepOutcome> {
    config.validate()?;
    let dataset = load_dataset(&config.base.dataset)?;
    let mut cells = Vec::new();
    for (ki, &k) in config.ks.iter().enumerate() {
        for (li, &lambda) in config.lambdas.iter().enumerate() {
            for repetition in 0..config.repetitions {
                cells.push(Cell {
                    index: (ki * config.lambdas.len() + li) * config.repetitions + repetition,
                    k,
                    lambda,
                    repetition,
                });
            }
        }
    }
    let run_cell = |cell: &Cell| {
        let mut cfg = config.base.clone();
        cfg.k = cell.k;
        cfg.schedule.lambda = LambdaMode::Constant {
            lambda: cell.lambda,
        };
        cfg.seed = seed::derive(
            config.base.seed,
            &[
                (cell.index / config.repetitions) as u64,
                cell.repetition as u64,
            ],
        );
        cfg.name = Some(format!(
            "{}k{}_lambda{}_rep{}",
            config
                .base
                .name
                .as_deref()
                .map(|n| format!("{n}_"))
                .unwrap_or_default(),
            cell.k,
            cell.lambda,
            cell.repetition
        ));
        let dir = out_dir.map(|d| cell_dir(d, cell));
        let run = run_with_dataset(&cfg, &dataset, dir.as_deref());
        (
            SweepRow::from_report(cell.k, cell.lambda, cell.repetition, &run.report),
            run.report,
        )
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    let results: Vec<(SweepRow, RunReport)> =
        pool.install(|| cells.par_iter().map(run_cell).collect());
    let (rows, reports): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    if let Some(dir) = out_dir {
        crate::io::write_summary(&rows, dir.join("summary.csv"))?;
        crate::io::write_json(config, dir.join("sweep.json"))?;
    }
    Ok(SweepOutcome { rows, reports })
}
