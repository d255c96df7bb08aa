use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sweep::SweepRow;
use crate::PhaseLabel;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum TransitionMode {
    /// Smallest lambda whose configuration is an empty shell.
    Shell,
    /// Lambda minimizing the proximity metric.
    MinProximity,
    /// Smallest lambda whose entropy reaches the threshold.
    EntropyAtLeast { threshold: f64 },
}

/// Detected transition for one (k, repetition) series; `lambda` is `None`
/// when the grid does not bracket it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub k: usize,
    pub repetition: usize,
    pub lambda: Option<f64>,
}

/// Finds the transition lambda of every (k, repetition) series in a summary.
/// Failed cells are ignored.
pub fn detect_transition(rows: &[SweepRow], mode: TransitionMode) -> Vec<Transition> {
    let mut series: BTreeMap<(usize, usize), Vec<&SweepRow>> = BTreeMap::new();
    for row in rows.iter().filter(|r| r.status == "ok") {
        series.entry((row.k, row.repetition)).or_default().push(row);
    }
    series
        .into_iter()
        .map(|((k, repetition), mut rows)| {
            rows.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
            Transition {
                k,
                repetition,
                lambda: locate(&rows, mode),
            }
        })
        .collect()
}

fn first_bracketed(rows: &[&SweepRow], hit: impl Fn(&SweepRow) -> bool) -> Option<f64> {
    match rows.iter().position(|r| hit(r)) {
        // The smallest lambda already satisfies the predicate: nothing brackets it.
        Some(0) | None => None,
        Some(i) => Some(rows[i].lambda),
    }
}

fn locate(rows: &[&SweepRow], mode: TransitionMode) -> Option<f64> {
    match mode {
        TransitionMode::Shell => first_bracketed(rows, |r| r.phase == Some(PhaseLabel::Shell)),
        TransitionMode::EntropyAtLeast { threshold } => {
            first_bracketed(rows, |r| r.entropy.is_some_and(|h| h >= threshold))
        }
        TransitionMode::MinProximity => {
            let measured: Vec<(f64, f64)> = rows
                .iter()
                .filter_map(|r| r.proximity.map(|p| (r.lambda, p)))
                .collect();
            let (i, _) = measured
                .iter()
                .enumerate()
                .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))?;
            // A minimum on the grid boundary is not bracketed.
            if i == 0 || i + 1 == measured.len() {
                None
            } else {
                Some(measured[i].0)
            }
        }
    }
}
