//! The Neural Gas training engine.
//!
//! Every signal moves every unit towards it by `eps * h(rank) * (v - w)`,
//! where `rank` is the number of units strictly closer to the signal and
//! `h(n) = exp(-n / lambda)` (winner-only when `lambda == 0`).

mod codebook;
mod energy;
mod rank;
mod schedule;
mod train;

pub use codebook::Codebook;
pub use energy::{distortion, energy, normalization_constant};
pub use rank::{kernel, rank_all, RankScratch, RankVector};
pub use schedule::{schedule_value, LambdaMode, TrainingSchedule};
pub use train::{
    train, train_step, train_with, CycledSignals, ResampledSignals, SignalSource, Snapshot,
    StepObserver, TrainOutcome, Trainer,
};
