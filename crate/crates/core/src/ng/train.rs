use rand::Rng as _;

use crate::cloud::PointCloud;
use crate::error::{check_dim, Error, Result};
use crate::seed::Rng;

use super::rank::RankScratch;
use super::{Codebook, TrainingSchedule};

/// A stream of training signals.
pub trait SignalSource {
    fn dim(&self) -> usize;

    /// Writes the next signal into `out`; returns `false` when exhausted.
    fn next_into(&mut self, out: &mut [f64]) -> bool;
}

/// Draws signals uniformly with replacement from a fixed cloud. Never exhausts.
pub struct ResampledSignals<'a> {
    cloud: &'a PointCloud,
    rng: Rng,
}

impl<'a> ResampledSignals<'a> {
    pub fn new(cloud: &'a PointCloud, rng: Rng) -> Result<Self> {
        if cloud.is_empty() {
            return Err(Error::invalid("cannot draw signals from an empty cloud"));
        }
        Ok(ResampledSignals { cloud, rng })
    }
}

impl SignalSource for ResampledSignals<'_> {
    fn dim(&self) -> usize {
        self.cloud.dim()
    }

    fn next_into(&mut self, out: &mut [f64]) -> bool {
        let i = self.rng.gen_range(0..self.cloud.len());
        out.copy_from_slice(self.cloud.point(i));
        true
    }
}

/// Presents the points of a cloud in order, optionally cycling forever.
pub struct CycledSignals<'a> {
    cloud: &'a PointCloud,
    next: usize,
    cycle: bool,
}

impl<'a> CycledSignals<'a> {
    pub fn cycling(cloud: &'a PointCloud) -> Self {
        CycledSignals {
            cloud,
            next: 0,
            cycle: true,
        }
    }

    pub fn once(cloud: &'a PointCloud) -> Self {
        CycledSignals {
            cloud,
            next: 0,
            cycle: false,
        }
    }
}

impl SignalSource for CycledSignals<'_> {
    fn dim(&self) -> usize {
        self.cloud.dim()
    }

    fn next_into(&mut self, out: &mut [f64]) -> bool {
        if self.next >= self.cloud.len() {
            if !self.cycle || self.cloud.is_empty() {
                return false;
            }
            self.next = 0;
        }
        out.copy_from_slice(self.cloud.point(self.next));
        self.next += 1;
        true
    }
}

/// Codebook state recorded during training.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub step: u64,
    pub lambda: f64,
    pub epsilon: f64,
    pub codebook: Codebook,
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub codebook: Codebook,
    pub trace: Vec<Snapshot>,
}

/// Receives the codebook at every trace point.
pub trait StepObserver {
    fn observe(&mut self, step: u64, lambda: f64, epsilon: f64, codebook: &Codebook) -> Result<()>;
}

impl<F> StepObserver for F
where
    F: FnMut(u64, f64, f64, &Codebook) -> Result<()>,
{
    fn observe(&mut self, step: u64, lambda: f64, epsilon: f64, codebook: &Codebook) -> Result<()> {
        self(step, lambda, epsilon, codebook)
    }
}

/// Holds scratch buffers so repeated steps do not allocate.
#[derive(Clone, Debug)]
pub struct Trainer {
    scratch: RankScratch,
}

impl Trainer {
    pub fn new(k: usize) -> Self {
        Trainer {
            scratch: RankScratch::new(k),
        }
    }

    /// One synchronous update: ranks come from the positions before the step.
    pub fn step(
        &mut self,
        codebook: &mut Codebook,
        v: &[f64],
        eps: f64,
        lambda: f64,
    ) -> Result<()> {
        check_dim(codebook.dim(), v.len())?;
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::invalid(format!("eps must lie in (0, 1], got {eps}")));
        }
        if !(lambda >= 0.0) {
            return Err(Error::invalid(format!("lambda must be >= 0, got {lambda}")));
        }
        self.scratch.rank(v, codebook)?;
        if lambda == 0.0 {
            let i = self.scratch.winner();
            let dim = codebook.dim();
            let w = &mut codebook.units_mut().nth(i).expect("winner in range")[..dim];
            for (wc, &vc) in w.iter_mut().zip(v) {
                *wc += eps * (vc - *wc);
            }
            return Ok(());
        }
        let k = codebook.len();
        let ranks = std::mem::take(&mut self.scratch.ranks);
        let weights = self.scratch.weights(k, lambda);
        for (w, &r) in codebook.units_mut().zip(&ranks) {
            let h = weights[r];
            if h == 0.0 {
                continue;
            }
            let g = eps * h;
            for (wc, &vc) in w.iter_mut().zip(v) {
                *wc += g * (vc - *wc);
            }
        }
        self.scratch.ranks = ranks;
        Ok(())
    }
}

/// Applies a single update to a copy of `codebook`.
pub fn train_step(codebook: &Codebook, v: &[f64], eps: f64, lambda: f64) -> Result<Codebook> {
    let mut next = codebook.clone();
    Trainer::new(codebook.len()).step(&mut next, v, eps, lambda)?;
    if !next.is_finite() {
        return Err(Error::NumericFault { step: 1 });
    }
    Ok(next)
}

/// Runs the full schedule, keeping a snapshot every `trace_every` steps
/// (plus the initial and final states) when `trace_every > 0`.
pub fn train<S: SignalSource + ?Sized>(
    codebook: Codebook,
    signals: &mut S,
    schedule: &TrainingSchedule,
    trace_every: u64,
) -> Result<TrainOutcome> {
    let mut trace = Vec::new();
    let mut record = |step: u64, lambda: f64, epsilon: f64, cb: &Codebook| -> Result<()> {
        trace.push(Snapshot {
            step,
            lambda,
            epsilon,
            codebook: cb.clone(),
        });
        Ok(())
    };
    let codebook = train_with(codebook, signals, schedule, trace_every, &mut record)?;
    Ok(TrainOutcome { codebook, trace })
}

/// Like [`train`] but hands trace points to an observer instead of storing them.
///
/// Step `t` (counted from 1) uses `eps(t)` and `lambda(t)`, so the last step
/// runs at exactly the final values.
pub fn train_with<S: SignalSource + ?Sized, O: StepObserver + ?Sized>(
    mut codebook: Codebook,
    signals: &mut S,
    schedule: &TrainingSchedule,
    trace_every: u64,
    observer: &mut O,
) -> Result<Codebook> {
    schedule.validate()?;
    check_dim(codebook.dim(), signals.dim())?;
    let total = schedule.total_steps;
    if trace_every > 0 {
        observer.observe(
            0,
            schedule.lambda_at(0)?,
            schedule.epsilon_at(0)?,
            &codebook,
        )?;
    }
    let mut trainer = Trainer::new(codebook.len());
    let mut v = vec![0.0; codebook.dim()];
    let check_every = 1024u64;
    for t in 1..=total {
        if !signals.next_into(&mut v) {
            return Err(Error::SignalsExhausted { step: t, total });
        }
        let eps = schedule.epsilon_at(t)?;
        let lambda = schedule.lambda_at(t)?;
        trainer.step(&mut codebook, &v, eps, lambda)?;
        let traced = trace_every > 0 && (t % trace_every == 0 || t == total);
        if (t % check_every == 0 || t == total || traced) && !codebook.is_finite() {
            return Err(Error::NumericFault { step: t });
        }
        if traced {
            observer.observe(t, lambda, eps, &codebook)?;
        }
    }
    Ok(codebook)
}
