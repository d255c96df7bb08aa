use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponential interpolation `init * (final / init)^(t / total)`.
///
/// `t == total` returns `final` exactly.
pub fn schedule_value(t: u64, total: u64, init: f64, final_: f64) -> Result<f64> {
    if !(init > 0.0 && final_ > 0.0 && init.is_finite() && final_.is_finite()) {
        return Err(Error::invalid(format!(
            "schedule bounds must be positive and finite, got {init} and {final_}"
        )));
    }
    if t > total {
        return Err(Error::invalid(format!("step {t} exceeds total {total}")));
    }
    if t == total {
        return Ok(if total == 0 { init } else { final_ });
    }
    if t == 0 {
        return Ok(init);
    }
    let frac = t as f64 / total as f64;
    Ok(init * (final_ / init).powf(frac))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum LambdaMode {
    Constant { lambda: f64 },
    Decaying { initial: f64, final_value: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingSchedule {
    pub eps_initial: f64,
    pub eps_final: f64,
    pub lambda: LambdaMode,
    pub total_steps: u64,
}

impl TrainingSchedule {
    /// Step sizes used throughout the reported experiments.
    pub const EPS_INITIAL: f64 = 0.1;
    pub const EPS_FINAL: f64 = 0.0001;

    pub fn constant(lambda: f64, total_steps: u64) -> Self {
        TrainingSchedule {
            eps_initial: Self::EPS_INITIAL,
            eps_final: Self::EPS_FINAL,
            lambda: LambdaMode::Constant { lambda },
            total_steps,
        }
    }

    pub fn decaying(initial: f64, final_value: f64, total_steps: u64) -> Self {
        TrainingSchedule {
            eps_initial: Self::EPS_INITIAL,
            eps_final: Self::EPS_FINAL,
            lambda: LambdaMode::Decaying {
                initial,
                final_value,
            },
            total_steps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let eps_ok = self.eps_initial > 0.0
            && self.eps_final > 0.0
            && self.eps_initial <= 1.0
            && self.eps_final <= self.eps_initial;
        if !eps_ok {
            return Err(Error::invalid(format!(
                "need 0 < eps_final <= eps_initial <= 1, got {} and {}",
                self.eps_initial, self.eps_final
            )));
        }
        match self.lambda {
            LambdaMode::Constant { lambda } if !(lambda >= 0.0 && lambda.is_finite()) => Err(
                Error::invalid(format!("constant lambda must be >= 0, got {lambda}")),
            ),
            LambdaMode::Decaying {
                initial,
                final_value,
            } if !(final_value > 0.0 && final_value <= initial && initial.is_finite()) => {
                Err(Error::invalid(format!(
                    "need 0 < lambda_final <= lambda_initial, got {initial} and {final_value}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn epsilon_at(&self, t: u64) -> Result<f64> {
        schedule_value(t, self.total_steps, self.eps_initial, self.eps_final)
    }

    pub fn lambda_at(&self, t: u64) -> Result<f64> {
        match self.lambda {
            LambdaMode::Constant { lambda } => {
                if t > self.total_steps {
                    return Err(Error::invalid(format!(
                        "step {t} exceeds total {}",
                        self.total_steps
                    )));
                }
                Ok(lambda)
            }
            LambdaMode::Decaying {
                initial,
                final_value,
            } => schedule_value(t, self.total_steps, initial, final_value),
        }
    }
}
