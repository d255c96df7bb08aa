//! Flag value parsers. Compound values use `:` between fields and `,` inside lists.

use std::path::PathBuf;

use neugas::harness::{ReferenceConfig, ShapeConfig, TransitionMode};
use neugas::NoiseSpec;

// Aliases keep clap from treating these as repeated flags.
pub type Reals = Vec<f64>;
pub type Sizes = Vec<usize>;

fn real(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| format!("not a number: {s:?}"))
}

fn count(s: &str) -> Result<usize, String> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| format!("not a non-negative integer: {s:?}"))
}

pub fn vector(s: &str) -> Result<Reals, String> {
    s.split(',').map(real).collect()
}

pub fn sizes(s: &str) -> Result<Sizes, String> {
    s.split(',').map(count).collect()
}

pub fn pair(s: &str) -> Result<(f64, f64), String> {
    match s.split_once(':') {
        Some((a, b)) => Ok((real(a)?, real(b)?)),
        None => Err(format!("expected A:B, got {s:?}")),
    }
}

/// `R:D` with both parts optional: radius defaults to 1, dimension to 3.
fn radius_dim(rest: &[&str]) -> Result<(f64, usize), String> {
    let radius = rest.first().map(|r| real(r)).transpose()?.unwrap_or(1.0);
    let dim = rest.get(1).map(|d| count(d)).transpose()?.unwrap_or(3);
    if rest.len() > 2 {
        return Err("too many fields".into());
    }
    Ok((radius, dim))
}

pub fn shape(s: &str) -> Result<ShapeConfig, String> {
    if let Some(path) = s.strip_prefix("mesh:") {
        return Ok(ShapeConfig::Mesh {
            path: PathBuf::from(path),
            normalize: false,
        });
    }
    let parts: Vec<&str> = s.split(':').collect();
    match parts[0] {
        "circle" if parts.len() == 1 => Ok(ShapeConfig::Circle),
        "disk" if parts.len() == 1 => Ok(ShapeConfig::Disk),
        "sphere" if parts.len() == 1 => Ok(ShapeConfig::Sphere),
        "point" => {
            let dim = parts.get(1).map(|d| count(d)).transpose()?.unwrap_or(2);
            Ok(ShapeConfig::Point {
                center: vec![0.0; dim],
            })
        }
        "ball" => {
            let (radius, dim) = radius_dim(&parts[1..])?;
            Ok(ShapeConfig::Ball {
                radius,
                center: vec![0.0; dim],
            })
        }
        _ => Err(format!(
            "unknown shape {s:?}; expected circle, disk, sphere, point:D, ball:R:D or mesh:PATH"
        )),
    }
}

pub fn noise(s: &str) -> Result<NoiseSpec, String> {
    let (kind, value) = match s.split_once(':') {
        Some((k, v)) => (k, Some(real(v)?)),
        None => (s, None),
    };
    let need =
        |v: Option<f64>| v.ok_or_else(|| format!("noise {kind:?} needs a value, e.g. {kind}:0.1"));
    let spec = match kind {
        "none" => NoiseSpec::None,
        "gaussian" => NoiseSpec::Gaussian {
            sigma: need(value)?,
        },
        "sinusoidal" => NoiseSpec::Sinusoidal { r: need(value)? },
        "uniform" => NoiseSpec::UniformBall { r: need(value)? },
        _ => return Err(format!("unknown noise {s:?}")),
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

pub fn reference(s: &str) -> Result<ReferenceConfig, String> {
    if let Some(path) = s.strip_prefix("cloud:") {
        return Ok(ReferenceConfig::Cloud {
            path: PathBuf::from(path),
        });
    }
    let parts: Vec<&str> = s.split(':').collect();
    match parts[0] {
        "shape" if parts.len() == 1 => Ok(ReferenceConfig::Shape),
        "data" if parts.len() == 1 => Ok(ReferenceConfig::Data),
        "sphere" => {
            let (radius, dim) = radius_dim(&parts[1..])?;
            Ok(ReferenceConfig::Sphere {
                center: vec![0.0; dim],
                radius,
            })
        }
        "ball" => {
            let (radius, dim) = radius_dim(&parts[1..])?;
            Ok(ReferenceConfig::Ball {
                center: vec![0.0; dim],
                radius,
            })
        }
        _ => Err(format!(
            "unknown reference {s:?}; expected shape, data, cloud:PATH, sphere:R:D or ball:R:D"
        )),
    }
}

pub fn transition(s: &str) -> Result<TransitionMode, String> {
    match s {
        "shell" => Ok(TransitionMode::Shell),
        "min-proximity" => Ok(TransitionMode::MinProximity),
        _ => match s.strip_prefix("entropy:") {
            Some(t) => Ok(TransitionMode::EntropyAtLeast {
                threshold: real(t)?,
            }),
            None => Err(format!(
                "unknown transition mode {s:?}; expected shell, min-proximity or entropy:THRESHOLD"
            )),
        },
    }
}
