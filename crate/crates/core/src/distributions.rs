//! Benchmark input distributions: uniform samples over a shape convolved
//! with isotropic noise, materialized as standalone point clouds.

use std::f64::consts::FRAC_PI_2;

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::cloud::{norm, PointCloud};
use crate::error::{Error, Result};
use crate::seed::{self, Rng};

/// An externally supplied cloud used as a shape.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshShape {
    pub cloud: PointCloud,
    /// Center the cloud's bounding box on the origin and express noise
    /// parameters in units of the bounding cube's side length.
    pub normalize: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ShapeSpec {
    Point {
        center: Vec<f64>,
    },
    /// Unit circle in R^2.
    Circle,
    /// Unit disk in R^2.
    Disk,
    /// Unit sphere in R^3.
    Sphere,
    Ball {
        radius: f64,
        center: Vec<f64>,
    },
    MeshCloud(MeshShape),
}

impl ShapeSpec {
    pub fn unit_ball(dim: usize) -> Self {
        ShapeSpec::Ball {
            radius: 1.0,
            center: vec![0.0; dim],
        }
    }

    pub fn origin(dim: usize) -> Self {
        ShapeSpec::Point {
            center: vec![0.0; dim],
        }
    }

    /// Ambient dimension of the shape.
    pub fn dim(&self) -> usize {
        match self {
            ShapeSpec::Point { center } | ShapeSpec::Ball { center, .. } => center.len(),
            ShapeSpec::Circle | ShapeSpec::Disk => 2,
            ShapeSpec::Sphere => 3,
            ShapeSpec::MeshCloud(m) => m.cloud.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ShapeSpec::Point { center } if center.is_empty() => Err(Error::invalid(
                "point shape needs a center with at least one coordinate",
            )),
            ShapeSpec::Ball { radius, center } => {
                if center.is_empty() {
                    Err(Error::invalid(
                        "ball needs a center with at least one coordinate",
                    ))
                } else if !(*radius > 0.0 && radius.is_finite()) {
                    Err(Error::invalid(format!(
                        "ball radius must be > 0, got {radius}"
                    )))
                } else {
                    Ok(())
                }
            }
            ShapeSpec::MeshCloud(m) if m.cloud.is_empty() => {
                Err(Error::invalid("mesh cloud shape is empty"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum NoiseSpec {
    None,
    /// Isotropic normal with covariance `sigma^2 I`.
    Gaussian {
        sigma: f64,
    },
    /// Radial profile `sin(pi/2 + (pi/2) * |x| / r)` on the open ball of radius `r`.
    Sinusoidal {
        r: f64,
    },
    UniformBall {
        r: f64,
    },
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        let (name, value) = match *self {
            NoiseSpec::None => return Ok(()),
            NoiseSpec::Gaussian { sigma } => ("sigma", sigma),
            NoiseSpec::Sinusoidal { r } | NoiseSpec::UniformBall { r } => ("r", r),
        };
        if value > 0.0 && value.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "noise {name} must be > 0, got {value}"
            )))
        }
    }

    /// The same noise with its length parameter multiplied by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        match self {
            NoiseSpec::None => NoiseSpec::None,
            NoiseSpec::Gaussian { sigma } => NoiseSpec::Gaussian {
                sigma: sigma * factor,
            },
            NoiseSpec::Sinusoidal { r } => NoiseSpec::Sinusoidal { r: r * factor },
            NoiseSpec::UniformBall { r } => NoiseSpec::UniformBall { r: r * factor },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetSpec {
    pub shape: ShapeSpec,
    pub noise: NoiseSpec,
    pub n_points: usize,
    pub seed: u64,
}

/// Default cloud size for generated datasets.
pub const DEFAULT_POINTS: usize = 100_000;

fn gaussian_vector(rng: &mut Rng, out: &mut [f64]) {
    for c in out.iter_mut() {
        *c = StandardNormal.sample(rng);
    }
}

/// Uniform direction on the unit sphere S^(D-1).
fn unit_direction(rng: &mut Rng, out: &mut [f64]) {
    loop {
        gaussian_vector(rng, out);
        let n = norm(out);
        if n > 1e-300 {
            out.iter_mut().for_each(|c| *c /= n);
            return;
        }
    }
}

/// Uniform point in the ball of radius `r` centered at the origin.
fn uniform_in_ball(rng: &mut Rng, r: f64, out: &mut [f64]) {
    let d = out.len() as f64;
    unit_direction(rng, out);
    let u: f64 = rng.gen();
    let rho = r * u.powf(1.0 / d);
    out.iter_mut().for_each(|c| *c *= rho);
}

fn sample_shape_into(shape: &ShapeSpec, rng: &mut Rng, out: &mut [f64]) {
    match shape {
        ShapeSpec::Point { center } => out.copy_from_slice(center),
        ShapeSpec::Circle | ShapeSpec::Sphere => unit_direction(rng, out),
        ShapeSpec::Disk => uniform_in_ball(rng, 1.0, out),
        ShapeSpec::Ball { radius, center } => {
            uniform_in_ball(rng, *radius, out);
            out.iter_mut().zip(center).for_each(|(c, o)| *c += o);
        }
        ShapeSpec::MeshCloud(m) => {
            let i = rng.gen_range(0..m.cloud.len());
            out.copy_from_slice(m.cloud.point(i));
        }
    }
}

/// Draws `n` independent points uniformly over `shape`.
pub fn sample_shape(shape: &ShapeSpec, n: usize, rng: &mut Rng) -> Result<PointCloud> {
    shape.validate()?;
    if n == 0 {
        return Err(Error::invalid("sample count must be at least 1"));
    }
    let dim = shape.dim();
    let mut cloud = PointCloud::with_capacity(dim, n);
    let mut buf = vec![0.0; dim];
    for _ in 0..n {
        sample_shape_into(shape, rng, &mut buf);
        cloud.push(&buf);
    }
    Ok(cloud)
}

/// Writes one noise offset into `out`; its length fixes the dimension.
pub fn sample_noise(noise: &NoiseSpec, rng: &mut Rng, out: &mut [f64]) {
    match *noise {
        NoiseSpec::None => out.fill(0.0),
        NoiseSpec::Gaussian { sigma } => {
            gaussian_vector(rng, out);
            out.iter_mut().for_each(|c| *c *= sigma);
        }
        NoiseSpec::UniformBall { r } => uniform_in_ball(rng, r, out),
        NoiseSpec::Sinusoidal { r } => loop {
            // Rejection against the unnormalized radial profile, whose
            // maximum is 1 at the center.
            uniform_in_ball(rng, r, out);
            let rho = norm(out);
            if rho >= r {
                continue;
            }
            let profile = (FRAC_PI_2 + FRAC_PI_2 * rho / r).sin();
            if rng.gen::<f64>() < profile {
                return;
            }
        },
    }
}

/// Centers a cloud's bounding box on the origin and returns it together with
/// the side length of the smallest enclosing axis-aligned cube.
pub fn normalize_mesh_cloud(cloud: &PointCloud) -> Result<(PointCloud, f64)> {
    let (lo, hi) = cloud
        .bounding_box()
        .ok_or_else(|| Error::invalid("cannot normalize an empty cloud"))?;
    let mid: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect();
    let side = lo.iter().zip(&hi).map(|(l, h)| h - l).fold(0.0, f64::max);
    let mut out = PointCloud::with_capacity(cloud.dim(), cloud.len());
    let mut buf = vec![0.0; cloud.dim()];
    for p in cloud.points() {
        for ((b, &c), m) in buf.iter_mut().zip(p).zip(&mid) {
            *b = c - m;
        }
        out.push(&buf);
    }
    Ok((out, side))
}

/// Generates `n_points` samples of shape + independent noise.
///
/// The output depends only on the spec and its seed.
pub fn generate_dataset(spec: &DatasetSpec) -> Result<PointCloud> {
    spec.shape.validate()?;
    spec.noise.validate()?;
    if spec.n_points == 0 {
        return Err(Error::invalid("dataset must contain at least one point"));
    }
    let normalized;
    let (shape, noise) = match &spec.shape {
        ShapeSpec::MeshCloud(m) if m.normalize => {
            let (cloud, side) = normalize_mesh_cloud(&m.cloud)?;
            if spec.noise != NoiseSpec::None && side <= 0.0 {
                return Err(Error::Degenerate(
                    "mesh cloud has zero extent, cannot scale noise by its side length".into(),
                ));
            }
            normalized = ShapeSpec::MeshCloud(MeshShape {
                cloud,
                normalize: false,
            });
            (&normalized, spec.noise.scaled(side))
        }
        shape => (shape, spec.noise),
    };
    let dim = shape.dim();
    let mut rng = seed::rng(spec.seed);
    let mut cloud = PointCloud::with_capacity(dim, spec.n_points);
    let mut point = vec![0.0; dim];
    let mut offset = vec![0.0; dim];
    for _ in 0..spec.n_points {
        sample_shape_into(shape, &mut rng, &mut point);
        sample_noise(&noise, &mut rng, &mut offset);
        point.iter_mut().zip(&offset).for_each(|(p, o)| *p += o);
        cloud.push(&point);
    }
    Ok(cloud)
}
