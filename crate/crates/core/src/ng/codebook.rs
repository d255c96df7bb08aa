use rand::seq::index;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::seed::Rng;

/// An ordered set of `k` reference vectors in R^D.
///
/// Unit indices are stable: training moves units but never reorders them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Codebook {
    dim: usize,
    units: Vec<f64>,
}

impl Codebook {
    pub fn new(dim: usize, units: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("codebook dimension must be at least 1"));
        }
        if units.is_empty() || units.len() % dim != 0 {
            return Err(Error::invalid(format!(
                "codebook buffer of length {} does not hold k >= 1 units of dimension {dim}",
                units.len()
            )));
        }
        if units.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("codebook contains non-finite coordinates"));
        }
        Ok(Codebook { dim, units })
    }

    pub fn from_points<P: AsRef<[f64]>>(dim: usize, points: &[P]) -> Result<Self> {
        let cloud = PointCloud::from_points(dim, points)?;
        Codebook::new(dim, cloud.into_flat())
    }

    pub fn from_cloud(cloud: &PointCloud) -> Result<Self> {
        Codebook::new(cloud.dim(), cloud.as_flat().to_vec())
    }

    /// Draws `k` initial units from `cloud`, without replacement when
    /// `k <= N` and with replacement otherwise.
    pub fn sample_from(cloud: &PointCloud, k: usize, rng: &mut Rng) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if cloud.is_empty() {
            return Err(Error::invalid(
                "cannot initialize units from an empty cloud",
            ));
        }
        let n = cloud.len();
        let mut units = Vec::with_capacity(k * cloud.dim());
        if k <= n {
            for i in index::sample(rng, n, k).into_iter() {
                units.extend_from_slice(cloud.point(i));
            }
        } else {
            for _ in 0..k {
                units.extend_from_slice(cloud.point(rng.gen_range(0..n)));
            }
        }
        Codebook::new(cloud.dim(), units)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of units, `k`.
    pub fn len(&self) -> usize {
        self.units.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn unit(&self, i: usize) -> &[f64] {
        &self.units[i * self.dim..(i + 1) * self.dim]
    }

    pub fn units(&self) -> std::slice::ChunksExact<'_, f64> {
        self.units.chunks_exact(self.dim)
    }

    pub(crate) fn units_mut(&mut self) -> std::slice::ChunksExactMut<'_, f64> {
        self.units.chunks_exact_mut(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.units
    }

    pub fn to_cloud(&self) -> PointCloud {
        PointCloud::new(self.dim, self.units.clone()).expect("codebook layout is a valid cloud")
    }

    pub fn is_finite(&self) -> bool {
        self.units.iter().all(|c| c.is_finite())
    }
}
