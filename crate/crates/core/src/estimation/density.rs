//! Weighted k-distance (distance to measure) and the density estimator
//! built on it.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::knn::{KdTree, Neighbor};
use crate::cloud::PointCloud;
use crate::error::{check_dim, Error, Result};
use crate::ng::Codebook;

/// `N^(4 / (D + 4))` rounded half-up and clamped to `[1, N]`.
pub fn optimal_m0(n: usize, dim: usize) -> usize {
    if n == 0 {
        return 1;
    }
    let exact = (n as f64).powf(4.0 / (dim as f64 + 4.0));
    ((exact + 0.5).floor() as usize).clamp(1, n)
}

/// Volume of the unit ball in R^D.
pub fn unit_ball_volume(dim: usize) -> f64 {
    // V_D = V_{D-2} * 2 pi / D, starting from V_0 = 1 and V_1 = 2.
    let mut v = if dim % 2 == 0 { 1.0 } else { 2.0 };
    let mut d = if dim % 2 == 0 { 2 } else { 3 };
    while d <= dim {
        v *= 2.0 * PI / d as f64;
        d += 2;
    }
    v
}

/// A point cloud indexed for exact neighbor queries, with the neighbor
/// count `m0` used by the k-distance.
#[derive(Clone, Debug)]
pub struct DensityIndex {
    tree: KdTree,
    m0: usize,
    /// Normalizing count `N` in the estimator.
    n: usize,
    /// `sum_{i=1}^{m0} i^(2/D)`
    rank_weight: f64,
}

impl DensityIndex {
    pub fn new(cloud: &PointCloud, m0: usize) -> Result<Self> {
        Self::with_count(cloud, m0, cloud.len())
    }

    /// Index whose `m0` follows the optimal-rate rule for the cloud size.
    pub fn with_optimal_m0(cloud: &PointCloud) -> Result<Self> {
        Self::new(cloud, optimal_m0(cloud.len(), cloud.dim()))
    }

    fn with_count(cloud: &PointCloud, m0: usize, n: usize) -> Result<Self> {
        if cloud.is_empty() {
            return Err(Error::invalid("cannot index an empty cloud"));
        }
        if m0 == 0 || m0 > cloud.len() {
            return Err(Error::invalid(format!(
                "m0 must lie in [1, {}], got {m0}",
                cloud.len()
            )));
        }
        let exponent = 2.0 / cloud.dim() as f64;
        let rank_weight = (1..=m0).map(|i| (i as f64).powf(exponent)).sum();
        Ok(DensityIndex {
            tree: KdTree::build(cloud),
            m0,
            n,
            rank_weight,
        })
    }

    pub fn m0(&self) -> usize {
        self.m0
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.tree.dim()
    }

    /// The `m0` nearest cloud points to `x`, closest first.
    pub fn neighbors(&self, x: &[f64]) -> Result<Vec<Neighbor>> {
        check_dim(self.dim(), x.len())?;
        Ok(self.tree.knn(x, self.m0))
    }

    /// Root mean squared distance from `x` to its `m0` nearest cloud points.
    pub fn kdistance(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(self.mean_sq(&self.tree.knn(x, self.m0)).sqrt())
    }

    fn kdistance_excluding(&self, x: &[f64], skip: usize) -> f64 {
        self.mean_sq(&self.tree.knn_excluding(x, self.m0, Some(skip)))
            .sqrt()
    }

    fn mean_sq(&self, neighbors: &[Neighbor]) -> f64 {
        neighbors.iter().map(|n| n.sq_dist).sum::<f64>() / neighbors.len() as f64
    }

    fn density_from_kdistance(&self, kdist: f64) -> Option<f64> {
        if kdist <= 0.0 {
            return None;
        }
        let dim = self.dim() as f64;
        let ratio = self.rank_weight / (self.m0 as f64 * kdist * kdist);
        Some(ratio.powf(0.5 * dim) / (self.n as f64 * unit_ball_volume(self.dim())))
    }
}

/// Probability density at `x` estimated from the indexed cloud.
pub fn estimate_density(index: &DensityIndex, x: &[f64]) -> Result<f64> {
    let d = index.kdistance(x)?;
    index.density_from_kdistance(d).ok_or_else(|| {
        Error::SingularEstimate(format!(
            "query point coincides with all of its {} nearest neighbors",
            index.m0
        ))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub unit: usize,
    pub position: Vec<f64>,
    /// Input density at the unit.
    pub p_hat: f64,
    /// Density of units at the unit.
    pub rho_hat: f64,
}

impl DensityRow {
    pub fn log10_p(&self) -> f64 {
        self.p_hat.log10()
    }

    pub fn log10_rho(&self) -> f64 {
        self.rho_hat.log10()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityTable {
    pub dim: usize,
    pub m0_data: usize,
    pub m0_units: usize,
    pub rows: Vec<DensityRow>,
}

/// Estimates, at every unit, the input density from `data` and the unit
/// density from the other units of the codebook.
///
/// The unit-density index excludes the queried unit from its own neighbor
/// list, so its `m0` is capped at `k - 1`.
pub fn density_table(codebook: &Codebook, data: &PointCloud) -> Result<DensityTable> {
    check_dim(codebook.dim(), data.dim())?;
    let k = codebook.len();
    if k < 2 {
        return Err(Error::invalid("density table needs at least two units"));
    }
    let data_index = DensityIndex::with_optimal_m0(data)?;
    let units = codebook.to_cloud();
    let m0_units = optimal_m0(k, codebook.dim()).min(k - 1);
    let unit_index = DensityIndex::with_count(&units, m0_units, k)?;

    let rows = (0..k)
        .into_par_iter()
        .map(|i| {
            let w = codebook.unit(i);
            let p_hat = estimate_density(&data_index, w).map_err(|_| {
                Error::SingularEstimate(format!(
                    "unit {i} coincides with its {} nearest data points",
                    data_index.m0
                ))
            })?;
            let rho_hat = unit_index
                .density_from_kdistance(unit_index.kdistance_excluding(w, i))
                .ok_or_else(|| {
                    Error::SingularEstimate(format!(
                        "unit {i} coincides with its {m0_units} nearest units"
                    ))
                })?;
            Ok(DensityRow {
                unit: i,
                position: w.to_vec(),
                p_hat,
                rho_hat,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(DensityTable {
        dim: codebook.dim(),
        m0_data: data_index.m0,
        m0_units,
        rows,
    })
}
