use crate::cloud::{sq_dist, PointCloud};
use crate::error::{check_dim, Error, Result};

use super::rank::{kernel_unchecked, RankScratch};
use super::Codebook;

/// `C_lambda`, the sum of kernel weights over ranks `0..k`.
pub fn normalization_constant(k: usize, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::invalid(format!("lambda must be >= 0, got {lambda}")));
    }
    Ok((0..k).map(|n| kernel_unchecked(n, lambda)).sum())
}

fn check_inputs(codebook: &Codebook, cloud: &PointCloud) -> Result<()> {
    if cloud.is_empty() {
        return Err(Error::invalid("cannot evaluate energy over an empty cloud"));
    }
    check_dim(codebook.dim(), cloud.dim())
}

/// Monte-Carlo estimate of the Neural Gas energy, with `cloud` standing in
/// for the input distribution.
pub fn energy(codebook: &Codebook, cloud: &PointCloud, lambda: f64) -> Result<f64> {
    check_inputs(codebook, cloud)?;
    let k = codebook.len();
    let c = normalization_constant(k, lambda)?;
    let mut scratch = RankScratch::new(k);
    let mut total = 0.0;
    for v in cloud.points() {
        let ranks = scratch.rank(v, codebook)?;
        let mut acc = 0.0;
        for (w, &r) in codebook.units().zip(ranks) {
            let h = kernel_unchecked(r, lambda);
            if h != 0.0 {
                acc += h * sq_dist(v, w);
            }
        }
        total += acc;
    }
    Ok(total / cloud.len() as f64 / (2.0 * c))
}

/// Half the mean squared distance from each cloud point to its nearest unit.
pub fn distortion(codebook: &Codebook, cloud: &PointCloud) -> Result<f64> {
    check_inputs(codebook, cloud)?;
    let total: f64 = cloud
        .points()
        .map(|v| {
            codebook
                .units()
                .map(|w| sq_dist(v, w))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(0.5 * total / cloud.len() as f64)
}
