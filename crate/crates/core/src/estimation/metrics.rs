use super::knn::KdTree;
use crate::cloud::{norm, PointCloud};
use crate::error::{check_dim, Error, Result};
use crate::ng::Codebook;

/// Fraction of `signals` whose nearest unit is `i` (ties to the lower index).
pub fn winner_histogram(codebook: &Codebook, signals: &PointCloud) -> Result<Vec<f64>> {
    if signals.is_empty() {
        return Err(Error::invalid("winner histogram needs at least one signal"));
    }
    check_dim(codebook.dim(), signals.dim())?;
    let tree = KdTree::build(&codebook.to_cloud());
    let mut counts = vec![0u64; codebook.len()];
    for v in signals.points() {
        let n = tree.nearest(v).expect("codebook is non-empty");
        counts[n.index] += 1;
    }
    let s = signals.len() as f64;
    Ok(counts.into_iter().map(|c| c as f64 / s).collect())
}

/// Shannon entropy in nats; zero-probability terms contribute nothing.
pub fn entropy(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::invalid("entropy of an empty distribution"));
    }
    if p.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::invalid(
            "probabilities must be finite and non-negative",
        ));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "probabilities sum to {total}, not 1"
        )));
    }
    Ok(-p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>())
}

/// Target set for proximity measurements.
#[derive(Clone, Debug, PartialEq)]
pub enum Reference<'a> {
    /// Sphere (a circle in R^2) of the given radius.
    Sphere {
        center: Vec<f64>,
        radius: f64,
    },
    /// Solid ball; points inside are at distance zero.
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Cloud(&'a PointCloud),
}

impl Reference<'_> {
    pub fn unit_sphere(dim: usize) -> Self {
        Reference::Sphere {
            center: vec![0.0; dim],
            radius: 1.0,
        }
    }

    fn dim(&self) -> usize {
        match self {
            Reference::Sphere { center, .. } | Reference::Ball { center, .. } => center.len(),
            Reference::Cloud(c) => c.dim(),
        }
    }
}

fn radial_offset(w: &[f64], center: &[f64]) -> f64 {
    let d: Vec<f64> = w.iter().zip(center).map(|(a, b)| a - b).collect();
    norm(&d)
}

/// Largest distance from a point of `points` to the reference set.
pub fn directed_proximity<'p, I>(points: I, dim: usize, reference: &Reference<'_>) -> Result<f64>
where
    I: IntoIterator<Item = &'p [f64]>,
{
    check_dim(reference.dim(), dim)?;
    let worst = match reference {
        Reference::Sphere { center, radius } => points
            .into_iter()
            .map(|w| (radial_offset(w, center) - radius).abs())
            .fold(0.0, f64::max),
        Reference::Ball { center, radius } => points
            .into_iter()
            .map(|w| (radial_offset(w, center) - radius).max(0.0))
            .fold(0.0, f64::max),
        Reference::Cloud(cloud) => {
            if cloud.is_empty() {
                return Err(Error::invalid("reference cloud is empty"));
            }
            let tree = KdTree::build(cloud);
            points
                .into_iter()
                .map(|w| tree.nearest(w).expect("non-empty").sq_dist.sqrt())
                .fold(0.0, f64::max)
        }
    };
    Ok(worst)
}

/// Largest distance from any unit to the reference set.
pub fn proximity(codebook: &Codebook, reference: &Reference<'_>) -> Result<f64> {
    directed_proximity(codebook.units(), codebook.dim(), reference)
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid(
            "Hausdorff distance needs two non-empty clouds",
        ));
    }
    check_dim(a.dim(), b.dim())?;
    let ab = directed_proximity(a.points(), a.dim(), &Reference::Cloud(b))?;
    let ba = directed_proximity(b.points(), b.dim(), &Reference::Cloud(a))?;
    Ok(ab.max(ba))
}
