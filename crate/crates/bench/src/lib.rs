//! Fixtures shared by the benchmarks.

use neugas::distributions::{generate_dataset, DatasetSpec, NoiseSpec, ShapeSpec};
use neugas::{seed, Codebook, PointCloud};

/// Isotropic normal cloud centered at the origin.
pub fn normal_cloud(dim: usize, n: usize, seed: u64) -> PointCloud {
    generate_dataset(&DatasetSpec {
        shape: ShapeSpec::origin(dim),
        noise: NoiseSpec::Gaussian { sigma: 1.0 },
        n_points: n,
        seed,
    })
    .expect("valid dataset spec")
}

pub fn codebook_from(cloud: &PointCloud, k: usize, seed: u64) -> Codebook {
    Codebook::sample_from(cloud, k, &mut seed::rng(seed)).expect("non-empty cloud")
}
