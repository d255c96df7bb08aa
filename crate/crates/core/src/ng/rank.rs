use crate::cloud::sq_dist;
use crate::error::{check_dim, Error, Result};

use super::Codebook;

/// `ranks[i]` is the number of units closer to the signal than unit `i`,
/// with equal distances ordered by ascending unit index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankVector(pub Vec<usize>);

impl RankVector {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Index of the unit with rank 0.
    pub fn winner(&self) -> usize {
        self.0
            .iter()
            .position(|&r| r == 0)
            .expect("ranks form a permutation")
    }
}

/// Neighborhood kernel: Kronecker delta at `lambda == 0`, `exp(-n / lambda)` otherwise.
pub fn kernel(n: usize, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::invalid(format!("lambda must be >= 0, got {lambda}")));
    }
    Ok(kernel_unchecked(n, lambda))
}

#[inline]
pub(crate) fn kernel_unchecked(n: usize, lambda: f64) -> f64 {
    if lambda == 0.0 {
        if n == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        (-(n as f64) / lambda).exp()
    }
}

pub fn rank_all(v: &[f64], codebook: &Codebook) -> Result<RankVector> {
    check_dim(codebook.dim(), v.len())?;
    let mut scratch = RankScratch::new(codebook.len());
    scratch.rank(v, codebook)?;
    Ok(RankVector(scratch.ranks.clone()))
}

/// Reusable buffers for rank computation and kernel weights.
///
/// Kernel weights are cached per lambda, so a constant-lambda run evaluates
/// `exp` only once per rank.
#[derive(Clone, Debug)]
pub struct RankScratch {
    keys: Vec<(u64, u32)>,
    spare: Vec<(u64, u32)>,
    pub(crate) ranks: Vec<usize>,
    weights: Vec<f64>,
    weights_lambda: Option<f64>,
}

impl RankScratch {
    pub fn new(k: usize) -> Self {
        RankScratch {
            keys: Vec::with_capacity(k),
            spare: Vec::with_capacity(k),
            ranks: vec![0; k],
            weights: Vec::with_capacity(k),
            weights_lambda: None,
        }
    }

    /// Ranks every unit by squared distance to `v` with a full sort.
    pub fn rank(&mut self, v: &[f64], codebook: &Codebook) -> Result<&[usize]> {
        self.keys.clear();
        for (i, w) in codebook.units().enumerate() {
            let d = sq_dist(v, w);
            if !d.is_finite() {
                return Err(Error::invalid("non-finite distance while ranking units"));
            }
            // Bit patterns of non-negative floats sort like the floats.
            self.keys.push((d.to_bits(), i as u32));
        }
        radix_sort(&mut self.keys, &mut self.spare);
        self.ranks.resize(self.keys.len(), 0);
        for (r, &(_, i)) in self.keys.iter().enumerate() {
            self.ranks[i as usize] = r;
        }
        Ok(&self.ranks)
    }

    /// Index of the nearest unit after the last call to [`RankScratch::rank`].
    pub(crate) fn winner(&self) -> usize {
        self.keys[0].1 as usize
    }

    pub(crate) fn weights(&mut self, k: usize, lambda: f64) -> &[f64] {
        if self.weights_lambda != Some(lambda) || self.weights.len() != k {
            self.weights.clear();
            self.weights
                .extend((0..k).map(|n| kernel_unchecked(n, lambda)));
            self.weights_lambda = Some(lambda);
        }
        &self.weights
    }
}

const RADIX_BITS: u32 = 11;
const RADIX_BUCKETS: usize = 1 << RADIX_BITS;

/// Sorts `(distance bits, index)` pairs: one counting pass on the top bits
/// of the key range, then a comparison sort inside each bucket. Buckets are
/// contiguous key ranges, so the result equals a plain sort of the pairs.
fn radix_sort(keys: &mut Vec<(u64, u32)>, spare: &mut Vec<(u64, u32)>) {
    if keys.len() < 64 {
        keys.sort_unstable();
        return;
    }
    let (mut lo, mut hi) = (u64::MAX, 0u64);
    for &(k, _) in keys.iter() {
        lo = lo.min(k);
        hi = hi.max(k);
    }
    let span_bits = 64 - (hi - lo).leading_zeros();
    let shift = span_bits.saturating_sub(RADIX_BITS);
    let bucket = |k: u64| ((k - lo) >> shift) as usize;

    let mut starts = [0u32; RADIX_BUCKETS + 1];
    for &(k, _) in keys.iter() {
        starts[bucket(k) + 1] += 1;
    }
    for i in 1..=RADIX_BUCKETS {
        starts[i] += starts[i - 1];
    }
    let mut next = starts;
    spare.clear();
    spare.resize(keys.len(), (0, 0));
    for &item in keys.iter() {
        let b = bucket(item.0);
        spare[next[b] as usize] = item;
        next[b] += 1;
    }
    for w in starts.windows(2) {
        let (s, e) = (w[0] as usize, w[1] as usize);
        if e - s > 1 {
            spare[s..e].sort_unstable();
        }
    }
    std::mem::swap(keys, spare);
}
