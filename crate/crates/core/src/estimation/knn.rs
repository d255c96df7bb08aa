//! Exact k-nearest-neighbor search over a static point set.
//!
//! Neighbors are ordered by `(squared distance, index)`, so the result is
//! identical to an exhaustive scan even when distances tie.

use std::collections::BinaryHeap;

use crate::cloud::{sq_dist, PointCloud};

const LEAF_SIZE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub sq_dist: f64,
}

/// Total order on non-negative distances with index tie-break.
type Key = (u64, u32);

fn key(sq_dist: f64, index: usize) -> Key {
    (sq_dist.to_bits(), index as u32)
}

fn neighbor(k: Key) -> Neighbor {
    Neighbor {
        index: k.1 as usize,
        sq_dist: f64::from_bits(k.0),
    }
}

#[derive(Clone, Debug)]
struct Node {
    lo: Vec<f64>,
    hi: Vec<f64>,
    kind: NodeKind,
}

#[derive(Clone, Debug)]
enum NodeKind {
    Leaf { start: usize, end: usize },
    Inner { left: usize, right: usize },
}

#[derive(Clone, Debug)]
pub struct KdTree {
    dim: usize,
    /// Points permuted into leaf order.
    coords: Vec<f64>,
    /// Original index of each permuted point.
    order: Vec<u32>,
    nodes: Vec<Node>,
}

impl KdTree {
    pub fn build(cloud: &PointCloud) -> Self {
        assert!(
            cloud.len() <= u32::MAX as usize,
            "cloud too large for 32-bit point indices"
        );
        let dim = cloud.dim();
        let mut order: Vec<u32> = (0..cloud.len() as u32).collect();
        let mut nodes = Vec::new();
        if !order.is_empty() {
            build_node(cloud, &mut order, 0, &mut nodes);
        }
        let mut coords = Vec::with_capacity(cloud.as_flat().len());
        for &i in &order {
            coords.extend_from_slice(cloud.point(i as usize));
        }
        KdTree {
            dim,
            coords,
            order,
            nodes,
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `m` nearest points, closest first.
    pub fn knn(&self, x: &[f64], m: usize) -> Vec<Neighbor> {
        self.knn_excluding(x, m, None)
    }

    /// Like [`KdTree::knn`] but never returns the point with index `skip`.
    pub fn knn_excluding(&self, x: &[f64], m: usize, skip: Option<usize>) -> Vec<Neighbor> {
        assert_eq!(x.len(), self.dim, "query dimension mismatch");
        if m == 0 || self.nodes.is_empty() {
            return Vec::new();
        }
        let mut heap: BinaryHeap<Key> = BinaryHeap::with_capacity(m + 1);
        let skip = skip.map(|s| s as u32);
        self.search(0, x, m, skip, &mut heap);
        let mut out: Vec<Key> = heap.into_vec();
        out.sort_unstable();
        out.into_iter().map(neighbor).collect()
    }

    pub fn nearest(&self, x: &[f64]) -> Option<Neighbor> {
        self.knn(x, 1).into_iter().next()
    }

    fn search(
        &self,
        node: usize,
        x: &[f64],
        m: usize,
        skip: Option<u32>,
        heap: &mut BinaryHeap<Key>,
    ) {
        let n = &self.nodes[node];
        match n.kind {
            NodeKind::Leaf { start, end } => {
                for slot in start..end {
                    let idx = self.order[slot];
                    if Some(idx) == skip {
                        continue;
                    }
                    let p = &self.coords[slot * self.dim..(slot + 1) * self.dim];
                    let k = key(sq_dist(x, p), idx as usize);
                    if heap.len() < m {
                        heap.push(k);
                    } else if k < *heap.peek().expect("heap is full") {
                        heap.pop();
                        heap.push(k);
                    }
                }
            }
            NodeKind::Inner { left, right } => {
                let bl = box_sq_dist(x, &self.nodes[left]);
                let br = box_sq_dist(x, &self.nodes[right]);
                let (first, bf, second, bs) = if bl <= br {
                    (left, bl, right, br)
                } else {
                    (right, br, left, bl)
                };
                if self.worth_visiting(bf, m, heap) {
                    self.search(first, x, m, skip, heap);
                }
                if self.worth_visiting(bs, m, heap) {
                    self.search(second, x, m, skip, heap);
                }
            }
        }
    }

    // Equal bounds are still visited: a tied point may carry a lower index.
    fn worth_visiting(&self, bound: f64, m: usize, heap: &BinaryHeap<Key>) -> bool {
        heap.len() < m || bound <= f64::from_bits(heap.peek().expect("heap is full").0)
    }
}

fn box_sq_dist(x: &[f64], node: &Node) -> f64 {
    x.iter()
        .zip(node.lo.iter().zip(&node.hi))
        .map(|(&c, (&l, &h))| {
            let gap = if c < l {
                l - c
            } else if c > h {
                c - h
            } else {
                0.0
            };
            gap * gap
        })
        .sum()
}

fn bounds(cloud: &PointCloud, idx: &[u32]) -> (Vec<f64>, Vec<f64>) {
    let dim = cloud.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for &i in idx {
        for (d, &c) in cloud.point(i as usize).iter().enumerate() {
            lo[d] = lo[d].min(c);
            hi[d] = hi[d].max(c);
        }
    }
    (lo, hi)
}

fn build_node(cloud: &PointCloud, idx: &mut [u32], offset: usize, nodes: &mut Vec<Node>) -> usize {
    let (lo, hi) = bounds(cloud, idx);
    let id = nodes.len();
    if idx.len() <= LEAF_SIZE {
        nodes.push(Node {
            lo,
            hi,
            kind: NodeKind::Leaf {
                start: offset,
                end: offset + idx.len(),
            },
        });
        return id;
    }
    let axis = (0..cloud.dim())
        .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
        .expect("dimension >= 1");
    nodes.push(Node {
        lo,
        hi,
        kind: NodeKind::Leaf { start: 0, end: 0 },
    });
    let mid = idx.len() / 2;
    idx.select_nth_unstable_by(mid, |&a, &b| {
        cloud.point(a as usize)[axis].total_cmp(&cloud.point(b as usize)[axis])
    });
    let (left_idx, right_idx) = idx.split_at_mut(mid);
    let left = build_node(cloud, left_idx, offset, nodes);
    let right = build_node(cloud, right_idx, offset + mid, nodes);
    nodes[id].kind = NodeKind::Inner { left, right };
    id
}

/// Exhaustive k-nearest-neighbor scan with the same ordering as [`KdTree`].
pub fn brute_force_knn(cloud: &PointCloud, x: &[f64], m: usize) -> Vec<Neighbor> {
    let mut keys: Vec<Key> = cloud
        .points()
        .enumerate()
        .map(|(i, p)| key(sq_dist(x, p), i))
        .collect();
    keys.sort_unstable();
    keys.truncate(m);
    keys.into_iter().map(neighbor).collect()
}
