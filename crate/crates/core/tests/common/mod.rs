//! Brute-force reference implementations shared by the integration and
//! acceptance tests. None of them reuse library code.

#![allow(dead_code)]

use ocdmst::{FeatureMatrix, OneClassData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn point_on(xi: &[f64], xj: &[f64], t: f64) -> Vec<f64> {
    xi.iter().zip(xj).map(|(a, b)| a + t * (b - a)).collect()
}

/// Distance from `x` to the segment `[xi, xj]`, by repeated grid search over
/// the segment parameter. The distance along the segment is convex, so
/// zooming in on the best grid cell converges to the minimum.
pub fn segment_distance_by_search(x: &[f64], xi: &[f64], xj: &[f64]) -> f64 {
    const STEPS: usize = 64;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut best = f64::INFINITY;
    let mut best_t = 0.0;
    while hi - lo > 1e-12 {
        let step = (hi - lo) / STEPS as f64;
        for k in 0..=STEPS {
            let t = lo + step * k as f64;
            let d = dist(x, &point_on(xi, xj, t));
            if d < best {
                best = d;
                best_t = t;
            }
        }
        lo = (best_t - step).max(0.0);
        hi = (best_t + step).min(1.0);
    }
    best
}

/// Every labeled tree on `n` nodes, as edge lists, from Prüfer sequences.
pub fn all_spanning_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 1 {
        return vec![Vec::new()];
    }
    if n == 2 {
        return vec![vec![(0, 1)]];
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let mut out = Vec::with_capacity(total);
    let mut seq = vec![0usize; len];
    for code in 0..total {
        let mut c = code;
        for s in seq.iter_mut() {
            *s = c % n;
            c /= n;
        }
        out.push(prufer_decode(&seq, n));
    }
    out
}

fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Lowest total weight over every spanning tree of the complete graph.
pub fn brute_force_mst_weight(points: &[Vec<f64>], trees: &[Vec<(usize, usize)>]) -> f64 {
    trees
        .iter()
        .map(|t| t.iter().map(|&(a, b)| dist(&points[a], &points[b])).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// `sqrt(sum ||x - mean||^2 / (d * n))` divided by half the value range.
pub fn normalized_sigma(points: &[Vec<f64>], lo: f64, hi: f64) -> f64 {
    let d = points[0].len();
    let n = points.len() as f64;
    let mean: Vec<f64> = (0..d).map(|j| points.iter().map(|p| p[j]).sum::<f64>() / n).collect();
    let ss: f64 = points.iter().map(|p| dist(p, &mean).powi(2)).sum();
    ((ss / (d as f64 * n)).sqrt() / ((hi - lo) / 2.0)).min(1.0)
}

pub fn matrix(rows: &[Vec<f64>]) -> FeatureMatrix {
    FeatureMatrix::from_rows(rows).unwrap()
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, dim: usize, scale: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(-scale..scale)).collect())
        .collect()
}

/// Six points 0.1 apart followed by a three-point tail 1.0 apart, all on
/// the x axis.
pub fn sparse_tail() -> Vec<Vec<f64>> {
    [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 1.5, 2.5, 3.5]
        .iter()
        .map(|&x| vec![x, 0.0])
        .collect()
}

/// Query near the tail, 0.09 above the segment (2.5, 0)-(3.5, 0).
pub const TAIL_QUERY: [f64; 2] = [2.9, 0.09];
/// Query near the dense part, 0.07 above the segment (0.2, 0)-(0.3, 0).
pub const DENSE_QUERY: [f64; 2] = [0.24, 0.07];

/// Hand-computed thresholds for [`sparse_tail`] with the whole set as the
/// small tree and a BFS covering all of it: the path has five 0.1 edges and
/// three 1.0 edges, so the static median is 0.1. The random groups all equal
/// the whole set, so sigma_rg equals sigma_hat.
pub struct SparseTailOracle {
    pub theta_static: f64,
    pub sigma_hat: f64,
    pub factor: f64,
    pub theta_dynamic: f64,
}

pub fn sparse_tail_oracle(k: f64, beta: f64) -> SparseTailOracle {
    // mean x = 1.0; squared deviations sum to 12.3; d = 2, n = 9
    let sigma = (12.3_f64 / 18.0).sqrt();
    // value range [0, 3.5]
    let sigma_hat = sigma / 1.75;
    let factor = 1.0 / (1.0 + (k * (sigma_hat - sigma_hat * beta)).exp());
    SparseTailOracle {
        theta_static: 0.1,
        sigma_hat,
        factor,
        theta_dynamic: 0.1 * factor,
    }
}

/// Gaussian-ish target blob with outliers on a surrounding ring.
pub fn blob_with_ring(seed: u64, n_targets: usize, n_outliers: usize) -> OneClassData {
    let mut r = rng(seed);
    let mut rows = Vec::new();
    for _ in 0..n_targets {
        let (a, b): (f64, f64) = (r.random(), r.random());
        let radius = (-2.0 * (1.0 - a).ln()).sqrt();
        let angle = b * std::f64::consts::TAU;
        rows.push(vec![radius * angle.cos(), radius * angle.sin()]);
    }
    for _ in 0..n_outliers {
        let radius = r.random_range(2.0..5.0);
        let angle = r.random_range(0.0..std::f64::consts::TAU);
        rows.push(vec![radius * angle.cos(), radius * angle.sin()]);
    }
    let flags = (0..rows.len()).map(|i| i < n_targets).collect();
    OneClassData::new(matrix(&rows), flags).unwrap()
}
