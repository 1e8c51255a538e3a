//! Static and density-adaptive acceptance thresholds.
//!
//! The static threshold is a quantile of tree edge weights. The dynamic
//! threshold scales the quantile of the edges around the test point by an
//! inverse logistic of how dispersed that neighborhood is:
//!
//! ```text
//! theta_dyn = q_alpha(bfs edges) / (1 + exp(K * (sigma_hat - beta * sigma_rg)))
//! ```
//!
//! `sigma_hat` is the spread of the BFS node group about its centroid,
//! divided by the largest standard deviation a variable confined to
//! `[x_min, x_max]` can have, `(x_max - x_min) / 2`. `sigma_rg` is the
//! median of the same statistic over random node groups of equal size drawn
//! from the whole small tree; it sets the inflection point of the curve.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::FeatureMatrix;
use crate::error::{Error, Result};
use crate::graph::{BfsNeighborhood, SpanningTree};

/// Logistic exponents are clamped to this magnitude before `exp`.
const MAX_EXPONENT: f64 = 700.0;

/// Scalars that shape the acceptance threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdParams {
    /// Edge-weight quantile; 0.5 selects the median.
    pub alpha: f64,
    /// Logistic growth rate.
    pub k: f64,
    /// Multiplier on the random-group reference that shifts the inflection.
    pub beta: f64,
    /// Number of random node groups behind the reference dispersion.
    pub n_random_groups: usize,
    pub rng_seed: u64,
}

impl Default for ThresholdParams {
    fn default() -> Self {
        ThresholdParams {
            alpha: 0.5,
            k: 5.0,
            beta: 1.5,
            n_random_groups: 100,
            rng_seed: 0,
        }
    }
}

impl ThresholdParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in [0, 1], got {}",
                self.alpha
            )));
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(Error::InvalidParameter(format!("K must be positive, got {}", self.k)));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        if self.n_random_groups == 0 {
            return Err(Error::InvalidParameter(
                "at least one random group is required".into(),
            ));
        }
        Ok(())
    }
}

/// Scalar range of the training features, used to normalize dispersion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueRange {
    pub min: f64,
    pub max: f64,
}

impl ValueRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && max > min) {
            return Err(Error::DegenerateRange { min, max });
        }
        Ok(ValueRange { min, max })
    }

    /// Global range over every feature value of `points`.
    pub fn of(points: &FeatureMatrix) -> Result<Self> {
        let (min, max) = points.value_bounds().ok_or(Error::Empty("feature matrix"))?;
        Self::new(min, max)
    }
}

/// Everything that went into one dynamic threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdModel {
    pub median_bfs_edge: f64,
    pub sigma_hat: f64,
    pub sigma_rg: f64,
    pub sigmoid_factor: f64,
    pub theta_dynamic: f64,
}

/// The K/beta independent part of a dynamic threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborhoodStats {
    pub median_bfs_edge: f64,
    pub sigma_hat: f64,
    pub sigma_rg: f64,
}

impl NeighborhoodStats {
    pub fn threshold(&self, k: f64, beta: f64) -> ThresholdModel {
        let factor = sigmoid_factor(self.sigma_hat, self.sigma_rg, k, beta);
        ThresholdModel {
            median_bfs_edge: self.median_bfs_edge,
            sigma_hat: self.sigma_hat,
            sigma_rg: self.sigma_rg,
            sigmoid_factor: factor,
            theta_dynamic: self.median_bfs_edge * factor,
        }
    }
}

/// Linear-interpolation quantile of an already ascending slice.
fn sorted_quantile(sorted: &[f64], alpha: f64) -> f64 {
    let pos = alpha * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let frac = pos - lo as f64;
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}

/// The `alpha` quantile of the edge weights, interpolating linearly between
/// order statistics (an even-length median is the midpoint of the two middle
/// values).
pub fn static_threshold(edge_weights: &[f64], alpha: f64) -> Result<f64> {
    if edge_weights.is_empty() {
        return Err(Error::Empty("edge weights"));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in [0, 1], got {}",
            alpha
        )));
    }
    let mut sorted = edge_weights.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(sorted_quantile(&sorted, alpha))
}

/// Pooled standard deviation of a node group about its centroid:
/// `sqrt(sum_i ||x_i - centroid||^2 / (d_feat * n))`.
pub fn group_sigma(points: &FeatureMatrix, group: &[usize]) -> Result<f64> {
    if group.is_empty() {
        return Err(Error::Empty("node group"));
    }
    if let Some(&bad) = group.iter().find(|&&i| i >= points.n_samples()) {
        return Err(Error::InvalidInput(format!("node {} out of range", bad)));
    }
    Ok(group_sigma_unchecked(points, group))
}

fn group_sigma_unchecked(points: &FeatureMatrix, group: &[usize]) -> f64 {
    group_sigma_with(points, group, &mut Vec::new())
}

/// [`group_sigma_unchecked`] reusing `centroid` as scratch space.
fn group_sigma_with(points: &FeatureMatrix, group: &[usize], centroid: &mut Vec<f64>) -> f64 {
    let d = points.n_features();
    let n = group.len() as f64;
    centroid.clear();
    centroid.resize(d, 0.0);
    for &i in group {
        for (c, v) in centroid.iter_mut().zip(points.row(i)) {
            *c += v;
        }
    }
    centroid.iter_mut().for_each(|c| *c /= n);
    let mut ss = 0.0;
    for &i in group {
        for (c, v) in centroid.iter().zip(points.row(i)) {
            let dev = v - c;
            ss += dev * dev;
        }
    }
    (ss / (d as f64 * n)).sqrt()
}

/// Divides `sigma` by the largest standard deviation possible on
/// `[x_min, x_max]` and clamps the result to `[0, 1]`.
pub fn normalize_sigma(sigma: f64, x_min: f64, x_max: f64) -> Result<f64> {
    let range = ValueRange::new(x_min, x_max)?;
    if !(sigma >= 0.0) {
        return Err(Error::InvalidInput(format!("sigma must be nonnegative, got {}", sigma)));
    }
    Ok(normalized(sigma, range))
}

#[inline]
fn normalized(sigma: f64, range: ValueRange) -> f64 {
    let bound = ((range.max - range.min).powi(2) / 4.0).sqrt();
    (sigma / bound).clamp(0.0, 1.0)
}

/// Inverse logistic `1 / (1 + exp(K * (sigma_hat - sigma_rg * beta)))`.
pub fn sigmoid_factor(sigma_hat: f64, sigma_rg: f64, k: f64, beta: f64) -> f64 {
    let z = (k * (sigma_hat - sigma_rg * beta)).clamp(-MAX_EXPONENT, MAX_EXPONENT);
    1.0 / (1.0 + z.exp())
}

/// Median normalized dispersion of `n_groups` random subsets of
/// `tree_nodes`, each of `group_size` distinct nodes.
pub fn random_group_sigma(
    points: &FeatureMatrix,
    tree_nodes: &[usize],
    group_size: usize,
    n_groups: usize,
    range: ValueRange,
    rng_seed: u64,
) -> Result<f64> {
    if group_size == 0 || group_size > tree_nodes.len() {
        return Err(Error::InvalidInput(format!(
            "group size {} not in 1..={}",
            group_size,
            tree_nodes.len()
        )));
    }
    if n_groups == 0 {
        return Err(Error::InvalidParameter("at least one random group is required".into()));
    }
    if let Some(&bad) = tree_nodes.iter().find(|&&i| i >= points.n_samples()) {
        return Err(Error::InvalidInput(format!("node {} out of range", bad)));
    }
    if group_size == tree_nodes.len() {
        // every draw is the whole tree, in tree order
        return Ok(normalized(group_sigma_unchecked(points, tree_nodes), range));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut sigmas = Vec::with_capacity(n_groups);
    let mut group = Vec::with_capacity(group_size);
    let mut centroid = Vec::with_capacity(points.n_features());
    for _ in 0..n_groups {
        let mut picks = index::sample(&mut rng, tree_nodes.len(), group_size).into_vec();
        // fixed summation order for a given subset
        picks.sort_unstable();
        group.clear();
        group.extend(picks.iter().map(|&p| tree_nodes[p]));
        sigmas.push(normalized(group_sigma_with(points, &group, &mut centroid), range));
    }
    sigmas.sort_unstable_by(f64::total_cmp);
    Ok(sorted_quantile(&sigmas, 0.5))
}

/// Edge quantile, normalized BFS dispersion and random-group reference for
/// one neighborhood.
pub fn neighborhood_stats(
    bfs: &BfsNeighborhood,
    points: &FeatureMatrix,
    tree: &SpanningTree,
    alpha: f64,
    n_groups: usize,
    range: ValueRange,
    rng_seed: u64,
) -> Result<NeighborhoodStats> {
    let median_bfs_edge = static_threshold(&bfs.edge_weights(), alpha)?;
    let sigma_hat = normalized(group_sigma(points, &bfs.nodes)?, range);
    let sigma_rg = random_group_sigma(
        points,
        tree.nodes(),
        bfs.nodes.len(),
        n_groups,
        range,
        rng_seed,
    )?;
    Ok(NeighborhoodStats {
        median_bfs_edge,
        sigma_hat,
        sigma_rg,
    })
}

/// Density-adaptive threshold for the neighborhood `bfs` of `tree`.
pub fn dynamic_threshold(
    bfs: &BfsNeighborhood,
    points: &FeatureMatrix,
    tree: &SpanningTree,
    params: &ThresholdParams,
    range: ValueRange,
) -> Result<ThresholdModel> {
    params.validate()?;
    let stats = neighborhood_stats(
        bfs,
        points,
        tree,
        params.alpha,
        params.n_random_groups,
        range,
        params.rng_seed,
    )?;
    Ok(stats.threshold(params.k, params.beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_mst;

    #[test]
    fn static_threshold_examples() {
        assert_eq!(static_threshold(&[3.0, 1.0, 2.0], 0.5).unwrap(), 2.0);
        assert_eq!(static_threshold(&[5.0], 0.0).unwrap(), 5.0);
        assert_eq!(static_threshold(&[5.0], 0.73).unwrap(), 5.0);
        assert_eq!(static_threshold(&[4.0, 1.0, 3.0, 2.0], 0.5).unwrap(), 2.5);
        assert_eq!(static_threshold(&[4.0, 1.0, 3.0, 2.0], 0.0).unwrap(), 1.0);
        assert_eq!(static_threshold(&[4.0, 1.0, 3.0, 2.0], 1.0).unwrap(), 4.0);
        assert!(matches!(static_threshold(&[], 0.5), Err(Error::Empty(_))));
        assert!(static_threshold(&[1.0], 1.5).is_err());
    }

    #[test]
    fn group_sigma_examples() {
        let same = FeatureMatrix::from_rows(&[[1.0, 2.0], [1.0, 2.0], [1.0, 2.0]]).unwrap();
        assert_eq!(group_sigma(&same, &[0, 1, 2]).unwrap(), 0.0);
        let line = FeatureMatrix::from_rows(&[[0.0], [2.0]]).unwrap();
        assert_eq!(group_sigma(&line, &[0, 1]).unwrap(), 1.0);
        let plane = FeatureMatrix::from_rows(&[[0.0, 0.0], [2.0, 0.0]]).unwrap();
        let s = group_sigma(&plane, &[0, 1]).unwrap();
        assert!((s - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(group_sigma(&plane, &[]).is_err());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_sigma(0.5, 0.0, 1.0).unwrap(), 1.0);
        assert_eq!(normalize_sigma(0.0, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(normalize_sigma(0.25, 0.0, 1.0).unwrap(), 0.5);
        assert_eq!(normalize_sigma(3.0, 0.0, 1.0).unwrap(), 1.0);
        assert!(matches!(
            normalize_sigma(0.1, 2.0, 2.0),
            Err(Error::DegenerateRange { .. })
        ));
    }

    #[test]
    fn sigmoid_examples() {
        assert_eq!(sigmoid_factor(0.75, 0.5, 5.0, 1.5), 0.5);
        let (rg, beta) = (0.37, 1.1);
        assert_eq!(sigmoid_factor(rg * beta, rg, 7.0, beta), 0.5);
        assert_eq!(sigmoid_factor(1e9, 0.4, 5.0, 1.5), 1.0 / (1.0 + 700f64.exp()));
        assert!(sigmoid_factor(1e9, 0.4, 5.0, 1.5) < 1e-300);
        let v = sigmoid_factor(0.8, 0.4, 5.0, 1.5);
        assert!((v - 1.0 / (1.0 + 1f64.exp())).abs() < 1e-15);
        assert!((v - 0.2689).abs() < 1e-4);
    }

    #[test]
    fn random_groups_full_size_equals_tree_sigma() {
        let pts = FeatureMatrix::from_rows(&[[0.0], [1.0], [3.0], [7.0], [8.5]]).unwrap();
        let nodes = [0, 1, 2, 3, 4];
        let range = ValueRange::of(&pts).unwrap();
        let whole = normalized(group_sigma(&pts, &nodes).unwrap(), range);
        let rg = random_group_sigma(&pts, &nodes, 5, 17, range, 3).unwrap();
        assert_eq!(rg, whole);
    }

    #[test]
    fn random_groups_of_identical_points() {
        let pts = FeatureMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0], [1.0, 1.0], [0.0, 2.0]])
            .unwrap();
        let range = ValueRange::of(&pts).unwrap();
        assert_eq!(random_group_sigma(&pts, &[0, 1, 2], 2, 10, range, 9).unwrap(), 0.0);
    }

    #[test]
    fn random_groups_validate_size() {
        let pts = FeatureMatrix::from_rows(&[[0.0], [1.0]]).unwrap();
        let range = ValueRange::of(&pts).unwrap();
        assert!(random_group_sigma(&pts, &[0, 1], 3, 10, range, 0).is_err());
        assert!(random_group_sigma(&pts, &[0, 1], 0, 10, range, 0).is_err());
        assert!(random_group_sigma(&pts, &[0, 1], 1, 0, range, 0).is_err());
    }

    #[test]
    fn random_groups_are_reproducible() {
        let pts = FeatureMatrix::from_rows(&[[0.0], [1.0], [3.0], [7.0], [8.5], [9.0]]).unwrap();
        let nodes = [0, 1, 2, 3, 4, 5];
        let range = ValueRange::of(&pts).unwrap();
        let a = random_group_sigma(&pts, &nodes, 3, 50, range, 11).unwrap();
        assert_eq!(a, random_group_sigma(&pts, &nodes, 3, 50, range, 11).unwrap());
    }

    #[test]
    fn dynamic_threshold_at_inflection_halves_median() {
        let pts = FeatureMatrix::from_rows(&[[0.0], [1.0], [2.0], [3.0]]).unwrap();
        let tree = build_mst(&pts, &[0, 1, 2, 3]).unwrap();
        let bfs = tree.bfs_from(0, 10).unwrap();
        let range = ValueRange::of(&pts).unwrap();
        // whole-tree BFS: every random group equals the BFS group, so the
        // logistic sits exactly on its inflection point when beta = 1
        let params = ThresholdParams {
            beta: 1.0,
            ..Default::default()
        };
        let m = dynamic_threshold(&bfs, &pts, &tree, &params, range).unwrap();
        assert_eq!(m.sigma_hat, m.sigma_rg);
        assert_eq!(m.sigmoid_factor, 0.5);
        assert_eq!(m.theta_dynamic, 0.5 * m.median_bfs_edge);
    }

    #[test]
    fn params_validation() {
        assert!(ThresholdParams::default().validate().is_ok());
        for bad in [
            ThresholdParams { alpha: 1.1, ..Default::default() },
            ThresholdParams { k: 0.0, ..Default::default() },
            ThresholdParams { beta: -1.0, ..Default::default() },
            ThresholdParams { n_random_groups: 0, ..Default::default() },
        ] {
            assert!(matches!(bad.validate(), Err(Error::InvalidParameter(_))));
        }
    }
}
