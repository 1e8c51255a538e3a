//! Synthetic inputs shared by the benchmarks.

use ocdmst::{FeatureMatrix, OneClassData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` points drawn uniformly from the unit cube in `dim` dimensions.
pub fn uniform_points(seed: u64, n: usize, dim: usize) -> FeatureMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n * dim).map(|_| rng.random::<f64>()).collect();
    FeatureMatrix::new(dim, values).expect("non-empty shape")
}

/// A one-class problem: targets in the unit cube, outliers shifted by 1.5
/// along every axis.
pub fn shifted_problem(seed: u64, n_targets: usize, n_outliers: usize, dim: usize) -> OneClassData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity((n_targets + n_outliers) * dim);
    let mut is_target = Vec::with_capacity(n_targets + n_outliers);
    for i in 0..n_targets + n_outliers {
        let shift = if i < n_targets { 0.0 } else { 1.5 };
        values.extend((0..dim).map(|_| rng.random::<f64>() + shift));
        is_target.push(i < n_targets);
    }
    let features = FeatureMatrix::new(dim, values).expect("non-empty shape");
    OneClassData::new(features, is_target).expect("both classes present")
}
