use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{mean_and_variance, ConfusionMatrix};
use crate::classifier::{fit, ClassifierConfig};
use crate::data::OneClassData;
use crate::error::{Error, Result};
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvProtocol {
    pub n_folds: usize,
    pub n_repeats: usize,
    pub seed: u64,
}

impl Default for CvProtocol {
    fn default() -> Self {
        CvProtocol {
            n_folds: 5,
            n_repeats: 20,
            seed: 0,
        }
    }
}

impl CvProtocol {
    pub fn validate(&self, data: &OneClassData) -> Result<()> {
        if self.n_folds < 2 {
            return Err(Error::Config(format!("need at least 2 folds, got {}", self.n_folds)));
        }
        if self.n_repeats == 0 {
            return Err(Error::Config("need at least one repeat".into()));
        }
        let n_targets = data.target_indices().len();
        if n_targets < self.n_folds {
            return Err(Error::Config(format!(
                "{} target samples cannot fill {} folds",
                n_targets, self.n_folds
            )));
        }
        if data.outlier_indices().is_empty() {
            return Err(Error::Config("the dataset has no outlier samples".into()));
        }
        Ok(())
    }

    /// Size of the smallest training split.
    pub fn min_train_size(&self, n_targets: usize) -> usize {
        n_targets - n_targets.div_ceil(self.n_folds)
    }

    pub(crate) fn run_seed(&self, base: u64, repeat: usize, fold: usize) -> u64 {
        derive_seed(base, &[self.seed, repeat as u64, fold as u64])
    }
}

/// One train/test partition of the target class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub repeat: usize,
    pub fold: usize,
    /// Dataset rows used for training, ascending.
    pub train: Vec<usize>,
    /// Held-out target rows, ascending. The test set is these followed by
    /// every outlier row.
    pub test_targets: Vec<usize>,
}

/// All `n_repeats * n_folds` splits, repeat-major.
pub fn cv_splits(data: &OneClassData, protocol: &CvProtocol) -> Result<Vec<Split>> {
    protocol.validate(data)?;
    let targets = data.target_indices();
    let n = targets.len();
    let k = protocol.n_folds;
    let mut splits = Vec::with_capacity(protocol.n_repeats * k);
    for repeat in 0..protocol.n_repeats {
        let mut order = targets.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(protocol.seed, &[repeat as u64]));
        order.shuffle(&mut rng);
        for fold in 0..k {
            let (lo, hi) = (fold * n / k, (fold + 1) * n / k);
            let mut test_targets = order[lo..hi].to_vec();
            let mut train: Vec<usize> = order[..lo].iter().chain(&order[hi..]).copied().collect();
            test_targets.sort_unstable();
            train.sort_unstable();
            splits.push(Split {
                repeat,
                fold,
                train,
                test_targets,
            });
        }
    }
    Ok(splits)
}

/// Outcome of one fold of one repeat.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub repeat: usize,
    pub fold: usize,
    pub confusion: ConfusionMatrix,
    pub mcc: f64,
    pub ppv: Option<f64>,
    pub npv: Option<f64>,
}

impl RunRecord {
    pub fn new(repeat: usize, fold: usize, confusion: ConfusionMatrix) -> Self {
        RunRecord {
            repeat,
            fold,
            confusion,
            mcc: confusion.mcc(),
            ppv: confusion.ppv(),
            npv: confusion.npv(),
        }
    }
}

/// Per-run scores of one configuration with their pooled MCC statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub config: ClassifierConfig,
    pub runs: Vec<RunRecord>,
    pub mcc_mean: f64,
    pub mcc_variance: f64,
}

impl EvalReport {
    pub fn from_runs(config: ClassifierConfig, runs: Vec<RunRecord>) -> Self {
        let mccs: Vec<f64> = runs.iter().map(|r| r.mcc).collect();
        let (mcc_mean, mcc_variance) = mean_and_variance(&mccs);
        EvalReport {
            config,
            runs,
            mcc_mean,
            mcc_variance,
        }
    }

    /// Sum of the confusion matrices of every run.
    pub fn pooled_confusion(&self) -> ConfusionMatrix {
        self.runs.iter().fold(ConfusionMatrix::default(), |acc, r| {
            ConfusionMatrix::new(
                acc.tp + r.confusion.tp,
                acc.fp + r.confusion.fp,
                acc.fn_ + r.confusion.fn_,
                acc.tn + r.confusion.tn,
            )
        })
    }
}

/// Cross-validates one configuration.
///
/// Runs execute on the current rayon pool; results do not depend on its
/// size.
pub fn run_cv(
    data: &OneClassData,
    config: &ClassifierConfig,
    protocol: &CvProtocol,
) -> Result<EvalReport> {
    let splits = cv_splits(data, protocol)?;
    let n_targets = data.target_indices().len();
    config.validate(protocol.min_train_size(n_targets))?;
    let outliers = data.outlier_indices();
    let runs = splits
        .par_iter()
        .map(|split| {
            let train = data.features().select(&split.train);
            let run_config = ClassifierConfig {
                threshold: crate::boundary::ThresholdParams {
                    rng_seed: protocol.run_seed(config.threshold.rng_seed, split.repeat, split.fold),
                    ..config.threshold
                },
                ..*config
            };
            let model = fit(&train, &run_config)?;
            let mut cm = ConfusionMatrix::default();
            for (pos, &row) in split.test_targets.iter().chain(&outliers).enumerate() {
                let verdict = model.predict_stream(data.features().row(row), pos as u64)?;
                cm.record(data.is_target(row), verdict.is_target());
            }
            Ok(RunRecord::new(split.repeat, split.fold, cm))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport::from_runs(*config, runs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::Variant;
    use crate::data::FeatureMatrix;

    // 12 targets on a ring, 5 outliers far away
    fn toy() -> OneClassData {
        let mut rows = Vec::new();
        let mut flags = Vec::new();
        for i in 0..12 {
            let a = i as f64 * 0.5;
            rows.push([a.cos() * 0.3, a.sin() * 0.3]);
            flags.push(true);
        }
        for i in 0..5 {
            rows.push([10.0 + i as f64, -10.0]);
            flags.push(false);
        }
        OneClassData::new(FeatureMatrix::from_rows(&rows).unwrap(), flags).unwrap()
    }

    // 4 corners of a small square with 8 copies each: a fold of 6 or 7 rows
    // can never hold every copy of a corner
    fn cluster() -> OneClassData {
        let mut rows = Vec::new();
        for _ in 0..8 {
            rows.extend([[0.0, 0.0], [0.1, 0.0], [0.0, 0.1], [0.1, 0.1]]);
        }
        let n = rows.len();
        for i in 0..6 {
            rows.push([100.0 + 3.0 * i as f64, -80.0]);
        }
        let flags = (0..rows.len()).map(|i| i < n).collect();
        OneClassData::new(FeatureMatrix::from_rows(&rows).unwrap(), flags).unwrap()
    }

    #[test]
    fn folds_partition_targets() {
        let data = toy();
        let protocol = CvProtocol {
            n_folds: 5,
            n_repeats: 3,
            seed: 4,
        };
        let splits = cv_splits(&data, &protocol).unwrap();
        assert_eq!(splits.len(), 15);
        for repeat in 0..3 {
            let mut seen: Vec<usize> = splits
                .iter()
                .filter(|s| s.repeat == repeat)
                .flat_map(|s| s.test_targets.clone())
                .collect();
            seen.sort_unstable();
            assert_eq!(seen, data.target_indices());
        }
        for s in &splits {
            assert_eq!(s.train.len() + s.test_targets.len(), 12);
            assert!(s.train.iter().all(|i| !s.test_targets.contains(i)));
            assert!(s.train.len() >= protocol.min_train_size(12));
        }
        assert_ne!(splits[0].test_targets, splits[5].test_targets);
    }

    #[test]
    fn protocol_validation() {
        let data = toy();
        let bad = CvProtocol {
            n_folds: 1,
            ..Default::default()
        };
        assert!(cv_splits(&data, &bad).is_err());
        let too_many = CvProtocol {
            n_folds: 13,
            ..Default::default()
        };
        assert!(cv_splits(&data, &too_many).is_err());
        let only_targets =
            OneClassData::new(FeatureMatrix::from_rows(&[[0.0], [1.0]]).unwrap(), vec![true, true])
                .unwrap();
        assert!(cv_splits(&only_targets, &CvProtocol { n_folds: 2, ..Default::default() }).is_err());
    }

    #[test]
    fn separable_toy_scores_one() {
        let data = cluster();
        let protocol = CvProtocol {
            n_folds: 5,
            n_repeats: 3,
            seed: 1,
        };
        for config in [
            ClassifierConfig::new(Variant::MstCd, 0, 0),
            ClassifierConfig::new(Variant::MstCdGp, 8, 0),
            ClassifierConfig::new(Variant::Ocdmst, 8, 2),
        ] {
            let report = run_cv(&data, &config, &protocol).unwrap();
            assert_eq!(report.runs.len(), 15);
            assert!(report.runs.iter().all(|r| [12, 13].contains(&r.confusion.total())));
            assert_eq!(report.mcc_mean, 1.0, "{}", config.variant);
            assert_eq!(report.mcc_variance, 0.0);
        }
    }

    #[test]
    fn mean_and_variance_recompute_from_runs() {
        let report = run_cv(&toy(), &ClassifierConfig::new(Variant::Ocdmst, 5, 2), &CvProtocol {
            n_folds: 4,
            n_repeats: 3,
            seed: 2,
        })
        .unwrap();
        let mccs: Vec<f64> = report.runs.iter().map(|r| r.confusion.mcc()).collect();
        let (mean, var) = mean_and_variance(&mccs);
        assert_eq!(report.mcc_mean, mean);
        assert_eq!(report.mcc_variance, var);
    }

    #[test]
    fn gamma_beyond_training_split_is_rejected() {
        let data = toy();
        let protocol = CvProtocol {
            n_folds: 3,
            n_repeats: 1,
            seed: 0,
        };
        // 12 targets in 3 folds leave 8 for training
        assert!(run_cv(&data, &ClassifierConfig::new(Variant::Ocdmst, 8, 1), &protocol).is_ok());
        assert!(matches!(
            run_cv(&data, &ClassifierConfig::new(Variant::Ocdmst, 9, 1), &protocol),
            Err(Error::Config(_))
        ));
    }
}
