//! The three MST class descriptors.
//!
//! * `MstCd` describes the whole target class with one spanning tree and
//!   accepts a point whose tree distance is at most the median edge weight.
//! * `MstCdGp` builds, for every query, a small tree over the `gamma`
//!   nearest training samples and applies the same static rule to it.
//! * `Ocdmst` uses the small tree too, but shrinks the threshold according
//!   to the dispersion of the BFS neighborhood around the query's nearest
//!   node (see [`crate::boundary`]).
//!
//! In every variant the tree distance of a query is measured only against
//! the edges incident to its nearest tree node.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boundary::{self, ThresholdModel, ThresholdParams, ValueRange};
use crate::data::FeatureMatrix;
use crate::error::{Error, Result};
use crate::geometry;
use crate::graph::{build_mst, SpanningTree};
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "mst-cd")]
    MstCd,
    #[serde(rename = "mst-cd-gp")]
    MstCdGp,
    #[serde(rename = "ocdmst")]
    Ocdmst,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::MstCd, Variant::MstCdGp, Variant::Ocdmst];

    pub fn name(self) -> &'static str {
        match self {
            Variant::MstCd => "mst-cd",
            Variant::MstCdGp => "mst-cd-gp",
            Variant::Ocdmst => "ocdmst",
        }
    }

    /// Whether the variant builds a per-query tree over nearest neighbors.
    pub fn is_lazy(self) -> bool {
        !matches!(self, Variant::MstCd)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "mst-cd" | "mstcd" => Ok(Variant::MstCd),
            "mst-cd-gp" | "mstcdgp" | "gp" => Ok(Variant::MstCdGp),
            "ocdmst" => Ok(Variant::Ocdmst),
            _ => Err(Error::InvalidParameter(format!("unknown classifier variant {:?}", s))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub variant: Variant,
    /// Size of the per-query tree.
    pub gamma: usize,
    /// BFS hop radius around the nearest tree node.
    pub depth: usize,
    pub threshold: ThresholdParams,
}

impl ClassifierConfig {
    pub fn new(variant: Variant, gamma: usize, depth: usize) -> Self {
        ClassifierConfig {
            variant,
            gamma,
            depth,
            threshold: ThresholdParams::default(),
        }
    }

    /// Checks the configuration against a training set of `n_train` rows.
    pub fn validate(&self, n_train: usize) -> Result<()> {
        self.threshold.validate()?;
        if n_train == 0 {
            return Err(Error::Config("no training samples".into()));
        }
        if self.variant.is_lazy() {
            if self.gamma < 2 {
                return Err(Error::Config(format!("gamma must be at least 2, got {}", self.gamma)));
            }
            if self.gamma > n_train {
                return Err(Error::Config(format!(
                    "gamma {} exceeds the {} training samples",
                    self.gamma, n_train
                )));
            }
        }
        if self.variant == Variant::Ocdmst && self.depth == 0 {
            return Err(Error::Config("BFS depth must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Outlier = 0,
    Target = 1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub label: Label,
    /// Distance from the query to the class descriptor.
    pub distance: f64,
    pub threshold: f64,
    /// Set when no edge set was available to derive a threshold; the
    /// threshold is then 0.
    pub degenerate: bool,
    pub diagnostics: Option<ThresholdModel>,
}

impl Verdict {
    fn decide(distance: f64, threshold: f64, degenerate: bool, diagnostics: Option<ThresholdModel>) -> Self {
        let label = if distance <= threshold {
            Label::Target
        } else {
            Label::Outlier
        };
        Verdict {
            label,
            distance,
            threshold,
            degenerate,
            diagnostics,
        }
    }

    pub fn is_target(&self) -> bool {
        self.label == Label::Target
    }
}

#[derive(Debug, Clone)]
struct GlobalDescriptor {
    tree: SpanningTree,
    /// `None` for a single-sample tree.
    theta: Option<f64>,
}

/// A classifier fitted on target-class samples.
#[derive(Debug, Clone)]
pub struct FittedModel {
    config: ClassifierConfig,
    train: FeatureMatrix,
    range: Option<ValueRange>,
    global: Option<GlobalDescriptor>,
}

/// Fits `config` on the target-class samples.
///
/// `MstCd` builds its tree and threshold here. The lazy variants only keep
/// the samples (plus the global value range for `Ocdmst`); their trees are
/// built per query.
pub fn fit(targets: &FeatureMatrix, config: &ClassifierConfig) -> Result<FittedModel> {
    config.validate(targets.n_samples())?;
    let (range, global) = match config.variant {
        Variant::MstCd => {
            let all: Vec<usize> = (0..targets.n_samples()).collect();
            let tree = build_mst(targets, &all)?;
            let theta = if tree.edges().is_empty() {
                None
            } else {
                Some(boundary::static_threshold(&tree.edge_weights(), config.threshold.alpha)?)
            };
            (None, Some(GlobalDescriptor { tree, theta }))
        }
        Variant::MstCdGp => (None, None),
        Variant::Ocdmst => (Some(ValueRange::of(targets)?), None),
    };
    Ok(FittedModel {
        config: *config,
        train: targets.clone(),
        range,
        global,
    })
}

impl FittedModel {
    pub fn config(&self) -> &ClassifierConfig {
        &self.config
    }

    pub fn training(&self) -> &FeatureMatrix {
        &self.train
    }

    pub fn n_train(&self) -> usize {
        self.train.n_samples()
    }

    pub fn value_range(&self) -> Option<ValueRange> {
        self.range
    }

    /// The class-wide tree of an `MstCd` model.
    pub fn global_tree(&self) -> Option<&SpanningTree> {
        self.global.as_ref().map(|g| &g.tree)
    }

    pub fn global_threshold(&self) -> Option<f64> {
        self.global.as_ref().and_then(|g| g.theta)
    }

    /// Classifies `x` using random stream 0.
    pub fn predict(&self, x: &[f64]) -> Result<Verdict> {
        self.predict_stream(x, 0)
    }

    /// Classifies `x`, drawing the random reference groups from `stream`.
    ///
    /// Batch callers pass the position of `x` in the batch so that results
    /// do not depend on evaluation order.
    pub fn predict_stream(&self, x: &[f64], stream: u64) -> Result<Verdict> {
        self.train.check_sample(x)?;
        if let Some(global) = &self.global {
            let nearest = global.tree.nearest_node(&self.train, x)?;
            let distance = global.tree.incident_distance(&self.train, nearest, x);
            return Ok(match global.theta {
                Some(theta) => Verdict::decide(distance, theta, false, None),
                None => {
                    log::debug!("single-sample class descriptor; threshold forced to 0");
                    Verdict::decide(distance, 0.0, true, None)
                }
            });
        }

        let neighbors = self.nearest_neighbors(x);
        let tree = build_mst(&self.train, &neighbors[..self.config.gamma])?;
        let nearest = tree.nearest_node(&self.train, x)?;
        let distance = tree.incident_distance(&self.train, nearest, x);
        match self.config.variant {
            Variant::MstCdGp => {
                let theta = boundary::static_threshold(&tree.edge_weights(), self.config.threshold.alpha)?;
                Ok(Verdict::decide(distance, theta, false, None))
            }
            Variant::Ocdmst => {
                let bfs = tree.bfs_from(nearest, self.config.depth)?;
                if bfs.edges.is_empty() {
                    log::debug!("empty BFS neighborhood; threshold forced to 0");
                    return Ok(Verdict::decide(distance, 0.0, true, None));
                }
                let params = ThresholdParams {
                    rng_seed: self.instance_seed(stream),
                    ..self.config.threshold
                };
                let range = self.range.expect("range is set when fitting Ocdmst");
                let model = boundary::dynamic_threshold(&bfs, &self.train, &tree, &params, range)?;
                Ok(Verdict::decide(distance, model.theta_dynamic, false, Some(model)))
            }
            Variant::MstCd => unreachable!("MstCd always has a global descriptor"),
        }
    }

    pub(crate) fn instance_seed(&self, stream: u64) -> u64 {
        derive_seed(self.config.threshold.rng_seed, &[stream])
    }

    /// Training rows ordered by distance to `x`, ties by row index.
    pub fn nearest_neighbors(&self, x: &[f64]) -> Vec<usize> {
        rank_by_distance(&self.train, x)
    }
}

pub(crate) fn rank_by_distance(points: &FeatureMatrix, x: &[f64]) -> Vec<usize> {
    let mut keyed: Vec<(f64, usize)> = points
        .rows()
        .enumerate()
        .map(|(i, row)| (geometry::distance(row, x), i))
        .collect();
    keyed.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, i)| i).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collinear() -> FeatureMatrix {
        FeatureMatrix::from_rows(&[[0.0], [1.0], [3.0]]).unwrap()
    }

    fn grid_points() -> FeatureMatrix {
        let mut rows = Vec::new();
        for i in 0..5 {
            for j in 0..4 {
                rows.push([i as f64 * 0.5, j as f64 * 0.7 + (i % 2) as f64 * 0.1]);
            }
        }
        FeatureMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn mst_cd_threshold_is_median_edge() {
        let model = fit(&collinear(), &ClassifierConfig::new(Variant::MstCd, 2, 1)).unwrap();
        assert_eq!(model.global_threshold(), Some(1.5));
    }

    #[test]
    fn lazy_fit_keeps_samples() {
        let pts = grid_points();
        let model = fit(&pts, &ClassifierConfig::new(Variant::Ocdmst, 5, 2)).unwrap();
        assert_eq!(model.n_train(), pts.n_samples());
        assert_eq!(model.training(), &pts);
        assert!(model.global_tree().is_none());
    }

    #[test]
    fn gamma_larger_than_training_set_is_rejected() {
        let err = fit(&collinear(), &ClassifierConfig::new(Variant::MstCdGp, 4, 1)).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(fit(&collinear(), &ClassifierConfig::new(Variant::Ocdmst, 1, 1)).is_err());
        assert!(fit(&collinear(), &ClassifierConfig::new(Variant::Ocdmst, 3, 0)).is_err());
    }

    #[test]
    fn constant_training_set_has_no_range() {
        let pts = FeatureMatrix::from_rows(&[[1.0], [1.0], [1.0]]).unwrap();
        let err = fit(&pts, &ClassifierConfig::new(Variant::Ocdmst, 2, 1)).unwrap_err();
        assert!(matches!(err, Error::DegenerateRange { .. }));
    }

    #[test]
    fn training_sample_is_accepted_by_every_variant() {
        let pts = grid_points();
        for variant in Variant::ALL {
            let model = fit(&pts, &ClassifierConfig::new(variant, 8, 2)).unwrap();
            for i in [0, 7, 13] {
                let v = model.predict(pts.row(i)).unwrap();
                assert_eq!(v.distance, 0.0, "{variant}");
                assert!(v.is_target(), "{variant}");
            }
        }
    }

    #[test]
    fn far_query_is_rejected_by_every_variant() {
        let pts = grid_points();
        for variant in Variant::ALL {
            let model = fit(&pts, &ClassifierConfig::new(variant, 8, 2)).unwrap();
            let v = model.predict(&[100.0, -40.0]).unwrap();
            assert_eq!(v.label, Label::Outlier, "{variant}");
        }
    }

    #[test]
    fn ocdmst_reports_diagnostics() {
        let pts = grid_points();
        let model = fit(&pts, &ClassifierConfig::new(Variant::Ocdmst, 8, 2)).unwrap();
        let v = model.predict(&[0.3, 0.4]).unwrap();
        let d = v.diagnostics.unwrap();
        assert_eq!(v.threshold, d.theta_dynamic);
        assert!(d.sigmoid_factor > 0.0 && d.sigmoid_factor < 1.0);
    }

    #[test]
    fn single_sample_mst_cd_is_degenerate() {
        let pts = FeatureMatrix::from_rows(&[[2.0, 2.0]]).unwrap();
        let model = fit(&pts, &ClassifierConfig::new(Variant::MstCd, 2, 1)).unwrap();
        let v = model.predict(&[2.5, 2.0]).unwrap();
        assert!(v.degenerate);
        assert_eq!(v.label, Label::Outlier);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let model = fit(&grid_points(), &ClassifierConfig::new(Variant::MstCdGp, 4, 1)).unwrap();
        assert!(matches!(
            model.predict(&[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!("svdd".parse::<Variant>().is_err());
    }
}
