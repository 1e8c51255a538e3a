use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cv::{cv_splits, CvProtocol, EvalReport, RunRecord, Split};
use super::metrics::ConfusionMatrix;
use crate::boundary::{self, NeighborhoodStats, ThresholdParams, ValueRange};
use crate::classifier::{fit, rank_by_distance, ClassifierConfig, Variant};
use crate::data::{FeatureMatrix, OneClassData};
use crate::error::{Error, Result};
use crate::geometry;
use crate::graph::SpanningTree;
use crate::seed::derive_seed;

/// Candidate values for each tunable parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub gammas: Vec<usize>,
    pub depths: Vec<usize>,
    pub ks: Vec<f64>,
    pub betas: Vec<f64>,
}

impl ParamGrid {
    /// The tuning ranges used for the UCI benchmarks: gamma spread over
    /// `[n/4, n/2]` for a target class of `n_targets` samples, depth 1 to 7, K in
    /// {5, 6, 7, 8, 9, 10, 20} and beta in {1.05, 1.1, 1.5}.
    pub fn benchmark(n_targets: usize, gamma_steps: usize) -> Self {
        ParamGrid {
            gammas: gamma_range(n_targets, gamma_steps),
            depths: (1..=7).collect(),
            ks: vec![5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 20.0],
            betas: vec![1.05, 1.1, 1.5],
        }
    }

    fn validate(&self, variant: Variant) -> Result<()> {
        let empty = match variant {
            Variant::MstCd => None,
            Variant::MstCdGp => self.gammas.is_empty().then_some("gamma"),
            Variant::Ocdmst => [
                ("gamma", self.gammas.is_empty()),
                ("depth", self.depths.is_empty()),
                ("K", self.ks.is_empty()),
                ("beta", self.betas.is_empty()),
            ]
            .into_iter()
            .find(|(_, e)| *e)
            .map(|(name, _)| name),
        };
        match empty {
            Some(name) => Err(Error::Config(format!("empty {} grid", name))),
            None => Ok(()),
        }
    }

    /// Grid cells relevant to `variant`, gamma-major.
    fn cells(&self, variant: Variant, base: &ThresholdParams) -> Vec<ClassifierConfig> {
        let gammas = dedup(&self.gammas);
        let depths = dedup(&self.depths);
        let ks = dedup_f64(&self.ks);
        let betas = dedup_f64(&self.betas);
        let with = |gamma, depth, k, beta| ClassifierConfig {
            variant,
            gamma,
            depth,
            threshold: ThresholdParams { k, beta, ..*base },
        };
        match variant {
            Variant::MstCd => vec![with(0, 0, base.k, base.beta)],
            Variant::MstCdGp => gammas.iter().map(|&g| with(g, 0, base.k, base.beta)).collect(),
            Variant::Ocdmst => {
                let mut out = Vec::new();
                for &g in &gammas {
                    for &d in &depths {
                        for &k in &ks {
                            for &b in &betas {
                                out.push(with(g, d, k, b));
                            }
                        }
                    }
                }
                out
            }
        }
    }
}

fn dedup(values: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(values.len());
    for &v in values {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn dedup_f64(values: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(values.len());
    for &v in values {
        if !out.iter().any(|o| o.to_bits() == v.to_bits()) {
            out.push(v);
        }
    }
    out
}

/// `steps` gamma values evenly spread from `n/4` to `n/2` (rounded, at
/// least 2, duplicates removed).
pub fn gamma_range(n: usize, steps: usize) -> Vec<usize> {
    let lo = n as f64 / 4.0;
    let hi = n as f64 / 2.0;
    let values: Vec<usize> = match steps {
        0 => Vec::new(),
        1 => vec![((lo + hi) / 2.0).round() as usize],
        _ => (0..steps)
            .map(|i| (lo + (hi - lo) * i as f64 / (steps - 1) as f64).round() as usize)
            .collect(),
    };
    dedup(&values.into_iter().map(|g| g.max(2)).collect::<Vec<_>>())
}

/// Best (K, beta) cell of one (gamma, depth) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub gamma: usize,
    pub depth: usize,
    pub k: f64,
    pub beta: f64,
    pub mcc_mean: f64,
    pub mcc_variance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    /// Every cell, best mean MCC first; ties keep grid order.
    pub ranked: Vec<EvalReport>,
    /// Gamma-major (gamma, depth) surface.
    pub surface: Vec<SurfacePoint>,
}

impl GridResult {
    pub fn best(&self) -> &EvalReport {
        &self.ranked[0]
    }
}

/// Cross-validates every cell of `grid` for `variant`.
///
/// All cells share the same splits and random streams, so each cell's
/// report equals what [`super::run_cv`] returns for that configuration. Work
/// that does not depend on a parameter (neighbor ranking, the small tree for
/// a given gamma, BFS statistics for a given depth) is computed once and
/// reused across the cells that share it.
pub fn grid_search(
    data: &OneClassData,
    variant: Variant,
    grid: &ParamGrid,
    base: &ThresholdParams,
    protocol: &CvProtocol,
) -> Result<GridResult> {
    grid.validate(variant)?;
    let cells = grid.cells(variant, base);
    let splits = cv_splits(data, protocol)?;
    let min_train = protocol.min_train_size(data.target_indices().len());
    for cell in &cells {
        cell.validate(min_train)?;
    }
    let outliers = data.outlier_indices();
    let per_split: Vec<Vec<ConfusionMatrix>> = splits
        .par_iter()
        .map(|split| match variant {
            Variant::MstCd => eval_global(data, &outliers, split, &cells[0], protocol).map(|cm| vec![cm]),
            _ => eval_lazy(data, &outliers, split, &cells, protocol, base),
        })
        .collect::<Result<_>>()?;

    let reports: Vec<EvalReport> = cells
        .iter()
        .enumerate()
        .map(|(c, cfg)| {
            let runs = splits
                .iter()
                .zip(&per_split)
                .map(|(s, cms)| RunRecord::new(s.repeat, s.fold, cms[c]))
                .collect();
            EvalReport::from_runs(*cfg, runs)
        })
        .collect();

    let surface = surface(&reports);
    let mut order: Vec<usize> = (0..reports.len()).collect();
    order.sort_by(|&a, &b| reports[b].mcc_mean.total_cmp(&reports[a].mcc_mean).then(a.cmp(&b)));
    let mut slots: Vec<Option<EvalReport>> = reports.into_iter().map(Some).collect();
    let ranked = order.into_iter().map(|i| slots[i].take().unwrap()).collect();
    Ok(GridResult { ranked, surface })
}

fn surface(reports: &[EvalReport]) -> Vec<SurfacePoint> {
    let mut out: Vec<SurfacePoint> = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for r in reports {
        let key = (r.config.gamma, r.config.depth);
        let point = SurfacePoint {
            gamma: r.config.gamma,
            depth: r.config.depth,
            k: r.config.threshold.k,
            beta: r.config.threshold.beta,
            mcc_mean: r.mcc_mean,
            mcc_variance: r.mcc_variance,
        };
        match index.get(&key) {
            Some(&i) if out[i].mcc_mean >= r.mcc_mean => {}
            Some(&i) => out[i] = point,
            None => {
                index.insert(key, out.len());
                out.push(point);
            }
        }
    }
    out
}

fn test_rows<'a>(split: &'a Split, outliers: &'a [usize]) -> impl Iterator<Item = (u64, usize)> + 'a {
    split
        .test_targets
        .iter()
        .chain(outliers)
        .enumerate()
        .map(|(pos, &row)| (pos as u64, row))
}

fn run_params(cfg: &ClassifierConfig, protocol: &CvProtocol, split: &Split) -> ClassifierConfig {
    ClassifierConfig {
        threshold: ThresholdParams {
            rng_seed: protocol.run_seed(cfg.threshold.rng_seed, split.repeat, split.fold),
            ..cfg.threshold
        },
        ..*cfg
    }
}

fn eval_global(
    data: &OneClassData,
    outliers: &[usize],
    split: &Split,
    cfg: &ClassifierConfig,
    protocol: &CvProtocol,
) -> Result<ConfusionMatrix> {
    let train = data.features().select(&split.train);
    let model = fit(&train, &run_params(cfg, protocol, split))?;
    let mut cm = ConfusionMatrix::default();
    for (pos, row) in test_rows(split, outliers) {
        let v = model.predict_stream(data.features().row(row), pos)?;
        cm.record(data.is_target(row), v.is_target());
    }
    Ok(cm)
}

/// Square matrix of pairwise training distances.
struct DistanceTable {
    n: usize,
    values: Vec<f64>,
}

impl DistanceTable {
    fn new(points: &FeatureMatrix) -> Self {
        let n = points.n_samples();
        let mut values = vec![0.0; n * n];
        for a in 0..n {
            for b in a + 1..n {
                let d = geometry::distance(points.row(a), points.row(b));
                values[a * n + b] = d;
                values[b * n + a] = d;
            }
        }
        DistanceTable { n, values }
    }

    #[inline]
    fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.n + b]
    }
}

fn eval_lazy(
    data: &OneClassData,
    outliers: &[usize],
    split: &Split,
    cells: &[ClassifierConfig],
    protocol: &CvProtocol,
    base: &ThresholdParams,
) -> Result<Vec<ConfusionMatrix>> {
    let variant = cells[0].variant;
    let train = data.features().select(&split.train);
    let table = DistanceTable::new(&train);
    let range = match variant {
        Variant::Ocdmst => Some(ValueRange::of(&train)?),
        _ => None,
    };
    let run_seed = protocol.run_seed(base.rng_seed, split.repeat, split.fold);

    // cells are gamma-major; group consecutive runs of the same gamma
    let mut groups: Vec<(usize, std::ops::Range<usize>)> = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        match groups.last_mut() {
            Some((g, r)) if *g == c.gamma => r.end = i + 1,
            _ => groups.push((c.gamma, i..i + 1)),
        }
    }

    let mut confusion = vec![ConfusionMatrix::default(); cells.len()];
    for (pos, row) in test_rows(split, outliers) {
        let x = data.features().row(row);
        let actual = data.is_target(row);
        let ranked = rank_by_distance(&train, x);

        for (gamma, cell_range) in &groups {
            let tree = SpanningTree::prim(ranked[..*gamma].to_vec(), |a, b| table.get(a, b));
            let nearest = tree.nearest_node(&train, x)?;
            let distance = tree.incident_distance(&train, nearest, x);
            match variant {
                Variant::MstCdGp => {
                    let theta = boundary::static_threshold(&tree.edge_weights(), base.alpha)?;
                    for c in cell_range.clone() {
                        confusion[c].record(actual, distance <= theta);
                    }
                }
                Variant::Ocdmst => {
                    let seed = derive_seed(run_seed, &[pos]);
                    let range = range.expect("range computed for Ocdmst");
                    let mut by_depth: Vec<(usize, Option<NeighborhoodStats>)> = Vec::new();
                    let mut rg_cache: HashMap<usize, f64> = HashMap::new();
                    for c in cell_range.clone() {
                        let cfg = &cells[c];
                        let stats = match by_depth.iter().find(|(d, _)| *d == cfg.depth) {
                            Some((_, s)) => *s,
                            None => {
                                let s = depth_stats(&tree, &train, nearest, cfg.depth, base, range, seed, &mut rg_cache)?;
                                by_depth.push((cfg.depth, s));
                                s
                            }
                        };
                        let theta = match stats {
                            Some(s) => s.threshold(cfg.threshold.k, cfg.threshold.beta).theta_dynamic,
                            None => 0.0,
                        };
                        confusion[c].record(actual, distance <= theta);
                    }
                }
                Variant::MstCd => unreachable!(),
            }
        }
    }
    Ok(confusion)
}

/// Same quantities as [`boundary::neighborhood_stats`], with the
/// random-group reference cached by group size.
#[allow(clippy::too_many_arguments)]
fn depth_stats(
    tree: &SpanningTree,
    train: &FeatureMatrix,
    nearest: usize,
    depth: usize,
    base: &ThresholdParams,
    range: ValueRange,
    seed: u64,
    rg_cache: &mut HashMap<usize, f64>,
) -> Result<Option<NeighborhoodStats>> {
    let bfs = tree.bfs_from(nearest, depth)?;
    if bfs.edges.is_empty() {
        return Ok(None);
    }
    let size = bfs.nodes.len();
    let sigma_rg = match rg_cache.get(&size) {
        Some(&v) => v,
        None => {
            let v = boundary::random_group_sigma(train, tree.nodes(), size, base.n_random_groups, range, seed)?;
            rg_cache.insert(size, v);
            v
        }
    };
    let median_bfs_edge = boundary::static_threshold(&bfs.edge_weights(), base.alpha)?;
    let sigma_hat = boundary::normalize_sigma(boundary::group_sigma(train, &bfs.nodes)?, range.min, range.max)?;
    Ok(Some(NeighborhoodStats {
        median_bfs_edge,
        sigma_hat,
        sigma_rg,
    }))
}
