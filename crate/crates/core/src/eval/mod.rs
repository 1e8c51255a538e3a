//! Cross-validation protocol, scoring and parameter search.
//!
//! The target class is split into folds; each fold is tested together with
//! every outlier sample while the remaining folds train the classifier. The
//! split is reshuffled on every repeat and all fold runs are pooled into one
//! MCC mean and sample variance.

mod cv;
mod grid;
mod metrics;

pub use cv::{cv_splits, run_cv, CvProtocol, EvalReport, RunRecord, Split};
pub use grid::{gamma_range, grid_search, GridResult, ParamGrid, SurfacePoint};
pub use metrics::{mcc, mean_and_variance, npv, ppv, ConfusionMatrix};
