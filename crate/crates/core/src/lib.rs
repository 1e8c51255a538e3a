//! One-class classification with minimum spanning tree class descriptors.
//!
//! The target class is described by a minimum spanning tree; a query is
//! accepted when its distance to the nearest tree edges stays below a
//! threshold. Three variants are provided:
//!
//! * [`Variant::MstCd`] builds one tree over all training samples and uses a
//!   fixed edge-weight quantile as threshold.
//! * [`Variant::MstCdGp`] builds a small tree over the `gamma` training
//!   samples nearest to each query.
//! * [`Variant::Ocdmst`] additionally shrinks the threshold where the local
//!   neighborhood is sparse, using an inverse logistic of its normalized
//!   dispersion.
//!
//! ```
//! use ocdmst::{fit, ClassifierConfig, FeatureMatrix, Label, Variant};
//!
//! let targets = FeatureMatrix::from_rows(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]).unwrap();
//! let model = fit(&targets, &ClassifierConfig::new(Variant::MstCdGp, 3, 0)).unwrap();
//! assert_eq!(model.predict(&[1.5, 0.1]).unwrap().label, Label::Target);
//! assert_eq!(model.predict(&[1.5, 9.0]).unwrap().label, Label::Outlier);
//! ```

pub mod boundary;
pub mod classifier;
pub mod data;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod graph;
pub mod report;
pub mod seed;
pub mod uci;

pub use boundary::{NeighborhoodStats, ThresholdModel, ThresholdParams, ValueRange};
pub use classifier::{fit, ClassifierConfig, FittedModel, Label, Variant, Verdict};
pub use data::{load_csv, parse_csv, CsvSchema, FeatureMatrix, LabeledData, OneClassData};
pub use error::{Error, Result};
pub use eval::{grid_search, run_cv, ConfusionMatrix, CvProtocol, EvalReport, GridResult, ParamGrid};
pub use geometry::{distance_to_edge, Edge};
pub use graph::{build_mst, BfsNeighborhood, SpanningTree};
