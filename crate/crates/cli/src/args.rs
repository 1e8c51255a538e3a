use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ocdmst::Variant;

#[derive(Debug, Parser)]
#[command(name = "ocdmst", version, about = "Minimum spanning tree one-class classifiers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cross-validate one configuration.
    Eval(EvalArgs),
    /// Cross-validate every cell of a parameter grid, best first.
    Grid(GridArgs),
    /// Best MCC for each (gamma, depth) pair of a grid, as a CSV matrix.
    Sweep(GridArgs),
    /// Fit on a target CSV and classify the rows of a query CSV.
    Predict(PredictArgs),
    /// Load a dataset and report its shape and labels.
    ValidateData(DataArgs),
    /// Re-print the summary table of a result file.
    Summarize(SummarizeArgs),
    /// Tabulate the inverse logistic factor used by the dynamic threshold.
    Logistic(LogisticArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Built-in benchmark such as `sonar-mines` (see `--list-benchmarks`).
    #[arg(long, conflicts_with_all = ["data", "preset"])]
    pub benchmark: Option<String>,
    /// Directory holding the benchmark CSV files.
    #[arg(long, default_value = "data/uci")]
    pub data_dir: PathBuf,
    /// Headered CSV file with numeric features and one label column.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Dataset preset (breast, diabetes, glass, heart, liver, sonar) whose
    /// expected shape is checked on load.
    #[arg(long)]
    pub preset: Option<String>,
    /// Label column, by name or zero-based index. Defaults to the last column.
    #[arg(long)]
    pub label_column: Option<String>,
    /// Label value(s) forming the target class, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub target: Vec<String>,
    /// Fail on missing values instead of dropping the row.
    #[arg(long)]
    pub reject_missing: bool,
    /// Print the built-in benchmark keys and exit.
    #[arg(long)]
    pub list_benchmarks: bool,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Edge-weight quantile used as the static threshold.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Number of random node groups for the reference dispersion.
    #[arg(long, default_value_t = 100)]
    pub groups: usize,
    /// Seed of the random reference groups.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 20)]
    pub repeats: usize,
    /// Seed of the fold shuffles.
    #[arg(long, default_value_t = 0)]
    pub cv_seed: u64,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, default_value = "ocdmst")]
    pub variant: Variant,
    /// Size of the per-query tree (lazy variants).
    #[arg(long)]
    pub gamma: Option<usize>,
    /// BFS depth (ocdmst).
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    /// Logistic growth rate.
    #[arg(long, default_value_t = 5.0)]
    pub k: f64,
    /// Shift of the logistic inflection point.
    #[arg(long, default_value_t = 1.5)]
    pub beta: f64,
    #[command(flatten)]
    pub threshold: ThresholdArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// Write one JSON record per run to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value = "ocdmst")]
    pub variant: Variant,
    /// Explicit gamma values; by default `--gamma-steps` values from n/4 to
    /// n/2 of the target class.
    #[arg(long, value_delimiter = ',')]
    pub gammas: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub gamma_steps: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7")]
    pub depths: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "5,6,7,8,9,10,20")]
    pub ks: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1.05,1.1,1.5")]
    pub betas: Vec<f64>,
    #[command(flatten)]
    pub threshold: ThresholdArgs,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// Rows shown in the summary (0 shows all).
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Output file: JSON run records for `grid`, the CSV matrix for `sweep`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Headered CSV of query rows with the same feature columns.
    #[arg(long)]
    pub queries: PathBuf,
    /// Label column of the query file, if it has one.
    #[arg(long)]
    pub query_label_column: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SummarizeArgs {
    /// Result file written by `eval` or `grid`.
    pub file: PathBuf,
    /// Also print the pooled confusion matrix of every experiment.
    #[arg(long)]
    pub confusion: bool,
}

#[derive(Debug, Args)]
pub struct LogisticArgs {
    #[arg(long, value_delimiter = ',', default_value = "5,6,7,8,9,10,20")]
    pub ks: Vec<f64>,
    #[arg(long, default_value_t = 1.5)]
    pub beta: f64,
    /// Reference dispersion whose shifted value is the inflection point.
    #[arg(long, default_value_t = 0.3)]
    pub sigma_rg: f64,
    /// Sample points over [0, 1].
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
