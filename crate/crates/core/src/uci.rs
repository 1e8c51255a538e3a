//! Presets for the six UCI tables used in the benchmark suite and the
//! twelve one-class problems derived from them.
//!
//! Files are expected as headered CSV with the class label in the last
//! column, named `<key>.csv` (for example `sonar.csv`).

use std::path::Path;

use crate::data::{load_csv, CsvSchema, ExpectedShape, LabelColumn, LabeledData, MissingPolicy, OneClassData};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetSpec {
    pub key: &'static str,
    pub title: &'static str,
    pub features: usize,
    /// Row count of the original table, before missing-value removal.
    pub instances: usize,
}

impl DatasetSpec {
    pub fn schema(&self) -> CsvSchema {
        CsvSchema {
            label_column: LabelColumn::Last,
            missing: MissingPolicy::DropRow,
            expected: Some(ExpectedShape {
                features: self.features,
                max_instances: self.instances,
            }),
            ..CsvSchema::default()
        }
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.key)
    }

    pub fn load(&self, dir: impl AsRef<Path>) -> Result<LabeledData> {
        load_csv(dir.as_ref().join(self.file_name()), &self.schema())
    }
}

pub const DATASETS: [DatasetSpec; 6] = [
    DatasetSpec { key: "breast", title: "Breast cancer", features: 9, instances: 699 },
    DatasetSpec { key: "diabetes", title: "Diabetes", features: 8, instances: 768 },
    DatasetSpec { key: "glass", title: "Glass", features: 9, instances: 214 },
    DatasetSpec { key: "heart", title: "Heart disease", features: 13, instances: 303 },
    DatasetSpec { key: "liver", title: "Liver", features: 6, instances: 345 },
    DatasetSpec { key: "sonar", title: "Sonar", features: 60, instances: 208 },
];

pub fn dataset(key: &str) -> Option<&'static DatasetSpec> {
    DATASETS.iter().find(|d| d.key == key)
}

/// Reference MCC scores and the tuned OCdmst size/depth for one problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub mst_cd: f64,
    pub mst_cd_variance: f64,
    pub mst_cd_gp: f64,
    pub ocdmst: f64,
    pub gamma: usize,
    pub depth: usize,
}

/// One dataset with one of its classes playing the target role.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Benchmark {
    pub dataset: &'static str,
    pub target: &'static str,
    pub target_labels: &'static [&'static str],
    pub reference: Reference,
}

impl Benchmark {
    /// `dataset-target`, lowercase, e.g. `sonar-mines`.
    pub fn key(&self) -> String {
        format!("{}-{}", self.dataset, self.target.to_ascii_lowercase())
    }

    pub fn spec(&self) -> &'static DatasetSpec {
        dataset(self.dataset).expect("benchmark refers to a known dataset")
    }

    pub fn load(&self, dir: impl AsRef<Path>) -> Result<OneClassData> {
        self.spec().load(dir)?.one_class(self.target_labels)
    }
}

const fn reference(mst_cd: f64, mst_cd_variance: f64, gamma: usize, depth: usize, mst_cd_gp: f64, ocdmst: f64) -> Reference {
    Reference { mst_cd, mst_cd_variance, mst_cd_gp, ocdmst, gamma, depth }
}

// heart labels: 0 absent, 1..=4 present (some distributions ship the
// already-binarized 0/1 column)
pub const BENCHMARKS: [Benchmark; 12] = [
    Benchmark { dataset: "breast", target: "Benign", target_labels: &["2"], reference: reference(0.894, 0.002, 134, 3, 0.475, 0.774) },
    Benchmark { dataset: "breast", target: "Malignant", target_labels: &["4"], reference: reference(-0.015, 0.011, 95, 1, 0.183, 0.204) },
    Benchmark { dataset: "diabetes", target: "Absent", target_labels: &["tested_negative"], reference: reference(-0.015, 0.004, 132, 9, 0.043, 0.066) },
    Benchmark { dataset: "diabetes", target: "Present", target_labels: &["tested_positive"], reference: reference(0.206, 0.003, 82, 7, 0.152, 0.178) },
    Benchmark { dataset: "glass", target: "Float", target_labels: &["1", "3"], reference: reference(0.422, 0.005, 33, 8, 0.401, 0.535) },
    Benchmark { dataset: "glass", target: "NoFloat", target_labels: &["2", "4"], reference: reference(0.267, 0.017, 19, 3, 0.154, 0.238) },
    Benchmark { dataset: "heart", target: "Present", target_labels: &["1", "2", "3", "4"], reference: reference(0.071, 0.005, 64, 1, 0.0196, 0.037) },
    Benchmark { dataset: "heart", target: "Absent", target_labels: &["0"], reference: reference(0.161, 0.025, 40, 6, 0.091, 0.117) },
    Benchmark { dataset: "liver", target: "Disorder", target_labels: &["2"], reference: reference(-0.06, 0.022, 85, 2, 0.0713, 0.099) },
    Benchmark { dataset: "liver", target: "Healthy", target_labels: &["1"], reference: reference(0.047, 0.01, 66, 2, 0.069, 0.073) },
    Benchmark { dataset: "sonar", target: "Mines", target_labels: &["M"], reference: reference(0.255, 0.008, 43, 9, 0.66, 0.672) },
    Benchmark { dataset: "sonar", target: "Rocks", target_labels: &["R"], reference: reference(0.166, 0.032, 24, 9, 0.153, 0.336) },
];

/// Looks a benchmark up by its [`Benchmark::key`] (case-insensitive).
pub fn benchmark(key: &str) -> Result<&'static Benchmark> {
    let wanted = key.to_ascii_lowercase();
    BENCHMARKS.iter().find(|b| b.key() == wanted).ok_or_else(|| {
        let known: Vec<String> = BENCHMARKS.iter().map(Benchmark::key).collect();
        Error::Config(format!("unknown benchmark {:?}; known: {}", key, known.join(", ")))
    })
}
