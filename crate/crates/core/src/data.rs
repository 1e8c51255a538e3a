//! Feature matrices and the headered-CSV loader.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major matrix of finite feature values.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    n_features: usize,
    values: Vec<f64>,
}

impl FeatureMatrix {
    /// Builds a matrix from row-major `values` with `n_features` columns.
    pub fn new(n_features: usize, values: Vec<f64>) -> Result<Self> {
        if n_features == 0 {
            return Err(Error::InvalidInput("samples need at least one feature".into()));
        }
        if !values.len().is_multiple_of(n_features) {
            return Err(Error::InvalidInput(format!(
                "{} values do not fill rows of {} features",
                values.len(),
                n_features
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite value at row {}, feature {}",
                pos / n_features,
                pos % n_features
            )));
        }
        Ok(FeatureMatrix { n_features, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::Empty("feature matrix"))?;
        let n_features = first.as_ref().len();
        let mut values = Vec::with_capacity(rows.len() * n_features);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n_features {
                return Err(Error::DimensionMismatch {
                    expected: n_features,
                    got: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(n_features, values)
    }

    pub fn n_samples(&self) -> usize {
        self.values.len() / self.n_features
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.n_features)
    }

    /// New matrix holding the given rows, in the given order.
    pub fn select(&self, indices: &[usize]) -> FeatureMatrix {
        let mut values = Vec::with_capacity(indices.len() * self.n_features);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        FeatureMatrix {
            n_features: self.n_features,
            values,
        }
    }

    /// Smallest and largest value over every feature of every sample.
    pub fn value_bounds(&self) -> Option<(f64, f64)> {
        let mut it = self.values.iter().copied();
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }

    pub fn check_sample(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("sample contains a non-finite value".into()));
        }
        Ok(())
    }
}

/// Features plus one class label per row, as read from disk.
#[derive(Debug, Clone)]
pub struct LabeledData {
    pub features: FeatureMatrix,
    pub labels: Vec<String>,
    pub feature_names: Vec<String>,
    /// Rows skipped because of missing values.
    pub dropped_rows: usize,
}

impl LabeledData {
    /// Count of rows per label value.
    pub fn label_counts(&self) -> BTreeMap<&str, usize> {
        let mut counts = BTreeMap::new();
        for l in &self.labels {
            *counts.entry(l.as_str()).or_insert(0) += 1;
        }
        counts
    }

    /// Splits rows into the one-class target and everything else.
    pub fn one_class<S: AsRef<str>>(&self, target_labels: &[S]) -> Result<OneClassData> {
        if target_labels.is_empty() {
            return Err(Error::Config("no target label given".into()));
        }
        let is_target: Vec<bool> = self
            .labels
            .iter()
            .map(|l| target_labels.iter().any(|t| t.as_ref() == l))
            .collect();
        if !is_target.iter().any(|&t| t) {
            let wanted: Vec<&str> = target_labels.iter().map(|t| t.as_ref()).collect();
            return Err(Error::Validation(format!(
                "no row carries target label(s) {:?}",
                wanted
            )));
        }
        OneClassData::new(self.features.clone(), is_target)
    }
}

/// Rows flagged as target-class members or outliers.
#[derive(Debug, Clone)]
pub struct OneClassData {
    features: FeatureMatrix,
    is_target: Vec<bool>,
}

impl OneClassData {
    pub fn new(features: FeatureMatrix, is_target: Vec<bool>) -> Result<Self> {
        if features.n_samples() != is_target.len() {
            return Err(Error::InvalidInput(format!(
                "{} rows but {} target flags",
                features.n_samples(),
                is_target.len()
            )));
        }
        Ok(OneClassData {
            features,
            is_target,
        })
    }

    pub fn features(&self) -> &FeatureMatrix {
        &self.features
    }

    pub fn is_target(&self, i: usize) -> bool {
        self.is_target[i]
    }

    pub fn target_indices(&self) -> Vec<usize> {
        (0..self.is_target.len()).filter(|&i| self.is_target[i]).collect()
    }

    pub fn outlier_indices(&self) -> Vec<usize> {
        (0..self.is_target.len()).filter(|&i| !self.is_target[i]).collect()
    }
}

/// Which CSV column holds the class label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum LabelColumn {
    #[default]
    Last,
    Index(usize),
    Name(String),
    /// Every column is a feature; labels are left empty.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum MissingPolicy {
    /// Skip any row with a missing feature or label.
    #[default]
    DropRow,
    Reject,
}

/// Expected table shape; `max_instances` bounds the rows kept after
/// missing-value handling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedShape {
    pub features: usize,
    pub max_instances: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvSchema {
    pub label_column: LabelColumn,
    pub missing: MissingPolicy,
    pub missing_tokens: Vec<String>,
    pub expected: Option<ExpectedShape>,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema {
            label_column: LabelColumn::Last,
            missing: MissingPolicy::DropRow,
            missing_tokens: vec!["?".into(), String::new(), "NA".into()],
            expected: None,
        }
    }
}

/// Reads a headered CSV file with numeric features and one label column.
pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<LabeledData> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
    parse_csv(&text, schema)
}

/// Parses CSV text; see [`load_csv`].
pub fn parse_csv(text: &str, schema: &CsvSchema) -> Result<LabeledData> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(e, 1))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "missing header row".into(),
        });
    }
    let unlabeled = schema.label_column == LabelColumn::None;
    if header.len() < 2 && !unlabeled {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "need at least one feature column and one label column".into(),
        });
    }
    let label_idx = match &schema.label_column {
        LabelColumn::None => usize::MAX,
        LabelColumn::Last => header.len() - 1,
        LabelColumn::Index(i) if *i < header.len() => *i,
        LabelColumn::Index(i) => {
            return Err(Error::Validation(format!(
                "label column {} out of range for {} columns",
                i,
                header.len()
            )))
        }
        LabelColumn::Name(name) => header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Validation(format!("no column named {:?}", name)))?,
    };
    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| h.clone())
        .collect();
    let n_features = feature_names.len();

    let is_missing = |s: &str| schema.missing_tokens.iter().any(|t| t == s);
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut dropped_rows = 0;
    for (row_no, record) in reader.records().enumerate() {
        // header is line 1
        let line = row_no + 2;
        let record = record.map_err(|e| csv_error(e, line))?;
        if record.len() != header.len() {
            return Err(Error::Parse {
                line,
                column: record.len().min(header.len()) + 1,
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        let mut row = Vec::with_capacity(n_features);
        let mut missing = false;
        for (col, cell) in record.iter().enumerate() {
            if is_missing(cell) {
                if schema.missing == MissingPolicy::Reject {
                    return Err(Error::Parse {
                        line,
                        column: col + 1,
                        message: "missing value".into(),
                    });
                }
                missing = true;
                continue;
            }
            if col == label_idx {
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                column: col + 1,
                message: format!("not a number: {:?}", cell),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    column: col + 1,
                    message: format!("non-finite value: {:?}", cell),
                });
            }
            row.push(v);
        }
        if missing {
            dropped_rows += 1;
            continue;
        }
        values.extend(row);
        labels.push(record.get(label_idx).unwrap_or_default().to_owned());
    }
    if labels.is_empty() {
        return Err(Error::Parse {
            line: 2,
            column: 1,
            message: "no data rows".into(),
        });
    }
    if let Some(shape) = schema.expected {
        if shape.features != n_features {
            return Err(Error::Validation(format!(
                "expected {} features, found {}",
                shape.features, n_features
            )));
        }
        if labels.len() > shape.max_instances {
            return Err(Error::Validation(format!(
                "expected at most {} instances, found {}",
                shape.max_instances,
                labels.len()
            )));
        }
    }
    Ok(LabeledData {
        features: FeatureMatrix::new(n_features, values)?,
        labels,
        feature_names,
        dropped_rows,
    })
}

fn csv_error(e: csv::Error, line: usize) -> Error {
    let line = e
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or(line);
    Error::Parse {
        line,
        column: 0,
        message: e.to_string(),
    }
}
