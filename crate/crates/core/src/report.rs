//! Result files: one JSON object per cross-validation run, plus a plain-text
//! summary with one "mean (variance)" row per configuration.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::boundary::ThresholdParams;
use crate::classifier::{ClassifierConfig, Variant};
use crate::error::{Error, Result};
use crate::eval::{ConfusionMatrix, CvProtocol, EvalReport, RunRecord};

/// A flat, self-describing line of a result file. Field order is the
/// serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunLine {
    pub dataset: String,
    pub variant: Variant,
    pub gamma: usize,
    pub depth: usize,
    pub alpha: f64,
    pub k: f64,
    pub beta: f64,
    pub n_random_groups: usize,
    pub rng_seed: u64,
    pub cv_seed: u64,
    pub n_folds: usize,
    pub n_repeats: usize,
    pub repeat: usize,
    pub fold: usize,
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    pub mcc: f64,
    pub ppv: Option<f64>,
    pub npv: Option<f64>,
}

impl RunLine {
    fn same_experiment(&self, other: &RunLine) -> bool {
        self.dataset == other.dataset
            && self.config() == other.config()
            && self.protocol() == other.protocol()
    }

    fn config(&self) -> ClassifierConfig {
        ClassifierConfig {
            variant: self.variant,
            gamma: self.gamma,
            depth: self.depth,
            threshold: ThresholdParams {
                alpha: self.alpha,
                k: self.k,
                beta: self.beta,
                n_random_groups: self.n_random_groups,
                rng_seed: self.rng_seed,
            },
        }
    }

    fn protocol(&self) -> CvProtocol {
        CvProtocol {
            n_folds: self.n_folds,
            n_repeats: self.n_repeats,
            seed: self.cv_seed,
        }
    }
}

/// An [`EvalReport`] tagged with the dataset name and protocol that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub dataset: String,
    pub protocol: CvProtocol,
    pub report: EvalReport,
}

impl Experiment {
    pub fn new(dataset: impl Into<String>, protocol: CvProtocol, report: EvalReport) -> Self {
        Experiment {
            dataset: dataset.into(),
            protocol,
            report,
        }
    }

    pub fn lines(&self) -> impl Iterator<Item = RunLine> + '_ {
        let c = &self.report.config;
        self.report.runs.iter().map(move |r| RunLine {
            dataset: self.dataset.clone(),
            variant: c.variant,
            gamma: c.gamma,
            depth: c.depth,
            alpha: c.threshold.alpha,
            k: c.threshold.k,
            beta: c.threshold.beta,
            n_random_groups: c.threshold.n_random_groups,
            rng_seed: c.threshold.rng_seed,
            cv_seed: self.protocol.seed,
            n_folds: self.protocol.n_folds,
            n_repeats: self.protocol.n_repeats,
            repeat: r.repeat,
            fold: r.fold,
            tp: r.confusion.tp,
            fp: r.confusion.fp,
            fn_: r.confusion.fn_,
            tn: r.confusion.tn,
            mcc: r.mcc,
            ppv: r.ppv,
            npv: r.npv,
        })
    }
}

/// Writes every run of every experiment, one JSON object per line.
pub fn write_runs<W: Write>(mut out: W, experiments: &[Experiment]) -> Result<()> {
    for e in experiments {
        for line in e.lines() {
            let json = serde_json::to_string(&line).map_err(|err| Error::Record(err.to_string()))?;
            writeln!(out, "{}", json).map_err(|err| Error::Record(err.to_string()))?;
        }
    }
    Ok(())
}

/// Reads a result file back, grouping consecutive runs of the same
/// experiment. Blank lines are skipped.
pub fn read_runs<R: BufRead>(input: R) -> Result<Vec<Experiment>> {
    let mut groups: Vec<Vec<RunLine>> = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|err| Error::Record(err.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let run: RunLine = serde_json::from_str(&line)
            .map_err(|err| Error::Record(format!("line {}: {}", i + 1, err)))?;
        match groups.last_mut() {
            Some(g) if g[0].same_experiment(&run) => g.push(run),
            _ => groups.push(vec![run]),
        }
    }
    Ok(groups
        .into_iter()
        .map(|g| {
            let first = &g[0];
            let runs = g
                .iter()
                .map(|r| RunRecord::new(r.repeat, r.fold, ConfusionMatrix::new(r.tp, r.fp, r.fn_, r.tn)))
                .collect();
            Experiment::new(first.dataset.clone(), first.protocol(), EvalReport::from_runs(first.config(), runs))
        })
        .collect())
}

/// "0.672 (0.008)"
pub fn mean_variance(mean: f64, variance: f64) -> String {
    format!("{:.3} ({:.3})", mean, variance)
}

/// Aligned text table, one row per experiment in input order.
pub fn summary_table(experiments: &[Experiment]) -> String {
    let header = ["dataset", "variant", "gamma", "depth", "K", "beta", "runs", "MCC"];
    let rows: Vec<[String; 8]> = experiments
        .iter()
        .map(|e| {
            let c = &e.report.config;
            let lazy = c.variant.is_lazy();
            let dynamic = c.variant == Variant::Ocdmst;
            let or_dash = |show: bool, s: String| if show { s } else { "-".to_string() };
            [
                e.dataset.clone(),
                c.variant.to_string(),
                or_dash(lazy, c.gamma.to_string()),
                or_dash(dynamic, c.depth.to_string()),
                or_dash(dynamic, c.threshold.k.to_string()),
                or_dash(dynamic, c.threshold.beta.to_string()),
                e.report.runs.len().to_string(),
                mean_variance(e.report.mcc_mean, e.report.mcc_variance),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push_row = |cells: &mut dyn Iterator<Item = &str>| {
        let line: Vec<String> = cells
            .zip(&widths)
            .enumerate()
            .map(|(i, (cell, &w))| if i < 2 { format!("{:<w$}", cell) } else { format!("{:>w$}", cell) })
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    };
    push_row(&mut header.iter().copied());
    for row in &rows {
        push_row(&mut row.iter().map(String::as_str));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn experiment() -> Experiment {
        let mut config = ClassifierConfig::new(Variant::Ocdmst, 7, 2);
        config.threshold.beta = 1.1;
        let runs = vec![
            RunRecord::new(0, 0, ConfusionMatrix::new(6, 2, 1, 3)),
            RunRecord::new(0, 1, ConfusionMatrix::new(0, 0, 4, 5)),
            RunRecord::new(1, 0, ConfusionMatrix::new(3, 1, 1, 7)),
        ];
        Experiment::new("toy", CvProtocol { n_folds: 2, n_repeats: 2, seed: 9 }, EvalReport::from_runs(config, runs))
    }

    #[test]
    fn key_order_is_stable() {
        let mut buf = Vec::new();
        write_runs(&mut buf, &[experiment()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let first = text.lines().next().unwrap();
        assert!(first.starts_with(r#"{"dataset":"toy","variant":"ocdmst","gamma":7,"depth":2,"alpha":0.5,"k":5.0,"beta":1.1,"#));
        assert!(first.contains(r#""repeat":0,"fold":0,"tp":6,"fp":2,"fn":1,"tn":3,"mcc":0.47"#));
        assert!(first.ends_with(r#""ppv":0.75,"npv":0.75}"#));
        let second = text.lines().nth(1).unwrap();
        assert!(second.contains(r#""ppv":null"#));
    }

    #[test]
    fn round_trip_preserves_summary() {
        let a = experiment();
        let mut b = experiment();
        b.dataset = "other".into();
        let mut buf = Vec::new();
        write_runs(&mut buf, &[a.clone(), b.clone()]).unwrap();
        let back = read_runs(buf.as_slice()).unwrap();
        assert_eq!(back, vec![a.clone(), b.clone()]);
        assert_eq!(summary_table(&back), summary_table(&[a, b]));
    }

    #[test]
    fn malformed_line_is_a_record_error() {
        let err = read_runs("{\"dataset\":1}\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Record(ref m) if m.starts_with("line 1")));
    }

    #[test]
    fn summary_formats_mean_and_variance() {
        assert_eq!(mean_variance(0.6724, 0.00812), "0.672 (0.008)");
        let table = summary_table(&[experiment()]);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("dataset"));
        assert!(lines[1].starts_with("toy"));
        assert!(lines[1].contains("ocdmst"));
    }
}
