use serde::{Deserialize, Serialize};

/// Binary confusion counts with the target class as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        ConfusionMatrix { tp, fp, fn_, tn }
    }

    /// Adds one prediction.
    pub fn record(&mut self, actual_target: bool, predicted_target: bool) {
        match (actual_target, predicted_target) {
            (true, true) => self.tp += 1,
            (false, true) => self.fp += 1,
            (true, false) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// Matthews correlation coefficient; 0 when any marginal is empty.
    pub fn mcc(&self) -> f64 {
        let (tp, fp, fn_, tn) = (self.tp as f64, self.fp as f64, self.fn_ as f64, self.tn as f64);
        let den = (tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_);
        if den == 0.0 {
            return 0.0;
        }
        ((tp * tn - fp * fn_) / den.sqrt()).clamp(-1.0, 1.0)
    }

    /// Positive predictive value, absent when nothing was predicted positive.
    pub fn ppv(&self) -> Option<f64> {
        let den = self.tp + self.fp;
        (den > 0).then(|| self.tp as f64 / den as f64)
    }

    /// Negative predictive value, absent when nothing was predicted negative.
    pub fn npv(&self) -> Option<f64> {
        let den = self.tn + self.fn_;
        (den > 0).then(|| self.tn as f64 / den as f64)
    }
}

pub fn mcc(cm: &ConfusionMatrix) -> f64 {
    cm.mcc()
}

pub fn ppv(cm: &ConfusionMatrix) -> Option<f64> {
    cm.ppv()
}

pub fn npv(cm: &ConfusionMatrix) -> Option<f64> {
    cm.npv()
}

/// Arithmetic mean and sample variance (n - 1 denominator, 0 for n < 2).
pub fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, ss / (n - 1.0))
}
