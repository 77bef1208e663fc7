//! Two-class evaluation: confusion counts, threshold metrics, ranking metrics
//! and exact binomial confidence intervals.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::sig7;
use crate::special::beta_inc_inv;

/// Decision threshold matching a two-way softmax argmax.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

pub const TABLE4_CSV_HEADER: &str =
    "accuracy,auroc,auprc,sensitivity,precision,f_score,mcc,mcc_ci_low,mcc_ci_high";

/// Ground-truth labels (true = positive) with predicted positive-class scores.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryEvalSet {
    labels: Vec<bool>,
    scores: Vec<f64>,
}

impl BinaryEvalSet {
    pub fn new(labels: Vec<bool>, scores: Vec<f64>) -> Result<Self> {
        if labels.is_empty() || labels.len() != scores.len() {
            return Err(Error::arg(format!(
                "need equal, non-zero numbers of labels and scores (got {} and {})",
                labels.len(),
                scores.len()
            )));
        }
        if let Some(s) = scores.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(Error::arg(format!("score {s} outside [0, 1]")));
        }
        Ok(Self { labels, scores })
    }

    /// Parses CSV text with a `label,score` header; labels are 0 or 1.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, header)) if header.trim().replace(' ', "") == "label,score" => {}
            _ => {
                return Err(Error::arg(
                    "scores CSV must start with the header `label,score`",
                ))
            }
        }
        let (mut labels, mut scores) = (Vec::new(), Vec::new());
        for (i, line) in lines {
            let bad = || {
                Error::arg(format!(
                    "line {}: expected `<0|1>,<score>`, got {line:?}",
                    i + 1
                ))
            };
            let (l, s) = line.split_once(',').ok_or_else(bad)?;
            labels.push(match l.trim() {
                "0" => false,
                "1" => true,
                _ => return Err(bad()),
            });
            scores.push(s.trim().parse::<f64>().map_err(|_| bad())?);
        }
        Self::new(labels, scores)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l).count()
    }

    pub fn negatives(&self) -> usize {
        self.len() - self.positives()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }
}

/// Counts outcomes when `score >= threshold` predicts positive.
pub fn confusion(set: &BinaryEvalSet, threshold: f64) -> ConfusionCounts {
    let mut c = ConfusionCounts::default();
    for (&label, &score) in set.labels.iter().zip(&set.scores) {
        match (label, score >= threshold) {
            (true, true) => c.tp += 1,
            (true, false) => c.fn_ += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
        }
    }
    c
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdMetrics {
    pub accuracy: f64,
    pub recall: f64,
    pub precision: f64,
    pub f_score: f64,
    pub mcc: f64,
    /// Names of metrics whose denominator was zero; each is reported as 0.
    pub degenerate: Vec<&'static str>,
}

pub fn threshold_metrics(c: &ConfusionCounts) -> ThresholdMetrics {
    let mut degenerate = Vec::new();
    let mut ratio = |name: &'static str, num: f64, den: f64| {
        if den == 0.0 {
            degenerate.push(name);
            0.0
        } else {
            num / den
        }
    };
    let (tp, tn, fp, fn_) = (c.tp as f64, c.tn as f64, c.fp as f64, c.fn_ as f64);
    let accuracy = ratio("accuracy", tp + tn, tp + tn + fp + fn_);
    let recall = ratio("recall", tp, tp + fn_);
    let precision = ratio("precision", tp, tp + fp);
    let f_score = ratio("f_score", 2.0 * precision * recall, precision + recall);
    let mcc_den = ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt();
    let mcc = ratio("mcc", tp * tn - fp * fn_, mcc_den).clamp(-1.0, 1.0);
    ThresholdMetrics {
        accuracy,
        recall,
        precision,
        f_score,
        mcc,
        degenerate,
    }
}

/// Indices sorted by descending score; ties keep input order.
fn descending(set: &BinaryEvalSet) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..set.len()).collect();
    idx.sort_by(|&a, &b| set.scores[b].total_cmp(&set.scores[a]));
    idx
}

/// Area under the ROC curve via the rank-sum (Mann-Whitney) statistic, with
/// tied scores sharing their average rank.
pub fn auroc(set: &BinaryEvalSet) -> Result<f64> {
    let (pos, neg) = (set.positives(), set.negatives());
    if pos == 0 || neg == 0 {
        return Err(Error::UndefinedMetric(format!(
            "AUROC needs both classes ({pos} positives, {neg} negatives)"
        )));
    }
    let mut idx: Vec<usize> = (0..set.len()).collect();
    idx.sort_by(|&a, &b| set.scores[a].total_cmp(&set.scores[b]));
    let mut pos_rank_sum = 0.0;
    let mut start = 0;
    while start < idx.len() {
        let mut end = start;
        while end + 1 < idx.len() && set.scores[idx[end + 1]] == set.scores[idx[start]] {
            end += 1;
        }
        // ranks start..=end (1-based: start+1..=end+1) share their average
        let avg_rank = (start + end + 2) as f64 / 2.0;
        let tied_pos = idx[start..=end].iter().filter(|&&i| set.labels[i]).count();
        pos_rank_sum += avg_rank * tied_pos as f64;
        start = end + 1;
    }
    let (p, n) = (pos as f64, neg as f64);
    let u = pos_rank_sum - p * (p + 1.0) / 2.0;
    Ok(u / (p * n))
}

/// Area under the precision-recall curve: step-wise sum of precision times the
/// recall increment at each distinct score threshold, highest first.
pub fn auprc(set: &BinaryEvalSet) -> Result<f64> {
    let pos = set.positives();
    if pos == 0 {
        return Err(Error::UndefinedMetric(
            "AUPRC needs at least one positive".into(),
        ));
    }
    let idx = descending(set);
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut prev_recall = 0.0;
    let mut area = 0.0;
    let mut i = 0;
    while i < idx.len() {
        let threshold = set.scores[idx[i]];
        while i < idx.len() && set.scores[idx[i]] == threshold {
            if set.labels[idx[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        let recall = tp as f64 / pos as f64;
        let precision = tp as f64 / (tp + fp) as f64;
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    Ok(area)
}

/// Exact (Clopper-Pearson) two-sided interval for a binomial proportion.
pub fn clopper_pearson(successes: u64, trials: u64, alpha: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(Error::arg(format!(
            "need 0 <= successes <= trials and trials > 0 (got {successes}/{trials})"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::arg(format!("alpha {alpha} outside (0, 1)")));
    }
    let (k, n) = (successes as f64, trials as f64);
    let lower = if successes == 0 {
        0.0
    } else {
        beta_inc_inv(k, n - k + 1.0, alpha / 2.0)
    };
    let upper = if successes == trials {
        1.0
    } else {
        beta_inc_inv(k + 1.0, n - k, 1.0 - alpha / 2.0)
    };
    Ok((lower, upper))
}

/// Clopper-Pearson interval for an MCC value: the MCC is mapped affinely from
/// `[-1, 1]` to `[0, 1]`, converted to `round(p * n)` pseudo-successes out of
/// `n`, and the resulting interval is mapped back.
pub fn mcc_interval(mcc: f64, n: u64, alpha: f64) -> Result<(f64, f64)> {
    let p = ((mcc.clamp(-1.0, 1.0) + 1.0) / 2.0).clamp(0.0, 1.0);
    let k = (p * n as f64).round() as u64;
    let (lo, hi) = clopper_pearson(k.min(n), n, alpha)?;
    Ok((2.0 * lo - 1.0, 2.0 * hi - 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table4Row {
    pub accuracy: f64,
    pub auroc: f64,
    pub auprc: f64,
    pub sensitivity: f64,
    pub precision: f64,
    pub f_score: f64,
    pub mcc: f64,
    pub mcc_ci_low: f64,
    pub mcc_ci_high: f64,
}

impl Table4Row {
    pub fn to_array(&self) -> [f64; 9] {
        [
            self.accuracy,
            self.auroc,
            self.auprc,
            self.sensitivity,
            self.precision,
            self.f_score,
            self.mcc,
            self.mcc_ci_low,
            self.mcc_ci_high,
        ]
    }

    pub fn to_csv_row(&self) -> String {
        self.to_array().map(sig7).join(",")
    }
}

/// All classification metrics for one evaluation set.
pub fn table4_report(set: &BinaryEvalSet, threshold: f64, alpha: f64) -> Result<Table4Row> {
    let counts = confusion(set, threshold);
    let m = threshold_metrics(&counts);
    let (mcc_ci_low, mcc_ci_high) = mcc_interval(m.mcc, counts.total(), alpha)?;
    Ok(Table4Row {
        accuracy: m.accuracy,
        auroc: auroc(set)?,
        auprc: auprc(set)?,
        sensitivity: m.recall,
        precision: m.precision,
        f_score: m.f_score,
        mcc: m.mcc,
        mcc_ci_low,
        mcc_ci_high,
    })
}
