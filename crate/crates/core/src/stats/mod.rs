//! Between-group comparison of per-image scores: one-way ANOVA, Levene's test
//! for equal variances and Tukey HSD pairwise comparisons.

mod ptukey;

pub use ptukey::{ptukey, qtukey};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::f_sf;

/// Named groups of observations; at least two groups of at least two values each.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupData {
    names: Vec<String>,
    groups: Vec<Vec<f64>>,
}

impl GroupData {
    pub fn new(names: Vec<String>, groups: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != groups.len() {
            return Err(Error::arg("one name per group is required"));
        }
        if groups.len() < 2 {
            return Err(Error::arg(format!(
                "need at least 2 groups, got {}",
                groups.len()
            )));
        }
        for (name, g) in names.iter().zip(&groups) {
            if g.len() < 2 {
                return Err(Error::arg(format!(
                    "group {name:?} has {} observation(s); at least 2 are required",
                    g.len()
                )));
            }
            if g.iter().any(|v| !v.is_finite()) {
                return Err(Error::arg(format!(
                    "group {name:?} contains a non-finite value"
                )));
            }
        }
        Ok(Self { names, groups })
    }

    /// Unnamed groups, labelled `g1`, `g2`, ...
    pub fn from_groups(groups: Vec<Vec<f64>>) -> Result<Self> {
        let names = (1..=groups.len()).map(|i| format!("g{i}")).collect();
        Self::new(names, groups)
    }

    /// Parses CSV with a `group,value` header. Groups keep first-appearance order.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, header)) if header.trim().replace(' ', "") == "group,value" => {}
            _ => {
                return Err(Error::arg(
                    "groups CSV must start with the header `group,value`",
                ))
            }
        }
        let mut names: Vec<String> = Vec::new();
        let mut groups: Vec<Vec<f64>> = Vec::new();
        for (i, line) in lines {
            let bad = || {
                Error::arg(format!(
                    "line {}: expected `<group>,<value>`, got {line:?}",
                    i + 1
                ))
            };
            let (name, value) = line.rsplit_once(',').ok_or_else(bad)?;
            let value: f64 = value.trim().parse().map_err(|_| bad())?;
            let name = name.trim();
            match names.iter().position(|n| n == name) {
                Some(g) => groups[g].push(value),
                None => {
                    names.push(name.to_string());
                    groups.push(vec![value]);
                }
            }
        }
        Self::new(names, groups)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn groups(&self) -> &[Vec<f64>] {
        &self.groups
    }

    fn total(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnovaResult {
    pub f_stat: f64,
    pub df_between: usize,
    pub df_within: usize,
    pub p_value: f64,
    pub ms_between: f64,
    pub ms_within: f64,
}

impl AnovaResult {
    /// `F(df1, df2)=X.XXX, p=X.XXX`
    pub fn summary(&self) -> String {
        format!(
            "F({}, {})={:.3}, p={:.3}",
            self.df_between, self.df_within, self.f_stat, self.p_value
        )
    }
}

pub fn one_way_anova(g: &GroupData) -> Result<AnovaResult> {
    let n_total = g.total();
    let k = g.groups.len();
    let grand = g.groups.iter().flatten().sum::<f64>() / n_total as f64;
    let mut ss_between = 0.0;
    let mut ss_within = 0.0;
    for group in &g.groups {
        let m = mean(group);
        ss_between += group.len() as f64 * (m - grand) * (m - grand);
        ss_within += group.iter().map(|x| (x - m) * (x - m)).sum::<f64>();
    }
    if ss_within == 0.0 {
        return Err(Error::Degenerate(
            "every group has zero within-group variance".into(),
        ));
    }
    let df_between = k - 1;
    let df_within = n_total - k;
    let ms_between = ss_between / df_between as f64;
    let ms_within = ss_within / df_within as f64;
    let f_stat = ms_between / ms_within;
    Ok(AnovaResult {
        f_stat,
        df_between,
        df_within,
        p_value: f_sf(f_stat, df_between as f64, df_within as f64),
        ms_between,
        ms_within,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeveneResult {
    pub w_stat: f64,
    pub df_between: usize,
    pub df_within: usize,
    pub p_value: f64,
}

/// Mean-centered Levene test: ANOVA on absolute deviations from each group mean.
pub fn levene(g: &GroupData) -> Result<LeveneResult> {
    let deviations = g
        .groups
        .iter()
        .map(|group| {
            let m = mean(group);
            group.iter().map(|x| (x - m).abs()).collect()
        })
        .collect();
    let dev = GroupData {
        names: g.names.clone(),
        groups: deviations,
    };
    let a = one_way_anova(&dev).map_err(|e| match e {
        Error::Degenerate(_) => {
            Error::Degenerate("absolute deviations have zero within-group variance".into())
        }
        other => other,
    })?;
    Ok(LeveneResult {
        w_stat: a.f_stat,
        df_between: a.df_between,
        df_within: a.df_within,
        p_value: a.p_value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TukeyPair {
    pub group_a: String,
    pub group_b: String,
    /// `mean(a) - mean(b)`.
    pub mean_diff: f64,
    pub q_stat: f64,
    pub p_adj: f64,
    pub significant: bool,
}

/// Tukey HSD (Tukey-Kramer for unequal sizes) over all group pairs `i < j`.
pub fn tukey_hsd(g: &GroupData, alpha: f64) -> Result<Vec<TukeyPair>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::arg(format!("alpha {alpha} outside (0, 1)")));
    }
    let anova = one_way_anova(g)?;
    let k = g.groups.len();
    let means: Vec<f64> = g.groups.iter().map(|v| mean(v)).collect();
    let mut pairs = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            let (ni, nj) = (g.groups[i].len() as f64, g.groups[j].len() as f64);
            let diff = means[i] - means[j];
            let se = (anova.ms_within / 2.0 * (1.0 / ni + 1.0 / nj)).sqrt();
            let q_stat = diff.abs() / se;
            let p_adj = (1.0 - ptukey(q_stat, k, anova.df_within as f64)).clamp(0.0, 1.0);
            pairs.push(TukeyPair {
                group_a: g.names[i].clone(),
                group_b: g.names[j].clone(),
                mean_diff: diff,
                q_stat,
                p_adj,
                significant: p_adj < alpha,
            });
        }
    }
    Ok(pairs)
}

/// Descriptive shape statistics per group. These are not a normality test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupDescription {
    pub group: String,
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    /// Moment skewness `m3 / m2^1.5`.
    pub skewness: f64,
    /// Moment excess kurtosis `m4 / m2^2 - 3`.
    pub excess_kurtosis: f64,
}

pub fn describe(g: &GroupData) -> Vec<GroupDescription> {
    g.names
        .iter()
        .zip(&g.groups)
        .map(|(name, v)| {
            let n = v.len() as f64;
            let m = mean(v);
            let moment = |p: i32| v.iter().map(|x| (x - m).powi(p)).sum::<f64>() / n;
            let m2 = moment(2);
            let (skewness, excess_kurtosis) = if m2 > 0.0 {
                (moment(3) / m2.powf(1.5), moment(4) / (m2 * m2) - 3.0)
            } else {
                (0.0, 0.0)
            };
            GroupDescription {
                group: name.clone(),
                n: v.len(),
                mean: m,
                std: (m2 * n / (n - 1.0)).sqrt(),
                skewness,
                excess_kurtosis,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub alpha: f64,
    pub anova: AnovaResult,
    /// `None` when the absolute deviations are constant within every group
    /// (always the case for groups of two), which leaves the test undefined.
    pub levene: Option<LeveneResult>,
    pub tukey: Vec<TukeyPair>,
    /// Non-inferential shape summary per group.
    pub descriptive: Vec<GroupDescription>,
}

impl StatsReport {
    pub fn summary(&self) -> String {
        let mut out = format!("ANOVA: {}\n", self.anova.summary());
        match &self.levene {
            Some(l) => out.push_str(&format!(
                "Levene: W({}, {})={:.3}, p={:.3}\n",
                l.df_between, l.df_within, l.w_stat, l.p_value
            )),
            None => {
                out.push_str("Levene: undefined (constant absolute deviations within groups)\n")
            }
        }
        for t in &self.tukey {
            out.push_str(&format!(
                "Tukey {} vs {}: diff={:.4}, q={:.3}, p={:.4}{}\n",
                t.group_a,
                t.group_b,
                t.mean_diff,
                t.q_stat,
                t.p_adj,
                if t.significant { " *" } else { "" }
            ));
        }
        out
    }
}

/// Runs ANOVA, Levene and Tukey HSD. Only ANOVA degeneracy is an error; an
/// undefined Levene statistic is reported as `None`.
pub fn analyze(g: &GroupData, alpha: f64) -> Result<StatsReport> {
    let anova = one_way_anova(g)?;
    let levene = match levene(g) {
        Ok(l) => Some(l),
        Err(Error::Degenerate(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(StatsReport {
        alpha,
        anova,
        levene,
        tukey: tukey_hsd(g, alpha)?,
        descriptive: describe(g),
    })
}
