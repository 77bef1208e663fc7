//! Slow, direct reference implementations used only as test oracles.
//!
//! Nothing here depends on the main crate. Each function is written in the
//! most literal form of its definition (explicit 2-D windows, pairwise AUROC,
//! binomial tail sums) so agreement with the optimized code is meaningful.

#![allow(clippy::needless_range_loop)]

/// Plane of `w * h` samples in row-major order.
#[derive(Debug, Clone)]
pub struct Plane<'a> {
    pub w: usize,
    pub h: usize,
    pub px: &'a [f64],
}

impl Plane<'_> {
    fn at(&self, x: usize, y: usize) -> f64 {
        self.px[y * self.w + x]
    }
}

pub const C1: f64 = 0.01 * 0.01;
pub const C2: f64 = 0.03 * 0.03;

/// Explicit 2-D Gaussian window normalized to unit sum.
fn window_2d(size: usize, sigma: f64) -> Vec<Vec<f64>> {
    let c = (size / 2) as f64;
    let mut win = vec![vec![0.0; size]; size];
    let mut total = 0.0;
    for (i, row) in win.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let (di, dj) = (i as f64 - c, j as f64 - c);
            *v = (-(di * di + dj * dj) / (2.0 * sigma * sigma)).exp();
            total += *v;
        }
    }
    for row in &mut win {
        for v in row {
            *v /= total;
        }
    }
    win
}

/// Mean SSIM and mean contrast-structure over all valid window positions.
pub fn ssim_terms(a: &Plane, b: &Plane, size: usize, sigma: f64) -> (f64, f64) {
    let win = window_2d(size, sigma);
    let mut ssim_sum = 0.0;
    let mut cs_sum = 0.0;
    let mut count = 0usize;
    for oy in 0..=a.h - size {
        for ox in 0..=a.w - size {
            let (mut ma, mut mb) = (0.0, 0.0);
            for i in 0..size {
                for j in 0..size {
                    ma += win[i][j] * a.at(ox + j, oy + i);
                    mb += win[i][j] * b.at(ox + j, oy + i);
                }
            }
            let (mut va, mut vb, mut cov) = (0.0, 0.0, 0.0);
            for i in 0..size {
                for j in 0..size {
                    let da = a.at(ox + j, oy + i) - ma;
                    let db = b.at(ox + j, oy + i) - mb;
                    va += win[i][j] * da * da;
                    vb += win[i][j] * db * db;
                    cov += win[i][j] * da * db;
                }
            }
            let l = (2.0 * ma * mb + C1) / (ma * ma + mb * mb + C1);
            let cs = (2.0 * cov + C2) / (va + vb + C2);
            ssim_sum += l * cs;
            cs_sum += cs;
            count += 1;
        }
    }
    (ssim_sum / count as f64, cs_sum / count as f64)
}

/// SSIM with the 11-tap, sigma 1.5 window.
pub fn ssim(a: &Plane, b: &Plane) -> f64 {
    ssim_terms(a, b, 11, 1.5).0
}

fn half(p: &Plane) -> (usize, usize, Vec<f64>) {
    let (w, h) = (p.w / 2, p.h / 2);
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let s = p.at(2 * x, 2 * y)
                + p.at(2 * x + 1, 2 * y)
                + p.at(2 * x, 2 * y + 1)
                + p.at(2 * x + 1, 2 * y + 1);
            out.push(s / 4.0);
        }
    }
    (w, h, out)
}

/// Five-scale MS-SSIM with the shrinking rule for small inputs:
/// as many levels as keep an 11-px window inside the coarsest scale,
/// renormalized weights, negative terms floored at zero.
pub fn ms_ssim(a: &Plane, b: &Plane) -> f64 {
    const WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];
    let m = a.w.min(a.h);
    if m < 11 {
        let size = if m.is_multiple_of(2) { m - 1 } else { m };
        return ssim_terms(a, b, size, 1.5 * size as f64 / 11.0).0;
    }
    let levels = (((m as f64 / 11.0).log2().floor() as usize) + 1).min(5);
    if levels == 1 {
        return ssim(a, b);
    }
    let total: f64 = WEIGHTS[..levels].iter().sum();
    let (mut aw, mut ah, mut ap) = (a.w, a.h, a.px.to_vec());
    let mut bp = b.px.to_vec();
    let mut result = 1.0;
    for (lvl, wt) in WEIGHTS[..levels].iter().enumerate() {
        let pa = Plane {
            w: aw,
            h: ah,
            px: &ap,
        };
        let pb = Plane {
            w: aw,
            h: ah,
            px: &bp,
        };
        let (s, cs) = ssim_terms(&pa, &pb, 11, 1.5);
        let term = if lvl + 1 == levels { s } else { cs };
        result *= term.max(0.0).powf(wt / total);
        let (nw, nh, na) = half(&pa);
        let (_, _, nb) = half(&pb);
        (aw, ah, ap, bp) = (nw, nh, na, nb);
    }
    result
}

pub fn psnr(a: &[f64], b: &[f64]) -> f64 {
    let mut se = 0.0;
    for i in 0..a.len() {
        se += (a[i] - b[i]).powi(2);
    }
    let mse = se / a.len() as f64;
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (1.0 / mse).log10()
    }
}

/// 256-bin normalized histogram of values in [0, 1].
pub fn histogram(px: &[f64]) -> Vec<f64> {
    let mut bins = vec![0.0; 256];
    for &v in px {
        let mut k = (v * 256.0).floor() as usize;
        if k > 255 {
            k = 255;
        }
        bins[k] += 1.0;
    }
    bins.iter().map(|c| c / px.len() as f64).collect()
}

pub fn hist_correlation(h1: &[f64], h2: &[f64]) -> f64 {
    let n = h1.len() as f64;
    let m1 = h1.iter().sum::<f64>() / n;
    let m2 = h2.iter().sum::<f64>() / n;
    let num: f64 = (0..h1.len()).map(|i| (h1[i] - m1) * (h2[i] - m2)).sum();
    let s1: f64 = h1.iter().map(|v| (v - m1).powi(2)).sum();
    let s2: f64 = h2.iter().map(|v| (v - m2).powi(2)).sum();
    num / (s1 * s2).sqrt()
}

pub fn hist_intersection(h1: &[f64], h2: &[f64]) -> f64 {
    (0..h1.len()).map(|i| h1[i].min(h2[i])).sum()
}

pub fn hist_chi_square(reference: &[f64], test: &[f64]) -> f64 {
    let mut d = 0.0;
    for i in 0..reference.len() {
        if reference[i] != 0.0 {
            d += (reference[i] - test[i]).powi(2) / reference[i];
        }
    }
    d
}

pub fn hist_bhattacharyya(h1: &[f64], h2: &[f64]) -> f64 {
    let bc: f64 = (0..h1.len()).map(|i| (h1[i] * h2[i]).sqrt()).sum();
    (1.0 - bc).max(0.0).sqrt()
}

/// (tp, tn, fp, fn) with `score >= threshold` meaning positive.
pub fn confusion(labels: &[bool], scores: &[f64], threshold: f64) -> (u64, u64, u64, u64) {
    let (mut tp, mut tn, mut fp, mut fneg) = (0, 0, 0, 0);
    for i in 0..labels.len() {
        let pred = scores[i] >= threshold;
        if labels[i] && pred {
            tp += 1;
        } else if labels[i] {
            fneg += 1;
        } else if pred {
            fp += 1;
        } else {
            tn += 1;
        }
    }
    (tp, tn, fp, fneg)
}

/// accuracy, sensitivity, precision, F1, MCC; zero denominators give 0.
pub fn threshold_metrics(tp: u64, tn: u64, fp: u64, fneg: u64) -> [f64; 5] {
    let div = |a: f64, b: f64| if b == 0.0 { 0.0 } else { a / b };
    let (tp, tn, fp, fneg) = (tp as f64, tn as f64, fp as f64, fneg as f64);
    let acc = div(tp + tn, tp + tn + fp + fneg);
    let sens = div(tp, tp + fneg);
    let prec = div(tp, tp + fp);
    let f1 = div(2.0 * prec * sens, prec + sens);
    let mcc = div(
        tp * tn - fp * fneg,
        ((tp + fp) * (tp + fneg) * (tn + fp) * (tn + fneg)).sqrt(),
    );
    [acc, sens, prec, f1, mcc]
}

/// Probability that a random positive outscores a random negative (ties count half).
pub fn auroc(labels: &[bool], scores: &[f64]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for i in 0..labels.len() {
        for j in 0..labels.len() {
            if labels[i] && !labels[j] {
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
    }
    wins / pairs
}

/// Step-wise PR area, recounting the confusion matrix at every distinct score.
pub fn auprc(labels: &[bool], scores: &[f64]) -> f64 {
    let mut thresholds = scores.to_vec();
    thresholds.sort_by(|a, b| b.partial_cmp(a).unwrap());
    thresholds.dedup();
    let mut area = 0.0;
    let mut last_recall = 0.0;
    for t in thresholds {
        let (tp, _, fp, fneg) = confusion(labels, scores, t);
        let recall = tp as f64 / (tp + fneg) as f64;
        let precision = tp as f64 / (tp + fp) as f64;
        area += precision * (recall - last_recall);
        last_recall = recall;
    }
    area
}

/// P(X >= k) for X ~ Binomial(n, p).
pub fn binom_upper_tail(k: u64, n: u64, p: f64) -> f64 {
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return 1.0;
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    // ln C(n, j), built up one factor at a time
    let mut ln_c = 0.0;
    let mut s = 0.0;
    for j in 0..=n {
        if j > 0 {
            ln_c += ((n - j + 1) as f64).ln() - (j as f64).ln();
        }
        if j >= k {
            s += (ln_c + j as f64 * lp + (n - j) as f64 * lq).exp();
        }
    }
    s
}

/// Root of a monotone-increasing `f` on [0, 1] by plain bisection.
fn bisect(f: impl Fn(f64) -> f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact binomial interval found by inverting the binomial tails directly.
pub fn clopper_pearson(k: u64, n: u64, alpha: f64) -> (f64, f64) {
    let lower = if k == 0 {
        0.0
    } else {
        bisect(|p| binom_upper_tail(k, n, p), alpha / 2.0)
    };
    // upper bound: P(X <= k) = alpha / 2, i.e. P(X >= k + 1) = 1 - alpha / 2
    let upper = if k == n {
        1.0
    } else {
        bisect(|p| binom_upper_tail(k + 1, n, p), 1.0 - alpha / 2.0)
    };
    (lower, upper)
}

/// Pooled-variance two-sample t statistic.
pub fn pooled_t(x: &[f64], y: &[f64]) -> f64 {
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mx, my) = (mean(x), mean(y));
    let ssx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let ssy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let sp2 = (ssx + ssy) / (nx + ny - 2.0);
    (mx - my) / (sp2 * (1.0 / nx + 1.0 / ny)).sqrt()
}

/// One-way ANOVA F statistic from its textbook sums of squares.
pub fn anova_f(groups: &[Vec<f64>]) -> f64 {
    let all: Vec<f64> = groups.iter().flatten().copied().collect();
    let grand = all.iter().sum::<f64>() / all.len() as f64;
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for g in groups {
        let m = g.iter().sum::<f64>() / g.len() as f64;
        ssb += g.len() as f64 * (m - grand).powi(2);
        ssw += g.iter().map(|v| (v - m).powi(2)).sum::<f64>();
    }
    let k = groups.len() as f64;
    let n = all.len() as f64;
    (ssb / (k - 1.0)) / (ssw / (n - k))
}
