//! Multi-scale SSIM with an adaptive level count for small inputs.

use super::ssim::{gaussian_taps, local_terms, mean, SsimParams};
use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Standard five-scale exponents.
pub const DEFAULT_LEVEL_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];

#[derive(Debug, Clone, PartialEq)]
pub struct MsSsimParams {
    pub base: SsimParams,
    pub max_levels: usize,
    pub level_weights: Vec<f64>,
}

impl Default for MsSsimParams {
    fn default() -> Self {
        Self {
            base: SsimParams::default(),
            max_levels: 5,
            level_weights: DEFAULT_LEVEL_WEIGHTS.to_vec(),
        }
    }
}

impl MsSsimParams {
    /// Defaults restricted to a single scale (plain SSIM with the base window).
    pub fn single_scale() -> Self {
        Self {
            max_levels: 1,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.max_levels == 0 || self.max_levels > self.level_weights.len() {
            return Err(Error::arg(format!(
                "max_levels {} must be in 1..={}",
                self.max_levels,
                self.level_weights.len()
            )));
        }
        if self.level_weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::arg("MS-SSIM level weights must be positive"));
        }
        Ok(())
    }
}

/// Pyramid depth and finest-level window chosen for a given image size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPlan {
    pub levels: usize,
    /// Window side used at the finest level.
    pub window_size: usize,
    pub gaussian_sigma: f64,
}

/// Picks the pyramid depth for an image whose shorter side is `min_dim`.
///
/// `L = clamp(floor(log2(min_dim / win)) + 1, 1, max_levels)`, so the coarsest
/// level still fits a full window. Inputs smaller than the window use one level
/// with the largest odd window that fits and a proportionally scaled sigma.
pub fn adaptive_levels(min_dim: usize, p: &MsSsimParams) -> LevelPlan {
    let win = p.base.window_size;
    if min_dim < win {
        let shrunk = if min_dim % 2 == 1 {
            min_dim
        } else {
            min_dim - 1
        };
        return LevelPlan {
            levels: 1,
            window_size: shrunk,
            gaussian_sigma: p.base.gaussian_sigma * shrunk as f64 / win as f64,
        };
    }
    let mut fits = 0;
    while win << (fits + 1) <= min_dim {
        fits += 1;
    }
    LevelPlan {
        levels: (fits + 1).min(p.max_levels).max(1),
        window_size: win,
        gaussian_sigma: p.base.gaussian_sigma,
    }
}

/// Multi-scale structural similarity.
///
/// Levels `1..L-1` contribute their mean contrast-structure term and level `L`
/// its mean SSIM, each raised to its weight; the first `L` weights are
/// renormalized to sum to one. Between levels both images are 2x2 mean-pooled
/// (odd trailing rows/columns dropped). With more than one level, negative
/// terms are clamped to zero before exponentiation; a single level returns its
/// mean SSIM unchanged.
pub fn ms_ssim(a: &GrayImage, b: &GrayImage, p: &MsSsimParams) -> Result<f64> {
    p.validate()?;
    a.ensure_same_dims(b)?;
    let (w, h) = a.dims();
    Ok(ms_ssim_planes(a.data(), b.data(), w, h, p))
}

pub(crate) fn ms_ssim_planes(a: &[f64], b: &[f64], w: usize, h: usize, p: &MsSsimParams) -> f64 {
    let plan = adaptive_levels(w.min(h), p);
    let weights = &p.level_weights[..plan.levels];
    let total: f64 = weights.iter().sum();
    let c1 = p.base.c1();
    let c2 = p.base.c2();

    let mut cur_a = a.to_vec();
    let mut cur_b = b.to_vec();
    let (mut cw, mut ch) = (w, h);
    let mut value = 1.0;
    for (level, &weight) in weights.iter().enumerate() {
        // Only the single-level plan can need a window narrower than the base.
        let win = plan.window_size.min(odd_floor(cw.min(ch)));
        let sigma = plan.gaussian_sigma * win as f64 / plan.window_size as f64;
        let taps = gaussian_taps(win, sigma);
        let terms = local_terms(&cur_a, &cur_b, cw, ch, &taps, c1, c2);
        let last = level + 1 == plan.levels;
        let term = if last {
            mean(&terms.ssim)
        } else {
            mean(&terms.cs)
        };
        if plan.levels == 1 {
            return term;
        }
        value *= term.max(0.0).powf(weight / total);
        if !last {
            let (next_b, _, _) = downsample(&cur_b, cw, ch);
            (cur_a, cw, ch) = downsample(&cur_a, cw, ch);
            cur_b = next_b;
        }
    }
    value
}

fn odd_floor(n: usize) -> usize {
    if n % 2 == 1 {
        n
    } else {
        n - 1
    }
}

/// 2x2 mean pooling; a trailing odd row or column is dropped.
fn downsample(src: &[f64], w: usize, h: usize) -> (Vec<f64>, usize, usize) {
    let nw = w / 2;
    let nh = h / 2;
    let mut out = Vec::with_capacity(nw * nh);
    for y in 0..nh {
        let r0 = &src[2 * y * w..];
        let r1 = &src[(2 * y + 1) * w..];
        for x in 0..nw {
            out.push((r0[2 * x] + r0[2 * x + 1] + r1[2 * x] + r1[2 * x + 1]) * 0.25);
        }
    }
    (out, nw, nh)
}
