//! Gaussian-windowed structural similarity.
//!
//! Local statistics are computed with a separable Gaussian filter over the
//! valid region only (no padding), so the local map is
//! `(w - win + 1) x (h - win + 1)`.

use crate::error::{Error, Result};
use crate::image::GrayImage;

#[derive(Debug, Clone, PartialEq)]
pub struct SsimParams {
    /// Odd window side in pixels.
    pub window_size: usize,
    pub gaussian_sigma: f64,
    pub k1: f64,
    pub k2: f64,
    /// Intensity range `L` used in `C1 = (k1 L)^2`, `C2 = (k2 L)^2`.
    pub dynamic_range: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self {
            window_size: 11,
            gaussian_sigma: 1.5,
            k1: 0.01,
            k2: 0.03,
            dynamic_range: 1.0,
        }
    }
}

impl SsimParams {
    pub fn validate(&self) -> Result<()> {
        if self.window_size == 0 || self.window_size.is_multiple_of(2) {
            return Err(Error::arg(format!(
                "SSIM window must be odd and positive, got {}",
                self.window_size
            )));
        }
        if !(self.gaussian_sigma > 0.0) || !(self.k1 > 0.0) || !(self.k2 > 0.0) {
            return Err(Error::arg("SSIM sigma, k1 and k2 must be positive"));
        }
        if !(self.dynamic_range > 0.0) {
            return Err(Error::arg("SSIM dynamic range must be positive"));
        }
        Ok(())
    }

    pub fn c1(&self) -> f64 {
        (self.k1 * self.dynamic_range).powi(2)
    }

    pub fn c2(&self) -> f64 {
        (self.k2 * self.dynamic_range).powi(2)
    }

    /// Normalized 1-D Gaussian taps; the 2-D window is their outer product.
    pub fn window(&self) -> Vec<f64> {
        gaussian_taps(self.window_size, self.gaussian_sigma)
    }
}

pub(crate) fn gaussian_taps(size: usize, sigma: f64) -> Vec<f64> {
    let center = (size / 2) as f64;
    let mut taps: Vec<f64> = (0..size)
        .map(|i| {
            let d = i as f64 - center;
            (-(d * d) / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= sum);
    taps
}

/// Local SSIM values over the valid region.
#[derive(Debug, Clone, PartialEq)]
pub struct SsimMap {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SsimOutput {
    /// Mean of the local map.
    pub score: f64,
    pub map: SsimMap,
}

pub fn ssim(a: &GrayImage, b: &GrayImage, p: &SsimParams) -> Result<SsimOutput> {
    p.validate()?;
    a.ensure_same_dims(b)?;
    let (w, h) = a.dims();
    if w.min(h) < p.window_size {
        return Err(Error::arg(format!(
            "image {w}x{h} is smaller than the {0}x{0} SSIM window",
            p.window_size
        )));
    }
    let taps = p.window();
    let local = local_terms(a.data(), b.data(), w, h, &taps, p.c1(), p.c2());
    Ok(SsimOutput {
        score: mean(&local.ssim),
        map: SsimMap {
            width: local.width,
            height: local.height,
            values: local.ssim,
        },
    })
}

pub(crate) struct LocalTerms {
    pub width: usize,
    pub height: usize,
    /// Luminance times contrast-structure per position.
    pub ssim: Vec<f64>,
    /// Contrast-structure per position.
    pub cs: Vec<f64>,
}

/// Computes local SSIM and contrast-structure maps for two equally sized planes.
/// Caller guarantees `taps.len() <= min(w, h)`.
pub(crate) fn local_terms(
    a: &[f64],
    b: &[f64],
    w: usize,
    h: usize,
    taps: &[f64],
    c1: f64,
    c2: f64,
) -> LocalTerms {
    let n = w * h;
    let mut aa = Vec::with_capacity(n);
    let mut bb = Vec::with_capacity(n);
    let mut ab = Vec::with_capacity(n);
    for i in 0..n {
        aa.push(a[i] * a[i]);
        bb.push(b[i] * b[i]);
        ab.push(a[i] * b[i]);
    }
    let mu_a = filter_valid(a, w, h, taps);
    let mu_b = filter_valid(b, w, h, taps);
    let e_aa = filter_valid(&aa, w, h, taps);
    let e_bb = filter_valid(&bb, w, h, taps);
    let e_ab = filter_valid(&ab, w, h, taps);

    let ow = w + 1 - taps.len();
    let oh = h + 1 - taps.len();
    let mut ssim = Vec::with_capacity(ow * oh);
    let mut cs = Vec::with_capacity(ow * oh);
    for i in 0..ow * oh {
        let (ma, mb) = (mu_a[i], mu_b[i]);
        let var_a = e_aa[i] - ma * ma;
        let var_b = e_bb[i] - mb * mb;
        let cov = e_ab[i] - ma * mb;
        let lum = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
        let con = (2.0 * cov + c2) / (var_a + var_b + c2);
        ssim.push(lum * con);
        cs.push(con);
    }
    LocalTerms {
        width: ow,
        height: oh,
        ssim,
        cs,
    }
}

/// Separable valid-region correlation with a symmetric kernel.
fn filter_valid(src: &[f64], w: usize, h: usize, taps: &[f64]) -> Vec<f64> {
    let k = taps.len();
    let ow = w + 1 - k;
    let oh = h + 1 - k;
    let mut horiz = vec![0.0; ow * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        let out = &mut horiz[y * ow..(y + 1) * ow];
        for (x, o) in out.iter_mut().enumerate() {
            *o = row[x..x + k].iter().zip(taps).map(|(v, t)| v * t).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        let dst = &mut out[y * ow..(y + 1) * ow];
        for (j, &t) in taps.iter().enumerate() {
            let src_row = &horiz[(y + j) * ow..(y + j + 1) * ow];
            for (d, &s) in dst.iter_mut().zip(src_row) {
                *d += s * t;
            }
        }
    }
    out
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_sums_to_one() {
        for (size, sigma) in [(11, 1.5), (3, 0.41), (7, 0.95), (1, 0.1)] {
            let taps = gaussian_taps(size, sigma);
            let total: f64 = taps
                .iter()
                .flat_map(|a| taps.iter().map(move |b| a * b))
                .sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_images_score_exactly_one() {
        let a = GrayImage::from_fn(20, 17, |x, y| ((x * x + 3 * y) % 23) as f64 / 22.0).unwrap();
        let out = ssim(&a, &a, &SsimParams::default()).unwrap();
        assert_eq!(out.score, 1.0);
        assert_eq!((out.map.width, out.map.height), (10, 7));
    }

    #[test]
    fn constant_images() {
        let half = GrayImage::filled(16, 16, 0.5).unwrap();
        assert_eq!(
            ssim(&half, &half, &SsimParams::default()).unwrap().score,
            1.0
        );

        let zero = GrayImage::filled(16, 16, 0.0).unwrap();
        let one = GrayImage::filled(16, 16, 1.0).unwrap();
        let c1 = 1e-4;
        let s = ssim(&zero, &one, &SsimParams::default()).unwrap().score;
        assert!((s - c1 / (1.0 + c1)).abs() < 1e-12, "{s}");
    }

    #[test]
    fn too_small_or_mismatched() {
        let a = GrayImage::filled(10, 20, 0.5).unwrap();
        assert!(matches!(
            ssim(&a, &a, &SsimParams::default()),
            Err(Error::Argument(_))
        ));
        let b = GrayImage::filled(20, 10, 0.5).unwrap();
        assert!(matches!(
            ssim(&a, &b, &SsimParams::default()),
            Err(Error::DimensionMismatch { .. })
        ));
        let even = SsimParams {
            window_size: 4,
            ..Default::default()
        };
        assert!(even.validate().is_err());
    }
}
