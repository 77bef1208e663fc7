//! Deterministic synthetic stand-ins for restoration outputs.
//!
//! A smooth phantom plays the reference; candidates are copies degraded by
//! blur, diagonal ridge bands and Gaussian noise, each concentrated in a
//! different region so no candidate is best everywhere.
//!
//! All randomness comes from [`SeededRng`] (xoshiro256** seeded through
//! SplitMix64), so outputs are bit-identical across runs and platforms.

mod rng;

pub use rng::SeededRng;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{clamp_unit, GrayImage};

/// Axis-aligned pixel rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl Region {
    fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x && x < self.x + self.width && y >= self.y && y < self.y + self.height
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegradeSpec {
    pub seed: u64,
    /// Gaussian blur sigma in pixels; 0 disables.
    pub blur_sigma: f64,
    /// Standard deviation of additive Gaussian noise; 0 disables.
    pub noise_sigma: f64,
    /// Peak intensity added by each ridge band.
    pub ridge_amplitude: f64,
    pub ridge_count: usize,
    /// Restricts every degradation to this rectangle when set.
    pub region: Option<Region>,
}

impl DegradeSpec {
    /// A spec that leaves images untouched.
    pub fn identity(seed: u64) -> Self {
        Self {
            seed,
            blur_sigma: 0.0,
            noise_sigma: 0.0,
            ridge_amplitude: 0.0,
            ridge_count: 0,
            region: None,
        }
    }

    fn validate(&self, dims: (usize, usize)) -> Result<()> {
        for (name, v) in [
            ("blur_sigma", self.blur_sigma),
            ("noise_sigma", self.noise_sigma),
            ("ridge_amplitude", self.ridge_amplitude),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::arg(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if let Some(r) = self.region {
            if r.width == 0 || r.height == 0 || r.x + r.width > dims.0 || r.y + r.height > dims.1 {
                return Err(Error::arg(format!(
                    "region {}x{}+{}+{} is empty or exceeds the {}x{} image",
                    r.width, r.height, r.x, r.y, dims.0, dims.1
                )));
            }
        }
        Ok(())
    }
}

/// Smooth soft-tissue-like phantom: 6 to 12 seeded Gaussian blobs, min-max
/// normalized to `[0, 1]`.
pub fn generate_phantom(seed: u64, width: usize, height: usize) -> Result<GrayImage> {
    if width < 16 || height < 16 {
        return Err(Error::arg(format!(
            "phantom needs at least 16x16 pixels, got {width}x{height}"
        )));
    }
    let mut rng = SeededRng::new(seed);
    let min_dim = width.min(height) as f64;
    let n_blobs = 6 + rng.below(7);
    let blobs: Vec<[f64; 4]> = (0..n_blobs)
        .map(|_| {
            let cx = rng.uniform(0.0, width as f64);
            let cy = rng.uniform(0.0, height as f64);
            let sigma = rng.uniform(min_dim / 12.0, min_dim / 4.0);
            let amp = rng.uniform(-0.4, 1.0);
            [cx, cy, sigma, amp]
        })
        .collect();
    let mut data = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let v: f64 = blobs
                .iter()
                .map(|&[cx, cy, s, a]| {
                    let (dx, dy) = (x as f64 - cx, y as f64 - cy);
                    a * (-(dx * dx + dy * dy) / (2.0 * s * s)).exp()
                })
                .sum();
            data.push(v);
        }
    }
    let lo = data.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    for v in &mut data {
        *v = if span > 0.0 {
            clamp_unit((*v - lo) / span)
        } else {
            0.5
        };
    }
    Ok(GrayImage::from_raw(width, height, data))
}

/// Applies blur, then ridge bands, then noise; clamps to `[0, 1]`; and finally
/// restores pixels outside `spec.region` when one is given.
///
/// Blur is separable with radius `ceil(3 sigma)` and edge replication. Ridge
/// bands run along `x + y = c` with seeded offsets `c` and a Gaussian profile of
/// width `(w + h) / 64`. Noise is drawn for every pixel in row-major order.
pub fn degrade(img: &GrayImage, spec: &DegradeSpec) -> Result<GrayImage> {
    spec.validate(img.dims())?;
    let (w, h) = img.dims();
    let mut rng = SeededRng::new(spec.seed);
    let mut work = if spec.blur_sigma > 0.0 {
        gaussian_blur(img, spec.blur_sigma)
    } else {
        img.data().to_vec()
    };

    if spec.ridge_count > 0 && spec.ridge_amplitude > 0.0 {
        let offsets: Vec<f64> = (0..spec.ridge_count)
            .map(|_| rng.uniform(0.0, (w + h) as f64))
            .collect();
        let width = (w + h) as f64 / 64.0;
        for y in 0..h {
            for x in 0..w {
                let s = (x + y) as f64;
                let add: f64 = offsets
                    .iter()
                    .map(|c| {
                        let d = (s - c) / std::f64::consts::SQRT_2;
                        (-(d * d) / (2.0 * width * width)).exp()
                    })
                    .sum();
                work[y * w + x] += spec.ridge_amplitude * add;
            }
        }
    }

    if spec.noise_sigma > 0.0 {
        for v in &mut work {
            *v += spec.noise_sigma * rng.normal();
        }
    }

    for (i, v) in work.iter_mut().enumerate() {
        let inside = spec.region.is_none_or(|r| r.contains(i % w, i / w));
        *v = if inside {
            clamp_unit(*v)
        } else {
            img.data()[i]
        };
    }
    Ok(GrayImage::from_raw(w, h, work))
}

fn gaussian_blur(img: &GrayImage, sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let mut taps: Vec<f64> = (-radius..=radius)
        .map(|d| (-((d * d) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= sum);

    let (w, h) = img.dims();
    let mut horiz = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            horiz[y * w + x] = taps
                .iter()
                .enumerate()
                .map(|(j, t)| t * img.get_clamped(x as isize + j as isize - radius, y as isize))
                .sum();
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = taps
                .iter()
                .enumerate()
                .map(|(j, t)| {
                    let yy = (y as isize + j as isize - radius).clamp(0, h as isize - 1) as usize;
                    t * horiz[yy * w + x]
                })
                .sum();
        }
    }
    out
}

/// A reference plus degraded candidates and the specs that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub gt: GrayImage,
    pub candidates: Vec<GrayImage>,
    /// Degradations applied to each candidate, in order.
    pub specs: Vec<Vec<DegradeSpec>>,
}

/// Builds a phantom reference and `n_candidates` degraded copies.
///
/// Every candidate gets a light global degradation, then a heavy one confined
/// to its own vertical strip (strip `k` of `n`, widened by a seeded margin).
pub fn make_candidate_set(
    seed: u64,
    n_candidates: usize,
    width: usize,
    height: usize,
) -> Result<CandidateSet> {
    if n_candidates == 0 {
        return Err(Error::arg("need at least one candidate"));
    }
    let gt = generate_phantom(seed, width, height)?;
    let mut master = SeededRng::new(seed ^ 0x9E37_79B9_7F4A_7C15);
    let strip = width / n_candidates;
    let mut candidates = Vec::with_capacity(n_candidates);
    let mut specs = Vec::with_capacity(n_candidates);
    for k in 0..n_candidates {
        let light = DegradeSpec {
            seed: master.next_u64(),
            blur_sigma: 0.6,
            noise_sigma: 0.02,
            ridge_amplitude: 0.0,
            ridge_count: 0,
            region: None,
        };
        let margin = master.below(strip / 4 + 1);
        let x0 = (k * strip).saturating_sub(margin);
        let x1 = if k + 1 == n_candidates {
            width
        } else {
            ((k + 1) * strip + margin).min(width)
        };
        let heavy = DegradeSpec {
            seed: master.next_u64(),
            blur_sigma: 2.0,
            noise_sigma: 0.06,
            ridge_amplitude: 0.15,
            ridge_count: 4,
            region: Some(Region {
                x: x0,
                y: 0,
                width: x1 - x0,
                height,
            }),
        };
        let img = degrade(&degrade(&gt, &light)?, &heavy)?;
        candidates.push(img);
        specs.push(vec![light, heavy]);
    }
    Ok(CandidateSet {
        gt,
        candidates,
        specs,
    })
}
