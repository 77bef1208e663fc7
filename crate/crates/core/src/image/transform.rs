use super::{clamp_unit, GrayImage};
use crate::error::{Error, Result};

/// Resamples to `new_w`x`new_h` with bilinear interpolation.
///
/// Pixel centers are aligned: output sample `k` reads source coordinate
/// `(k + 0.5) * src / dst - 0.5`, clamped to the raster.
pub fn resize_bilinear(img: &GrayImage, new_w: usize, new_h: usize) -> Result<GrayImage> {
    if new_w == 0 || new_h == 0 {
        return Err(Error::arg(format!(
            "target size {new_w}x{new_h} has a zero dimension"
        )));
    }
    if (new_w, new_h) == img.dims() {
        return Ok(img.clone());
    }
    let sx = img.width() as f64 / new_w as f64;
    let sy = img.height() as f64 / new_h as f64;
    let mut data = Vec::with_capacity(new_w * new_h);
    for y in 0..new_h {
        let src_y = (y as f64 + 0.5) * sy - 0.5;
        for x in 0..new_w {
            let src_x = (x as f64 + 0.5) * sx - 0.5;
            data.push(img.sample_bilinear(src_x, src_y));
        }
    }
    Ok(GrayImage::from_raw(new_w, new_h, data))
}

/// Nearest-rank quantile: element `ceil(q * n) - 1` of the sorted values, clamped.
fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let rank = (q * n as f64).ceil() as isize - 1;
    sorted[rank.clamp(0, n as isize - 1) as usize]
}

/// Linear contrast stretch saturating the lowest `lower_pct` and highest
/// `upper_pct` fractions of pixels. Degenerate quantiles return the input.
pub fn contrast_stretch(img: &GrayImage, lower_pct: f64, upper_pct: f64) -> Result<GrayImage> {
    if !(lower_pct >= 0.0 && upper_pct >= 0.0 && lower_pct + upper_pct < 1.0) {
        return Err(Error::arg(format!(
            "saturation fractions ({lower_pct}, {upper_pct}) must be non-negative with sum < 1"
        )));
    }
    let mut sorted = img.data().to_vec();
    sorted.sort_by(f64::total_cmp);
    let lo = nearest_rank(&sorted, lower_pct);
    let hi = nearest_rank(&sorted, 1.0 - upper_pct);
    if hi <= lo {
        return Ok(img.clone());
    }
    let span = hi - lo;
    let data = img
        .data()
        .iter()
        .map(|&v| clamp_unit((v - lo) / span))
        .collect();
    Ok(GrayImage::from_raw(img.width(), img.height(), data))
}

/// Random-affine style augmentation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentSpec {
    /// Counter-clockwise rotation in degrees, within `[-10, 10]`.
    pub rotation_degrees: f64,
    /// Horizontal shift in pixels (positive moves content right), within `[-5, 5]`.
    pub shift_x: f64,
    /// Vertical shift in pixels (positive moves content down), within `[-5, 5]`.
    pub shift_y: f64,
    pub mirror_horizontal: bool,
    /// Center zoom; values above 1 magnify.
    pub zoom_factor: f64,
}

impl Default for AugmentSpec {
    fn default() -> Self {
        Self {
            rotation_degrees: 0.0,
            shift_x: 0.0,
            shift_y: 0.0,
            mirror_horizontal: false,
            zoom_factor: 1.0,
        }
    }
}

impl AugmentSpec {
    pub fn validate(&self) -> Result<()> {
        if !(-10.0..=10.0).contains(&self.rotation_degrees) {
            return Err(Error::arg(format!(
                "rotation {} outside [-10, 10] degrees",
                self.rotation_degrees
            )));
        }
        for (name, s) in [("shift_x", self.shift_x), ("shift_y", self.shift_y)] {
            if !(-5.0..=5.0).contains(&s) {
                return Err(Error::arg(format!("{name} {s} outside [-5, 5] pixels")));
            }
        }
        if !(self.zoom_factor > 0.0 && self.zoom_factor.is_finite()) {
            return Err(Error::arg(format!(
                "zoom factor {} must be positive",
                self.zoom_factor
            )));
        }
        Ok(())
    }
}

/// Applies mirror, rotation about the center, shift and center zoom, in that
/// order. Each resampling step is bilinear with edge replication.
pub fn augment(img: &GrayImage, spec: &AugmentSpec) -> Result<GrayImage> {
    spec.validate()?;
    let (w, h) = img.dims();
    let cx = (w as f64 - 1.0) / 2.0;
    let cy = (h as f64 - 1.0) / 2.0;
    let mut out = img.clone();

    if spec.mirror_horizontal {
        out = GrayImage::from_raw(w, h, remap_exact(&out, |x, y| (w - 1 - x, y)));
    }
    if spec.rotation_degrees != 0.0 {
        let (sin, cos) = spec.rotation_degrees.to_radians().sin_cos();
        // Inverse rotation in image coordinates (y down).
        out = resample(&out, |x, y| {
            let dx = x - cx;
            let dy = y - cy;
            (cx + cos * dx - sin * dy, cy + sin * dx + cos * dy)
        });
    }
    if spec.shift_x != 0.0 || spec.shift_y != 0.0 {
        out = resample(&out, |x, y| (x - spec.shift_x, y - spec.shift_y));
    }
    if spec.zoom_factor != 1.0 {
        let z = spec.zoom_factor;
        out = resample(&out, |x, y| (cx + (x - cx) / z, cy + (y - cy) / z));
    }
    Ok(out)
}

fn remap_exact(img: &GrayImage, f: impl Fn(usize, usize) -> (usize, usize)) -> Vec<f64> {
    let (w, h) = img.dims();
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (sx, sy) = f(x, y);
            data.push(img.get(sx, sy));
        }
    }
    data
}

/// Builds an output raster by sampling `img` at `inverse(x, y)` for each output pixel.
fn resample(img: &GrayImage, inverse: impl Fn(f64, f64) -> (f64, f64)) -> GrayImage {
    let (w, h) = img.dims();
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (sx, sy) = inverse(x as f64, y as f64);
            data.push(img.sample_bilinear(sx, sy));
        }
    }
    GrayImage::from_raw(w, h, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |x, y| ((x * 7 + y * 13) % 97) as f64 / 96.0).unwrap()
    }

    #[test]
    fn resize_two_to_three() {
        let img = GrayImage::new(2, 1, vec![0.0, 1.0]).unwrap();
        let out = resize_bilinear(&img, 3, 1).unwrap();
        // centers map to -1/6 (clamped to 0), 1/2 and 7/6 (clamped to 1)
        assert_eq!(out.data(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn resize_identity_and_constant() {
        let img = ramp(9, 5);
        assert_eq!(resize_bilinear(&img, 9, 5).unwrap(), img);
        let c = GrayImage::filled(7, 3, 0.3).unwrap();
        let out = resize_bilinear(&c, 13, 11).unwrap();
        assert!(out.data().iter().all(|&v| (v - 0.3).abs() < 1e-15));
        assert!(resize_bilinear(&c, 0, 4).is_err());
    }

    #[test]
    fn stretch_degenerate_and_full_range() {
        let c = GrayImage::filled(4, 4, 0.7).unwrap();
        assert_eq!(contrast_stretch(&c, 0.01, 0.01).unwrap(), c);
        let full = GrayImage::from_fn(11, 1, |x, _| x as f64 / 10.0).unwrap();
        assert_eq!(contrast_stretch(&full, 0.0, 0.0).unwrap(), full);
        assert!(contrast_stretch(&full, 0.6, 0.4).is_err());
        assert!(contrast_stretch(&full, -0.1, 0.0).is_err());
    }

    #[test]
    fn stretch_ramp_one_percent() {
        let img = GrayImage::from_fn(100, 1, |x, _| x as f64 / 100.0).unwrap();
        let out = contrast_stretch(&img, 0.01, 0.01).unwrap();
        // oracle: sort, take nearest-rank quantiles, apply the formula per pixel
        let mut sorted = img.data().to_vec();
        sorted.sort_by(f64::total_cmp);
        let lo = sorted[0];
        let hi = sorted[98];
        assert_eq!((lo, hi), (0.0, 0.98));
        for (&src, &dst) in img.data().iter().zip(out.data()) {
            let expect = ((src - lo) / (hi - lo)).clamp(0.0, 1.0);
            assert!((dst - expect).abs() < 1e-15);
            if src <= lo {
                assert_eq!(dst, 0.0);
            }
            if src >= hi {
                assert_eq!(dst, 1.0);
            }
        }
    }

    #[test]
    fn identity_augment() {
        let img = ramp(16, 12);
        assert_eq!(augment(&img, &AugmentSpec::default()).unwrap(), img);
    }

    #[test]
    fn mirror_is_involution() {
        let img = ramp(15, 8);
        let spec = AugmentSpec {
            mirror_horizontal: true,
            ..Default::default()
        };
        let once = augment(&img, &spec).unwrap();
        assert_ne!(once, img);
        assert_eq!(augment(&once, &spec).unwrap(), img);
    }

    #[test]
    fn shift_roundtrip_on_interior() {
        let img = ramp(20, 10);
        let fwd = AugmentSpec {
            shift_x: 2.0,
            ..Default::default()
        };
        let back = AugmentSpec {
            shift_x: -2.0,
            ..Default::default()
        };
        let out = augment(&augment(&img, &fwd).unwrap(), &back).unwrap();
        for y in 0..10 {
            for x in 2..18 {
                assert_eq!(out.get(x, y), img.get(x, y));
            }
        }
        // forward shift moves content right
        let shifted = augment(&img, &fwd).unwrap();
        assert_eq!(shifted.get(5, 3), img.get(3, 3));
    }

    #[test]
    fn rotation_preserves_center_and_range() {
        let img = ramp(21, 21);
        let spec = AugmentSpec {
            rotation_degrees: 10.0,
            zoom_factor: 1.1,
            ..Default::default()
        };
        let out = augment(&img, &spec).unwrap();
        assert_eq!(out.dims(), img.dims());
        assert!((out.get(10, 10) - img.get(10, 10)).abs() < 1e-12);
        assert!(out.data().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn invalid_spec_rejected() {
        let img = ramp(4, 4);
        for spec in [
            AugmentSpec {
                rotation_degrees: 11.0,
                ..Default::default()
            },
            AugmentSpec {
                shift_y: -5.5,
                ..Default::default()
            },
            AugmentSpec {
                zoom_factor: 0.0,
                ..Default::default()
            },
        ] {
            assert!(augment(&img, &spec).is_err());
        }
    }
}
