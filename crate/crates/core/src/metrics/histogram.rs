//! Intensity histograms and the four comparison measures reported alongside
//! the structural metrics.
//!
//! Every measure divides by the histograms' actual masses where a unit mass
//! would otherwise be assumed. For normalized inputs this changes nothing, but
//! it makes comparisons of a histogram with itself come out exact despite
//! rounding in the normalization.

use crate::error::{Error, Result};
use crate::image::GrayImage;

pub const HISTOGRAM_BINS: usize = 256;

/// Unit-mass histogram. Bin `b` of an image histogram covers `[b/256, (b+1)/256)`,
/// with the last bin closed at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    bins: Vec<f64>,
}

impl Histogram {
    /// Normalizes arbitrary non-negative bin weights to unit mass.
    pub fn from_bins(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::arg(
                "histogram weights must be finite and non-negative",
            ));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::arg("histogram has zero total mass"));
        }
        Ok(Self {
            bins: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn mass(&self) -> f64 {
        self.bins.iter().sum()
    }
}

pub fn histogram(img: &GrayImage) -> Histogram {
    let mut counts = vec![0u64; HISTOGRAM_BINS];
    for &v in img.data() {
        let b = ((v * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1);
        counts[b] += 1;
    }
    let n = img.data().len() as f64;
    Histogram {
        bins: counts.into_iter().map(|c| c as f64 / n).collect(),
    }
}

fn check_len(h1: &Histogram, h2: &Histogram) {
    assert_eq!(
        h1.bins.len(),
        h2.bins.len(),
        "histograms must have the same number of bins"
    );
}

/// Pearson correlation across bins. When either histogram has zero variance
/// the result is 1 for identical histograms and 0 otherwise.
///
/// # Panics
/// If the bin counts differ (likewise for the other comparison functions).
pub fn hist_correlation(h1: &Histogram, h2: &Histogram) -> f64 {
    check_len(h1, h2);
    let n = h1.bins.len() as f64;
    let m1 = h1.mass() / n;
    let m2 = h2.mass() / n;
    let (mut num, mut v1, mut v2) = (0.0, 0.0, 0.0);
    for (a, b) in h1.bins.iter().zip(&h2.bins) {
        let (d1, d2) = (a - m1, b - m2);
        num += d1 * d2;
        v1 += d1 * d1;
        v2 += d2 * d2;
    }
    let den = (v1 * v2).sqrt();
    if den == 0.0 {
        return if h1 == h2 { 1.0 } else { 0.0 };
    }
    (num / den).clamp(-1.0, 1.0)
}

pub fn hist_intersection(h1: &Histogram, h2: &Histogram) -> f64 {
    check_len(h1, h2);
    let overlap: f64 = h1.bins.iter().zip(&h2.bins).map(|(a, b)| a.min(*b)).sum();
    (overlap / (h1.mass() * h2.mass()).sqrt()).clamp(0.0, 1.0)
}

/// Chi-square distance `sum (r - t)^2 / r` over bins where the reference `r` is
/// non-zero. Asymmetric: the first argument is the reference.
pub fn hist_chi_square(h_ref: &Histogram, h_test: &Histogram) -> f64 {
    check_len(h_ref, h_test);
    h_ref
        .bins
        .iter()
        .zip(&h_test.bins)
        .filter(|(r, _)| **r > 0.0)
        .map(|(r, t)| (r - t) * (r - t) / r)
        .sum()
}

/// Bhattacharyya (Hellinger) distance `sqrt(1 - sum sqrt(h1 h2))`, in `[0, 1]`.
pub fn hist_bhattacharyya(h1: &Histogram, h2: &Histogram) -> f64 {
    check_len(h1, h2);
    let coeff: f64 = h1
        .bins
        .iter()
        .zip(&h2.bins)
        .map(|(a, b)| (a * b).sqrt())
        .sum();
    let coeff = coeff / (h1.mass() * h2.mass()).sqrt();
    (1.0 - coeff).clamp(0.0, 1.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(w: &[f64]) -> Histogram {
        Histogram::from_bins(w.to_vec()).unwrap()
    }

    #[test]
    fn binning_edges() {
        let zero = histogram(&GrayImage::filled(4, 4, 0.0).unwrap());
        assert_eq!(zero.bins()[0], 1.0);
        assert_eq!(zero.bins()[1..].iter().sum::<f64>(), 0.0);
        let one = histogram(&GrayImage::filled(4, 4, 1.0).unwrap());
        assert_eq!(one.bins()[255], 1.0);
        let two = histogram(&GrayImage::new(2, 1, vec![0.0, 0.5]).unwrap());
        assert_eq!((two.bins()[0], two.bins()[128]), (0.5, 0.5));
        assert_eq!(two.bins().len(), HISTOGRAM_BINS);
    }

    #[test]
    fn correlation_cases() {
        let a = h(&[1.0, 2.0, 3.0]);
        let b = h(&[3.0, 2.0, 1.0]);
        assert!((hist_correlation(&a, &b) + 1.0).abs() < 1e-12);
        assert_eq!(hist_correlation(&a, &a), 1.0);
        let uniform = h(&[1.0, 1.0, 1.0]);
        assert_eq!(hist_correlation(&uniform, &a), 0.0);
        assert_eq!(hist_correlation(&uniform, &uniform), 1.0);
    }

    #[test]
    fn intersection_cases() {
        let a = h(&[0.2, 0.3, 0.5]);
        assert_eq!(hist_intersection(&a, &a), 1.0);
        assert_eq!(hist_intersection(&h(&[1.0, 0.0]), &h(&[0.0, 1.0])), 0.0);
        assert_eq!(hist_intersection(&h(&[1.0, 0.0]), &h(&[0.5, 0.5])), 0.5);
    }

    #[test]
    fn chi_square_cases() {
        let a = h(&[0.5, 0.5]);
        assert_eq!(hist_chi_square(&a, &a), 0.0);
        assert!((hist_chi_square(&a, &h(&[0.25, 0.75])) - 0.25).abs() < 1e-15);
        // mass where the reference is empty is skipped
        let v = hist_chi_square(&h(&[1.0, 0.0]), &h(&[0.5, 0.5]));
        assert!(v.is_finite());
        assert!((v - 0.25).abs() < 1e-15);
        // asymmetric
        assert_ne!(
            hist_chi_square(&h(&[0.5, 0.5]), &h(&[0.25, 0.75])),
            hist_chi_square(&h(&[0.25, 0.75]), &h(&[0.5, 0.5]))
        );
    }

    #[test]
    fn bhattacharyya_cases() {
        let a = h(&[0.1, 0.6, 0.3]);
        assert_eq!(hist_bhattacharyya(&a, &a), 0.0);
        assert_eq!(hist_bhattacharyya(&h(&[1.0, 0.0]), &h(&[0.0, 1.0])), 1.0);
        let v = hist_bhattacharyya(&h(&[1.0, 0.0]), &h(&[0.5, 0.5]));
        assert!((v - (1.0 - 0.5f64.sqrt()).sqrt()).abs() < 1e-12);
        assert!((v - 0.5412).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(Histogram::from_bins(vec![0.0, 0.0]).is_err());
        assert!(Histogram::from_bins(vec![1.0, -0.5]).is_err());
    }
}
