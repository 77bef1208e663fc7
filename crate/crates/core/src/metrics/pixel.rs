use crate::error::{Error, Result};
use crate::image::GrayImage;

pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.ensure_same_dims(b)?;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / a.data().len() as f64)
}

pub fn mae(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.ensure_same_dims(b)?;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).abs())
        .sum();
    Ok(sum / a.data().len() as f64)
}

/// Peak signal-to-noise ratio in dB; `f64::INFINITY` when the images are identical.
pub fn psnr(a: &GrayImage, b: &GrayImage, max_val: f64) -> Result<f64> {
    if !(max_val > 0.0) {
        return Err(Error::arg(format!(
            "PSNR peak value must be positive, got {max_val}"
        )));
    }
    let err = mse(a, b)?;
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (max_val * max_val / err).log10())
}
