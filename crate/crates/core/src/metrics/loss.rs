use super::msssim::{ms_ssim, MsSsimParams};
use super::pixel::mae;
use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Weight on the structural term used during training.
pub const DEFAULT_OMEGA: f64 = 0.84;

/// `omega * (1 - MS-SSIM) + (1 - omega) * MAE`. Zero for a perfect prediction.
pub fn mixed_loss(pred: &GrayImage, gt: &GrayImage, omega: f64, p: &MsSsimParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::arg(format!("omega {omega} outside [0, 1]")));
    }
    let abs_err = mae(pred, gt)?;
    if omega == 0.0 {
        return Ok(abs_err);
    }
    let structural = 1.0 - ms_ssim(pred, gt, p)?;
    Ok(omega * structural + (1.0 - omega) * abs_err)
}
