//! Full-reference image-quality metrics, histogram distances and the mixed
//! training loss.

mod histogram;
mod loss;
mod msssim;
mod pixel;
mod report;
mod ssim;

pub use histogram::{
    hist_bhattacharyya, hist_chi_square, hist_correlation, hist_intersection, histogram, Histogram,
    HISTOGRAM_BINS,
};
pub use loss::{mixed_loss, DEFAULT_OMEGA};
pub use msssim::{adaptive_levels, ms_ssim, LevelPlan, MsSsimParams, DEFAULT_LEVEL_WEIGHTS};
pub use pixel::{mae, mse, psnr};
pub use report::{evaluate_pair, MetricReport, METRIC_CSV_HEADER};
pub use ssim::{ssim, SsimMap, SsimOutput, SsimParams};

pub(crate) use msssim::ms_ssim_planes;
pub(crate) use report::{de_inf, ser_inf};
