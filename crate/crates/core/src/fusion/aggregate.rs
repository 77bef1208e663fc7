use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fuse, partition};
use crate::error::{Error, Result};
use crate::format::sig7;
use crate::image::GrayImage;
use crate::metrics::{de_inf, evaluate_pair, ser_inf, MetricReport, MsSsimParams};

pub const SWEEP_CSV_HEADER: &str = "block_size,psnr,psnr_std,ssim,ssim_std,ms_ssim,ms_ssim_std,\
correlation,correlation_std,intersection,intersection_std,chi_square,chi_square_std,\
bhattacharyya,bhattacharyya_std";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldStats {
    #[serde(serialize_with = "ser_inf", deserialize_with = "de_inf")]
    pub mean: f64,
    /// Sample (n - 1) standard deviation; 0 for a single value.
    pub std: f64,
}

impl FieldStats {
    fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, std }
    }
}

/// Fieldwise mean and spread of several metric reports.
///
/// Infinite PSNR values (perfect reconstructions) are left out of the PSNR
/// statistics and counted in `psnr_excluded`; when every item is perfect the
/// PSNR mean is reported as infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub n_items: usize,
    pub psnr_excluded: usize,
    pub psnr: FieldStats,
    pub ssim: FieldStats,
    pub ms_ssim: FieldStats,
    pub correlation: FieldStats,
    pub intersection: FieldStats,
    pub chi_square: FieldStats,
    pub bhattacharyya: FieldStats,
}

impl AggregateReport {
    pub fn from_reports(reports: &[MetricReport]) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::arg("cannot aggregate an empty set of reports"));
        }
        let column = |i: usize| -> Vec<f64> { reports.iter().map(|r| r.to_array()[i]).collect() };
        let finite_psnr: Vec<f64> = column(0).into_iter().filter(|v| v.is_finite()).collect();
        let psnr = if finite_psnr.is_empty() {
            FieldStats {
                mean: f64::INFINITY,
                std: 0.0,
            }
        } else {
            FieldStats::of(&finite_psnr)
        };
        Ok(Self {
            n_items: reports.len(),
            psnr_excluded: reports.len() - finite_psnr.len(),
            psnr,
            ssim: FieldStats::of(&column(1)),
            ms_ssim: FieldStats::of(&column(2)),
            correlation: FieldStats::of(&column(3)),
            intersection: FieldStats::of(&column(4)),
            chi_square: FieldStats::of(&column(5)),
            bhattacharyya: FieldStats::of(&column(6)),
        })
    }

    pub fn fields(&self) -> [FieldStats; 7] {
        [
            self.psnr,
            self.ssim,
            self.ms_ssim,
            self.correlation,
            self.intersection,
            self.chi_square,
            self.bhattacharyya,
        ]
    }

    pub fn means(&self) -> MetricReport {
        MetricReport::from_array(self.fields().map(|f| f.mean))
    }

    /// One sweep CSV data row for block size `block`.
    pub fn to_sweep_csv_row(&self, block: usize) -> String {
        let mut out = block.to_string();
        for f in self.fields() {
            out.push(',');
            out.push_str(&sig7(f.mean));
            out.push(',');
            out.push_str(&sig7(f.std));
        }
        out
    }
}

/// One dataset item: a reference and its candidate restorations.
pub type FusionItem = (GrayImage, Vec<GrayImage>);

/// Fuses every item at block size `block` and aggregates the fused-vs-reference metrics.
pub fn batch_fuse(
    dataset: &[FusionItem],
    block: usize,
    p: &MsSsimParams,
) -> Result<AggregateReport> {
    if dataset.is_empty() {
        return Err(Error::arg("dataset is empty"));
    }
    let reports = dataset
        .par_iter()
        .map(|(gt, cands)| evaluate_pair(gt, &fuse(gt, cands, block, p)?.fused))
        .collect::<Result<Vec<_>>>()?;
    AggregateReport::from_reports(&reports)
}

/// [`batch_fuse`] at each block size, in the given order.
pub fn sweep_batch(
    dataset: &[FusionItem],
    sizes: &[usize],
    p: &MsSsimParams,
) -> Result<Vec<(usize, AggregateReport)>> {
    for (gt, _) in dataset {
        for &m in sizes {
            partition(gt.dims(), m)?;
        }
    }
    sizes
        .iter()
        .map(|&m| Ok((m, batch_fuse(dataset, m, p)?)))
        .collect()
}
