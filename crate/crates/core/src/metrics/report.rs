use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::histogram::{
    hist_bhattacharyya, hist_chi_square, hist_correlation, hist_intersection, histogram,
};
use super::msssim::{ms_ssim, MsSsimParams};
use super::pixel::psnr;
use super::ssim::{ssim, SsimParams};
use crate::error::{Error, Result};
use crate::format::{parse_sig7, sig7};
use crate::image::GrayImage;

pub const METRIC_CSV_HEADER: &str =
    "psnr,ssim,ms_ssim,correlation,intersection,chi_square,bhattacharyya";

/// One row of the image-quality table for a (ground truth, prediction) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    #[serde(serialize_with = "ser_inf", deserialize_with = "de_inf")]
    pub psnr: f64,
    pub ssim: f64,
    pub ms_ssim: f64,
    pub correlation: f64,
    pub intersection: f64,
    pub chi_square: f64,
    pub bhattacharyya: f64,
}

impl MetricReport {
    pub const FIELD_NAMES: [&'static str; 7] = [
        "psnr",
        "ssim",
        "ms_ssim",
        "correlation",
        "intersection",
        "chi_square",
        "bhattacharyya",
    ];

    pub fn to_array(&self) -> [f64; 7] {
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

    pub fn from_array(v: [f64; 7]) -> Self {
        Self {
            psnr: v[0],
            ssim: v[1],
            ms_ssim: v[2],
            correlation: v[3],
            intersection: v[4],
            chi_square: v[5],
            bhattacharyya: v[6],
        }
    }

    /// CSV data row (no header), seven significant digits per field.
    pub fn to_csv_row(&self) -> String {
        self.to_array().map(sig7).join(",")
    }

    pub fn from_csv_row(line: &str) -> Result<Self> {
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| parse_sig7(f).ok_or_else(|| Error::arg(format!("bad metric field {f:?}"))))
            .collect::<Result<_>>()?;
        let arr: [f64; 7] = fields.try_into().map_err(|v: Vec<f64>| {
            Error::arg(format!("expected 7 metric fields, got {}", v.len()))
        })?;
        Ok(Self::from_array(arr))
    }
}

pub(crate) fn ser_inf<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

pub(crate) fn de_inf<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumOrStr {
        Num(f64),
        Str(String),
    }
    match NumOrStr::deserialize(d)? {
        NumOrStr::Num(v) => Ok(v),
        NumOrStr::Str(s) => {
            parse_sig7(&s).ok_or_else(|| serde::de::Error::custom(format!("invalid number {s:?}")))
        }
    }
}

/// Computes all seven metrics with default parameters. `gt` is the chi-square reference.
pub fn evaluate_pair(gt: &GrayImage, pred: &GrayImage) -> Result<MetricReport> {
    gt.ensure_same_dims(pred)?;
    let h_gt = histogram(gt);
    let h_pred = histogram(pred);
    Ok(MetricReport {
        psnr: psnr(gt, pred, 1.0)?,
        ssim: ssim(gt, pred, &SsimParams::default())?.score,
        ms_ssim: ms_ssim(gt, pred, &MsSsimParams::default())?,
        correlation: hist_correlation(&h_gt, &h_pred),
        intersection: hist_intersection(&h_gt, &h_pred),
        chi_square: hist_chi_square(&h_gt, &h_pred),
        bhattacharyya: hist_bhattacharyya(&h_gt, &h_pred),
    })
}
