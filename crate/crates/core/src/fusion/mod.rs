//! Block-wise ensemble fusion guided by a reference image.
//!
//! The image is tiled into `M x M` blocks. In each block every candidate is
//! scored by MS-SSIM against the reference block, and the best-scoring
//! candidate's pixels are copied verbatim into the output. Ties go to the
//! lowest candidate index.

mod aggregate;
mod winner;

pub use aggregate::{
    batch_fuse, sweep_batch, AggregateReport, FieldStats, FusionItem, SWEEP_CSV_HEADER,
};
pub use winner::WinnerMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::metrics::{evaluate_pair, ms_ssim_planes, MetricReport, MsSsimParams};

/// Block sizes evaluated by default in a sweep.
pub const DEFAULT_BLOCK_SIZES: [usize; 7] = [4, 8, 16, 32, 64, 128, 256];

/// Square tiling of an image into `block x block` tiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockGrid {
    pub block: usize,
    pub rows: usize,
    pub cols: usize,
}

impl BlockGrid {
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Pixel coordinates `(x, y)` of the top-left corner of block `index` (row-major).
    pub fn origin(&self, index: usize) -> (usize, usize) {
        let (r, c) = (index / self.cols, index % self.cols);
        (c * self.block, r * self.block)
    }
}

/// Tiles a `(width, height)` image. The block side must divide both dimensions.
pub fn partition(dims: (usize, usize), block: usize) -> Result<BlockGrid> {
    let (width, height) = dims;
    if block == 0 {
        return Err(Error::arg("block size must be at least 1"));
    }
    for (dimension, size) in [("width", width), ("height", height)] {
        if size % block != 0 {
            return Err(Error::Divisibility {
                block,
                dimension,
                size,
            });
        }
    }
    Ok(BlockGrid {
        block,
        rows: height / block,
        cols: width / block,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionResult {
    pub fused: GrayImage,
    pub grid: BlockGrid,
    /// Winning candidate index per block, row-major.
    pub winners: Vec<usize>,
    /// `block_scores[b][c]` is candidate `c`'s MS-SSIM in block `b`.
    pub block_scores: Vec<Vec<f64>>,
}

impl FusionResult {
    pub fn winner_map(&self) -> WinnerMap {
        WinnerMap {
            block: self.grid.block,
            rows: self.grid.rows,
            cols: self.grid.cols,
            winners: self.winners.clone(),
        }
    }

    /// Winning score in each block.
    pub fn winning_scores(&self) -> Vec<f64> {
        self.block_scores
            .iter()
            .zip(&self.winners)
            .map(|(s, &w)| s[w])
            .collect()
    }

    /// Mean over blocks of candidate `c`'s scores.
    pub fn candidate_mean_score(&self, c: usize) -> f64 {
        self.block_scores.iter().map(|s| s[c]).sum::<f64>() / self.block_scores.len() as f64
    }

    pub fn fused_mean_score(&self) -> f64 {
        let w = self.winning_scores();
        w.iter().sum::<f64>() / w.len() as f64
    }
}

fn check_inputs(gt: &GrayImage, candidates: &[GrayImage]) -> Result<()> {
    if candidates.is_empty() {
        return Err(Error::arg("fusion needs at least one candidate"));
    }
    candidates.iter().try_for_each(|c| gt.ensure_same_dims(c))
}

/// Per-block MS-SSIM of each candidate against `gt`, block-major.
pub fn block_scores(
    gt: &GrayImage,
    candidates: &[GrayImage],
    block: usize,
    p: &MsSsimParams,
) -> Result<(BlockGrid, Vec<Vec<f64>>)> {
    check_inputs(gt, candidates)?;
    p.validate()?;
    let grid = partition(gt.dims(), block)?;
    let scores = (0..grid.len())
        .into_par_iter()
        .map(|b| {
            let (x, y) = grid.origin(b);
            let reference = extract(gt, x, y, block);
            candidates
                .iter()
                .map(|c| ms_ssim_planes(&extract(c, x, y, block), &reference, block, block, p))
                .collect()
        })
        .collect();
    Ok((grid, scores))
}

fn extract(img: &GrayImage, x: usize, y: usize, block: usize) -> Vec<f64> {
    let w = img.width();
    let mut out = Vec::with_capacity(block * block);
    for row in y..y + block {
        out.extend_from_slice(&img.data()[row * w + x..row * w + x + block]);
    }
    out
}

/// Index of the largest score; NaN never wins and ties keep the lowest index.
fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] || (scores[best].is_nan() && !s.is_nan()) {
            best = i;
        }
    }
    best
}

/// Fuses `candidates` block by block against the reference `gt`.
pub fn fuse(
    gt: &GrayImage,
    candidates: &[GrayImage],
    block: usize,
    p: &MsSsimParams,
) -> Result<FusionResult> {
    let (grid, block_scores) = block_scores(gt, candidates, block, p)?;
    let winners: Vec<usize> = block_scores.iter().map(|s| argmax(s)).collect();

    let width = gt.width();
    let mut data = vec![0.0; width * gt.height()];
    for (b, &win) in winners.iter().enumerate() {
        let (x, y) = grid.origin(b);
        let src = candidates[win].data();
        for row in y..y + block {
            let span = row * width + x..row * width + x + block;
            data[span.clone()].copy_from_slice(&src[span]);
        }
    }
    Ok(FusionResult {
        fused: GrayImage::from_raw(width, gt.height(), data),
        grid,
        winners,
        block_scores,
    })
}

/// Fuses at each block size and evaluates the fused image against `gt`.
/// Rows come back in the order of `sizes`.
pub fn sweep(
    gt: &GrayImage,
    candidates: &[GrayImage],
    sizes: &[usize],
    p: &MsSsimParams,
) -> Result<Vec<(usize, MetricReport)>> {
    check_inputs(gt, candidates)?;
    for &m in sizes {
        partition(gt.dims(), m)?;
    }
    sizes
        .iter()
        .map(|&m| {
            let result = fuse(gt, candidates, m, p)?;
            Ok((m, evaluate_pair(gt, &result.fused)?))
        })
        .collect()
}
