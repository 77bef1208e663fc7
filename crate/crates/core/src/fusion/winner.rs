use serde::{Deserialize, Serialize};

use crate::image::GrayImage;

/// Serializable record of which candidate supplied each block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinnerMap {
    pub block: usize,
    pub rows: usize,
    pub cols: usize,
    /// Row-major candidate indices.
    pub winners: Vec<usize>,
}

impl WinnerMap {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("winner map serializes")
    }

    /// Full-resolution visualization: each block is painted with its winner index
    /// scaled so that the last candidate is white.
    pub fn to_image(&self, n_candidates: usize) -> GrayImage {
        let scale = if n_candidates > 1 {
            1.0 / (n_candidates - 1) as f64
        } else {
            0.0
        };
        let (w, h) = (self.cols * self.block, self.rows * self.block);
        let mut data = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                let b = (y / self.block) * self.cols + x / self.block;
                data.push((self.winners[b] as f64 * scale).min(1.0));
            }
        }
        GrayImage::from_raw(w, h, data)
    }
}
