//! Binary greymap (P5) reader and writer.
//!
//! Header is `P5`, width, height and maxval separated by whitespace (with `#`
//! comments allowed between tokens), then exactly one whitespace byte before the
//! raster. Samples are raw bytes when `maxval < 256`, big-endian 16-bit words
//! otherwise.

use std::fs;
use std::path::Path;

use super::GrayImage;
use crate::error::{Error, Result};

/// Storage depth of a written greymap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn maxval(self) -> u32 {
        match self {
            BitDepth::Eight => 255,
            BitDepth::Sixteen => 65535,
        }
    }

    /// Smallest depth able to hold samples up to `maxval`.
    pub fn for_maxval(maxval: u32) -> Self {
        if maxval < 256 {
            BitDepth::Eight
        } else {
            BitDepth::Sixteen
        }
    }

    pub fn from_bits(bits: u32) -> Result<Self> {
        match bits {
            8 => Ok(BitDepth::Eight),
            16 => Ok(BitDepth::Sixteen),
            other => Err(Error::arg(format!(
                "bit depth must be 8 or 16, got {other}"
            ))),
        }
    }
}

pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    load_image_with_depth(path).map(|(img, _)| img)
}

/// Loads a P5 file and also returns its header maxval.
pub fn load_image_with_depth(path: impl AsRef<Path>) -> Result<(GrayImage, u32)> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

pub fn save_image(img: &GrayImage, path: impl AsRef<Path>, depth: BitDepth) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode(img, depth)).map_err(|e| Error::io(path, e))
}

/// Serializes an image into P5 bytes.
pub fn write_pgm(img: &GrayImage, depth: BitDepth) -> Vec<u8> {
    encode(img, depth)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c => self.pos += 1,
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u64> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse {
                offset: start,
                message: format!("{what} out of range"),
            })
    }
}

fn decode(bytes: &[u8]) -> Result<(GrayImage, u32)> {
    let mut cur = Cursor { bytes, pos: 0 };
    if !bytes.starts_with(b"P5") {
        return Err(cur.err("missing P5 magic number"));
    }
    cur.pos = 2;
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval_pos = cur.pos;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Parse {
            offset: maxval_pos,
            message: format!("zero dimension {width}x{height}"),
        });
    }
    if !(1..=65535).contains(&maxval) {
        return Err(Error::Format(format!("maxval {maxval} not in 1..=65535")));
    }
    let maxval = maxval as u32;
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(cur.err("expected single whitespace after maxval")),
    }

    let sample_bytes = if maxval < 256 { 1 } else { 2 };
    let n = width
        .checked_mul(height)
        .ok_or_else(|| cur.err("dimensions overflow"))?;
    let need = n * sample_bytes;
    let payload = &bytes[cur.pos..];
    if payload.len() < need {
        return Err(Error::Parse {
            offset: bytes.len(),
            message: format!(
                "truncated raster: need {need} bytes, found {}",
                payload.len()
            ),
        });
    }

    let scale = maxval as f64;
    let mut data = Vec::with_capacity(n);
    for i in 0..n {
        let raw = if sample_bytes == 1 {
            payload[i] as u32
        } else {
            u16::from_be_bytes([payload[2 * i], payload[2 * i + 1]]) as u32
        };
        if raw > maxval {
            return Err(Error::Parse {
                offset: cur.pos + i * sample_bytes,
                message: format!("sample {raw} exceeds maxval {maxval}"),
            });
        }
        data.push(raw as f64 / scale);
    }
    Ok((GrayImage::from_raw(width, height, data), maxval))
}

fn encode(img: &GrayImage, depth: BitDepth) -> Vec<u8> {
    let maxval = depth.maxval();
    let header = format!("P5\n{} {}\n{}\n", img.width(), img.height(), maxval);
    let mut out = header.into_bytes();
    let scale = maxval as f64;
    match depth {
        BitDepth::Eight => out.extend(img.data().iter().map(|&v| (v * scale).round() as u8)),
        BitDepth::Sixteen => {
            for &v in img.data() {
                out.extend_from_slice(&((v * scale).round() as u16).to_be_bytes());
            }
        }
    }
    out
}
