//! Frame-sequence ingestion and the pure-quaternion pixel encoding.
//!
//! A pixel `(R, G, B)` is stored as `0 + R·i + G·j + B·k`; frame `l` becomes
//! column `l` of an `n×m` quaternion matrix, pixels in row-major order.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use image::{Rgb, RgbImage};

use crate::error::{Error, Result};
use crate::linalg::QuaternionMatrix;
use crate::quaternion::Quaternion;

const IMAGE_EXTENSIONS: &[&str] = &["png", "jpg", "jpeg", "bmp"];

/// A color video as an `n×m` pure-quaternion matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameStack {
    width: u32,
    height: u32,
    dt: f64,
    data: QuaternionMatrix,
    source_ids: Vec<String>,
    indices: Vec<usize>,
}

impl FrameStack {
    /// Encodes equally sized frames. `source_ids` defaults to `frame_{l}`
    /// when empty.
    pub fn from_frames(frames: &[RgbImage], source_ids: Vec<String>) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::NoFrames("<memory>".into()))?;
        let (width, height) = first.dimensions();
        let n = (width * height) as usize;
        let mut data = QuaternionMatrix::zeros(n, frames.len());
        for (l, frame) in frames.iter().enumerate() {
            if frame.dimensions() != (width, height) {
                return Err(Error::MixedDimensions {
                    path: PathBuf::from(format!("frame {l}")),
                    expected: (width, height),
                    got: frame.dimensions(),
                });
            }
            for (p, px) in frame.pixels().enumerate() {
                data[(p, l)] = encode_pixel(*px);
            }
        }
        let source_ids = if source_ids.is_empty() {
            (0..frames.len()).map(|l| format!("frame_{l}")).collect()
        } else {
            source_ids
        };
        Ok(Self {
            width,
            height,
            dt: 1.0,
            data,
            source_ids,
            indices: (0..frames.len()).collect(),
        })
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.data.rows()
    }

    pub fn frame_count(&self) -> usize {
        self.data.cols()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn data(&self) -> &QuaternionMatrix {
        &self.data
    }

    pub fn source_ids(&self) -> &[String] {
        &self.source_ids
    }

    /// Positions of the frames in the originally listed sequence.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn frame(&self, l: usize) -> RgbImage {
        decode_column(self.width, self.height, &self.data.column(l))
            .expect("stack geometry matches its columns")
            .image
    }

    /// One real `n×m` matrix per color channel (R, G, B).
    pub fn channel_matrices(&self) -> [faer::Mat<f64>; 3] {
        let (n, m) = self.data.shape();
        let d = &self.data;
        [
            faer::Mat::from_fn(n, m, |i, j| d[(i, j)].x),
            faer::Mat::from_fn(n, m, |i, j| d[(i, j)].y),
            faer::Mat::from_fn(n, m, |i, j| d[(i, j)].z),
        ]
    }

    fn keep_columns(&self, start: usize, end: usize) -> Self {
        Self {
            width: self.width,
            height: self.height,
            dt: self.dt,
            data: self.data.column_range(start, end),
            source_ids: self.source_ids[start..end].to_vec(),
            indices: self.indices[start..end].to_vec(),
        }
    }
}

#[inline]
pub fn encode_pixel(px: Rgb<u8>) -> Quaternion {
    Quaternion::pure(px[0] as f64, px[1] as f64, px[2] as f64)
}

pub fn encode_frame(frame: &RgbImage) -> Vec<Quaternion> {
    frame.pixels().map(|px| encode_pixel(*px)).collect()
}

/// A decoded frame plus the largest `|scalar part|` that was discarded.
#[derive(Debug, Clone)]
pub struct DecodedFrame {
    pub image: RgbImage,
    pub scalar_max: f64,
}

#[inline]
fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Maps the `i, j, k` coefficients back to R, G, B, rounding half away from
/// zero and clamping to `[0, 255]`.
pub fn decode_column(width: u32, height: u32, column: &[Quaternion]) -> Result<DecodedFrame> {
    let expected = (width * height) as usize;
    if column.len() != expected {
        return Err(Error::ColumnLength {
            expected,
            got: column.len(),
        });
    }
    let mut scalar_max = 0.0f64;
    let image = RgbImage::from_fn(width, height, |x, y| {
        let q = column[(y * width + x) as usize];
        scalar_max = scalar_max.max(q.w.abs());
        Rgb([to_u8(q.x), to_u8(q.y), to_u8(q.z)])
    });
    Ok(DecodedFrame { image, scalar_max })
}

/// Which listed frames to load: inclusive `start..=end`, every `stride`-th.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameSelection {
    pub start: usize,
    pub end: Option<usize>,
    pub stride: usize,
}

impl Default for FrameSelection {
    fn default() -> Self {
        Self {
            start: 0,
            end: None,
            stride: 1,
        }
    }
}

impl FrameSelection {
    pub fn range(start: usize, end: usize) -> Self {
        Self {
            start,
            end: Some(end),
            stride: 1,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    fn apply<T: Clone>(&self, items: &[T]) -> Result<Vec<(usize, T)>> {
        if self.stride == 0 {
            return Err(Error::FrameSelection("stride must be at least 1".into()));
        }
        let end = self.end.unwrap_or(items.len().saturating_sub(1));
        if self.start > end || end >= items.len() {
            return Err(Error::FrameSelection(format!(
                "range {}..{} outside the {} available frames",
                self.start,
                end,
                items.len()
            )));
        }
        Ok((self.start..=end)
            .step_by(self.stride)
            .map(|i| (i, items[i].clone()))
            .collect())
    }
}

/// Parses `A..B` (both inclusive), `A..` or `..B`.
impl FromStr for FrameSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::FrameSelection(format!("expected A..B, got {s:?}"));
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let start = if a.trim().is_empty() {
            0
        } else {
            a.trim().parse().map_err(|_| bad())?
        };
        let end = if b.trim().is_empty() {
            None
        } else {
            Some(b.trim().parse().map_err(|_| bad())?)
        };
        Ok(Self {
            start,
            end,
            stride: 1,
        })
    }
}

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
}

/// Image files in a directory, or matching a glob pattern, in natural order.
pub fn list_frames(pattern: &str) -> Result<Vec<PathBuf>> {
    let path = Path::new(pattern);
    let mut files: Vec<PathBuf> = if path.is_dir() {
        std::fs::read_dir(path)
            .map_err(|e| Error::NoFrames(format!("{pattern}: {e}")))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && is_image(p))
            .collect()
    } else {
        glob::glob(pattern)
            .map_err(|e| Error::NoFrames(format!("{pattern}: {e}")))?
            .filter_map(|entry| entry.ok())
            .filter(|p| p.is_file() && is_image(p))
            .collect()
    };
    files.sort_by(|a, b| natord::compare(&a.to_string_lossy(), &b.to_string_lossy()));
    if files.is_empty() {
        return Err(Error::NoFrames(pattern.to_string()));
    }
    Ok(files)
}

pub fn load_image(path: &Path) -> Result<RgbImage> {
    let img = image::open(path).map_err(|source| Error::Decode {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(img.to_rgb8())
}

/// Lists, windows, decodes and encodes a frame sequence.
pub fn load_sequence(pattern: &str, selection: &FrameSelection) -> Result<FrameStack> {
    let files = list_frames(pattern)?;
    let chosen = selection.apply(&files)?;
    let mut frames = Vec::with_capacity(chosen.len());
    let mut expected = None;
    for (_, path) in &chosen {
        let img = load_image(path)?;
        match expected {
            None => expected = Some(img.dimensions()),
            Some(dims) if dims != img.dimensions() => {
                return Err(Error::MixedDimensions {
                    path: path.clone(),
                    expected: dims,
                    got: img.dimensions(),
                })
            }
            Some(_) => {}
        }
        frames.push(img);
    }
    let ids = chosen
        .iter()
        .map(|(_, p)| {
            p.file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string())
        })
        .collect();
    let mut stack = FrameStack::from_frames(&frames, ids)?;
    stack.indices = chosen.iter().map(|(i, _)| *i).collect();
    Ok(stack)
}

/// Block-averages every frame by `factor` per channel. Edge blocks average
/// whatever pixels they contain; results are rounded to whole gray levels.
pub fn downsample(stack: &FrameStack, factor: usize) -> Result<FrameStack> {
    if factor == 0 {
        return Err(Error::ZeroFactor);
    }
    if factor == 1 {
        return Ok(stack.clone());
    }
    let (w, h) = (stack.width as usize, stack.height as usize);
    let (nw, nh) = (w.div_ceil(factor), h.div_ceil(factor));
    let m = stack.frame_count();
    let mut data = QuaternionMatrix::zeros(nw * nh, m);
    for l in 0..m {
        for by in 0..nh {
            for bx in 0..nw {
                let mut acc = Quaternion::ZERO;
                let mut count = 0usize;
                for y in by * factor..((by + 1) * factor).min(h) {
                    for x in bx * factor..((bx + 1) * factor).min(w) {
                        acc += stack.data[(y * w + x, l)];
                        count += 1;
                    }
                }
                let mean = acc / count as f64;
                data[(by * nw + bx, l)] =
                    Quaternion::pure(mean.x.round(), mean.y.round(), mean.z.round());
            }
        }
    }
    Ok(FrameStack {
        width: nw as u32,
        height: nh as u32,
        dt: stack.dt,
        data,
        source_ids: stack.source_ids.clone(),
        indices: stack.indices.clone(),
    })
}

/// Same block averaging applied to a single image.
pub fn downsample_image(img: &RgbImage, factor: usize) -> Result<RgbImage> {
    let stack = FrameStack::from_frames(std::slice::from_ref(img), Vec::new())?;
    Ok(downsample(&stack, factor)?.frame(0))
}

fn max_frame_difference(stack: &FrameStack, a: usize, b: usize) -> f64 {
    (0..stack.pixel_count())
        .map(|p| stack.data[(p, a)].max_abs_diff(stack.data[(p, b)]))
        .fold(0.0, f64::max)
}

/// Drops leading and trailing frames that differ from their inner neighbor
/// by at most `tolerance` gray levels in every channel. Trailing frames go
/// first; at least two frames always remain.
pub fn trim_static_margins(stack: &FrameStack, tolerance: f64) -> FrameStack {
    let mut start = 0;
    let mut end = stack.frame_count();
    while end - start > 2 && max_frame_difference(stack, end - 1, end - 2) <= tolerance {
        end -= 1;
    }
    while end - start > 2 && max_frame_difference(stack, start, start + 1) <= tolerance {
        start += 1;
    }
    stack.keep_columns(start, end)
}
