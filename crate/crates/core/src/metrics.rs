//! Background-quality measures between a ground truth (GT) and a computed
//! background (CB): AGE, pEPs, pCEPs, MS-SSIM, PSNR and CQM.
//!
//! AGE, pEPs, pCEPs, PSNR and MS-SSIM work on BT.601 luma; CQM works on the
//! BT.601 YUV bands.

use image::RgbImage;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default error threshold for pEPs / pCEPs, in gray levels.
pub const DEFAULT_TAU: f64 = 20.0;
/// PSNR reported for identical inputs.
pub const PSNR_CAP: f64 = 100.0;
/// CQM luminance / chrominance weights.
pub const CQM_LUMA_WEIGHT: f64 = 0.9449;
pub const CQM_CHROMA_WEIGHT: f64 = 0.0551;

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;
pub const MSSSIM_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];

const PEAK: f64 = 255.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub age: f64,
    pub peps: f64,
    pub pceps: f64,
    pub msssim: f64,
    pub psnr: f64,
    pub cqm: f64,
    pub threshold_tau: f64,
}

/// A single-channel `f64` image, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl Plane {
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    fn from_rgb(img: &RgbImage, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        let (w, h) = img.dimensions();
        Self {
            width: w as usize,
            height: h as usize,
            data: img
                .pixels()
                .map(|p| f(p[0] as f64, p[1] as f64, p[2] as f64))
                .collect(),
        }
    }

    /// BT.601 luma `0.299 R + 0.587 G + 0.114 B`.
    pub fn luma(img: &RgbImage) -> Self {
        Self::from_rgb(img, |r, g, b| 0.299 * r + 0.587 * g + 0.114 * b)
    }

    /// BT.601 `(Y, U, V)` bands.
    pub fn yuv(img: &RgbImage) -> [Self; 3] {
        [
            Self::luma(img),
            Self::from_rgb(img, |r, g, b| -0.14713 * r - 0.28886 * g + 0.436 * b),
            Self::from_rgb(img, |r, g, b| 0.615 * r - 0.51499 * g - 0.10001 * b),
        ]
    }

    #[inline]
    fn at(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }
}

fn check_dims(gt: &RgbImage, cb: &RgbImage) -> Result<()> {
    if gt.dimensions() != cb.dimensions() {
        return Err(Error::DimensionMismatch {
            gt: gt.dimensions(),
            cb: cb.dimensions(),
        });
    }
    Ok(())
}

fn check_planes(a: &Plane, b: &Plane) -> Result<()> {
    if (a.width, a.height) != (b.width, b.height) {
        return Err(Error::DimensionMismatch {
            gt: (a.width as u32, a.height as u32),
            cb: (b.width as u32, b.height as u32),
        });
    }
    Ok(())
}

/// Average gray-level error.
pub fn age(gt: &RgbImage, cb: &RgbImage) -> Result<f64> {
    check_dims(gt, cb)?;
    age_planes(&Plane::luma(gt), &Plane::luma(cb))
}

pub fn age_planes(gt: &Plane, cb: &Plane) -> Result<f64> {
    check_planes(gt, cb)?;
    Ok(gt.zip_map(cb, |a, b| (a - b).abs()).mean())
}

fn error_mask(gt: &Plane, cb: &Plane, tau: f64) -> Vec<bool> {
    gt.data
        .iter()
        .zip(&cb.data)
        .map(|(a, b)| (a - b).abs() > tau)
        .collect()
}

/// Fraction of pixels whose luma differs by more than `tau`.
pub fn peps(gt: &RgbImage, cb: &RgbImage, tau: f64) -> Result<f64> {
    check_dims(gt, cb)?;
    peps_planes(&Plane::luma(gt), &Plane::luma(cb), tau)
}

pub fn peps_planes(gt: &Plane, cb: &Plane, tau: f64) -> Result<f64> {
    check_planes(gt, cb)?;
    let mask = error_mask(gt, cb, tau);
    Ok(mask.iter().filter(|&&e| e).count() as f64 / mask.len() as f64)
}

/// Fraction of error pixels whose in-image 4-neighbors are all error pixels.
pub fn pceps(gt: &RgbImage, cb: &RgbImage, tau: f64) -> Result<f64> {
    check_dims(gt, cb)?;
    pceps_planes(&Plane::luma(gt), &Plane::luma(cb), tau)
}

pub fn pceps_planes(gt: &Plane, cb: &Plane, tau: f64) -> Result<f64> {
    check_planes(gt, cb)?;
    let (w, h) = (gt.width, gt.height);
    let mask = error_mask(gt, cb, tau);
    let err = |x: usize, y: usize| mask[y * w + x];
    let mut clustered = 0usize;
    for y in 0..h {
        for x in 0..w {
            if !err(x, y) {
                continue;
            }
            let up = y == 0 || err(x, y - 1);
            let down = y + 1 == h || err(x, y + 1);
            let left = x == 0 || err(x - 1, y);
            let right = x + 1 == w || err(x + 1, y);
            if up && down && left && right {
                clustered += 1;
            }
        }
    }
    Ok(clustered as f64 / mask.len() as f64)
}

fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        return PSNR_CAP;
    }
    (10.0 * (PEAK * PEAK / mse).log10()).min(PSNR_CAP)
}

fn mse(a: &Plane, b: &Plane) -> f64 {
    a.zip_map(b, |x, y| (x - y) * (x - y)).mean()
}

/// Luma PSNR in dB with peak 255, capped at [`PSNR_CAP`].
pub fn psnr(gt: &RgbImage, cb: &RgbImage) -> Result<f64> {
    check_dims(gt, cb)?;
    psnr_planes(&Plane::luma(gt), &Plane::luma(cb))
}

pub fn psnr_planes(gt: &Plane, cb: &Plane) -> Result<f64> {
    check_planes(gt, cb)?;
    Ok(psnr_from_mse(mse(gt, cb)))
}

/// Color quality measure: luma PSNR and mean chroma PSNR, weighted.
pub fn cqm(gt: &RgbImage, cb: &RgbImage) -> Result<f64> {
    check_dims(gt, cb)?;
    let [gy, gu, gv] = Plane::yuv(gt);
    let [cy, cu, cv] = Plane::yuv(cb);
    let (py, pu, pv) = (
        psnr_from_mse(mse(&gy, &cy)),
        psnr_from_mse(mse(&gu, &cu)),
        psnr_from_mse(mse(&gv, &cv)),
    );
    Ok(py * CQM_LUMA_WEIGHT + (pu + pv) / 2.0 * CQM_CHROMA_WEIGHT)
}

fn gaussian_window() -> [f64; SSIM_WINDOW] {
    let mut g = [0.0; SSIM_WINDOW];
    let c = (SSIM_WINDOW / 2) as f64;
    for (k, v) in g.iter_mut().enumerate() {
        let d = k as f64 - c;
        *v = (-(d * d) / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
    }
    let s: f64 = g.iter().sum();
    g.iter_mut().for_each(|v| *v /= s);
    g
}

/// Separable "valid" Gaussian filtering.
fn filter_valid(p: &Plane, g: &[f64; SSIM_WINDOW]) -> Plane {
    let ow = p.width + 1 - SSIM_WINDOW;
    let oh = p.height + 1 - SSIM_WINDOW;
    let horiz = Plane::from_fn(ow, p.height, |x, y| {
        (0..SSIM_WINDOW).map(|k| g[k] * p.at(x + k, y)).sum()
    });
    Plane::from_fn(ow, oh, |x, y| {
        (0..SSIM_WINDOW).map(|k| g[k] * horiz.at(x, y + k)).sum()
    })
}

/// Mean SSIM and mean contrast-structure term at one scale.
fn ssim_terms(a: &Plane, b: &Plane, g: &[f64; SSIM_WINDOW]) -> (f64, f64) {
    let c1 = (SSIM_K1 * PEAK).powi(2);
    let c2 = (SSIM_K2 * PEAK).powi(2);
    let mu_a = filter_valid(a, g);
    let mu_b = filter_valid(b, g);
    let aa = filter_valid(&a.zip_map(a, |x, y| x * y), g);
    let bb = filter_valid(&b.zip_map(b, |x, y| x * y), g);
    let ab = filter_valid(&a.zip_map(b, |x, y| x * y), g);
    let n = mu_a.data.len() as f64;
    let (mut ssim, mut cs) = (0.0, 0.0);
    for i in 0..mu_a.data.len() {
        let (ma, mb) = (mu_a.data[i], mu_b.data[i]);
        let va = aa.data[i] - ma * ma;
        let vb = bb.data[i] - mb * mb;
        let cov = ab.data[i] - ma * mb;
        let cs_i = (2.0 * cov + c2) / (va + vb + c2);
        let l_i = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
        ssim += l_i * cs_i;
        cs += cs_i;
    }
    (ssim / n, cs / n)
}

/// 2×2 average then decimate; odd trailing rows/columns are dropped.
fn halve(p: &Plane) -> Plane {
    Plane::from_fn(p.width / 2, p.height / 2, |x, y| {
        (p.at(2 * x, 2 * y)
            + p.at(2 * x + 1, 2 * y)
            + p.at(2 * x, 2 * y + 1)
            + p.at(2 * x + 1, 2 * y + 1))
            / 4.0
    })
}

/// Number of dyadic scales (at most 5) whose images still fit the window.
pub fn msssim_scales(width: usize, height: usize) -> usize {
    let (mut w, mut h, mut scales) = (width, height, 0);
    while scales < MSSSIM_WEIGHTS.len() && w >= SSIM_WINDOW && h >= SSIM_WINDOW {
        scales += 1;
        w /= 2;
        h /= 2;
    }
    scales
}

/// Multiscale SSIM on luma.
///
/// Uses as many of the five standard scales as the image size allows, with
/// the scale weights renormalized over those used. Negative per-scale terms
/// are clamped to zero before exponentiation.
pub fn msssim(gt: &RgbImage, cb: &RgbImage) -> Result<f64> {
    check_dims(gt, cb)?;
    msssim_planes(&Plane::luma(gt), &Plane::luma(cb))
}

pub fn msssim_planes(gt: &Plane, cb: &Plane) -> Result<f64> {
    check_planes(gt, cb)?;
    let scales = msssim_scales(gt.width, gt.height);
    if scales == 0 {
        return Err(Error::ImageTooSmall {
            width: gt.width as u32,
            height: gt.height as u32,
            window: SSIM_WINDOW,
        });
    }
    let g = gaussian_window();
    let total: f64 = MSSSIM_WEIGHTS[..scales].iter().sum();
    let (mut a, mut b) = (gt.clone(), cb.clone());
    let mut value = 1.0;
    for (s, weight) in MSSSIM_WEIGHTS[..scales].iter().enumerate() {
        let (ssim, cs) = ssim_terms(&a, &b, &g);
        let term = if s + 1 == scales { ssim } else { cs };
        value *= term.max(0.0).powf(weight / total);
        if s + 1 < scales {
            a = halve(&a);
            b = halve(&b);
        }
    }
    Ok(value)
}

/// All six measures.
pub fn evaluate(gt: &RgbImage, cb: &RgbImage, tau: f64) -> Result<MetricsReport> {
    check_dims(gt, cb)?;
    let (lg, lc) = (Plane::luma(gt), Plane::luma(cb));
    Ok(MetricsReport {
        age: age_planes(&lg, &lc)?,
        peps: peps_planes(&lg, &lc, tau)?,
        pceps: pceps_planes(&lg, &lc, tau)?,
        msssim: msssim_planes(&lg, &lc)?,
        psnr: psnr_planes(&lg, &lc)?,
        cqm: cqm(gt, cb)?,
        threshold_tau: tau,
    })
}
