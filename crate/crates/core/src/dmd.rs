//! Exact DMD over real snapshot matrices, used as the baseline against
//! quaternion DMD. Color video is handled either per RGB channel or after a
//! grayscale conversion.

use faer::{Mat, MatRef};
use image::{Rgb, RgbImage};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{complex_pinv_apply, numerical_rank, real_eigen, real_thin_svd};
use crate::video::FrameStack;
use crate::Rank;

/// Luma weights used for the grayscale baseline.
pub const GRAY_WEIGHTS: [f64; 3] = [0.2989, 0.5870, 0.1140];

/// Eigenvalues smaller than this in modulus have no usable logarithm.
pub const LOG_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct RealDmdModel {
    /// `n×r` DMD modes `Φ`.
    pub modes: Mat<Complex64>,
    /// Discrete-time eigenvalues `λ`.
    pub eigenvalues: Vec<Complex64>,
    /// Continuous-time frequencies `ω = ln(λ)/Δt`.
    pub omegas: Vec<Complex64>,
    /// Initial amplitudes `b = Φ⁺ x₁`.
    pub amplitudes: Vec<Complex64>,
    pub dt: f64,
    pub rank: usize,
}

impl RealDmdModel {
    /// Index of the mode with the smallest `|ω|`; ties go to the larger `|b|`.
    pub fn background_index(&self) -> usize {
        (0..self.rank)
            .min_by(|&a, &b| {
                self.omegas[a]
                    .norm()
                    .total_cmp(&self.omegas[b].norm())
                    .then(
                        self.amplitudes[b]
                            .norm()
                            .total_cmp(&self.amplitudes[a].norm()),
                    )
            })
            .unwrap_or(0)
    }

    pub fn omega_magnitudes(&self) -> Vec<f64> {
        self.omegas.iter().map(|w| w.norm()).collect()
    }

    /// Real part of `φ_s b_s e^{ω_s t}`.
    pub fn mode_term(&self, s: usize, t: f64) -> Vec<f64> {
        let coef = self.amplitudes[s] * (self.omegas[s] * t).exp();
        (0..self.modes.nrows())
            .map(|i| (self.modes[(i, s)] * coef).re)
            .collect()
    }
}

/// Splits an `n×m` snapshot matrix into `X = [x₁ … x_{m−1}]`, `Y = [x₂ … x_m]`.
pub fn snapshot_pairs(data: MatRef<'_, f64>) -> Result<(Mat<f64>, Mat<f64>)> {
    let m = data.ncols();
    if m < 2 {
        return Err(Error::InsufficientData { frames: m });
    }
    let x = data.subcols(0, m - 1).to_owned();
    let y = data.subcols(1, m - 1).to_owned();
    Ok((x, y))
}

/// Exact DMD of the best-fit operator `A ≈ Y X⁺`.
///
/// Reduced SVD `X = U Σ Vᵀ`, projected operator `Ã = Uᵀ Y V Σ⁻¹`, its
/// eigendecomposition `Ã W = W Λ`, modes `Φ = Y V Σ⁻¹ W`, amplitudes
/// `b = Φ⁺ x₁`, and frequencies `ω = ln(λ)/Δt`.
pub fn exact_dmd(
    x: MatRef<'_, f64>,
    y: MatRef<'_, f64>,
    rank: Rank,
    dt: f64,
) -> Result<RealDmdModel> {
    if x.nrows() != y.nrows() || x.ncols() != y.ncols() {
        return Err(Error::ShapeMismatch {
            op: "exact_dmd",
            left: (x.nrows(), x.ncols()),
            right: (y.nrows(), y.ncols()),
        });
    }
    if x.ncols() == 0 {
        return Err(Error::InsufficientData {
            frames: x.ncols() + 1,
        });
    }
    let svd = real_thin_svd(x)?;
    let numerical = numerical_rank(&svd.s, x.nrows(), x.ncols());
    let r = rank.resolve(x.ncols(), numerical)?;
    if r == 0 {
        return Err(Error::RankExceeded {
            requested: 0,
            numerical,
        });
    }
    let u = svd.u.subcols(0, r);
    let v = svd.v.subcols(0, r);
    let mut yv = y * v;
    for k in 0..r {
        let inv = 1.0 / svd.s[k];
        for i in 0..yv.nrows() {
            yv[(i, k)] *= inv;
        }
    }
    let a_tilde = u.transpose() * &yv;
    let (eigenvalues, w) = real_eigen(a_tilde.as_ref())?;

    let yv_c = Mat::<Complex64>::from_fn(yv.nrows(), r, |i, j| Complex64::new(yv[(i, j)], 0.0));
    let modes = &yv_c * &w;

    let x1: Vec<Complex64> = (0..x.nrows())
        .map(|i| Complex64::new(x[(i, 0)], 0.0))
        .collect();
    let amplitudes = complex_pinv_apply(modes.as_ref(), &x1)?;

    let omegas = eigenvalues
        .iter()
        .enumerate()
        .map(|(index, lambda)| {
            let modulus = lambda.norm();
            if modulus < LOG_FLOOR {
                return Err(Error::LogSingularity { index, modulus });
            }
            Ok(lambda.ln() / dt)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(RealDmdModel {
        modes,
        eigenvalues,
        omegas,
        amplitudes,
        dt,
        rank: r,
    })
}

/// `x(t) = Re Σ_s b_s φ_s e^{ω_s t}` for every requested time.
pub fn dmd_reconstruct(model: &RealDmdModel, times: &[f64]) -> Mat<f64> {
    let n = model.modes.nrows();
    let mut out = Mat::<f64>::zeros(n, times.len());
    for (c, &t) in times.iter().enumerate() {
        let coefs: Vec<Complex64> = (0..model.rank)
            .map(|s| model.amplitudes[s] * (model.omegas[s] * t).exp())
            .collect();
        for i in 0..n {
            let v: Complex64 = (0..model.rank)
                .map(|s| model.modes[(i, s)] * coefs[s])
                .sum();
            out[(i, c)] = v.re;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorMode {
    /// One DMD on BT.601 gray levels; the background is replicated to RGB.
    Grayscale,
    /// Independent DMDs on R, G and B.
    PerChannel,
}

/// Spectrum summary of one channel's fit.
#[derive(Debug, Clone)]
pub struct ChannelFit {
    pub rank: usize,
    pub background_index: usize,
    pub omega_magnitudes: Vec<f64>,
    pub eigenvalues: Vec<Complex64>,
    pub amplitude_magnitudes: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct DmdBackground {
    pub image: RgbImage,
    /// One entry in grayscale mode, three (R, G, B) in per-channel mode.
    pub channels: Vec<ChannelFit>,
}

fn channel_background(
    data: MatRef<'_, f64>,
    rank: Rank,
    dt: f64,
) -> Result<(Vec<f64>, ChannelFit)> {
    let (x, y) = snapshot_pairs(data)?;
    let model = exact_dmd(x.as_ref(), y.as_ref(), rank, dt)?;
    let p = model.background_index();
    let fit = ChannelFit {
        rank: model.rank,
        background_index: p,
        omega_magnitudes: model.omega_magnitudes(),
        eigenvalues: model.eigenvalues.clone(),
        amplitude_magnitudes: model.amplitudes.iter().map(|b| b.norm()).collect(),
    };
    Ok((model.mode_term(p, 0.0), fit))
}

#[inline]
fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Baseline background: the minimal-`|ω|` mode at `t = 0`, rendered as RGB.
pub fn dmd_on_video(frames: &FrameStack, mode: ColorMode, rank: Rank) -> Result<DmdBackground> {
    if frames.frame_count() < 2 {
        return Err(Error::InsufficientData {
            frames: frames.frame_count(),
        });
    }
    let (w, h) = (frames.width(), frames.height());
    let [r, g, b] = frames.channel_matrices();
    match mode {
        ColorMode::Grayscale => {
            let [wr, wg, wb] = GRAY_WEIGHTS;
            let gray = Mat::<f64>::from_fn(r.nrows(), r.ncols(), |i, j| {
                wr * r[(i, j)] + wg * g[(i, j)] + wb * b[(i, j)]
            });
            let (bg, fit) = channel_background(gray.as_ref(), rank, frames.dt())?;
            let image = RgbImage::from_fn(w, h, |x, y| {
                let v = to_u8(bg[(y * w + x) as usize]);
                Rgb([v, v, v])
            });
            Ok(DmdBackground {
                image,
                channels: vec![fit],
            })
        }
        ColorMode::PerChannel => {
            let mut planes = Vec::with_capacity(3);
            let mut channels = Vec::with_capacity(3);
            for ch in [&r, &g, &b] {
                let (bg, fit) = channel_background(ch.as_ref(), rank, frames.dt())?;
                planes.push(bg);
                channels.push(fit);
            }
            let image = RgbImage::from_fn(w, h, |x, y| {
                let p = (y * w + x) as usize;
                Rgb([
                    to_u8(planes[0][p]),
                    to_u8(planes[1][p]),
                    to_u8(planes[2][p]),
                ])
            });
            Ok(DmdBackground { image, channels })
        }
    }
}
