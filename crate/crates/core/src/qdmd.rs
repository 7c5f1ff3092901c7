//! Quaternion dynamic mode decomposition.
//!
//! With snapshot matrices `Ẋ = [ẋ₁ … ẋ_{m−1}]` and `Ẏ = [ẋ₂ … ẋ_m]`:
//!
//! 1. reduced QSVD `Ẋ = U Σ Vᴴ`,
//! 2. projected operator `Q̃ = Uᴴ Ẏ V Σ⁻¹`,
//! 3. right spectral decomposition `Q̃ W = W Λ`,
//! 4. modes `Φ = Ẏ V Σ⁻¹ W`, amplitudes `b = Φ† ẋ₁`, frequencies `ω = ln(λ)/Δt`.
//!
//! A state at time `t` is `Σ_s φ_s · e^{ω_s t} · b_s`. Quaternion products do
//! not commute, so the factor order (mode, exponential, amplitude) is fixed.

use std::time::{Duration, Instant};

use image::RgbImage;

use crate::dmd::LOG_FLOOR;
use crate::error::{Error, Result};
use crate::linalg::{qsvd, spectral_decomposition, QuaternionMatrix};
use crate::quaternion::Quaternion;
use crate::video::{decode_column, FrameStack};
use crate::Rank;

#[derive(Debug, Clone)]
pub struct QdmdModel {
    /// `n×r` modes `Φ`.
    pub modes: QuaternionMatrix,
    /// Standard eigenvalues (complex, `Im ≥ 0`).
    pub eigenvalues: Vec<Quaternion>,
    /// `ω_v = ln(λ_v)/Δt`.
    pub omegas: Vec<Quaternion>,
    /// `b = Φ† ẋ₁`.
    pub amplitudes: Vec<Quaternion>,
    pub dt: f64,
    pub rank: usize,
    /// Numerical rank of `Ẋ` before any requested truncation.
    pub numerical_rank: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FitTimings {
    pub qsvd: Duration,
    pub eigen: Duration,
}

impl QdmdModel {
    pub fn omega_magnitudes(&self) -> Vec<f64> {
        self.omegas.iter().map(|w| w.norm()).collect()
    }

    pub fn amplitude_magnitudes(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|b| b.norm()).collect()
    }

    /// `argmin_s |ω_s|`, ties broken by the larger `|b_s|`.
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

    /// `e^{ω_s t} · b_s`.
    pub fn time_coefficient(&self, s: usize, t: f64) -> Quaternion {
        (self.omegas[s] * t).exp() * self.amplitudes[s]
    }

    /// `Σ_{s ∈ modes} φ_s · (e^{ω_s t} · b_s)` for every requested time.
    pub fn partial_reconstruct(&self, modes: &[usize], times: &[f64]) -> QuaternionMatrix {
        let phi = QuaternionMatrix::from_fn(self.modes.rows(), modes.len(), |i, k| {
            self.modes[(i, modes[k])]
        });
        let coef = QuaternionMatrix::from_fn(modes.len(), times.len(), |k, c| {
            self.time_coefficient(modes[k], times[c])
        });
        phi.matmul(&coef).expect("inner dimensions agree")
    }
}

/// Frame times `0, Δt, …, (m−1)Δt`.
pub fn frame_times(m: usize, dt: f64) -> Vec<f64> {
    (0..m).map(|l| l as f64 * dt).collect()
}

fn continuous_frequency(index: usize, lambda: Quaternion, dt: f64) -> Result<Quaternion> {
    let modulus = lambda.norm();
    if modulus < LOG_FLOOR {
        return Err(Error::LogSingularity { index, modulus });
    }
    let log = match lambda.ln() {
        Ok(l) => l,
        // standard eigenvalues live in the upper half plane, so a negative
        // real one takes the i axis: ln|λ| + iπ
        Err(Error::NonPrincipalLog { .. }) => {
            Quaternion::new(modulus.ln(), std::f64::consts::PI, 0.0, 0.0)
        }
        Err(e) => return Err(e),
    };
    Ok(log / dt)
}

pub fn qdmd_fit(
    x: &QuaternionMatrix,
    y: &QuaternionMatrix,
    rank: Rank,
    dt: f64,
) -> Result<QdmdModel> {
    qdmd_fit_timed(x, y, rank, dt).map(|(m, _)| m)
}

/// [`qdmd_fit`] that also reports the time spent in the QSVD and
/// eigendecomposition stages.
pub fn qdmd_fit_timed(
    x: &QuaternionMatrix,
    y: &QuaternionMatrix,
    rank: Rank,
    dt: f64,
) -> Result<(QdmdModel, FitTimings)> {
    if x.shape() != y.shape() {
        return Err(Error::ShapeMismatch {
            op: "qdmd_fit",
            left: x.shape(),
            right: y.shape(),
        });
    }
    if x.cols() == 0 {
        return Err(Error::InsufficientData { frames: 1 });
    }
    let mut timings = FitTimings::default();

    let start = Instant::now();
    let svd = qsvd(x)?;
    let numerical = svd.rank();
    let r = rank.resolve(x.cols(), numerical)?;
    if r == 0 {
        return Err(Error::RankExceeded {
            requested: 0,
            numerical,
        });
    }
    let svd = svd.truncate(r);
    let inv_sigma: Vec<f64> = svd.sigma.iter().map(|s| 1.0 / s).collect();
    let yv = y.matmul(&svd.v)?.scale_columns(&inv_sigma);
    let q_tilde = svd.u.conj_transpose().matmul(&yv)?;
    timings.qsvd = start.elapsed();

    let start = Instant::now();
    let spectral = spectral_decomposition(&q_tilde)?;
    let modes = yv.matmul(&spectral.phi)?;
    let amplitudes = qsvd(&modes)?.solve(&x.column(0))?;
    timings.eigen = start.elapsed();

    let omegas = spectral
        .values
        .iter()
        .enumerate()
        .map(|(i, &l)| continuous_frequency(i, l, dt))
        .collect::<Result<Vec<_>>>()?;

    Ok((
        QdmdModel {
            modes,
            eigenvalues: spectral.values,
            omegas,
            amplitudes,
            dt,
            rank: r,
            numerical_rank: numerical,
        },
        timings,
    ))
}

/// Background / foreground split of the reconstruction.
#[derive(Debug, Clone)]
pub struct Separation {
    /// `L = φ_p · e^{ω_p t} · b_p`.
    pub background: QuaternionMatrix,
    /// `S = Σ_{s≠p} φ_s · e^{ω_s t} · b_s`.
    pub foreground: QuaternionMatrix,
    pub background_index: usize,
    pub omega_magnitudes: Vec<f64>,
}

impl Separation {
    /// `L + S`.
    pub fn reconstruction(&self) -> QuaternionMatrix {
        self.background
            .add(&self.foreground)
            .expect("L and S share a shape")
    }
}

/// Splits the modes into the minimal-`|ω|` background term and the rest.
pub fn separate(model: &QdmdModel, times: &[f64]) -> Separation {
    let p = model.background_index();
    let rest: Vec<usize> = (0..model.rank).filter(|&s| s != p).collect();
    Separation {
        background: model.partial_reconstruct(&[p], times),
        foreground: model.partial_reconstruct(&rest, times),
        background_index: p,
        omega_magnitudes: model.omega_magnitudes(),
    }
}

/// Full reconstruction `Σ_s φ_s · e^{ω_s t} · b_s`, evaluated as background
/// term plus the remaining modes so that it coincides with
/// [`Separation::reconstruction`].
pub fn qdmd_reconstruct(model: &QdmdModel, times: &[f64]) -> QuaternionMatrix {
    separate(model, times).reconstruction()
}

#[derive(Debug, Clone)]
pub struct QdmdBackground {
    pub image: RgbImage,
    pub model: QdmdModel,
    pub separation: Separation,
    /// Largest `|scalar part|` dropped when decoding the background.
    pub background_scalar_max: f64,
    /// Frobenius norm of the scalar plane of the reconstruction.
    pub scalar_plane_norm: f64,
    pub reconstruction_norm: f64,
    pub fit_timings: FitTimings,
    pub reconstruct_time: Duration,
}

/// Fits Q-DMD to a frame stack and decodes the first column of the
/// background term as an RGB image.
pub fn qdmd_background(frames: &FrameStack, rank: Rank) -> Result<QdmdBackground> {
    let m = frames.frame_count();
    if m < 2 {
        return Err(Error::InsufficientData { frames: m });
    }
    let data = frames.data();
    let x = data.column_range(0, m - 1);
    let y = data.column_range(1, m);
    let (model, fit_timings) = qdmd_fit_timed(&x, &y, rank, frames.dt())?;

    let start = Instant::now();
    let separation = separate(&model, &frame_times(m, frames.dt()));
    let recon = separation.reconstruction();
    let scalar_plane_norm = recon
        .as_slice()
        .iter()
        .map(|q| q.w * q.w)
        .sum::<f64>()
        .sqrt();
    let reconstruction_norm = recon.frobenius_norm();
    let decoded = decode_column(
        frames.width(),
        frames.height(),
        &separation.background.column(0),
    )?;
    let reconstruct_time = start.elapsed();

    Ok(QdmdBackground {
        image: decoded.image,
        model,
        separation,
        background_scalar_max: decoded.scalar_max,
        scalar_plane_norm,
        reconstruction_norm,
        fit_timings,
        reconstruct_time,
    })
}
