//! Quaternion linear algebra and quaternion dynamic mode decomposition for
//! color video background modeling.
//!
//! Each RGB pixel is encoded as the pure quaternion `R·i + G·j + B·k`, a
//! video becomes a quaternion matrix with one column per frame, and the
//! background is read off the spectral mode of the best-fit quaternion
//! linear operator whose continuous frequency is closest to zero.
//!
//! Module map:
//!
//! - [`quaternion`]: quaternion scalars (Hamilton product, exp, log).
//! - [`linalg`]: quaternion matrices, complex adjoint, QSVD, standard
//!   eigendecomposition, spectral decomposition, pseudoinverse.
//! - [`dmd`]: real-valued exact DMD baseline, per channel or on grayscale.
//! - [`qdmd`]: quaternion DMD, reconstruction, background/foreground split.
//! - [`video`]: frame ingestion, pixel encoding/decoding, trimming, downsampling.
//! - [`metrics`]: AGE, pEPs, pCEPs, MS-SSIM, PSNR and CQM.
//! - [`synthetic`]: generated sequences with a known background.
//! - [`cli`]: the `extract` / `evaluate` / `inspect` pipeline behind the binary.

pub mod cli;
pub mod dmd;
mod error;
mod kernel;
pub mod linalg;
pub mod metrics;
pub mod qdmd;
pub mod quaternion;
pub mod synthetic;
pub mod video;

pub use error::{Error, Result};
pub use linalg::QuaternionMatrix;
pub use quaternion::Quaternion;

pub use faer;
pub use image;
pub use num_complex::Complex64;

/// How many modes a decomposition keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rank {
    /// `m − 1` (one less than the frame count), capped at the numerical rank
    /// of the snapshot matrix.
    #[default]
    Auto,
    /// Exactly this many; fails when it exceeds the numerical rank.
    Fixed(usize),
}

impl Rank {
    pub(crate) fn resolve(self, snapshots: usize, numerical: usize) -> Result<usize> {
        match self {
            Rank::Auto => Ok(snapshots.min(numerical)),
            Rank::Fixed(r) if r == 0 || r > numerical => Err(Error::RankExceeded {
                requested: r,
                numerical,
            }),
            Rank::Fixed(r) => Ok(r),
        }
    }
}
