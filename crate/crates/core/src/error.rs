use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// Variants are grouped by the stage that raises them so the command-line
/// front end can map each group onto its own exit code.
#[derive(Debug, Error)]
pub enum Error {
    // quaternion scalar domain
    #[error("{op}: zero quaternion is outside the domain")]
    ZeroQuaternion { op: &'static str },
    #[error("log of negative real quaternion {value} has no principal value")]
    NonPrincipalLog { value: f64 },

    // dense linear algebra
    #[error("{op}: shape mismatch ({}x{} vs {}x{})", .left.0, .left.1, .right.0, .right.1)]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("data length {len} does not match {rows}x{cols}")]
    DataLength {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("complex adjoint violates block symmetry (max deviation {deviation:e})")]
    MalformedAdjoint { deviation: f64 },
    #[error("eigenvalue {re}{im:+}i of the complex adjoint has no conjugate partner")]
    EigenPairing { re: f64, im: f64 },
    #[error("eigenvector basis is not invertible (condition estimate {condition:e})")]
    NonDiagonalizable { condition: f64 },
    #[error("dense kernel failed: {0}")]
    Kernel(String),

    // decomposition
    #[error("requested rank {requested} exceeds numerical rank {numerical}")]
    RankExceeded { requested: usize, numerical: usize },
    #[error("at least 2 snapshots are required, got {frames}")]
    InsufficientData { frames: usize },
    #[error("eigenvalue {index} has modulus {modulus:e}; its logarithm is singular")]
    LogSingularity { index: usize, modulus: f64 },

    // ingestion
    #[error("no image files match {0}")]
    NoFrames(String),
    #[error("frame {path} is {got:?}, expected {expected:?}")]
    MixedDimensions {
        path: PathBuf,
        expected: (u32, u32),
        got: (u32, u32),
    },
    #[error("cannot decode {path}: {source}")]
    Decode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
    #[error("invalid frame selection: {0}")]
    FrameSelection(String),
    #[error("downsample factor must be at least 1")]
    ZeroFactor,
    #[error("column has {got} entries, frame geometry needs {expected}")]
    ColumnLength { expected: usize, got: usize },

    // metrics
    #[error("image dimensions differ: {gt:?} vs {cb:?}")]
    DimensionMismatch { gt: (u32, u32), cb: (u32, u32) },
    #[error("image {width}x{height} is smaller than the {window}x{window} window")]
    ImageTooSmall {
        width: u32,
        height: u32,
        window: usize,
    },

    // orchestration
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot write {path}: {message}")]
    Output { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
