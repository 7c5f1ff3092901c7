//! Dense quaternion matrices and their decompositions.
//!
//! Everything spectral goes through the complex adjoint `χ_Q`: the QSVD is
//! read off the SVD of `χ_Q`, and the standard right eigenpairs are read off
//! its eigendecomposition.

mod adjoint;
mod eigen;
mod matrix;
mod qsvd;

pub use adjoint::{complex_adjoint, from_adjoint, ComplexAdjoint};
pub use eigen::{
    spectral_decomposition, standard_eigen, QEigen, SpectralDecomposition, DIAGONALIZABLE_RATIO,
    PAIRING_TOLERANCE,
};
pub use matrix::QuaternionMatrix;
pub use qsvd::{pseudoinverse, qsvd, Qsvd};

impl QuaternionMatrix {
    pub fn complex_adjoint(&self) -> ComplexAdjoint {
        complex_adjoint(self)
    }

    pub fn qsvd(&self) -> crate::Result<Qsvd> {
        qsvd(self)
    }

    pub fn pseudoinverse(&self) -> crate::Result<QuaternionMatrix> {
        pseudoinverse(self)
    }

    pub fn standard_eigen(&self) -> crate::Result<QEigen> {
        standard_eigen(self)
    }

    pub fn spectral_decomposition(&self) -> crate::Result<SpectralDecomposition> {
        spectral_decomposition(self)
    }
}

#[cfg(test)]
pub(crate) mod test_util {
    use rand::Rng;

    use super::QuaternionMatrix;
    use crate::Quaternion;

    pub fn random_quaternion(rng: &mut impl Rng) -> Quaternion {
        Quaternion::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
    }

    pub fn random_unit(rng: &mut impl Rng) -> Quaternion {
        loop {
            let q = random_quaternion(rng);
            let n = q.norm();
            if n > 1e-3 {
                return q / n;
            }
        }
    }

    pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> QuaternionMatrix {
        QuaternionMatrix::from_fn(rows, cols, |_, _| random_quaternion(rng))
    }

    /// `‖Uᴴ U − I‖_F`.
    pub fn unitarity_defect(u: &QuaternionMatrix) -> f64 {
        let g = u.conj_transpose().matmul(u).unwrap();
        g.sub(&QuaternionMatrix::identity(u.cols()))
            .unwrap()
            .frobenius_norm()
    }
}
