use faer::{Mat, MatRef};
use num_complex::Complex64;

use super::QuaternionMatrix;
use crate::error::{Error, Result};

/// Complex representation `χ = [[Q_a, Q_b], [−Q̄_b, Q̄_a]]` of `Q = Q_a + Q_b·j`.
///
/// `χ` is a ring homomorphism: it preserves sums, products, and
/// conjugate transposes, and its spectrum carries the standard eigenvalues
/// of `Q` in conjugate pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexAdjoint {
    inner: Mat<Complex64>,
}

impl ComplexAdjoint {
    /// Wraps an arbitrary `2M×2N` complex matrix. Block symmetry is not checked
    /// here; [`from_adjoint`] validates it.
    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self {
            inner: Mat::from_fn(rows, cols, f),
        }
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn as_mat(&self) -> MatRef<'_, Complex64> {
        self.inner.as_ref()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::ShapeMismatch {
                op: "adjoint matmul",
                left: (self.rows(), self.cols()),
                right: (other.rows(), other.cols()),
            });
        }
        Ok(Self {
            inner: &self.inner * &other.inner,
        })
    }

    /// Largest deviation from the `[[A, B], [−B̄, Ā]]` pattern.
    pub fn symmetry_defect(&self) -> f64 {
        if !self.rows().is_multiple_of(2) || !self.cols().is_multiple_of(2) {
            return f64::INFINITY;
        }
        let (m, n) = (self.rows() / 2, self.cols() / 2);
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..n {
                let a = self.inner[(i, j)];
                let b = self.inner[(i, j + n)];
                worst = worst
                    .max((self.inner[(i + m, j)] + b.conj()).norm())
                    .max((self.inner[(i + m, j + n)] - a.conj()).norm());
            }
        }
        worst
    }
}

pub fn complex_adjoint(q: &QuaternionMatrix) -> ComplexAdjoint {
    let (m, n) = q.shape();
    let inner = Mat::from_fn(2 * m, 2 * n, |i, j| {
        let (a, b) = q[(i % m, j % n)].parts();
        match (i < m, j < n) {
            (true, true) => a,
            (true, false) => b,
            (false, true) => -b.conj(),
            (false, false) => a.conj(),
        }
    });
    ComplexAdjoint { inner }
}

/// Inverse of [`complex_adjoint`]; rejects matrices whose lower blocks
/// deviate from the required pattern by more than `1e-10` (relative to the
/// largest entry when that exceeds one).
pub fn from_adjoint(chi: &ComplexAdjoint) -> Result<QuaternionMatrix> {
    let deviation = chi.symmetry_defect();
    let scale = chi.inner.norm_max().max(1.0);
    if deviation.is_nan() || deviation > 1e-10 * scale {
        return Err(Error::MalformedAdjoint { deviation });
    }
    let (m, n) = (chi.rows() / 2, chi.cols() / 2);
    let a = chi.inner.as_ref().submatrix(0, 0, m, n);
    let b = chi.inner.as_ref().submatrix(0, n, m, n);
    Ok(QuaternionMatrix::from_parts(a, b))
}

/// Quaternion vector `x₁ − x̄₂·j` carried by a `2M` complex column `(x₁; x₂)`.
pub(crate) fn quaternion_column(col: faer::ColRef<'_, Complex64>) -> Vec<crate::Quaternion> {
    let m = col.nrows() / 2;
    (0..m)
        .map(|i| crate::Quaternion::from_parts(col[i], -col[i + m].conj()))
        .collect()
}
