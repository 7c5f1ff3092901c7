use std::ops::{Index, IndexMut};

use faer::{Mat, MatRef};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

/// Dense row-major quaternion matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QuaternionMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DataLength {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Quaternion::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Quaternion::ONE
            } else {
                Quaternion::ZERO
            }
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Quaternion,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Row-major real entries embedded as real quaternions.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            values.iter().map(|&v| Quaternion::real(v)).collect(),
        )
    }

    pub fn from_diagonal(diag: &[Quaternion]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { Quaternion::ZERO })
    }

    /// Builds a matrix from equally long column vectors.
    pub fn from_columns(columns: &[Vec<Quaternion>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::ShapeMismatch {
                op: "from_columns",
                left: (rows, 1),
                right: (bad.len(), 1),
            });
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    /// `Q_a + Q_b·j` from its complex parts.
    pub(crate) fn from_parts(a: MatRef<'_, Complex64>, b: MatRef<'_, Complex64>) -> Self {
        Self::from_fn(a.nrows(), a.ncols(), |i, j| {
            Quaternion::from_parts(a[(i, j)], b[(i, j)])
        })
    }

    /// Splits into complex parts `(Q_a, Q_b)` with `Q = Q_a + Q_b·j`.
    pub(crate) fn to_parts(&self) -> (Mat<Complex64>, Mat<Complex64>) {
        let a = Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].parts().0);
        let b = Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].parts().1);
        (a, b)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Quaternion> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<Quaternion> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[Quaternion] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Contiguous block of columns `start..end`.
    pub fn column_range(&self, start: usize, end: usize) -> Self {
        Self::from_fn(self.rows, end - start, |i, j| self[(i, start + j)])
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&q| f(q)).collect(),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// `sqrt(Σ |q|²)`.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.max_abs_diff(*b))
            .fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(Quaternion, Quaternion) -> Quaternion,
    ) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|q| q * s)
    }

    /// `self · diag(d)` for a real diagonal.
    pub fn scale_columns(&self, d: &[f64]) -> Self {
        assert_eq!(
            d.len(),
            self.cols,
            "diagonal length must match column count"
        );
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * d[j])
    }

    /// `self · diag(d)`; each entry is right-multiplied by its column's diagonal value.
    pub fn mul_diagonal(&self, d: &[Quaternion]) -> Self {
        assert_eq!(
            d.len(),
            self.cols,
            "diagonal length must match column count"
        );
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * d[j])
    }

    /// Quaternion matrix product.
    ///
    /// Evaluated on the complex parts:
    /// `(A_a + A_b j)(B_a + B_b j) = (A_a B_a − A_b B̄_b) + (A_a B_b + A_b B̄_a) j`,
    /// which equals the entrywise Hamilton-product sum.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        if self.rows == 0 || other.cols == 0 || self.cols == 0 {
            return Ok(Self::zeros(self.rows, other.cols));
        }
        let (aa, ab) = self.to_parts();
        let (ba, bb) = other.to_parts();
        let c_a = &aa * &ba - &ab * bb.conjugate();
        let c_b = &aa * &bb + &ab * ba.conjugate();
        Ok(Self::from_parts(c_a.as_ref(), c_b.as_ref()))
    }

    /// Matrix-vector product `self · v`.
    pub fn mul_vec(&self, v: &[Quaternion]) -> Result<Vec<Quaternion>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }
}

impl Index<(usize, usize)> for QuaternionMatrix {
    type Output = Quaternion;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QuaternionMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// `Σ conj(a_i) b_i`, the left-conjugated inner product.
pub(crate) fn inner(a: &[Quaternion], b: &[Quaternion]) -> Quaternion {
    a.iter().zip(b).map(|(&x, &y)| x.conj() * y).sum()
}

pub(crate) fn vec_norm(a: &[Quaternion]) -> f64 {
    a.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

/// Removes from `v` its components along the orthonormal columns in `basis`
/// (`v ← v − Σ bᵢ (bᵢᴴ v)`), returning the right coefficients used.
pub(crate) fn project_out(basis: &[Vec<Quaternion>], v: &mut [Quaternion]) -> Vec<Quaternion> {
    basis
        .iter()
        .map(|b| {
            let c = inner(b, v);
            for (vi, &bi) in v.iter_mut().zip(b) {
                *vi -= bi * c;
            }
            c
        })
        .collect()
}
