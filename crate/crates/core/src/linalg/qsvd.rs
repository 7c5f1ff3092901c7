use super::adjoint::{complex_adjoint, quaternion_column};
use super::matrix::{inner, project_out, vec_norm};
use super::QuaternionMatrix;
use crate::error::{Error, Result};
use crate::kernel::{complex_thin_svd, numerical_rank};
use crate::quaternion::Quaternion;

/// Reduced quaternion SVD `Q = U Σ Vᴴ` truncated to numerical rank.
#[derive(Debug, Clone)]
pub struct Qsvd {
    /// `M×r`, orthonormal columns.
    pub u: QuaternionMatrix,
    /// Descending, strictly positive.
    pub sigma: Vec<f64>,
    /// `N×r`, orthonormal columns.
    pub v: QuaternionMatrix,
    /// Singular values of the complex adjoint, before pairing.
    pub adjoint_sigma: Vec<f64>,
}

impl Qsvd {
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    pub fn reconstruct(&self) -> QuaternionMatrix {
        let us = self.u.scale_columns(&self.sigma);
        us.matmul(&self.v.conj_transpose())
            .expect("qsvd factors have matching inner dimension")
    }

    /// Keeps the leading `r` triplets.
    pub fn truncate(&self, r: usize) -> Self {
        let r = r.min(self.rank());
        Self {
            u: self.u.column_range(0, r),
            sigma: self.sigma[..r].to_vec(),
            v: self.v.column_range(0, r),
            adjoint_sigma: self.adjoint_sigma.clone(),
        }
    }

    /// Minimum-norm least-squares solution `V Σ⁻¹ Uᴴ b`.
    pub fn solve(&self, b: &[Quaternion]) -> Result<Vec<Quaternion>> {
        if b.len() != self.u.rows() {
            return Err(Error::ShapeMismatch {
                op: "qsvd solve",
                left: self.u.shape(),
                right: (b.len(), 1),
            });
        }
        let coef: Vec<Quaternion> = (0..self.rank())
            .map(|k| {
                let uk = self.u.column(k);
                inner(&uk, b) / self.sigma[k]
            })
            .collect();
        Ok((0..self.v.rows())
            .map(|i| (0..self.rank()).map(|k| self.v[(i, k)] * coef[k]).sum())
            .collect())
    }
}

/// Quaternion SVD through the SVD of the complex adjoint.
///
/// The singular values of `χ_Q` come in equal pairs and each pair spans a
/// single quaternion direction. Columns of the complex factors are visited in
/// order and mapped to quaternion vectors `x₁ − x̄₂·j`; a column is kept when it
/// is not already in the quaternion span of the kept ones. For distinct
/// singular values this keeps exactly the odd columns. The same right
/// coefficients are applied to the paired `V` column so `Q v = u σ` holds for
/// every kept triplet, including repeated singular values.
pub fn qsvd(q: &QuaternionMatrix) -> Result<Qsvd> {
    let (m, n) = q.shape();
    let chi = complex_adjoint(q);
    let svd = complex_thin_svd(chi.as_mat())?;
    let numerical = numerical_rank(&svd.s, m, n);
    let target = numerical.div_ceil(2).min(m.min(n));

    let mut us: Vec<Vec<Quaternion>> = Vec::with_capacity(target);
    let mut vs: Vec<Vec<Quaternion>> = Vec::with_capacity(target);
    let mut sigma = Vec::with_capacity(target);
    for c in 0..numerical {
        if us.len() == target {
            break;
        }
        let mut u = quaternion_column(svd.u.col(c));
        let mut v = quaternion_column(svd.v.col(c));
        for _ in 0..2 {
            let coef = project_out(&us, &mut u);
            for (b, k) in vs.iter().zip(&coef) {
                for (vi, &bi) in v.iter_mut().zip(b) {
                    *vi -= bi * *k;
                }
            }
        }
        let norm = vec_norm(&u);
        if norm < 0.5 {
            continue;
        }
        u.iter_mut().for_each(|x| *x = *x / norm);
        v.iter_mut().for_each(|x| *x = *x / norm);
        us.push(u);
        vs.push(v);
        sigma.push(svd.s[c]);
    }

    let u = if us.is_empty() {
        QuaternionMatrix::zeros(m, 0)
    } else {
        QuaternionMatrix::from_columns(&us)?
    };
    let v = if vs.is_empty() {
        QuaternionMatrix::zeros(n, 0)
    } else {
        QuaternionMatrix::from_columns(&vs)?
    };
    Ok(Qsvd {
        u,
        sigma,
        v,
        adjoint_sigma: svd.s,
    })
}

/// Moore–Penrose pseudoinverse `V Σ⁻¹ Uᴴ`.
pub fn pseudoinverse(q: &QuaternionMatrix) -> Result<QuaternionMatrix> {
    let svd = qsvd(q)?;
    if svd.rank() == 0 {
        return Ok(QuaternionMatrix::zeros(q.cols(), q.rows()));
    }
    let inv: Vec<f64> = svd.sigma.iter().map(|s| 1.0 / s).collect();
    svd.v.scale_columns(&inv).matmul(&svd.u.conj_transpose())
}

#[cfg(test)]
mod tests {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    use super::*;
    use crate::linalg::test_util::{random_matrix, unitarity_defect};

    #[test]
    fn scalar_i() {
        let q = QuaternionMatrix::new(1, 1, vec![Quaternion::I]).unwrap();
        let s = qsvd(&q).unwrap();
        assert_eq!(s.rank(), 1);
        assert!((s.sigma[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn real_diagonal() {
        let q = QuaternionMatrix::from_real(2, 2, &[3.0, 0.0, 0.0, 4.0]).unwrap();
        let s = qsvd(&q).unwrap();
        assert!((s.sigma[0] - 4.0).abs() < 1e-14 && (s.sigma[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn zero_matrix_is_empty() {
        let s = qsvd(&QuaternionMatrix::zeros(3, 2)).unwrap();
        assert_eq!(s.rank(), 0);
        assert_eq!(s.u.shape(), (3, 0));
        assert_eq!(
            pseudoinverse(&QuaternionMatrix::zeros(3, 2)).unwrap(),
            QuaternionMatrix::zeros(2, 3)
        );
    }

    #[test]
    fn random_reconstruction_and_pairing() {
        let mut rng = StdRng::seed_from_u64(21);
        let q = random_matrix(&mut rng, 8, 5);
        let s = qsvd(&q).unwrap();
        assert_eq!(s.rank(), 5);
        let res = s.reconstruct().sub(&q).unwrap().frobenius_norm();
        assert!(res <= 1e-10 * q.frobenius_norm(), "residual {res}");
        assert!(unitarity_defect(&s.u) <= 1e-10);
        assert!(unitarity_defect(&s.v) <= 1e-10);
        for (k, pair) in s.adjoint_sigma.chunks(2).enumerate() {
            assert!((pair[0] - pair[1]).abs() <= 1e-10 * pair[0]);
            assert!((pair[0] - s.sigma[k]).abs() <= 1e-10 * pair[0]);
        }
        let fro2: f64 = s.sigma.iter().map(|x| x * x).sum();
        assert!((fro2 - q.frobenius_norm().powi(2)).abs() <= 1e-10 * fro2);
    }

    #[test]
    fn repeated_singular_values() {
        let q = QuaternionMatrix::identity(3);
        let s = qsvd(&q).unwrap();
        assert_eq!(s.rank(), 3);
        assert!(unitarity_defect(&s.u) <= 1e-12);
        assert!(s.reconstruct().max_abs_diff(&q) <= 1e-12);
    }

    #[test]
    fn rank_deficient_truncates() {
        let mut rng = StdRng::seed_from_u64(22);
        let a = random_matrix(&mut rng, 6, 2);
        let b = random_matrix(&mut rng, 2, 5);
        let q = a.matmul(&b).unwrap();
        let s = qsvd(&q).unwrap();
        assert_eq!(s.rank(), 2);
        assert!(s.reconstruct().sub(&q).unwrap().frobenius_norm() <= 1e-10 * q.frobenius_norm());
    }

    #[test]
    fn solve_matches_pseudoinverse() {
        let mut rng = StdRng::seed_from_u64(23);
        let q = random_matrix(&mut rng, 7, 3);
        let b: Vec<Quaternion> = random_matrix(&mut rng, 7, 1).column(0);
        let x = qsvd(&q).unwrap().solve(&b).unwrap();
        let oracle = pseudoinverse(&q).unwrap().mul_vec(&b).unwrap();
        for (a, o) in x.iter().zip(&oracle) {
            assert!(a.max_abs_diff(*o) < 1e-12);
        }
        assert!(qsvd(&q).unwrap().solve(&b[..3]).is_err());
    }

    #[test]
    fn pseudoinverse_cases() {
        let q = QuaternionMatrix::new(1, 1, vec![Quaternion::I]).unwrap();
        let p = pseudoinverse(&q).unwrap();
        assert!(p[(0, 0)].max_abs_diff(-Quaternion::I) < 1e-15);

        let r = QuaternionMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 3.0]).unwrap();
        let inv = QuaternionMatrix::from_real(2, 2, &[0.6, -0.2, -0.2, 0.4]).unwrap();
        assert!(pseudoinverse(&r).unwrap().max_abs_diff(&inv) < 1e-14);
    }

    #[test]
    fn moore_penrose_identities() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..5 {
            let (m, n) = (rng.random_range(1..8), rng.random_range(1..8));
            let q = random_matrix(&mut rng, m, n);
            let p = pseudoinverse(&q).unwrap();
            let scale = 1e-8 * q.frobenius_norm().max(1.0) * p.frobenius_norm().max(1.0);
            let qpq = q.matmul(&p).unwrap().matmul(&q).unwrap();
            assert!(qpq.sub(&q).unwrap().frobenius_norm() <= scale);
            let pqp = p.matmul(&q).unwrap().matmul(&p).unwrap();
            assert!(pqp.sub(&p).unwrap().frobenius_norm() <= scale);
            let qp = q.matmul(&p).unwrap();
            assert!(qp.sub(&qp.conj_transpose()).unwrap().frobenius_norm() <= scale);
            let pq = p.matmul(&q).unwrap();
            assert!(pq.sub(&pq.conj_transpose()).unwrap().frobenius_norm() <= scale);
        }
    }

    #[test]
    fn orthonormal_columns_pseudoinverse_is_adjoint() {
        let mut rng = StdRng::seed_from_u64(24);
        let u = qsvd(&random_matrix(&mut rng, 6, 3)).unwrap().u;
        let p = pseudoinverse(&u).unwrap();
        assert!(p.max_abs_diff(&u.conj_transpose()) <= 1e-10);
    }
}
