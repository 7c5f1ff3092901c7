use num_complex::Complex64;

use super::adjoint::{complex_adjoint, quaternion_column};
use super::matrix::{project_out, vec_norm};
use super::qsvd::qsvd;
use super::QuaternionMatrix;
use crate::error::{Error, Result};
use crate::kernel::complex_eigen;
use crate::quaternion::Quaternion;

/// Relative tolerance for matching conjugate eigenvalue pairs of `χ_Q`.
pub const PAIRING_TOLERANCE: f64 = 1e-7;

/// Smallest acceptable `σ_min / σ_max` of an eigenvector basis.
pub const DIAGONALIZABLE_RATIO: f64 = 1e-10;

/// Standard right eigenpairs `Q v_k = v_k λ_k`.
#[derive(Debug, Clone)]
pub struct QEigen {
    /// Complex representatives with `Im ≥ 0`; the `j, k` parts are zero.
    pub values: Vec<Quaternion>,
    /// Column `k` is a unit eigenvector for `values[k]`.
    pub vectors: QuaternionMatrix,
}

impl QEigen {
    pub fn values_complex(&self) -> Vec<Complex64> {
        self.values.iter().map(|q| q.parts().0).collect()
    }

    /// `max_k ‖Q v_k − v_k λ_k‖`.
    pub fn max_residual(&self, q: &QuaternionMatrix) -> f64 {
        let qv = q.matmul(&self.vectors).expect("square eigenvector basis");
        let vl = self.vectors.mul_diagonal(&self.values);
        (0..self.values.len())
            .map(|k| {
                let d: Vec<Quaternion> = qv
                    .column(k)
                    .iter()
                    .zip(vl.column(k))
                    .map(|(a, b)| *a - b)
                    .collect();
                vec_norm(&d)
            })
            .fold(0.0, f64::max)
    }
}

/// `Q = Φ diag(Λ) Φ†`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub phi: QuaternionMatrix,
    pub values: Vec<Quaternion>,
    pub phi_pinv: QuaternionMatrix,
    /// `σ_max / σ_min` of `Φ`.
    pub condition: f64,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> QuaternionMatrix {
        self.phi
            .mul_diagonal(&self.values)
            .matmul(&self.phi_pinv)
            .expect("square factors")
    }
}

/// Standard eigenvalues and eigenvectors from the complex adjoint.
///
/// The `2M` eigenvalues of `χ_Q` are matched into conjugate pairs; each pair
/// contributes its member with non-negative imaginary part and that member's
/// eigenvector `(x₁; x₂)` mapped to `x₁ − x̄₂·j`. For (near) real eigenvalues
/// of higher multiplicity the eigenvectors of the whole cluster are pooled and
/// the most quaternion-independent ones are kept. Eigenvectors are scaled to
/// unit norm with the largest entry rotated onto the positive real axis (real
/// eigenvalue) or its complex part made real positive (non-real eigenvalue,
/// which only admits complex phases).
pub fn standard_eigen(q: &QuaternionMatrix) -> Result<QEigen> {
    if !q.is_square() {
        return Err(Error::NotSquare {
            rows: q.rows(),
            cols: q.cols(),
        });
    }
    let m = q.rows();
    if m == 0 {
        return Ok(QEigen {
            values: Vec::new(),
            vectors: QuaternionMatrix::zeros(0, 0),
        });
    }
    let fro = q.frobenius_norm().max(f64::MIN_POSITIVE);
    let tol = PAIRING_TOLERANCE * fro;
    let real_tol = 1e3 * f64::EPSILON * fro;

    let chi = complex_adjoint(q);
    let (vals, vecs) = complex_eigen(chi.as_mat())?;
    let pairs = pair_conjugates(&vals, tol)?;

    let candidate = |idx: usize| -> (Vec<Quaternion>, Complex64) {
        let mut v = quaternion_column(vecs.col(idx));
        let mut lambda = vals[idx];
        if lambda.im < 0.0 {
            // Q (v j) = (v j) λ̄
            v.iter_mut().for_each(|x| *x *= Quaternion::J);
            lambda = lambda.conj();
        }
        let n = vec_norm(&v);
        v.iter_mut().for_each(|x| *x = *x / n);
        (v, lambda)
    };

    let mut chosen: Vec<Option<(Vec<Quaternion>, Complex64)>> = vec![None; pairs.len()];

    // Clusters of (near) real eigenvalues with multiplicity > 1.
    let mut real_pairs: Vec<usize> = (0..pairs.len())
        .filter(|&p| vals[pairs[p].0].im.abs() <= tol)
        .collect();
    real_pairs.sort_by(|&a, &b| vals[pairs[a].0].re.total_cmp(&vals[pairs[b].0].re));
    let mut start = 0;
    while start < real_pairs.len() {
        let mut end = start + 1;
        while end < real_pairs.len()
            && vals[pairs[real_pairs[end]].0].re - vals[pairs[real_pairs[end - 1]].0].re <= tol
        {
            end += 1;
        }
        if end - start > 1 {
            let group = &real_pairs[start..end];
            let pool: Vec<_> = group
                .iter()
                .flat_map(|&p| [pairs[p].0, pairs[p].1])
                .map(candidate)
                .collect();
            for (slot, pick) in group.iter().zip(select_independent(&pool, group.len())) {
                chosen[*slot] = Some(pool[pick].clone());
            }
        }
        start = end;
    }

    let mut values = Vec::with_capacity(m);
    let mut columns = Vec::with_capacity(m);
    for (p, &(rep, _)) in pairs.iter().enumerate() {
        let (mut v, mut lambda) = chosen[p].take().unwrap_or_else(|| candidate(rep));
        if lambda.im.abs() <= real_tol {
            lambda.im = 0.0;
        }
        canonical_phase(&mut v, lambda.im == 0.0);
        values.push(Quaternion::from_complex(lambda));
        columns.push(v);
    }
    Ok(QEigen {
        values,
        vectors: QuaternionMatrix::from_columns(&columns)?,
    })
}

/// Greedy nearest-conjugate matching over eigenvalues sorted by `(re, im)`.
/// Returns `(representative, partner)` index pairs, the representative being
/// the member with the larger imaginary part.
fn pair_conjugates(vals: &[Complex64], tol: f64) -> Result<Vec<(usize, usize)>> {
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| {
        vals[a]
            .re
            .total_cmp(&vals[b].re)
            .then(vals[a].im.total_cmp(&vals[b].im))
    });
    let mut used = vec![false; vals.len()];
    let mut pairs = Vec::with_capacity(vals.len() / 2);
    for &i in &order {
        if used[i] {
            continue;
        }
        used[i] = true;
        let target = vals[i].conj();
        let best = order
            .iter()
            .copied()
            .filter(|&j| !used[j])
            .map(|j| (j, (vals[j] - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((j, d)) if d <= tol => {
                used[j] = true;
                if vals[j].im > vals[i].im {
                    pairs.push((j, i));
                } else {
                    pairs.push((i, j));
                }
            }
            _ => {
                return Err(Error::EigenPairing {
                    re: vals[i].re,
                    im: vals[i].im,
                })
            }
        }
    }
    Ok(pairs)
}

/// Picks `count` candidates, each time the one with the largest component
/// outside the quaternion span of those already picked.
fn select_independent(pool: &[(Vec<Quaternion>, Complex64)], count: usize) -> Vec<usize> {
    let mut basis: Vec<Vec<Quaternion>> = Vec::with_capacity(count);
    let mut picked = Vec::with_capacity(count);
    for _ in 0..count {
        let mut best: Option<(usize, f64, Vec<Quaternion>)> = None;
        for (idx, (v, _)) in pool.iter().enumerate() {
            if picked.contains(&idx) {
                continue;
            }
            let mut r = v.clone();
            project_out(&basis, &mut r);
            project_out(&basis, &mut r);
            let n = vec_norm(&r);
            if best.as_ref().is_none_or(|b| n > b.1) {
                best = Some((idx, n, r));
            }
        }
        let Some((idx, n, mut r)) = best else { break };
        if n > 0.0 {
            r.iter_mut().for_each(|x| *x = *x / n);
            basis.push(r);
        }
        picked.push(idx);
    }
    picked
}

fn canonical_phase(v: &mut [Quaternion], real_eigenvalue: bool) {
    let Some((_, lead)) = v
        .iter()
        .enumerate()
        .map(|(i, q)| (i, q.norm()))
        .fold(None::<(usize, f64)>, |best, (i, n)| match best {
            Some((_, bn)) if bn >= n => best,
            _ => Some((i, n)),
        })
        .map(|(i, _)| (i, v[i]))
    else {
        return;
    };
    let norm = lead.norm();
    if norm == 0.0 {
        return;
    }
    let rot = if real_eigenvalue {
        lead.conj() / norm
    } else {
        let (a, b) = lead.parts();
        if a.norm() > 1e-14 * norm {
            Quaternion::from_complex(a.conj() / a.norm())
        } else {
            Quaternion::from_complex(b / b.norm())
        }
    };
    v.iter_mut().for_each(|x| *x *= rot);
}

/// `Q = Φ diag(Λ) Φ†` from the standard eigenpairs; rejects eigenbases whose
/// smallest singular value falls below `1e-10` of the largest.
pub fn spectral_decomposition(q: &QuaternionMatrix) -> Result<SpectralDecomposition> {
    let eig = standard_eigen(q)?;
    let m = q.rows();
    if m == 0 {
        return Ok(SpectralDecomposition {
            phi: eig.vectors,
            values: eig.values,
            phi_pinv: QuaternionMatrix::zeros(0, 0),
            condition: 1.0,
        });
    }
    let svd = qsvd(&eig.vectors)?;
    let condition = if svd.rank() < m {
        f64::INFINITY
    } else {
        svd.sigma[0] / svd.sigma[m - 1]
    };
    if condition.is_nan() || condition * DIAGONALIZABLE_RATIO >= 1.0 {
        return Err(Error::NonDiagonalizable { condition });
    }
    let inv: Vec<f64> = svd.sigma.iter().map(|s| 1.0 / s).collect();
    let phi_pinv = svd.v.scale_columns(&inv).matmul(&svd.u.conj_transpose())?;
    Ok(SpectralDecomposition {
        phi: eig.vectors,
        values: eig.values,
        phi_pinv,
        condition,
    })
}
