//! Thin wrappers over the dense complex/real factorizations provided by
//! `faer`. Everything quaternion-specific is built on top of these.

use faer::{Mat, MatRef};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) struct ThinSvd<T> {
    pub u: Mat<T>,
    pub s: Vec<f64>,
    pub v: Mat<T>,
}

pub(crate) fn complex_thin_svd(a: MatRef<'_, Complex64>) -> Result<ThinSvd<Complex64>> {
    let k = a.nrows().min(a.ncols());
    if k == 0 {
        return Ok(ThinSvd {
            u: Mat::zeros(a.nrows(), 0),
            s: Vec::new(),
            v: Mat::zeros(a.ncols(), 0),
        });
    }
    let svd = a
        .thin_svd()
        .map_err(|e| Error::Kernel(format!("complex svd: {e:?}")))?;
    let s = svd.S().column_vector().iter().map(|c| c.re).collect();
    Ok(ThinSvd {
        u: svd.U().to_owned(),
        s,
        v: svd.V().to_owned(),
    })
}

pub(crate) fn real_thin_svd(a: MatRef<'_, f64>) -> Result<ThinSvd<f64>> {
    let k = a.nrows().min(a.ncols());
    if k == 0 {
        return Ok(ThinSvd {
            u: Mat::zeros(a.nrows(), 0),
            s: Vec::new(),
            v: Mat::zeros(a.ncols(), 0),
        });
    }
    let svd = a
        .thin_svd()
        .map_err(|e| Error::Kernel(format!("real svd: {e:?}")))?;
    let s = svd.S().column_vector().iter().copied().collect();
    Ok(ThinSvd {
        u: svd.U().to_owned(),
        s,
        v: svd.V().to_owned(),
    })
}

/// Eigenvalues and right eigenvectors of a general complex matrix.
pub(crate) fn complex_eigen(a: MatRef<'_, Complex64>) -> Result<(Vec<Complex64>, Mat<Complex64>)> {
    if a.nrows() == 0 {
        return Ok((Vec::new(), Mat::zeros(0, 0)));
    }
    let evd = a
        .eigen()
        .map_err(|e| Error::Kernel(format!("complex eigen: {e:?}")))?;
    let values = evd.S().column_vector().iter().copied().collect();
    Ok((values, evd.U().to_owned()))
}

/// Eigenvalues and right eigenvectors of a general real matrix.
pub(crate) fn real_eigen(a: MatRef<'_, f64>) -> Result<(Vec<Complex64>, Mat<Complex64>)> {
    if a.nrows() == 0 {
        return Ok((Vec::new(), Mat::zeros(0, 0)));
    }
    let evd = a
        .eigen()
        .map_err(|e| Error::Kernel(format!("real eigen: {e:?}")))?;
    let values = evd.S().column_vector().iter().copied().collect();
    Ok((values, evd.U().to_owned()))
}

/// Number of singular values above `max(rows, cols) · s₁ · ε`.
pub(crate) fn numerical_rank(s: &[f64], rows: usize, cols: usize) -> usize {
    let Some(&first) = s.first() else { return 0 };
    if first <= 0.0 {
        return 0;
    }
    let threshold = rows.max(cols) as f64 * first * f64::EPSILON;
    s.iter().take_while(|&&v| v > threshold).count()
}

/// Minimum-norm least-squares solution `A⁺ b` through the thin SVD.
pub(crate) fn complex_pinv_apply(
    a: MatRef<'_, Complex64>,
    b: &[Complex64],
) -> Result<Vec<Complex64>> {
    let svd = complex_thin_svd(a)?;
    let r = numerical_rank(&svd.s, a.nrows(), a.ncols());
    let mut out = vec![Complex64::new(0.0, 0.0); a.ncols()];
    for k in 0..r {
        let coef: Complex64 = (0..a.nrows())
            .map(|i| svd.u[(i, k)].conj() * b[i])
            .sum::<Complex64>()
            / svd.s[k];
        for (j, o) in out.iter_mut().enumerate() {
            *o += svd.v[(j, k)] * coef;
        }
    }
    Ok(out)
}
