//! Dense complex Hermitian primitives shared by every other module.

use ndarray::{Array1, Array2};
use ndarray_linalg::{c64, Eigh, UPLO};

use crate::error::{MismatchError, Result};

/// Conjugate transpose.
pub fn adjoint(m: &Array2<c64>) -> Array2<c64> {
    let mut out = m.t().into_owned();
    out.mapv_inplace(|x| x.conj());
    out
}

/// Hilbert-Schmidt (Frobenius) norm.
pub fn hs_norm(m: &Array2<c64>) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise deviation from Hermiticity, |M - M†|_max.
pub fn hermiticity_residual(m: &Array2<c64>) -> f64 {
    let d = m.nrows();
    let mut r = 0.0f64;
    for i in 0..d {
        for j in i..d {
            r = r.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    r
}

pub fn inner(a: &Array1<c64>, b: &Array1<c64>) -> c64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn outer(a: &Array1<c64>, b: &Array1<c64>) -> Array2<c64> {
    let d = a.len();
    Array2::from_shape_fn((d, d), |(i, j)| a[i] * b[j].conj())
}

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted descending with
/// matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigenSystem {
    pub eigenvalues: Array1<f64>,
    /// Orthonormal eigenvectors as columns, column k paired with eigenvalues[k].
    pub eigenvectors: Array2<c64>,
}

/// Absolute-plus-relative tolerance used for Hermiticity checks.
pub fn herm_tol(m: &Array2<c64>) -> f64 {
    1e-12 * (1.0 + hs_norm(m))
}

/// Spectral decomposition of a Hermitian matrix. The input is symmetrized as
/// (M + M†)/2 when its Hermiticity residual is within tolerance and rejected
/// otherwise.
pub fn hermitian_eig(m: &Array2<c64>) -> Result<HermitianEigenSystem> {
    if m.nrows() != m.ncols() {
        return Err(MismatchError::DimensionMismatch {
            left: m.nrows(),
            right: m.ncols(),
        });
    }
    let residual = hermiticity_residual(m);
    if residual > herm_tol(m) {
        return Err(MismatchError::NonHermitianInput { residual });
    }
    let sym = (m + &adjoint(m)).mapv(|x| x * 0.5);
    let (vals, vecs) = sym
        .eigh(UPLO::Lower)
        .map_err(|_| MismatchError::NonHermitianInput { residual })?;
    // LAPACK returns ascending order; flip to descending. The backend hands
    // back conjugated eigenvector columns for complex input, so undo that.
    let d = vals.len();
    let eigenvalues = Array1::from_shape_fn(d, |i| vals[d - 1 - i]);
    let eigenvectors = Array2::from_shape_fn((d, d), |(i, j)| vecs[[i, d - 1 - j]].conj());
    Ok(HermitianEigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, descending.
pub fn hermitian_eigvals(m: &Array2<c64>) -> Result<Array1<f64>> {
    Ok(hermitian_eig(m)?.eigenvalues)
}

/// ½ Σ |d_k| over the eigenvalues of a − b.
pub fn trace_distance(a: &Array2<c64>, b: &Array2<c64>) -> Result<f64> {
    if a.nrows() != b.nrows() {
        return Err(MismatchError::DimensionMismatch {
            left: a.nrows(),
            right: b.nrows(),
        });
    }
    let diff = a - b;
    let vals = hermitian_eigvals(&diff)?;
    Ok(0.5 * vals.iter().map(|x| x.abs()).sum::<f64>())
}

/// ⟨ψ|ρ|ψ⟩ for a normalized vector ψ.
pub fn fidelity_pure(psi: &Array1<c64>, rho: &Array2<c64>) -> Result<f64> {
    if psi.len() != rho.nrows() {
        return Err(MismatchError::DimensionMismatch {
            left: psi.len(),
            right: rho.nrows(),
        });
    }
    let rho_psi = rho.dot(psi);
    Ok(inner(psi, &rho_psi).re)
}
