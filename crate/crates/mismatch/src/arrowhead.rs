//! Arrowhead reduction of (rho, psi_id), secular-equation spectrum and the
//! analytic / perturbative coherent-mismatch formulas.

use ndarray::{Array1, Array2};
use ndarray_linalg::c64;

use crate::error::{MismatchError, Result};
use crate::linalg::{adjoint, hermitian_eig, inner};
use crate::states::{DensityMatrix, PureState};

/// Gap below which the dominant eigenvalue is treated as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;
/// Gap below which results carry a near-degeneracy warning.
pub const NEAR_DEGENERACY_GAP: f64 = 1e-8;
/// Arm entries at or below this are deflated as exact eigenpairs.
const DEFLATION_TOL: f64 = 1e-14;

/// rho expressed in a basis led by psi_id: corner F = <psi|rho|psi>, arm
/// C_k = |<psi|rho|phi_k>| >= 0 and diagonal D_k = <phi_k|rho|phi_k>, with
/// phi_k the eigenvectors of P rho P restricted to the complement of psi_id.
#[derive(Debug, Clone)]
pub struct ArrowheadForm {
    pub dim: usize,
    pub f: f64,
    /// Arm entries, length dim - 1, all non-negative.
    pub c: Vec<f64>,
    /// Complement diagonal, length dim - 1, sorted descending.
    pub d: Vec<f64>,
    /// Unitary with U |psi_id> = e1; rows are the conjugated basis vectors.
    pub basis: Array2<c64>,
}

impl ArrowheadForm {
    /// The real arrowhead matrix U rho U† as a complex matrix.
    pub fn assemble(&self) -> Array2<c64> {
        let n = self.dim;
        let mut m = Array2::zeros((n, n));
        m[[0, 0]] = c64::new(self.f, 0.0);
        for k in 1..n {
            m[[0, k]] = c64::new(self.c[k - 1], 0.0);
            m[[k, 0]] = c64::new(self.c[k - 1], 0.0);
            m[[k, k]] = c64::new(self.d[k - 1], 0.0);
        }
        m
    }
}

/// Orthonormal basis of the orthogonal complement of psi, columns of a
/// d x (d-1) matrix, built by Gram-Schmidt over standard basis vectors.
fn complement_basis(psi: &Array1<c64>) -> Array2<c64> {
    let d = psi.len();
    let skip = psi
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().partial_cmp(&b.1.norm_sqr()).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let mut cols: Vec<Array1<c64>> = Vec::with_capacity(d - 1);
    for j in 0..d {
        if j == skip {
            continue;
        }
        let mut v = Array1::<c64>::zeros(d);
        v[j] = c64::new(1.0, 0.0);
        // Two Gram-Schmidt passes for numerical orthogonality.
        for _ in 0..2 {
            let ov = inner(psi, &v);
            v = &v - &psi.mapv(|x| x * ov);
            for u in &cols {
                let ov = inner(u, &v);
                v = &v - &u.mapv(|x| x * ov);
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v.mapv_inplace(|x| x / norm);
        cols.push(v);
    }
    let mut w = Array2::zeros((d, d - 1));
    for (j, v) in cols.iter().enumerate() {
        for i in 0..d {
            w[[i, j]] = v[i];
        }
    }
    w
}

/// Reduce (rho, psi_id) to arrowhead form.
pub fn decompose(rho: &DensityMatrix, psi_id: &PureState) -> Result<ArrowheadForm> {
    let dim = rho.dim();
    if dim != psi_id.dim() {
        return Err(MismatchError::DimensionMismatch {
            left: dim,
            right: psi_id.dim(),
        });
    }
    let psi = psi_id.amplitudes();
    let f = rho.fidelity(psi_id)?;
    let w = complement_basis(psi);
    // Compress rho onto the complement and diagonalize there; eigenvectors of
    // the compression are exactly the complement eigenvectors of P rho P.
    let rw = rho.matrix().dot(&w);
    let b = adjoint(&w).dot(&rw);
    let eig = hermitian_eig(&b)?;
    let d_vals: Vec<f64> = eig.eigenvalues.to_vec();
    let mut c_vals = Vec::with_capacity(dim - 1);
    let mut basis = Array2::zeros((dim, dim));
    for i in 0..dim {
        basis[[0, i]] = psi[i].conj();
    }
    let rho_psi = rho.matrix().dot(psi);
    for k in 0..dim - 1 {
        let mut phi = Array1::<c64>::zeros(dim);
        for i in 0..dim {
            let mut acc = c64::new(0.0, 0.0);
            for j in 0..dim - 1 {
                acc += w[[i, j]] * eig.eigenvectors[[j, k]];
            }
            phi[i] = acc;
        }
        // <psi|rho|phi> made real non-negative by a phase on phi.
        let raw = inner(&phi, &rho_psi).conj();
        let mag = raw.norm();
        if mag > DEFLATION_TOL {
            let phase = raw.conj() / mag;
            phi.mapv_inplace(|x| x * phase);
        }
        c_vals.push(mag);
        for i in 0..dim {
            basis[[k + 1, i]] = phi[i].conj();
        }
    }
    Ok(ArrowheadForm {
        dim,
        f,
        c: c_vals,
        d: d_vals,
        basis,
    })
}

/// Secular function x - F + sum C_k^2 / (D_k - x) and its derivative.
fn secular(f: f64, c: &[f64], d: &[f64], x: f64) -> (f64, f64) {
    let mut p = x - f;
    let mut dp = 1.0;
    for (ck, dk) in c.iter().zip(d.iter()) {
        let g = dk - x;
        p += ck * ck / g;
        dp += ck * ck / (g * g);
    }
    (p, dp)
}

/// Root of the secular function inside (lo, hi), by bisection-safeguarded
/// Newton. The function is strictly increasing between consecutive poles.
fn secular_root(f: f64, c: &[f64], d: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let scale = 1.0 + lo.abs().max(hi.abs());
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (p, dp) = secular(f, c, d, x);
        if p > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - p / dp;
        x = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 1e-14 * scale {
            break;
        }
    }
    x
}

/// All eigenvalues of the arrowhead form, descending, via the secular
/// equation with deflation of zero arms and degenerate diagonal groups.
pub fn secular_eigenvalues(a: &ArrowheadForm) -> Vec<f64> {
    // Deflate: group equal D values, keep one effective arm sqrt(sum C^2)
    // per group (a rotation in the degenerate subspace moves all weight onto
    // one column), deflate groups whose combined arm vanishes.
    let mut deflated: Vec<f64> = Vec::new();
    let mut active_c: Vec<f64> = Vec::new();
    let mut active_d: Vec<f64> = Vec::new();
    let n = a.d.len();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        let mut c2 = a.c[i] * a.c[i];
        while j < n && (a.d[i] - a.d[j]).abs() <= 1e-14 * (1.0 + a.d[i].abs()) {
            c2 += a.c[j] * a.c[j];
            j += 1;
        }
        let group = j - i;
        let ceff = c2.sqrt();
        if ceff <= DEFLATION_TOL {
            for _ in 0..group {
                deflated.push(a.d[i]);
            }
        } else {
            active_c.push(ceff);
            active_d.push(a.d[i]);
            for _ in 0..group - 1 {
                deflated.push(a.d[i]);
            }
        }
        i = j;
    }
    let mut roots = Vec::with_capacity(active_d.len() + 1);
    if active_d.is_empty() {
        roots.push(a.f);
    } else {
        let arm_sum: f64 = active_c.iter().sum();
        let top = active_d[0];
        let bottom = active_d[active_d.len() - 1];
        // Dominant root sits above every pole and above F; Gershgorin caps
        // it at max diagonal + sum of arms.
        let hi = a.f.max(top) + arm_sum;
        let hi = hi + 1e-13 * (1.0 + hi.abs());
        roots.push(secular_root(a.f, &active_c, &active_d, a.f.max(top), hi));
        // One root strictly between each pair of consecutive poles.
        for k in 0..active_d.len() - 1 {
            roots.push(secular_root(
                a.f,
                &active_c,
                &active_d,
                active_d[k + 1],
                active_d[k],
            ));
        }
        // Smallest root sits below every pole and below F.
        let lo = a.f.min(bottom) - arm_sum;
        let lo = lo - 1e-13 * (1.0 + lo.abs());
        roots.push(secular_root(a.f, &active_c, &active_d, lo, bottom));
    }
    roots.extend_from_slice(&deflated);
    roots.sort_by(|x, y| y.partial_cmp(x).unwrap());
    roots
}

#[derive(Debug, Clone)]
pub struct MismatchResult {
    /// Coherent mismatch 1 - |<psi_id|psi>|^2.
    pub c: f64,
    /// Dominant eigenvalue.
    pub lambda: f64,
    /// Dominant eigenvector in the original basis.
    pub dominant_vector: PureState,
    /// lambda - lambda_2.
    pub gap: f64,
    /// Set when the gap is above the hard degeneracy threshold but still
    /// below 1e-8; results in this band are numerically fragile.
    pub near_degenerate: bool,
}

fn check_gap(lambda: f64, lambda2: f64) -> Result<bool> {
    let gap = lambda - lambda2;
    if gap <= DEGENERACY_GAP {
        return Err(MismatchError::DegenerateDominantEigenvalue { gap });
    }
    Ok(gap <= NEAR_DEGENERACY_GAP)
}

/// Coherent mismatch from the arrowhead data and the dominant eigenvalue:
/// c = 1 - [1 + sum C_k^2/(lambda - D_k)^2]^{-1}, with the dominant vector
/// proportional to (-1, C_2/(D_2 - lambda), ...) rotated back to the
/// original basis.
pub fn mismatch_analytic(a: &ArrowheadForm, lambda: f64) -> Result<MismatchResult> {
    let roots = secular_eigenvalues(a);
    let lambda2 = if roots.len() > 1 { roots[1] } else { f64::NEG_INFINITY };
    let near_degenerate = check_gap(lambda, lambda2)?;
    let mut s = 0.0;
    for (ck, dk) in a.c.iter().zip(a.d.iter()) {
        let g = lambda - dk;
        s += ck * ck / (g * g);
    }
    let c = 1.0 - 1.0 / (1.0 + s);
    let mut v = Array1::<c64>::zeros(a.dim);
    v[0] = c64::new(-1.0, 0.0);
    for k in 1..a.dim {
        v[k] = c64::new(a.c[k - 1] / (a.d[k - 1] - lambda), 0.0);
    }
    let v_orig = adjoint(&a.basis).dot(&v);
    let dominant_vector = PureState::normalized(v_orig)?;
    Ok(MismatchResult {
        c,
        lambda,
        dominant_vector,
        gap: lambda - lambda2,
        near_degenerate,
    })
}

/// Coherent mismatch straight from a dense eigendecomposition of rho.
pub fn mismatch_direct(rho: &DensityMatrix, psi_id: &PureState) -> Result<MismatchResult> {
    if rho.dim() != psi_id.dim() {
        return Err(MismatchError::DimensionMismatch {
            left: rho.dim(),
            right: psi_id.dim(),
        });
    }
    let eig = rho.eig()?;
    let lambda = eig.eigenvalues[0];
    let lambda2 = eig.eigenvalues[1];
    let near_degenerate = check_gap(lambda, lambda2)?;
    let v = eig.eigenvectors.column(0).to_owned();
    let ov = inner(psi_id.amplitudes(), &v);
    let c = (1.0 - ov.norm_sqr()).max(0.0);
    Ok(MismatchResult {
        c,
        lambda,
        dominant_vector: PureState::normalized(v)?,
        gap: lambda - lambda2,
        near_degenerate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbativeVariant {
    /// Denominators (F - D_k)^2; breaks down when F approaches some D_k.
    FirstOrder,
    /// Denominators (lambda - lambda_k)^2 with exact eigenvalues.
    Wilkinson,
}

/// Perturbative estimates of the coherent mismatch.
pub fn mismatch_perturbative(a: &ArrowheadForm, variant: PerturbativeVariant) -> Result<f64> {
    match variant {
        PerturbativeVariant::FirstOrder => {
            let mut s = 0.0;
            for (ck, dk) in a.c.iter().zip(a.d.iter()) {
                let g = a.f - dk;
                if g.abs() <= 1e-12 {
                    return Err(MismatchError::PerturbationSingular { gap: g.abs() });
                }
                s += ck * ck / (g * g);
            }
            Ok(1.0 - 1.0 / (1.0 + s))
        }
        PerturbativeVariant::Wilkinson => {
            let roots = secular_eigenvalues(a);
            let lambda = roots[0];
            let mut s = 0.0;
            for (k, ck) in a.c.iter().enumerate() {
                let g = lambda - roots[k + 1];
                if g.abs() <= 1e-12 {
                    return Err(MismatchError::PerturbationSingular { gap: g.abs() });
                }
                s += ck * ck / (g * g);
            }
            Ok(1.0 - 1.0 / (1.0 + s))
        }
    }
}
