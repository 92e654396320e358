//! Virtual-distillation powers rho^n / tr[rho^n], the sqrt(c) noise floor,
//! observable-error bounds and copy-count estimates.

use ndarray::Array2;
use ndarray_linalg::c64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::arrowhead::mismatch_direct;
use crate::error::{MismatchError, Result};
use crate::linalg::{adjoint, hermitian_eig, inner};
use crate::states::{seeded_rng, DensityMatrix, PureState};

#[derive(Debug, Clone)]
pub struct DistillationTrace {
    pub n_values: Vec<u32>,
    /// T(rho_n, rho_id) for each n.
    pub trace_distances: Vec<f64>,
    /// sqrt(c), the large-n limit of the trace distances.
    pub predicted_floor: f64,
    /// lambda_2 / lambda, the per-copy suppression rate.
    pub q: f64,
}

/// rho^n / tr[rho^n], computed in the eigenbasis so large powers stay
/// well-scaled (eigenvalues are divided by lambda before exponentiation).
pub fn distilled_state(rho: &DensityMatrix, n: u32) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(MismatchError::ParameterOutOfRange {
            reason: "power n must be >= 1".into(),
        });
    }
    if n == 1 {
        return Ok(rho.clone());
    }
    let eig = rho.eig()?;
    let lambda = eig.eigenvalues[0];
    if lambda < 1e-300 {
        return Err(MismatchError::DegenerateInput {
            reason: "trace of rho^n underflows".into(),
        });
    }
    let dim = rho.dim();
    let powers: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&v| (v.max(0.0) / lambda).powi(n as i32))
        .collect();
    let total: f64 = powers.iter().sum();
    if total < 1e-300 {
        return Err(MismatchError::DegenerateInput {
            reason: "trace of rho^n underflows".into(),
        });
    }
    let mut scaled = eig.eigenvectors.clone();
    for j in 0..dim {
        let w = powers[j] / total;
        for i in 0..dim {
            scaled[[i, j]] *= w;
        }
    }
    let m = scaled.dot(&adjoint(&eig.eigenvectors));
    let m = (&m + &adjoint(&m)).mapv(|x| x * 0.5);
    Ok(DensityMatrix::new_unchecked(m))
}

/// Trace distances T(rho_n, rho_id) for n = 1..n_max together with the
/// predicted floor sqrt(c) and the suppression factor Q.
pub fn noise_floor_trace(
    rho: &DensityMatrix,
    psi_id: &PureState,
    n_max: u32,
) -> Result<DistillationTrace> {
    let res = mismatch_direct(rho, psi_id)?;
    let eig = rho.eig()?;
    let q = eig.eigenvalues[1].max(0.0) / eig.eigenvalues[0];
    let rho_id = DensityMatrix::pure(psi_id);
    let mut n_values = Vec::with_capacity(n_max as usize);
    let mut trace_distances = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let rho_n = distilled_state(rho, n)?;
        n_values.push(n);
        trace_distances.push(rho_n.trace_distance(&rho_id)?);
    }
    Ok(DistillationTrace {
        n_values,
        trace_distances,
        predicted_floor: res.c.sqrt(),
        q,
    })
}

/// |<a|O|a> - <b|O|b>| for a Hermitian observable O.
pub fn observable_error(
    psi_a: &PureState,
    psi_b: &PureState,
    obs: &Array2<c64>,
) -> Result<f64> {
    if psi_a.dim() != psi_b.dim() || psi_a.dim() != obs.nrows() {
        return Err(MismatchError::DimensionMismatch {
            left: psi_a.dim(),
            right: obs.nrows(),
        });
    }
    let ea = inner(psi_a.amplitudes(), &obs.dot(psi_a.amplitudes())).re;
    let eb = inner(psi_b.amplitudes(), &obs.dot(psi_b.amplitudes())).re;
    Ok((ea - eb).abs())
}

/// 2 sqrt(c) ||O|| in general; 2 c ||O|| when the target is an eigenstate
/// of the observable.
pub fn observable_error_bound(c: f64, o_norm: f64, eigenstate: bool) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) || !(o_norm >= 0.0) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("c = {c} must be in [0,1] and o_norm = {o_norm} >= 0"),
        });
    }
    Ok(if eigenstate {
        2.0 * c * o_norm
    } else {
        2.0 * c.sqrt() * o_norm
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopiesTarget {
    /// Suppress to the trace-distance level 2 sqrt(c).
    GeneralSqrt,
    /// Suppress to the eigenstate level 2c.
    EigenstateQuadratic,
}

/// Approximate number of copies needed to push the incoherent error below
/// the coherent-mismatch level, via n = (ln E + ln[mu1/2]) / ln Q with
/// Q ~ (1/eta - 1) mu1 and c ~ Q^2/4, then ceiling. An estimate built from
/// the same approximation chain as the scaling analysis, not an exact count.
pub fn copies_needed(eta: f64, mu1: f64, target: CopiesTarget) -> Result<u32> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("eta = {eta} outside (0, 1]"),
        });
    }
    if !(mu1 > 0.0 && mu1 <= 1.0) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("mu1 = {mu1} outside (0, 1]"),
        });
    }
    let q = (1.0 / eta - 1.0) * mu1;
    if q >= 1.0 {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("suppression factor Q = {q} >= 1"),
        });
    }
    // E = 2 sqrt(c) ~ Q gives n = 1 + ln[mu1/2]/ln Q;
    // E = 2c ~ Q^2/2 gives n = 2 + ln[mu1/4]/ln Q.
    let n = match target {
        CopiesTarget::GeneralSqrt => 1.0 + (mu1 / 2.0).ln() / q.ln(),
        CopiesTarget::EigenstateQuadratic => 2.0 + (mu1 / 4.0).ln() / q.ln(),
    };
    Ok((n.ceil() as u32).max(2))
}

/// Random Hermitian observable (Gaussian ensemble) rescaled to unit spectral
/// norm.
pub fn random_normalized_observable(dim: usize, seed: u64) -> Result<Array2<c64>> {
    random_normalized_observable_rng(dim, &mut seeded_rng(seed))
}

/// Random Hermitian observable with psi as an exact eigenvector, unit
/// spectral norm: O = e |psi><psi| + P O' P with random e in [-1, 1] and a
/// random Hermitian O' compressed to the complement of psi.
pub fn eigenstate_observable_rng<R: Rng>(psi: &PureState, rng: &mut R) -> Result<Array2<c64>> {
    let dim = psi.dim();
    let raw = random_normalized_observable_rng(dim, rng)?;
    let e: f64 = rng.gen_range(-1.0..1.0);
    let proj = psi.projector();
    let dim_c = c64::new(1.0, 0.0);
    let p = Array2::from_shape_fn((dim, dim), |(i, j)| {
        (if i == j { dim_c } else { c64::new(0.0, 0.0) }) - proj[[i, j]]
    });
    let compressed = p.dot(&raw).dot(&p);
    let o = proj.mapv(|x| x * e) + compressed;
    let o = (&o + &adjoint(&o)).mapv(|x| x * 0.5);
    let eig = hermitian_eig(&o)?;
    let norm = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()));
    Ok(o.mapv(|x| x / norm))
}

pub fn random_normalized_observable_rng<R: Rng>(dim: usize, rng: &mut R) -> Result<Array2<c64>> {
    if dim < 2 {
        return Err(MismatchError::InvalidDimension { dim, min: 2 });
    }
    let g = Array2::from_shape_fn((dim, dim), |_| {
        c64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    });
    let h = (&g + &adjoint(&g)).mapv(|x| x * 0.5);
    let eig = hermitian_eig(&h)?;
    let norm = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()));
    Ok(h.mapv(|x| x / norm))
}
