//! Constructors for density matrices that saturate the mismatch bounds:
//! the worst case for the delta bound, worst and best cases for the
//! commutator bounds, and the 2x2 limiting family where c tends to 1/2.

use ndarray::{Array1, Array2};
use ndarray_linalg::c64;
use rand::Rng;

use crate::error::{MismatchError, Result};
use crate::linalg::{adjoint, hermitian_eigvals, outer};
use crate::states::{haar_random_unitary_rng, mix, seeded_rng, DensityMatrix, PureState};

fn infeasible(reason: impl Into<String>) -> MismatchError {
    MismatchError::InfeasibleSpec {
        reason: reason.into(),
    }
}

/// Haar unitary, with the 1x1 case (a random phase) handled directly since
/// the QR-based sampler needs n >= 2.
fn complement_unitary<R: Rng>(n: usize, rng: &mut R) -> Result<Array2<c64>> {
    if n == 1 {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        return Ok(Array2::from_elem((1, 1), c64::from_polar(1.0, theta)));
    }
    haar_random_unitary_rng(n, rng)
}

/// Haar-random orthonormal columns spanning the complement of e1, embedded
/// as a dim x (dim-1) matrix.
fn random_complement<R: Rng>(dim: usize, rng: &mut R) -> Result<Array2<c64>> {
    let u = complement_unitary(dim - 1, rng)?;
    let mut w = Array2::zeros((dim, dim - 1));
    for i in 0..dim - 1 {
        for j in 0..dim - 1 {
            w[[i + 1, j]] = u[[i, j]];
        }
    }
    Ok(w)
}

/// Block-diagonal unitary fixing e1 and acting Haar-randomly on its
/// complement; used to realize the "arbitrary" complement vectors.
fn complement_rotation<R: Rng>(dim: usize, rng: &mut R) -> Result<Array2<c64>> {
    let u = complement_unitary(dim - 1, rng)?;
    let mut v = Array2::zeros((dim, dim));
    v[[0, 0]] = c64::new(1.0, 0.0);
    for i in 0..dim - 1 {
        for j in 0..dim - 1 {
            v[[i + 1, j + 1]] = u[[i, j]];
        }
    }
    Ok(v)
}

/// Worst case for the delta bound: rho = eta |psi><psi| + (1-eta) rho_err
/// with rho_err = mu1 |chi><chi| + R, chi = sqrt(alpha) psi + sqrt(1-alpha)
/// phi_2 at alpha = (1-delta)/2, and R carrying `tail` (length dim-2,
/// entries <= mu1, mu1 + sum = 1) on complement vectors orthogonal to both.
/// Returns (rho, psi_id) with psi_id = e1 and Haar-random complement.
pub fn worst_case_delta(
    dim: usize,
    eta: f64,
    mu1: f64,
    tail: &[f64],
    seed: u64,
) -> Result<(DensityMatrix, PureState)> {
    if dim < 2 {
        return Err(MismatchError::InvalidDimension { dim, min: 2 });
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(infeasible(format!("eta = {eta} outside (0, 1)")));
    }
    if tail.len() != dim - 2 {
        return Err(infeasible(format!(
            "tail length {} != dim - 2 = {}",
            tail.len(),
            dim - 2
        )));
    }
    let trace = mu1 + tail.iter().sum::<f64>();
    if (trace - 1.0).abs() > 1e-12 {
        return Err(infeasible(format!("mu1 + tail sums to {trace}, not 1")));
    }
    if tail.iter().any(|&t| t < 0.0 || t > mu1 + 1e-15) {
        return Err(infeasible("tail entries must lie in [0, mu1]"));
    }
    let delta = (1.0 / eta - 1.0) * mu1;
    if delta > 1.0 {
        return Err(infeasible(format!("delta = {delta} exceeds 1")));
    }
    let mut rng = seeded_rng(seed);
    let psi_id = PureState::basis(dim, 0);
    let w = random_complement(dim, &mut rng)?;
    // Maximizing the mismatch of eta P + (1-eta) mu1 |chi><chi| over the
    // weight alpha that chi places on psi puts alpha at (1 - delta)/2, where
    // c reaches (1 - sqrt(1 - delta^2))/2 exactly.
    let alpha = (1.0 - delta) / 2.0;
    let mut chi = Array1::<c64>::zeros(dim);
    chi[0] = c64::new(alpha.sqrt(), 0.0);
    for i in 0..dim {
        chi[i] += w[[i, 0]] * (1.0 - alpha).sqrt();
    }
    let mut err = outer(&chi, &chi).mapv(|x| x * mu1);
    for (k, &t) in tail.iter().enumerate() {
        let col = w.column(k + 1).to_owned();
        err = err + outer(&col, &col).mapv(|x| x * t);
    }
    let rho_err = DensityMatrix::new_unchecked(err);
    let rho = mix(eta, &psi_id, &rho_err)?;
    Ok((rho, psi_id))
}

/// Second root of the 2x2 arrowhead block [[f, c], [c, d]].
fn block_roots(f: f64, c: f64, d: f64) -> (f64, f64) {
    let disc = (4.0 * c * c + (f - d) * (f - d)).sqrt();
    (0.5 * (f + d + disc), 0.5 * (f + d - disc))
}

/// Worst case for the commutator upper bound: the arrowhead matrix with
/// corner F, single arm C2 next to D2 = d_tail[0] and zero arms elsewhere,
/// rotated by a Haar unitary on the complement of e1. Pairs with
/// psi_id = e1.
pub fn worst_case_commutator(
    dim: usize,
    f: f64,
    c2: f64,
    d_tail: &[f64],
    seed: u64,
) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(MismatchError::InvalidDimension { dim, min: 2 });
    }
    if d_tail.len() != dim - 1 {
        return Err(infeasible(format!(
            "diagonal length {} != dim - 1",
            d_tail.len()
        )));
    }
    if d_tail.windows(2).any(|w| w[0] < w[1]) {
        return Err(infeasible("diagonal must be sorted descending"));
    }
    let trace = f + d_tail.iter().sum::<f64>();
    if (trace - 1.0).abs() > 1e-12 {
        return Err(infeasible(format!("trace {trace} != 1")));
    }
    if f < 0.0 || c2 < 0.0 || d_tail.iter().any(|&x| x < 0.0) {
        return Err(infeasible("entries must be non-negative"));
    }
    let d2 = d_tail[0];
    if c2 * c2 > f * d2 + 1e-15 {
        return Err(infeasible("C2^2 > F D2 violates positivity"));
    }
    if dim >= 3 {
        // Keeps the arm block's second root above the rest of the diagonal,
        // so it is the second-largest eigenvalue of the full matrix.
        let d3 = d_tail[1];
        if f <= d3 {
            return Err(infeasible("need F > D3"));
        }
        if d2 + 1e-15 < d3 + c2 * c2 / (f - d3) {
            return Err(infeasible("need D2 >= D3 + C2^2/(F - D3)"));
        }
    }
    let mut m = Array2::<c64>::zeros((dim, dim));
    m[[0, 0]] = c64::new(f, 0.0);
    m[[0, 1]] = c64::new(c2, 0.0);
    m[[1, 0]] = c64::new(c2, 0.0);
    for (k, &d) in d_tail.iter().enumerate() {
        m[[k + 1, k + 1]] = c64::new(d, 0.0);
    }
    let v = complement_rotation(dim, &mut seeded_rng(seed))?;
    let rotated = v.dot(&m).dot(&adjoint(&v));
    let rotated = (&rotated + &adjoint(&rotated)).mapv(|x| x * 0.5);
    Ok(DensityMatrix::new_unchecked(rotated))
}

/// Best case for the commutator lower bound: single arm Cm next to the
/// smallest non-zero diagonal entry D_m, `mid` filling the rest of the
/// diagonal. Pairs with psi_id = e1.
pub fn best_case_commutator(
    dim: usize,
    f: f64,
    cm: f64,
    d_m: f64,
    mid: &[f64],
    seed: u64,
) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(MismatchError::InvalidDimension { dim, min: 2 });
    }
    if mid.len() != dim - 2 {
        return Err(infeasible(format!("mid length {} != dim - 2", mid.len())));
    }
    if mid.windows(2).any(|w| w[0] < w[1]) {
        return Err(infeasible("mid must be sorted descending"));
    }
    let trace = f + d_m + mid.iter().sum::<f64>();
    if (trace - 1.0).abs() > 1e-12 {
        return Err(infeasible(format!("trace {trace} != 1")));
    }
    if f < 0.0 || cm < 0.0 || d_m <= 0.0 || mid.iter().any(|&x| x < 0.0) {
        return Err(infeasible("need non-negative entries and D_m > 0"));
    }
    if mid.iter().any(|&x| x < d_m) {
        return Err(infeasible("D_m must be the smallest diagonal entry"));
    }
    if cm * cm >= f * d_m {
        return Err(infeasible("need Cm^2 < F D_m for a non-zero lambda_m"));
    }
    let (lam, lam_m) = block_roots(f, cm, d_m);
    if mid.iter().any(|&x| x >= lam) {
        return Err(infeasible("mid entries must stay below the dominant root"));
    }
    if mid.iter().any(|&x| x < lam_m) {
        return Err(infeasible(
            "mid entries must stay above the arm block's small root",
        ));
    }
    let mut m = Array2::<c64>::zeros((dim, dim));
    m[[0, 0]] = c64::new(f, 0.0);
    for (k, &d) in mid.iter().enumerate() {
        m[[k + 1, k + 1]] = c64::new(d, 0.0);
    }
    let last = dim - 1;
    m[[last, last]] = c64::new(d_m, 0.0);
    m[[0, last]] = c64::new(cm, 0.0);
    m[[last, 0]] = c64::new(cm, 0.0);
    let v = complement_rotation(dim, &mut seeded_rng(seed))?;
    let rotated = v.dot(&m).dot(&adjoint(&v));
    let rotated = (&rotated + &adjoint(&rotated)).mapv(|x| x * 0.5);
    let rho = DensityMatrix::new_unchecked(rotated);
    debug_assert!(hermitian_eigvals(rho.matrix()).unwrap()[dim - 1] > -1e-12);
    Ok(rho)
}

/// The 2x2 family rho = 1/2 |0><0| + 1/2 |chi_w><chi_w| with
/// chi_w = w|0> + sqrt(1-w^2)|1>; its mismatch is 1/2 - w/2 + O(w^2), so it
/// tends to 1/2 as w -> 0 while the state itself tends to the maximally
/// mixed state.
pub fn limiting_global(omega: f64) -> Result<DensityMatrix> {
    if !(omega > 0.0 && omega <= 0.1) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("omega = {omega} outside (0, 0.1]"),
        });
    }
    let mut chi = Array1::<c64>::zeros(2);
    chi[0] = c64::new(omega, 0.0);
    chi[1] = c64::new((1.0 - omega * omega).sqrt(), 0.0);
    let psi = PureState::basis(2, 0);
    let m = (psi.projector() + outer(&chi, &chi)).mapv(|x| x * 0.5);
    Ok(DensityMatrix::new_unchecked(m))
}
