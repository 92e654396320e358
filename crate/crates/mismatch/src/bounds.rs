//! Closed-form mismatch bounds: Weyl eigenvalue windows, the delta upper
//! bound, commutator-norm metrics and the Delta / Delta_min sandwich.

use serde::Serialize;

use crate::arrowhead::mismatch_direct;
use crate::distillation::{copies_needed, CopiesTarget};
use crate::error::{MismatchError, Result};
use crate::linalg::fidelity_pure;
use crate::states::{optimal_eta, DensityMatrix, PureState};

/// Eigenvalues below this count as zero when picking the smallest non-zero
/// eigenvalue for Q_min.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-12;

/// Metrics of the commutator [rho_id, rho], which has the single singular
/// value sigma (doubly degenerate) and zeros otherwise.
#[derive(Debug, Clone, Copy)]
pub struct CommutatorMetrics {
    /// sigma^2 = <psi|rho^2|psi> - F^2, the variance of rho in the ideal state.
    pub sigma: f64,
    /// sigma / lambda.
    pub sigma_r: f64,
    /// lambda_2 / lambda.
    pub q: f64,
    /// lambda_m / lambda, with lambda_m the smallest non-zero eigenvalue.
    pub q_min: f64,
    /// sigma_r / (1 - Q), argument of the upper bound.
    pub delta_upper: f64,
    /// sigma_r / (1 - Q_min), argument of the lower bound.
    pub delta_lower: f64,
}

/// Weyl windows for the two largest eigenvalues of
/// eta rho_id + (1 - eta) rho_err: lambda in [eta, eta(1+delta)] and
/// lambda_2 in [0, eta delta].
pub fn weyl_bounds(eta: f64, delta: f64) -> Result<((f64, f64), (f64, f64))> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("eta = {eta} outside (0, 1]"),
        });
    }
    if !(delta >= 0.0) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("delta = {delta} negative"),
        });
    }
    Ok(((eta, eta * (1.0 + delta)), (0.0, eta * delta)))
}

/// Worst-case mismatch over all states with eigenvalue ratio delta:
/// (1 - sqrt(1 - delta^2)) / 2.
pub fn delta_upper_bound(delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("delta = {delta} outside [0, 1]"),
        });
    }
    Ok(0.5 * (1.0 - (1.0 - delta * delta).sqrt()))
}

/// sigma, Q, Q_min and the derived Delta arguments for one (rho, psi_id).
pub fn commutator_metrics(rho: &DensityMatrix, psi_id: &PureState) -> Result<CommutatorMetrics> {
    if rho.dim() != psi_id.dim() {
        return Err(MismatchError::DimensionMismatch {
            left: rho.dim(),
            right: psi_id.dim(),
        });
    }
    let f = rho.fidelity(psi_id)?;
    if f <= 0.0 {
        return Err(MismatchError::ZeroFidelity);
    }
    let rho2 = rho.matrix().dot(rho.matrix());
    let second_moment = fidelity_pure(psi_id.amplitudes(), &rho2)?;
    let sigma = (second_moment - f * f).max(0.0).sqrt();
    let eig = rho.eig()?;
    let lambda = eig.eigenvalues[0];
    let lambda2 = eig.eigenvalues[1];
    if lambda - lambda2 <= 1e-10 {
        return Err(MismatchError::DegenerateDominantEigenvalue {
            gap: lambda - lambda2,
        });
    }
    let lambda_m = eig
        .eigenvalues
        .iter()
        .rev()
        .find(|&&v| v > ZERO_EIGENVALUE_TOL)
        .copied()
        .unwrap_or(lambda);
    let lambda_m = lambda_m.min(lambda2.max(0.0));
    let sigma_r = sigma / lambda;
    let q = lambda2.max(0.0) / lambda;
    let q_min = lambda_m / lambda;
    Ok(CommutatorMetrics {
        sigma,
        sigma_r,
        q,
        q_min,
        delta_upper: sigma_r / (1.0 - q),
        delta_lower: sigma_r / (1.0 - q_min),
    })
}

/// Schatten p-norm of [rho_id, rho]: 2^(1/p) sigma for p in {1, 2}, sigma
/// for p = infinity (pass p = f64::INFINITY).
pub fn commutator_norm(rho: &DensityMatrix, psi_id: &PureState, p: f64) -> Result<f64> {
    let m = commutator_metrics(rho, psi_id)?;
    if p.is_infinite() {
        return Ok(m.sigma);
    }
    if p == 1.0 || p == 2.0 {
        return Ok(2f64.powf(1.0 / p) * m.sigma);
    }
    Err(MismatchError::ParameterOutOfRange {
        reason: format!("norm order {p} not in {{1, 2, inf}}"),
    })
}

fn half_bound(x: f64) -> f64 {
    if x <= 0.5 {
        0.5 * (1.0 - (1.0 - 4.0 * x * x).sqrt())
    } else {
        0.5
    }
}

/// c <= (1 - sqrt(1 - 4 Delta^2)) / 2, saturating to 1/2 once Delta > 1/2.
pub fn commutator_upper_bound(metrics: &CommutatorMetrics) -> f64 {
    half_bound(metrics.delta_upper)
}

/// c >= (1 - sqrt(1 - 4 Delta_min^2)) / 2, capped at 1/2.
pub fn commutator_lower_bound(metrics: &CommutatorMetrics) -> f64 {
    half_bound(metrics.delta_lower)
}

/// Leading-order estimate of lower_bound / upper_bound. The exact ratio of
/// the Delta arguments is (1 - Q)/(1 - Q_min); squaring gives the ratio of
/// the bound values up to O(sigma^4). An estimate, not a guarantee.
pub fn bound_ratio(q: f64, q_min: f64) -> Result<f64> {
    if !(0.0 <= q_min && q_min <= q && q < 1.0) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("need 0 <= Q_min <= Q < 1, got Q = {q}, Q_min = {q_min}"),
        });
    }
    let r = (1.0 - q) / (1.0 - q_min);
    Ok(r * r)
}

/// Everything we can say about one (rho, psi_id) pair in one record.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub c: f64,
    pub lambda: f64,
    pub gap: f64,
    pub near_degenerate: bool,
    pub fidelity: f64,
    pub sigma: f64,
    pub q: f64,
    pub q_min: f64,
    /// Delta = sigma_r / (1 - Q).
    pub delta_upper_arg: f64,
    /// Delta_min = sigma_r / (1 - Q_min).
    pub delta_lower_arg: f64,
    pub upper_bound: f64,
    pub lower_bound: f64,
    pub ratio_estimate: f64,
    /// sqrt(c), the distillation limit.
    pub noise_floor: f64,
    /// None when no eta-decomposition exists (purely coherent error).
    pub eta: Option<f64>,
    pub mu1: Option<f64>,
    pub delta: Option<f64>,
    /// None when delta is absent or exceeds 1 (bound replaced by 1/2).
    pub delta_bound: Option<f64>,
    pub decomposition_note: Option<String>,
    pub weyl_lambda_range: Option<(f64, f64)>,
    pub weyl_lambda2_range: Option<(f64, f64)>,
    pub copies_general: Option<u32>,
    pub copies_eigenstate: Option<u32>,
}

/// Assemble the full report: mismatch, commutator sandwich, eta/delta
/// decomposition (when one exists) and copy estimates.
pub fn bound_report(rho: &DensityMatrix, psi_id: &PureState) -> Result<BoundReport> {
    let res = mismatch_direct(rho, psi_id)?;
    let met = commutator_metrics(rho, psi_id)?;
    let fidelity = rho.fidelity(psi_id)?;
    let (eta, mu1, delta, delta_bound, note, weyl, copies_g, copies_e) =
        match optimal_eta(rho, psi_id) {
            Ok(dec) => {
                let db = if dec.delta <= 1.0 {
                    Some(delta_upper_bound(dec.delta)?)
                } else {
                    None
                };
                let weyl = weyl_bounds(dec.eta, dec.delta).ok();
                let cg = copies_needed(dec.eta, dec.mu1, CopiesTarget::GeneralSqrt).ok();
                let ce = copies_needed(dec.eta, dec.mu1, CopiesTarget::EigenstateQuadratic).ok();
                (
                    Some(dec.eta),
                    Some(dec.mu1),
                    Some(dec.delta),
                    db,
                    None,
                    weyl,
                    cg,
                    ce,
                )
            }
            Err(MismatchError::NoDecomposition) => (
                None,
                None,
                None,
                None,
                Some("no eta-decomposition: purely coherent error".to_string()),
                None,
                None,
                None,
            ),
            Err(e) => return Err(e),
        };
    Ok(BoundReport {
        c: res.c,
        lambda: res.lambda,
        gap: res.gap,
        near_degenerate: res.near_degenerate,
        fidelity,
        sigma: met.sigma,
        q: met.q,
        q_min: met.q_min,
        delta_upper_arg: met.delta_upper,
        delta_lower_arg: met.delta_lower,
        upper_bound: commutator_upper_bound(&met),
        lower_bound: commutator_lower_bound(&met),
        ratio_estimate: bound_ratio(met.q, met.q_min)?,
        noise_floor: res.c.sqrt(),
        eta,
        mu1,
        delta,
        delta_bound,
        decomposition_note: note,
        weyl_lambda_range: weyl.map(|w| w.0),
        weyl_lambda2_range: weyl.map(|w| w.1),
        copies_general: copies_g,
        copies_eigenstate: copies_e,
    })
}
