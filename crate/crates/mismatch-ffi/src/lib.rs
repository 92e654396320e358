//! C ABI surface over the mismatch library. Handles are opaque pointers
//! created and destroyed here; every function returns a status code and
//! writes results through out-pointers. Complex buffers are interleaved
//! (re, im) pairs in row-major order.

use std::ptr;

use ndarray::{Array1, Array2};
use ndarray_linalg::c64;

use mismatch::bounds::bound_report;
use mismatch::distillation::noise_floor_trace;
use mismatch::states::{DensityMatrix, PureState};
use mismatch::MismatchError;

/// Status codes for every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MismatchStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    DimensionMismatch = 3,
    Degenerate = 4,
    Infeasible = 5,
}

fn status_of(e: &MismatchError) -> MismatchStatus {
    match e {
        MismatchError::DimensionMismatch { .. } | MismatchError::InvalidDimension { .. } => {
            MismatchStatus::DimensionMismatch
        }
        MismatchError::NonHermitianInput { .. } | MismatchError::InvalidDistribution { .. } => {
            MismatchStatus::InvalidInput
        }
        MismatchError::DegenerateDominantEigenvalue { .. }
        | MismatchError::DegenerateInput { .. }
        | MismatchError::PerturbationSingular { .. } => MismatchStatus::Degenerate,
        _ => MismatchStatus::Infeasible,
    }
}

/// Opaque density-matrix handle.
pub struct MismatchState {
    inner: DensityMatrix,
}

/// Opaque pure-state handle.
pub struct MismatchPure {
    inner: PureState,
}

/// Flat analysis report; `has_decomposition` gates the eta/mu1/delta fields
/// and `has_delta_bound` gates `delta_bound` (absent when delta > 1).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MismatchReport {
    pub c: f64,
    pub lambda: f64,
    pub gap: f64,
    pub near_degenerate: bool,
    pub fidelity: f64,
    pub sigma: f64,
    pub upper_bound: f64,
    pub lower_bound: f64,
    pub noise_floor: f64,
    pub has_decomposition: bool,
    pub eta: f64,
    pub mu1: f64,
    pub delta: f64,
    pub has_delta_bound: bool,
    pub delta_bound: f64,
}

unsafe fn slice_from<'a>(data: *const f64, len: usize) -> Option<&'a [f64]> {
    if data.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(data, len))
    }
}

/// Create a density-matrix handle from `dim * dim` row-major complex entries
/// given as `2 * dim * dim` doubles (re, im interleaved). Validates trace,
/// Hermiticity and positivity. On success writes the handle to `out`.
///
/// # Safety
/// `entries` must point to `2 * dim * dim` readable doubles and `out` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mismatch_state_new(
    dim: usize,
    entries: *const f64,
    out: *mut *mut MismatchState,
) -> MismatchStatus {
    if out.is_null() {
        return MismatchStatus::NullPointer;
    }
    let Some(raw) = slice_from(entries, 2 * dim * dim) else {
        return MismatchStatus::NullPointer;
    };
    let m = Array2::from_shape_fn((dim, dim), |(i, j)| {
        let k = 2 * (i * dim + j);
        c64::new(raw[k], raw[k + 1])
    });
    match DensityMatrix::new(m) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(MismatchState { inner }));
            MismatchStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            status_of(&e)
        }
    }
}

/// Create a pure-state handle from `dim` complex amplitudes given as
/// `2 * dim` doubles. The vector must be normalized.
///
/// # Safety
/// `amplitudes` must point to `2 * dim` readable doubles and `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mismatch_pure_new(
    dim: usize,
    amplitudes: *const f64,
    out: *mut *mut MismatchPure,
) -> MismatchStatus {
    if out.is_null() {
        return MismatchStatus::NullPointer;
    }
    let Some(raw) = slice_from(amplitudes, 2 * dim) else {
        return MismatchStatus::NullPointer;
    };
    let v = Array1::from_iter((0..dim).map(|i| c64::new(raw[2 * i], raw[2 * i + 1])));
    match PureState::new(v) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(MismatchPure { inner }));
            MismatchStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            status_of(&e)
        }
    }
}

/// Destroy a density-matrix handle. Null is a no-op.
///
/// # Safety
/// `state` must be a pointer previously returned by `mismatch_state_new`,
/// and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mismatch_state_free(state: *mut MismatchState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Destroy a pure-state handle. Null is a no-op.
///
/// # Safety
/// `pure` must be a pointer previously returned by `mismatch_pure_new`, and
/// must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mismatch_pure_free(pure: *mut MismatchPure) {
    if !pure.is_null() {
        drop(Box::from_raw(pure));
    }
}

/// Analyze a (state, ideal) pair: mismatch of the dominant eigenvector, the
/// commutator bounds, the optimal eta-decomposition when one exists, and the
/// distillation noise floor.
///
/// # Safety
/// All pointers must be valid handles/out-pointers from this library.
#[no_mangle]
pub unsafe extern "C" fn mismatch_analyze(
    state: *const MismatchState,
    ideal: *const MismatchPure,
    out: *mut MismatchReport,
) -> MismatchStatus {
    let (Some(state), Some(ideal), false) = (state.as_ref(), ideal.as_ref(), out.is_null())
    else {
        return MismatchStatus::NullPointer;
    };
    match bound_report(&state.inner, &ideal.inner) {
        Ok(rep) => {
            *out = MismatchReport {
                c: rep.c,
                lambda: rep.lambda,
                gap: rep.gap,
                near_degenerate: rep.near_degenerate,
                fidelity: rep.fidelity,
                sigma: rep.sigma,
                upper_bound: rep.upper_bound,
                lower_bound: rep.lower_bound,
                noise_floor: rep.noise_floor,
                has_decomposition: rep.eta.is_some(),
                eta: rep.eta.unwrap_or(f64::NAN),
                mu1: rep.mu1.unwrap_or(f64::NAN),
                delta: rep.delta.unwrap_or(f64::NAN),
                has_delta_bound: rep.delta_bound.is_some(),
                delta_bound: rep.delta_bound.unwrap_or(f64::NAN),
            };
            MismatchStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Trace distance of the n-fold distilled state to the ideal projector,
/// written to `out`.
///
/// # Safety
/// All pointers must be valid handles/out-pointers from this library.
#[no_mangle]
pub unsafe extern "C" fn mismatch_distilled_trace_distance(
    state: *const MismatchState,
    ideal: *const MismatchPure,
    n: u32,
    out: *mut f64,
) -> MismatchStatus {
    let (Some(state), Some(ideal), false) = (state.as_ref(), ideal.as_ref(), out.is_null())
    else {
        return MismatchStatus::NullPointer;
    };
    match noise_floor_trace(&state.inner, &ideal.inner, n.max(1)) {
        Ok(trace) => {
            *out = *trace.trace_distances.last().unwrap();
            MismatchStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}
