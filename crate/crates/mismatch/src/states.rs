//! Pure states, density matrices, random ensembles and the eta/delta
//! decomposition rho = eta * rho_id + (1 - eta) * rho_err.

use ndarray::{Array1, Array2};
use ndarray_linalg::c64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{MismatchError, Result};
use crate::linalg::{
    self, adjoint, fidelity_pure, hermitian_eig, hermitian_eigvals, hermiticity_residual,
};

/// Seeded stream RNG used everywhere; a 64-bit seed fully determines output.
pub fn seeded_rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct PureState {
    amplitudes: Array1<c64>,
}

impl PureState {
    pub fn new(amplitudes: Array1<c64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(MismatchError::InvalidDistribution {
                reason: format!("state vector norm {norm} != 1"),
            });
        }
        Ok(Self { amplitudes })
    }

    /// Normalize an arbitrary non-zero vector.
    pub fn normalized(mut amplitudes: Array1<c64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(MismatchError::InvalidDistribution {
                reason: "cannot normalize zero vector".into(),
            });
        }
        amplitudes.mapv_inplace(|x| x / norm);
        Ok(Self { amplitudes })
    }

    /// Computational basis vector e_k.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Array1::zeros(dim);
        v[k] = c64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<c64> {
        &self.amplitudes
    }

    pub fn projector(&self) -> Array2<c64> {
        linalg::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn overlap(&self, other: &PureState) -> c64 {
        linalg::inner(&self.amplitudes, &other.amplitudes)
    }
}

#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: Array2<c64>,
}

impl DensityMatrix {
    /// Validates trace 1, Hermiticity and positivity (up to numerical slack).
    pub fn new(matrix: Array2<c64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(MismatchError::DimensionMismatch {
                left: matrix.nrows(),
                right: matrix.ncols(),
            });
        }
        let tr: c64 = matrix.diag().iter().sum();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(MismatchError::InvalidDistribution {
                reason: format!("trace {tr} != 1"),
            });
        }
        let residual = hermiticity_residual(&matrix);
        if residual > 1e-12 {
            return Err(MismatchError::NonHermitianInput { residual });
        }
        let vals = hermitian_eigvals(&matrix)?;
        let min = vals[vals.len() - 1];
        if min < -1e-10 {
            return Err(MismatchError::InvalidDistribution {
                reason: format!("negative eigenvalue {min:.3e}"),
            });
        }
        Ok(Self { matrix })
    }

    /// Skips validation; for internal constructions that hold by design.
    pub(crate) fn new_unchecked(matrix: Array2<c64>) -> Self {
        Self { matrix }
    }

    pub fn pure(psi: &PureState) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mut m = Array2::zeros((dim, dim));
        for i in 0..dim {
            m[[i, i]] = c64::new(1.0 / dim as f64, 0.0);
        }
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<c64> {
        &self.matrix
    }

    pub fn eig(&self) -> Result<linalg::HermitianEigenSystem> {
        hermitian_eig(&self.matrix)
    }

    pub fn fidelity(&self, psi: &PureState) -> Result<f64> {
        fidelity_pure(psi.amplitudes(), &self.matrix)
    }

    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        linalg::trace_distance(&self.matrix, &other.matrix)
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|x| x.norm_sqr()).sum()
    }
}

#[derive(Debug, Clone)]
pub struct EtaDecomposition {
    pub eta: f64,
    pub rho_err: DensityMatrix,
    /// Largest eigenvalue of rho_err.
    pub mu1: f64,
    /// (1/eta - 1) * mu1, the eigenvalue ratio driving the mismatch bounds.
    pub delta: f64,
}

fn complex_normal<R: Rng>(rng: &mut R) -> c64 {
    c64::new(
        rng.sample::<f64, _>(StandardNormal) / f64::sqrt(2.0),
        rng.sample::<f64, _>(StandardNormal) / f64::sqrt(2.0),
    )
}

pub fn haar_random_pure_rng<R: Rng>(dim: usize, rng: &mut R) -> Result<PureState> {
    if dim < 2 {
        return Err(MismatchError::InvalidDimension { dim, min: 2 });
    }
    let v = Array1::from_shape_fn(dim, |_| complex_normal(rng));
    PureState::normalized(v)
}

pub fn haar_random_pure(dim: usize, seed: u64) -> Result<PureState> {
    haar_random_pure_rng(dim, &mut seeded_rng(seed))
}

/// Haar unitary: QR of a complex Ginibre matrix with the R diagonal's phases
/// absorbed into Q.
pub fn haar_random_unitary_rng<R: Rng>(dim: usize, rng: &mut R) -> Result<Array2<c64>> {
    use ndarray_linalg::QRSquare;
    if dim < 2 {
        return Err(MismatchError::InvalidDimension { dim, min: 2 });
    }
    let g = Array2::from_shape_fn((dim, dim), |_| complex_normal(rng));
    let (q, r) = g.qr_square().map_err(|_| MismatchError::InvalidDistribution {
        reason: "QR factorization failed".into(),
    })?;
    let mut u = q;
    for j in 0..dim {
        let phase = r[[j, j]] / r[[j, j]].norm();
        for i in 0..dim {
            u[[i, j]] *= phase;
        }
    }
    Ok(u)
}

/// Uniform point on the probability simplex via sorted-uniform spacings,
/// returned descending.
pub fn random_simplex_rng<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..dim - 1).map(|_| rng.gen::<f64>()).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut p = Vec::with_capacity(dim);
    let mut prev = 0.0;
    for &c in &cuts {
        p.push(c - prev);
        prev = c;
    }
    p.push(1.0 - prev);
    p.sort_by(|a, b| b.partial_cmp(a).unwrap());
    p
}

/// Random density matrix: uniform-simplex eigenvalues in a Haar-random basis.
pub fn random_density_rng<R: Rng>(dim: usize, rng: &mut R) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(MismatchError::InvalidDimension { dim, min: 2 });
    }
    let p = random_simplex_rng(dim, rng);
    let u = haar_random_unitary_rng(dim, rng)?;
    let mut scaled = u.clone();
    for j in 0..dim {
        for i in 0..dim {
            scaled[[i, j]] *= p[j];
        }
    }
    let m = scaled.dot(&adjoint(&u));
    // Symmetrize away round-off from the two products.
    let m = (&m + &adjoint(&m)).mapv(|x| x * 0.5);
    Ok(DensityMatrix::new_unchecked(m))
}

pub fn random_density(dim: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_rng(dim, &mut seeded_rng(seed))
}

/// eta * |psi_id><psi_id| + (1 - eta) * rho_err.
pub fn mix(eta: f64, psi_id: &PureState, rho_err: &DensityMatrix) -> Result<DensityMatrix> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(MismatchError::EtaOutOfRange { eta });
    }
    if psi_id.dim() != rho_err.dim() {
        return Err(MismatchError::DimensionMismatch {
            left: psi_id.dim(),
            right: rho_err.dim(),
        });
    }
    let m = psi_id.projector().mapv(|x| x * eta) + rho_err.matrix().mapv(|x| x * (1.0 - eta));
    Ok(DensityMatrix::new_unchecked(m))
}

/// Largest eta for which (rho - eta |psi_id><psi_id|) stays positive
/// semidefinite, found by bisection so rank-deficient inputs work too.
pub fn optimal_eta(rho: &DensityMatrix, psi_id: &PureState) -> Result<EtaDecomposition> {
    if rho.dim() != psi_id.dim() {
        return Err(MismatchError::DimensionMismatch {
            left: rho.dim(),
            right: psi_id.dim(),
        });
    }
    let fid = rho.fidelity(psi_id)?;
    if fid <= 1e-12 {
        return Err(MismatchError::ZeroFidelity);
    }
    let proj = psi_id.projector();
    let min_eig = |eta: f64| -> Result<f64> {
        let m = rho.matrix() - &proj.mapv(|x| x * eta);
        let vals = hermitian_eigvals(&m)?;
        Ok(vals[vals.len() - 1])
    };
    // rho itself is PSD up to slack, so lo is feasible; F upper-bounds eta.
    let (mut lo, mut hi) = (0.0f64, fid.min(1.0));
    if min_eig(hi)? >= -1e-14 {
        lo = hi;
    } else {
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if min_eig(mid)? >= -1e-14 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let eta = lo;
    if eta <= 1e-12 {
        return Err(MismatchError::NoDecomposition);
    }
    if 1.0 - eta <= 1e-12 {
        // rho is the ideal projector; the remainder is empty.
        return Ok(EtaDecomposition {
            eta: 1.0,
            rho_err: DensityMatrix::pure(psi_id),
            mu1: 1.0,
            delta: 0.0,
        });
    }
    let rem = (rho.matrix() - &proj.mapv(|x| x * eta)).mapv(|x| x / (1.0 - eta));
    let rem = (&rem + &adjoint(&rem)).mapv(|x| x * 0.5);
    let rho_err = DensityMatrix::new_unchecked(rem);
    let mu1 = rho_err.eig()?.eigenvalues[0];
    let delta = (1.0 / eta - 1.0) * mu1;
    Ok(EtaDecomposition {
        eta,
        rho_err,
        mu1,
        delta,
    })
}

/// Renyi entropy of order n; n = infinity gives -ln(max p), n = 1 Shannon.
pub fn renyi_entropy(p: &[f64], n: f64) -> Result<f64> {
    if p.iter().any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(MismatchError::InvalidDistribution {
            reason: "negative or non-finite entry".into(),
        });
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(MismatchError::InvalidDistribution {
            reason: format!("sum {sum} != 1"),
        });
    }
    if !(n > 0.0) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("Renyi order {n} must be positive"),
        });
    }
    if n.is_infinite() {
        let max = p.iter().cloned().fold(0.0, f64::max);
        return Ok(-max.ln());
    }
    if (n - 1.0).abs() < 1e-12 {
        return Ok(-p
            .iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| x * x.ln())
            .sum::<f64>());
    }
    let s: f64 = p.iter().map(|&x| x.powf(n)).sum();
    Ok(s.ln() / (1.0 - n))
}
