use thiserror::Error;

#[derive(Debug, Error)]
pub enum MismatchError {
    #[error("matrix is not Hermitian within tolerance (residual {residual:.3e})")]
    NonHermitianInput { residual: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid dimension {dim} (need at least {min})")]
    InvalidDimension { dim: usize, min: usize },
    #[error("eta = {eta} outside (0, 1]")]
    EtaOutOfRange { eta: f64 },
    #[error("no eta-decomposition exists (purely coherent error)")]
    NoDecomposition,
    #[error("fidelity is zero within tolerance")]
    ZeroFidelity,
    #[error("invalid probability distribution: {reason}")]
    InvalidDistribution { reason: String },
    #[error("dominant eigenvalue is degenerate (gap {gap:.3e})")]
    DegenerateDominantEigenvalue { gap: f64 },
    #[error("first-order perturbation singular: |F - D_k| = {gap:.3e}")]
    PerturbationSingular { gap: f64 },
    #[error("parameter out of range: {reason}")]
    ParameterOutOfRange { reason: String },
    #[error("infeasible specification: {reason}")]
    InfeasibleSpec { reason: String },
    #[error("degenerate input: {reason}")]
    DegenerateInput { reason: String },
    #[error("too many qubits: {qubits} (limit {limit})")]
    TooManyQubits { qubits: usize, limit: usize },
    #[error("branch enumeration infeasible for {gates} gates (limit {limit})")]
    BranchExplosion { gates: usize, limit: usize },
    #[error("channel unsupported here: {reason}")]
    UnsupportedChannel { reason: String },
}

pub type Result<T> = std::result::Result<T, MismatchError>;
