//! Small-qubit noisy-circuit simulation (statevector and density matrix),
//! exact error-branch enumeration for single-Kraus channels, and the f(xi)
//! commutator-norm bound family.

use ndarray::{Array1, Array2};
use ndarray_linalg::c64;
use rand::Rng;

use crate::error::{MismatchError, Result};
use crate::linalg::{adjoint, inner};
use crate::states::{seeded_rng, DensityMatrix, PureState};

pub const MAX_STATEVECTOR_QUBITS: usize = 12;
pub const MAX_DENSITY_QUBITS: usize = 10;
/// Gate cap for branch enumeration (2^nu branches for single-qubit gates).
pub const MAX_BRANCH_GATES: usize = 14;
/// Hard cap on error slots; two-qubit gates contribute two slots each.
const MAX_BRANCH_SLOTS: usize = 24;
/// Branch tables beyond this many rows are not materialized.
const MAX_BRANCH_TABLE: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Rx,
    Rz,
    Cnot,
    Xx,
}

#[derive(Debug, Clone)]
pub struct GateOp {
    pub kind: GateKind,
    /// One qubit for rotations, (control, target) or the XX pair otherwise.
    pub targets: Vec<usize>,
    /// Rotation angle; ignored for CNOT.
    pub angle: f64,
}

impl GateOp {
    pub fn rx(q: usize, angle: f64) -> Self {
        Self { kind: GateKind::Rx, targets: vec![q], angle }
    }
    pub fn rz(q: usize, angle: f64) -> Self {
        Self { kind: GateKind::Rz, targets: vec![q], angle }
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Self { kind: GateKind::Cnot, targets: vec![control, target], angle: 0.0 }
    }
    pub fn xx(a: usize, b: usize, angle: f64) -> Self {
        Self { kind: GateKind::Xx, targets: vec![a, b], angle }
    }

    fn validate(&self, qubits: usize) -> Result<()> {
        let ok = match self.kind {
            GateKind::Rx | GateKind::Rz => self.targets.len() == 1,
            GateKind::Cnot | GateKind::Xx => {
                self.targets.len() == 2 && self.targets[0] != self.targets[1]
            }
        };
        if !ok || self.targets.iter().any(|&t| t >= qubits) {
            return Err(MismatchError::ParameterOutOfRange {
                reason: format!("gate targets {:?} invalid for {qubits} qubits", self.targets),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseChannel {
    Dephasing,
    Depolarising,
    Damping,
    Noiseless,
}

#[derive(Debug, Clone)]
pub struct NoiseSpec {
    pub channel: NoiseChannel,
    /// Per-gate error probability.
    pub epsilon: f64,
    /// Optional per-gate overrides of epsilon.
    pub per_gate: Option<Vec<f64>>,
}

impl NoiseSpec {
    pub fn new(channel: NoiseChannel, epsilon: f64) -> Self {
        Self { channel, epsilon, per_gate: None }
    }
    pub fn noiseless() -> Self {
        Self::new(NoiseChannel::Noiseless, 0.0)
    }
    fn epsilon_for(&self, gate_index: usize) -> f64 {
        self.per_gate
            .as_ref()
            .and_then(|v| v.get(gate_index).copied())
            .unwrap_or(self.epsilon)
    }
}

#[derive(Debug, Clone)]
pub struct CircuitSpec {
    pub qubits: usize,
    pub gates: Vec<GateOp>,
    pub noise: NoiseSpec,
    pub seed: u64,
}

impl CircuitSpec {
    fn validate(&self) -> Result<()> {
        if self.gates.is_empty() {
            return Err(MismatchError::ParameterOutOfRange {
                reason: "circuit needs at least one gate".into(),
            });
        }
        if !(self.noise.epsilon >= 0.0 && self.noise.epsilon < 1.0) {
            return Err(MismatchError::ParameterOutOfRange {
                reason: format!("epsilon = {} outside [0, 1)", self.noise.epsilon),
            });
        }
        for g in &self.gates {
            g.validate(self.qubits)?;
        }
        Ok(())
    }

    /// Total expected error count xi = sum of per-gate epsilons.
    pub fn xi(&self) -> f64 {
        (0..self.gates.len()).map(|i| self.noise.epsilon_for(i)).sum()
    }
}

// --- statevector kernels ---

fn apply_1q(state: &mut [c64], g: &[[c64; 2]; 2], q: usize) {
    let stride = 1usize << q;
    let n = state.len();
    let mut base = 0;
    while base < n {
        for i in base..base + stride {
            let a = state[i];
            let b = state[i + stride];
            state[i] = g[0][0] * a + g[0][1] * b;
            state[i + stride] = g[1][0] * a + g[1][1] * b;
        }
        base += 2 * stride;
    }
}

fn apply_cnot(state: &mut [c64], control: usize, target: usize) {
    let cm = 1usize << control;
    let tm = 1usize << target;
    for i in 0..state.len() {
        if i & cm != 0 && i & tm == 0 {
            state.swap(i, i | tm);
        }
    }
}

fn apply_xx(state: &mut [c64], a: usize, b: usize, angle: f64) {
    let mask = (1usize << a) | (1usize << b);
    let cos = c64::new((angle / 2.0).cos(), 0.0);
    let misin = c64::new(0.0, -(angle / 2.0).sin());
    for i in 0..state.len() {
        let j = i ^ mask;
        if i < j {
            let x = state[i];
            let y = state[j];
            state[i] = cos * x + misin * y;
            state[j] = cos * y + misin * x;
        }
    }
}

fn rx_matrix(angle: f64) -> [[c64; 2]; 2] {
    let c = c64::new((angle / 2.0).cos(), 0.0);
    let s = c64::new(0.0, -(angle / 2.0).sin());
    [[c, s], [s, c]]
}

fn rz_matrix(angle: f64) -> [[c64; 2]; 2] {
    let zero = c64::new(0.0, 0.0);
    [
        [c64::from_polar(1.0, -angle / 2.0), zero],
        [zero, c64::from_polar(1.0, angle / 2.0)],
    ]
}

fn apply_gate(state: &mut [c64], gate: &GateOp) {
    match gate.kind {
        GateKind::Rx => apply_1q(state, &rx_matrix(gate.angle), gate.targets[0]),
        GateKind::Rz => apply_1q(state, &rz_matrix(gate.angle), gate.targets[0]),
        GateKind::Cnot => apply_cnot(state, gate.targets[0], gate.targets[1]),
        GateKind::Xx => apply_xx(state, gate.targets[0], gate.targets[1], gate.angle),
    }
}

fn apply_z(state: &mut [c64], q: usize) {
    let m = 1usize << q;
    for (i, x) in state.iter_mut().enumerate() {
        if i & m != 0 {
            *x = -*x;
        }
    }
}

// --- density-matrix kernels ---

/// rho <- G rho G† for a unitary gate G given as a column action.
fn conjugate_density<FG: Fn(&mut [c64])>(rho: &mut Array2<c64>, apply: FG) {
    let dim = rho.nrows();
    // Left multiply: act on each column.
    for j in 0..dim {
        let mut col: Vec<c64> = (0..dim).map(|i| rho[[i, j]]).collect();
        apply(&mut col);
        for i in 0..dim {
            rho[[i, j]] = col[i];
        }
    }
    // Right multiply by G†: conjugate, act on columns of rho†, conjugate back.
    let mut rt = adjoint(rho);
    for j in 0..dim {
        let mut col: Vec<c64> = (0..dim).map(|i| rt[[i, j]]).collect();
        apply(&mut col);
        for i in 0..dim {
            rt[[i, j]] = col[i];
        }
    }
    *rho = adjoint(&rt);
}

/// rho <- sum_j K_j rho K_j† for single-qubit Kraus operators on qubit q.
fn apply_kraus_1q(rho: &Array2<c64>, kraus: &[[[c64; 2]; 2]], q: usize) -> Array2<c64> {
    let dim = rho.nrows();
    let mut out = Array2::zeros((dim, dim));
    for k in kraus {
        let mut term = rho.clone();
        conjugate_density(&mut term, |col| apply_1q(col, k, q));
        out = out + term;
    }
    out
}

fn pauli_x() -> [[c64; 2]; 2] {
    let zero = c64::new(0.0, 0.0);
    let one = c64::new(1.0, 0.0);
    [[zero, one], [one, zero]]
}

fn pauli_y() -> [[c64; 2]; 2] {
    let zero = c64::new(0.0, 0.0);
    [[zero, c64::new(0.0, -1.0)], [c64::new(0.0, 1.0), zero]]
}

fn pauli_z() -> [[c64; 2]; 2] {
    let zero = c64::new(0.0, 0.0);
    let one = c64::new(1.0, 0.0);
    [[one, zero], [zero, -one]]
}

fn scaled(g: [[c64; 2]; 2], s: f64) -> [[c64; 2]; 2] {
    let s = c64::new(s, 0.0);
    [[g[0][0] * s, g[0][1] * s], [g[1][0] * s, g[1][1] * s]]
}

fn identity_2() -> [[c64; 2]; 2] {
    let zero = c64::new(0.0, 0.0);
    let one = c64::new(1.0, 0.0);
    [[one, zero], [zero, one]]
}

/// Kraus set of the per-qubit noise event with probability p.
fn channel_kraus(channel: NoiseChannel, p: f64) -> Vec<[[c64; 2]; 2]> {
    match channel {
        NoiseChannel::Noiseless => vec![identity_2()],
        NoiseChannel::Dephasing => vec![
            scaled(identity_2(), (1.0 - p).sqrt()),
            scaled(pauli_z(), p.sqrt()),
        ],
        NoiseChannel::Depolarising => vec![
            scaled(identity_2(), (1.0 - p).sqrt()),
            scaled(pauli_x(), (p / 3.0).sqrt()),
            scaled(pauli_y(), (p / 3.0).sqrt()),
            scaled(pauli_z(), (p / 3.0).sqrt()),
        ],
        NoiseChannel::Damping => {
            let zero = c64::new(0.0, 0.0);
            let one = c64::new(1.0, 0.0);
            vec![
                [[one, zero], [zero, c64::new((1.0 - p).sqrt(), 0.0)]],
                [[zero, c64::new(p.sqrt(), 0.0)], [zero, zero]],
            ]
        }
    }
}

/// Per-qubit noise events attached to one gate: (qubit, probability). The
/// error budget of a two-qubit gate is split evenly between its targets;
/// damping keeps the full per-qubit rate on every touched qubit.
fn noise_slots(gate: &GateOp, channel: NoiseChannel, eps: f64) -> Vec<(usize, f64)> {
    if channel == NoiseChannel::Noiseless || eps == 0.0 {
        return Vec::new();
    }
    match gate.targets.len() {
        1 => vec![(gate.targets[0], eps)],
        _ => {
            let per = if channel == NoiseChannel::Damping { eps } else { eps / 2.0 };
            gate.targets.iter().map(|&q| (q, per)).collect()
        }
    }
}

/// Ideal statevector U_nu ... U_1 |0...0>.
pub fn simulate_ideal(spec: &CircuitSpec) -> Result<PureState> {
    spec.validate()?;
    if spec.qubits > MAX_STATEVECTOR_QUBITS {
        return Err(MismatchError::TooManyQubits {
            qubits: spec.qubits,
            limit: MAX_STATEVECTOR_QUBITS,
        });
    }
    let dim = 1usize << spec.qubits;
    let mut state = vec![c64::new(0.0, 0.0); dim];
    state[0] = c64::new(1.0, 0.0);
    for gate in &spec.gates {
        apply_gate(&mut state, gate);
    }
    PureState::normalized(Array1::from(state))
}

/// Noisy density-matrix evolution: each ideal gate followed by its noise
/// events on the touched qubits.
pub fn simulate_density(spec: &CircuitSpec) -> Result<DensityMatrix> {
    spec.validate()?;
    if spec.qubits > MAX_DENSITY_QUBITS {
        return Err(MismatchError::TooManyQubits {
            qubits: spec.qubits,
            limit: MAX_DENSITY_QUBITS,
        });
    }
    let dim = 1usize << spec.qubits;
    let mut rho = Array2::<c64>::zeros((dim, dim));
    rho[[0, 0]] = c64::new(1.0, 0.0);
    for (gi, gate) in spec.gates.iter().enumerate() {
        conjugate_density(&mut rho, |col| apply_gate(col, gate));
        let eps = spec.noise.epsilon_for(gi);
        for (q, p) in noise_slots(gate, spec.noise.channel, eps) {
            let kraus = channel_kraus(spec.noise.channel, p);
            rho = apply_kraus_1q(&rho, &kraus, q);
        }
    }
    let rho = (&rho + &adjoint(&rho)).mapv(|x| x * 0.5);
    Ok(DensityMatrix::new_unchecked(rho))
}

#[derive(Debug, Clone)]
pub struct CircuitRunResult {
    pub rho: DensityMatrix,
    pub psi_id: PureState,
    /// Variance <psi_id|rho^2|psi_id> - F^2 of the simulated state.
    pub sigma2: f64,
    pub xi: f64,
    pub eta_tilde: f64,
    pub f_exact: f64,
    pub f_approx: f64,
}

/// Simulate the circuit and report sigma^2 alongside the f(xi) bounds.
pub fn circuit_sigma2(spec: &CircuitSpec) -> Result<CircuitRunResult> {
    let psi_id = simulate_ideal(spec)?;
    let rho = simulate_density(spec)?;
    // sigma^2 = ||rho psi||^2 - F^2; avoids a full eigendecomposition and
    // stays defined even when the dominant eigenvalue degenerates.
    let rho_psi = rho.matrix().dot(psi_id.amplitudes());
    let f = inner(psi_id.amplitudes(), &rho_psi).re;
    let sigma2 = (rho_psi.iter().map(|x| x.norm_sqr()).sum::<f64>() - f * f).max(0.0);
    let nu = spec.gates.len() as f64;
    let xi = spec.xi();
    Ok(CircuitRunResult {
        rho,
        psi_id,
        sigma2,
        xi,
        eta_tilde: eta_tilde(xi, nu)?,
        f_exact: f_bound(xi, nu, FBoundForm::Exact)?,
        f_approx: f_bound(xi, nu, FBoundForm::Approx)?,
    })
}

#[derive(Debug, Clone)]
pub struct BranchRecord {
    /// Product of slot probabilities for this error pattern.
    pub probability: f64,
    /// <psi_id | E_k>.
    pub overlap: c64,
    /// |<psi_id | E_k>|.
    pub a: f64,
    /// Number of error events in the pattern.
    pub errors: u32,
}

#[derive(Debug, Clone)]
pub struct BranchEnumeration {
    pub sigma2: f64,
    /// Per-branch records; empty when the branch count exceeds the table cap
    /// (sigma2 is still exact).
    pub table: Vec<BranchRecord>,
}

enum Step {
    Gate(usize),
    Slot { qubit: usize, prob: f64 },
}

/// Exact sigma^2 by enumerating every error pattern of a dephasing circuit:
/// sigma^2 = ||phi||^2 - |<psi_id|phi>|^2 with
/// phi = sum_k p_k <E_k|psi_id> |E_k> over the 2^slots - 1 error branches.
pub fn enumerate_branches(spec: &CircuitSpec) -> Result<BranchEnumeration> {
    spec.validate()?;
    if spec.noise.channel != NoiseChannel::Dephasing {
        return Err(MismatchError::UnsupportedChannel {
            reason: "branch enumeration needs a single-Kraus (dephasing) channel".into(),
        });
    }
    if spec.gates.len() > MAX_BRANCH_GATES {
        return Err(MismatchError::BranchExplosion {
            gates: spec.gates.len(),
            limit: MAX_BRANCH_GATES,
        });
    }
    if spec.qubits > MAX_STATEVECTOR_QUBITS {
        return Err(MismatchError::TooManyQubits {
            qubits: spec.qubits,
            limit: MAX_STATEVECTOR_QUBITS,
        });
    }
    let mut steps = Vec::new();
    let mut n_slots = 0usize;
    for (gi, gate) in spec.gates.iter().enumerate() {
        steps.push(Step::Gate(gi));
        let eps = spec.noise.epsilon_for(gi);
        for (q, p) in noise_slots(gate, spec.noise.channel, eps) {
            steps.push(Step::Slot { qubit: q, prob: p });
            n_slots += 1;
        }
    }
    if n_slots > MAX_BRANCH_SLOTS {
        return Err(MismatchError::BranchExplosion {
            gates: spec.gates.len(),
            limit: MAX_BRANCH_GATES,
        });
    }
    let psi_id = simulate_ideal(spec)?;
    let dim = 1usize << spec.qubits;
    let keep_table = n_slots == 0 || (1usize << n_slots) <= MAX_BRANCH_TABLE;

    struct Walker<'a> {
        spec: &'a CircuitSpec,
        steps: &'a [Step],
        psi_id: &'a Array1<c64>,
        phi: Array1<c64>,
        table: Vec<BranchRecord>,
        keep_table: bool,
    }
    impl Walker<'_> {
        fn walk(&mut self, mut state: Vec<c64>, idx: usize, prob: f64, errors: u32) {
            let mut i = idx;
            while i < self.steps.len() {
                match &self.steps[i] {
                    Step::Gate(gi) => {
                        apply_gate(&mut state, &self.spec.gates[*gi]);
                        i += 1;
                    }
                    Step::Slot { qubit, prob: p } => {
                        let mut erred = state.clone();
                        apply_z(&mut erred, *qubit);
                        self.walk(erred, i + 1, prob * p, errors + 1);
                        // No-error path continues in place.
                        return self.walk(state, i + 1, prob * (1.0 - p), errors);
                    }
                }
            }
            if errors == 0 {
                return;
            }
            let branch = Array1::from(state);
            let overlap = inner(self.psi_id, &branch);
            let coeff = overlap.conj() * prob;
            self.phi = &self.phi + &branch.mapv(|x| x * coeff);
            if self.keep_table {
                self.table.push(BranchRecord {
                    probability: prob,
                    overlap,
                    a: overlap.norm(),
                    errors,
                });
            }
        }
    }

    let mut init = vec![c64::new(0.0, 0.0); dim];
    init[0] = c64::new(1.0, 0.0);
    let mut walker = Walker {
        spec,
        steps: &steps,
        psi_id: psi_id.amplitudes(),
        phi: Array1::zeros(dim),
        table: Vec::new(),
        keep_table,
    };
    walker.walk(init, 0, 1.0, 0);
    let phi = walker.phi;
    let norm2: f64 = phi.iter().map(|x| x.norm_sqr()).sum();
    let sigma2 = (norm2 - inner(psi_id.amplitudes(), &phi).norm_sqr()).max(0.0);
    Ok(BranchEnumeration {
        sigma2,
        table: walker.table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FBoundForm {
    Exact,
    Approx,
}

/// Upper-bound family for sigma^2 as a function of the circuit error rate:
/// exact (1-e)^{2v} [((1 - 2(1-e)e)/(1-e)^2)^v - 1] with e = xi/v, or the
/// large-v approximation e^{-2 xi} xi^2 / v.
pub fn f_bound(xi: f64, nu: f64, form: FBoundForm) -> Result<f64> {
    if !(nu >= 1.0) || !(xi >= 0.0 && xi < nu) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("need nu >= 1 and 0 <= xi < nu, got xi = {xi}, nu = {nu}"),
        });
    }
    Ok(match form {
        FBoundForm::Exact => {
            let e = xi / nu;
            let base = (1.0 - 2.0 * (1.0 - e) * e) / ((1.0 - e) * (1.0 - e));
            (1.0 - e).powf(2.0 * nu) * (base.powf(nu) - 1.0)
        }
        FBoundForm::Approx => (-2.0 * xi).exp() * xi * xi / nu,
    })
}

/// f bound generalized to Kraus rank K (rescale by 1/K) and a commuting
/// fraction kappa of the error operators (rescale to 4(1-kappa) times the
/// exact bound at argument 2(1-kappa) xi with nu' = (1-kappa) nu).
pub fn f_bound_general(xi: f64, nu: f64, kraus_rank: u32, kappa: f64) -> Result<f64> {
    if kraus_rank < 1 {
        return Err(MismatchError::ParameterOutOfRange {
            reason: "Kraus rank must be >= 1".into(),
        });
    }
    if !(0.0..1.0).contains(&kappa) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("kappa = {kappa} outside [0, 1)"),
        });
    }
    let base = if kappa > 0.0 {
        4.0 * (1.0 - kappa) * f_bound(2.0 * (1.0 - kappa) * xi, (1.0 - kappa) * nu, FBoundForm::Exact)?
    } else {
        f_bound(xi, nu, FBoundForm::Exact)?
    };
    Ok(base / kraus_rank as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleMode {
    /// theta_k uniform in (-pi, pi).
    Uniform,
    /// theta_k = 0.01 k.
    Linear,
    /// theta_k = 0.2.
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entangler {
    Cnot,
    Xx,
}

/// Random circuit: nu gates drawn uniformly from {Rx, Rz, entangler} on
/// uniformly random (distinct) targets, with angles set by the mode.
pub fn random_circuit(
    qubits: usize,
    nu: usize,
    angle_mode: AngleMode,
    entangler: Entangler,
    seed: u64,
) -> Result<CircuitSpec> {
    if qubits < 2 {
        return Err(MismatchError::InvalidDimension { dim: qubits, min: 2 });
    }
    if nu < 1 {
        return Err(MismatchError::ParameterOutOfRange {
            reason: "nu must be >= 1".into(),
        });
    }
    let mut rng = seeded_rng(seed);
    let mut gates = Vec::with_capacity(nu);
    for k in 1..=nu {
        let angle = match angle_mode {
            AngleMode::Uniform => rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            AngleMode::Linear => 0.01 * k as f64,
            AngleMode::Constant => 0.2,
        };
        let kind = rng.gen_range(0..3u32);
        let gate = match kind {
            0 => GateOp::rx(rng.gen_range(0..qubits), angle),
            1 => GateOp::rz(rng.gen_range(0..qubits), angle),
            _ => {
                let a = rng.gen_range(0..qubits);
                let mut b = rng.gen_range(0..qubits - 1);
                if b >= a {
                    b += 1;
                }
                match entangler {
                    Entangler::Cnot => GateOp::cnot(a, b),
                    Entangler::Xx => GateOp::xx(a, b, angle),
                }
            }
        };
        gates.push(gate);
    }
    Ok(CircuitSpec {
        qubits,
        gates,
        noise: NoiseSpec::noiseless(),
        seed,
    })
}

/// No-error weight (1 - xi/nu)^nu, a lower bound on eta for the K=1 model.
pub fn eta_tilde(xi: f64, nu: f64) -> Result<f64> {
    if !(nu >= 1.0) || !(xi >= 0.0 && xi < nu) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("need nu >= 1 and 0 <= xi < nu, got xi = {xi}, nu = {nu}"),
        });
    }
    Ok((1.0 - xi / nu).powf(nu))
}

/// Unit-constant scaling estimate xi^2 / (nu (1 - Q)^2) for the mismatch.
pub fn mismatch_scaling_estimate(xi: f64, nu: f64, q: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("Q = {q} outside [0, 1)"),
        });
    }
    if !(nu >= 1.0) || !(xi >= 0.0 && xi < nu) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("need nu >= 1 and 0 <= xi < nu, got xi = {xi}, nu = {nu}"),
        });
    }
    Ok(xi * xi / (nu * (1.0 - q) * (1.0 - q)))
}

/// Companion estimate of the ratio (1 - c)/F ~ e^xi - e^xi xi^2 / nu.
pub fn fidelity_ratio_estimate(xi: f64, nu: f64) -> Result<f64> {
    if !(nu >= 1.0) || !(xi >= 0.0 && xi < nu) {
        return Err(MismatchError::ParameterOutOfRange {
            reason: format!("need nu >= 1 and 0 <= xi < nu, got xi = {xi}, nu = {nu}"),
        });
    }
    Ok(xi.exp() * (1.0 - xi * xi / nu))
}
