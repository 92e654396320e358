use mismatch::arrowhead::mismatch_direct;
use mismatch::bounds::{
    commutator_lower_bound, commutator_metrics, commutator_upper_bound, delta_upper_bound,
};
use mismatch::extremal::{
    best_case_commutator, limiting_global, worst_case_commutator, worst_case_delta,
};
use mismatch::linalg::{hermitian_eig, trace_distance};
use mismatch::states::{optimal_eta, random_simplex_rng, seeded_rng, DensityMatrix, PureState};
use mismatch::MismatchError;
use ndarray::Array2;
use ndarray_linalg::c64;
use rand::Rng;

#[test]
fn delta_worst_case_qubit_example() {
    // dim 2, eta = 0.9, mu1 = 1: delta = 1/9 and the bound
    // (1 - sqrt(1 - delta^2))/2 = 0.00309600499...
    let (rho, psi) = worst_case_delta(2, 0.9, 1.0, &[], 0).unwrap();
    let c = mismatch_direct(&rho, &psi).unwrap().c;
    let delta = 1.0 / 9.0;
    let bound = delta_upper_bound(delta).unwrap();
    assert!((bound - 0.003096004999).abs() < 1e-10);
    assert!((c - bound).abs() < 1e-12, "c {c} bound {bound}");
}

#[test]
fn delta_worst_case_saturates_for_random_specs() {
    let mut rng = seeded_rng(61);
    for trial in 0..20u64 {
        let dim = rng.gen_range(2..=16usize);
        let mut p = random_simplex_rng(dim - 1, &mut rng);
        p.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mu1 = p[0];
        let tail = &p[1..];
        let eta = rng.gen_range(0.55..0.95);
        let (rho, psi) = worst_case_delta(dim, eta, mu1, tail, trial).unwrap();
        let dec = optimal_eta(&rho, &psi).unwrap();
        // The construction realizes the advertised decomposition, so the
        // optimal eta can only be larger; the direct mismatch still has to
        // hit the bound computed from the construction parameters.
        assert!(dec.eta >= eta - 1e-9);
        let delta = (1.0 / eta - 1.0) * mu1;
        if delta > 1.0 {
            continue;
        }
        let bound = delta_upper_bound(delta).unwrap();
        let c = mismatch_direct(&rho, &psi).unwrap().c;
        assert!(
            (c - bound).abs() < 1e-10,
            "dim {dim} eta {eta} mu1 {mu1}: c {c} bound {bound}"
        );
    }
}

#[test]
fn delta_worst_case_tail_shape_is_irrelevant() {
    // The tail only has to stay below mu1; the mismatch depends on
    // (eta, mu1) alone.
    let dim = 6;
    let mu1 = 0.4;
    let uniform = [0.15; 4];
    let concentrated = [0.35, 0.25, 0.0, 0.0];
    let (r1, p1) = worst_case_delta(dim, 0.8, mu1, &uniform, 3).unwrap();
    let (r2, p2) = worst_case_delta(dim, 0.8, mu1, &concentrated, 4).unwrap();
    let c1 = mismatch_direct(&r1, &p1).unwrap().c;
    let c2 = mismatch_direct(&r2, &p2).unwrap().c;
    assert!((c1 - c2).abs() < 1e-12, "c1 {c1} c2 {c2}");
}

#[test]
fn delta_worst_case_small_delta_overlap() {
    // As delta -> 0 the saturating chi approaches an equal superposition:
    // |<psi|chi>|^2 = alpha = (1 - delta)/2 -> 1/2.
    let (rho, psi) = worst_case_delta(2, 0.999, 1.0, &[], 0).unwrap();
    let dec = optimal_eta(&rho, &psi).unwrap();
    let eig = hermitian_eig(dec.rho_err.matrix()).unwrap();
    let chi = eig.eigenvectors.column(0);
    let ov: c64 = psi
        .amplitudes()
        .iter()
        .zip(chi.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let delta = (1.0 / dec.eta - 1.0) * dec.mu1;
    assert!((ov.norm_sqr() - (1.0 - delta) / 2.0).abs() < 1e-6);
}

#[test]
fn delta_worst_case_rejects_bad_specs() {
    assert!(matches!(
        worst_case_delta(2, 1.2, 1.0, &[], 0),
        Err(MismatchError::InfeasibleSpec { .. })
    ));
    // tail wrong length
    assert!(worst_case_delta(4, 0.8, 0.5, &[0.5], 0).is_err());
    // trace != 1
    assert!(worst_case_delta(4, 0.8, 0.5, &[0.3, 0.3], 0).is_err());
    // tail entry above mu1
    assert!(worst_case_delta(4, 0.8, 0.4, &[0.5, 0.1], 0).is_err());
    // delta > 1
    assert!(worst_case_delta(2, 0.2, 1.0, &[], 0).is_err());
    assert!(matches!(
        worst_case_delta(1, 0.8, 1.0, &[], 0),
        Err(MismatchError::InvalidDimension { .. })
    ));
}

#[test]
fn commutator_worst_case_example() {
    // F = 0.6, C2 = 0.2, D = (0.3, 0.1): sigma = C2, Q relates through the
    // arm block, and the resulting c saturates the upper bound.
    let rho = worst_case_commutator(3, 0.6, 0.2, &[0.3, 0.1], 0).unwrap();
    let psi = PureState::basis(3, 0);
    let c = mismatch_direct(&rho, &psi).unwrap().c;
    let met = commutator_metrics(&rho, &psi).unwrap();
    assert!((met.sigma - 0.2).abs() < 1e-12);
    let upper = commutator_upper_bound(&met);
    assert!((c - upper).abs() < 1e-10, "c {c} upper {upper}");
}

#[test]
fn commutator_worst_case_zero_arm() {
    let rho = worst_case_commutator(3, 0.6, 0.0, &[0.3, 0.1], 1).unwrap();
    let psi = PureState::basis(3, 0);
    let c = mismatch_direct(&rho, &psi).unwrap().c;
    assert!(c < 1e-12);
    assert!(commutator_metrics(&rho, &psi).unwrap().sigma < 1e-12);
}

#[test]
fn commutator_worst_case_saturates_random_specs() {
    let mut rng = seeded_rng(62);
    let mut done = 0;
    for trial in 0..200u64 {
        let dim = rng.gen_range(3..=16usize);
        let mut p = random_simplex_rng(dim, &mut rng);
        p.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let f = p[0];
        let d_tail = &p[1..];
        let d2 = d_tail[0];
        let d3 = d_tail[1];
        if f <= d3 {
            continue;
        }
        // Largest arm compatible with both constraints, shrunk a bit.
        let cap = (f * d2).min((d2 - d3) * (f - d3));
        if cap <= 0.0 {
            continue;
        }
        let c2 = rng.gen_range(0.1..0.9) * cap.sqrt();
        let rho = match worst_case_commutator(dim, f, c2, d_tail, trial) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let psi = PureState::basis(dim, 0);
        let c = mismatch_direct(&rho, &psi).unwrap().c;
        let met = commutator_metrics(&rho, &psi).unwrap();
        let upper = commutator_upper_bound(&met);
        assert!(
            (c - upper).abs() < 1e-10,
            "dim {dim} f {f} c2 {c2}: c {c} upper {upper}"
        );
        done += 1;
    }
    assert!(done > 50, "only {done} feasible specs exercised");
}

#[test]
fn commutator_worst_case_rejects_bad_specs() {
    // C2^2 > F D2
    assert!(worst_case_commutator(3, 0.6, 0.5, &[0.3, 0.1], 0).is_err());
    // unsorted diagonal
    assert!(worst_case_commutator(3, 0.6, 0.1, &[0.1, 0.3], 0).is_err());
    // trace off
    assert!(worst_case_commutator(3, 0.6, 0.1, &[0.3, 0.3], 0).is_err());
    // D2 too close to D3 for the given arm
    assert!(worst_case_commutator(3, 0.55, 0.3, &[0.23, 0.22], 0).is_err());
}

#[test]
fn commutator_best_case_example() {
    // F = 0.6, Cm = 0.2, D_m = 0.1, mid = (0.3): the lower bound is tight.
    let rho = best_case_commutator(3, 0.6, 0.2, 0.1, &[0.3], 0).unwrap();
    let psi = PureState::basis(3, 0);
    let c = mismatch_direct(&rho, &psi).unwrap().c;
    let met = commutator_metrics(&rho, &psi).unwrap();
    let lower = commutator_lower_bound(&met);
    assert!((c - lower).abs() < 1e-10, "c {c} lower {lower}");
    assert!(c <= commutator_upper_bound(&met) + 1e-12);
}

#[test]
fn commutator_best_case_zero_arm() {
    let rho = best_case_commutator(3, 0.6, 0.0, 0.1, &[0.3], 1).unwrap();
    let psi = PureState::basis(3, 0);
    assert!(mismatch_direct(&rho, &psi).unwrap().c < 1e-12);
}

#[test]
fn commutator_best_case_saturates_random_specs() {
    let mut rng = seeded_rng(63);
    let mut done = 0;
    for trial in 0..100u64 {
        let dim = rng.gen_range(3..=12usize);
        let f = rng.gen_range(0.5..0.6);
        let d_m = rng.gen_range(0.02..0.06);
        let m = 1.0 - f - d_m;
        let mid = vec![m / (dim - 2) as f64; dim - 2];
        let cm = rng.gen_range(0.1..0.9) * (f * d_m).sqrt();
        let rho = match best_case_commutator(dim, f, cm, d_m, &mid, trial) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let psi = PureState::basis(dim, 0);
        let c = mismatch_direct(&rho, &psi).unwrap().c;
        let met = commutator_metrics(&rho, &psi).unwrap();
        let lower = commutator_lower_bound(&met);
        assert!(
            (c - lower).abs() < 1e-10,
            "dim {dim} f {f} cm {cm} d_m {d_m}: c {c} lower {lower}"
        );
        done += 1;
    }
    assert!(done > 30, "only {done} feasible specs exercised");
}

#[test]
fn commutator_best_case_rejects_bad_specs() {
    // Cm^2 >= F D_m
    assert!(best_case_commutator(3, 0.6, 0.3, 0.1, &[0.3], 0).is_err());
    // D_m not the smallest diagonal entry
    assert!(best_case_commutator(3, 0.6, 0.1, 0.3, &[0.1], 0).is_err());
    // trace off
    assert!(best_case_commutator(3, 0.6, 0.1, 0.1, &[0.2], 0).is_err());
}

#[test]
fn limiting_family_examples() {
    let psi = PureState::basis(2, 0);

    let rho = limiting_global(1e-6).unwrap();
    let c = mismatch_direct(&rho, &psi).unwrap().c;
    assert!((c - 0.5).abs() < 1e-5, "c {c}");

    let rho = limiting_global(1e-2).unwrap();
    let c = mismatch_direct(&rho, &psi).unwrap().c;
    assert!((c - 0.5).abs() < 1e-1, "c {c}");
    // Second-order expansion 1/2 - w/2 + O(w^2).
    assert!((c - (0.5 - 0.5e-2)).abs() < 1e-3);

    // Even at the largest allowed omega the state is close to I/2.
    let rho = limiting_global(0.1).unwrap();
    let mixed = DensityMatrix::maximally_mixed(2);
    let t = trace_distance(rho.matrix(), mixed.matrix()).unwrap();
    assert!(t <= 0.1, "trace distance {t}");

    assert!(limiting_global(0.0).is_err());
    assert!(limiting_global(0.2).is_err());
    assert!(limiting_global(-1e-3).is_err());
}

#[test]
fn constructions_are_valid_states() {
    let mut rng = seeded_rng(64);
    for trial in 0..20u64 {
        let dim = rng.gen_range(3..=8usize);
        let mut p = random_simplex_rng(dim - 1, &mut rng);
        p.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let (rho, _) = worst_case_delta(dim, 0.7, p[0], &p[1..], trial).unwrap();
        // Revalidate through the checking constructor.
        let m: Array2<c64> = rho.matrix().clone();
        assert!(DensityMatrix::new(m).is_ok());
    }
}
