use mismatch::arrowhead::mismatch_direct;
use mismatch::distillation::{
    copies_needed, distilled_state, eigenstate_observable_rng, noise_floor_trace,
    observable_error, observable_error_bound, random_normalized_observable,
    random_normalized_observable_rng, CopiesTarget,
};
use mismatch::extremal::limiting_global;
use mismatch::linalg::{hermitian_eig, hermitian_eigvals, hs_norm};
use mismatch::states::{
    haar_random_pure_rng, mix, random_density_rng, seeded_rng, DensityMatrix, PureState,
};
use ndarray::array;
use ndarray_linalg::c64;
use rand::Rng;

fn r(x: f64) -> c64 {
    c64::new(x, 0.0)
}

#[test]
fn distilled_state_examples() {
    let rho = random_density_rng(4, &mut seeded_rng(1)).unwrap();
    // n = 1 is the identity map.
    let one = distilled_state(&rho, 1).unwrap();
    for (a, b) in one.matrix().iter().zip(rho.matrix().iter()) {
        assert_eq!(a, b);
    }
    assert!(distilled_state(&rho, 0).is_err());

    // A pure state is a fixed point for every n.
    let psi = haar_random_pure_rng(4, &mut seeded_rng(2)).unwrap();
    let pure = DensityMatrix::pure(&psi);
    for n in [2, 5, 40] {
        let d = distilled_state(&pure, n).unwrap();
        assert!(hs_norm(&(d.matrix() - pure.matrix())) < 1e-11);
    }

    // diag(0.6, 0.4) squared and renormalized: (0.36, 0.16)/0.52.
    let rho = DensityMatrix::new(array![[r(0.6), r(0.0)], [r(0.0), r(0.4)]]).unwrap();
    let d = distilled_state(&rho, 2).unwrap();
    assert!((d.matrix()[[0, 0]].re - 0.36 / 0.52).abs() < 1e-14);
    assert!((d.matrix()[[1, 1]].re - 0.16 / 0.52).abs() < 1e-14);
}

#[test]
fn distilled_state_commutes_with_rho() {
    let mut rng = seeded_rng(3);
    for _ in 0..20 {
        let dim = rng.gen_range(2..=12usize);
        let rho = random_density_rng(dim, &mut rng).unwrap();
        let d = distilled_state(&rho, 7).unwrap();
        let comm = rho.matrix().dot(d.matrix()) - d.matrix().dot(rho.matrix());
        assert!(hs_norm(&comm) < 1e-11);
        // Still a state.
        let vals = hermitian_eigvals(d.matrix()).unwrap();
        assert!(vals[dim - 1] > -1e-12);
        let tr: f64 = d.matrix().diag().iter().map(|x| x.re).sum();
        assert!((tr - 1.0).abs() < 1e-11);
    }
}

#[test]
fn noise_floor_pure_state_is_zero() {
    let psi = haar_random_pure_rng(4, &mut seeded_rng(4)).unwrap();
    let rho = DensityMatrix::pure(&psi);
    let tr = noise_floor_trace(&rho, &psi, 5).unwrap();
    assert!(tr.predicted_floor < 1e-12);
    assert!(tr.trace_distances.iter().all(|&t| t < 1e-10));
    assert!(tr.q < 1e-12);
}

#[test]
fn noise_floor_limiting_family() {
    // At omega = 1e-4, c ~ 1/2, so the floor is near sqrt(1/2). The
    // suppression factor Q ~ 1 - 2 omega is almost 1, so distillation
    // barely moves and never gets below ~1/2 error.
    let rho = limiting_global(1e-4).unwrap();
    let psi = PureState::basis(2, 0);
    let tr = noise_floor_trace(&rho, &psi, 60).unwrap();
    assert!((tr.predicted_floor - 0.5f64.sqrt()).abs() < 1e-2);
    assert!(tr.q > 0.999, "q {}", tr.q);
    assert!(tr.trace_distances.iter().all(|&t| t > 0.49));
    // The distances creep up toward the floor from below.
    for w in tr.trace_distances.windows(2) {
        assert!(w[1] >= w[0] - 1e-12 && w[1] <= tr.predicted_floor + 1e-12);
    }
}

#[test]
fn noise_floor_converges_to_sqrt_c() {
    let mut rng = seeded_rng(5);
    let mut checked = 0;
    for _ in 0..50 {
        let psi = haar_random_pure_rng(16, &mut rng).unwrap();
        let err = random_density_rng(16, &mut rng).unwrap();
        let rho = mix(rng.gen_range(0.6..0.95), &psi, &err).unwrap();
        let eig = rho.eig().unwrap();
        let q = eig.eigenvalues[1] / eig.eigenvalues[0];
        if q > 0.8 {
            continue;
        }
        let tr = noise_floor_trace(&rho, &psi, 50).unwrap();
        let c = mismatch_direct(&rho, &psi).unwrap().c;
        assert!((tr.predicted_floor - c.sqrt()).abs() < 1e-15);
        let last = *tr.trace_distances.last().unwrap();
        assert!(
            (last - c.sqrt()).abs() < 1e-6,
            "T(rho_50) {last} sqrt(c) {} q {q}",
            c.sqrt()
        );
        // Monotone approach in the tail.
        let n = tr.trace_distances.len();
        assert!(tr.trace_distances[n - 1] <= tr.trace_distances[n - 10] + 1e-12);
        checked += 1;
    }
    assert!(checked > 20, "only {checked} low-Q samples");
}

#[test]
fn observable_error_examples_and_bounds() {
    let mut rng = seeded_rng(6);
    let psi = haar_random_pure_rng(6, &mut rng).unwrap();
    let obs = random_normalized_observable_rng(6, &mut rng).unwrap();
    assert_eq!(observable_error(&psi, &psi, &obs).unwrap(), 0.0);

    // General observables: |error| <= 2 sqrt(c) for unit-norm O.
    for _ in 0..200 {
        let dim = rng.gen_range(2..=8usize);
        let a = haar_random_pure_rng(dim, &mut rng).unwrap();
        let b = haar_random_pure_rng(dim, &mut rng).unwrap();
        let c = 1.0 - a.overlap(&b).norm_sqr();
        let obs = random_normalized_observable_rng(dim, &mut rng).unwrap();
        let err = observable_error(&a, &b, &obs).unwrap();
        assert!(err <= 2.0 * c.sqrt() + 1e-12, "err {err} c {c}");
    }

    // Eigenstate observables of the target: |error| <= 2c.
    for _ in 0..200 {
        let dim = rng.gen_range(2..=8usize);
        let a = haar_random_pure_rng(dim, &mut rng).unwrap();
        let b = haar_random_pure_rng(dim, &mut rng).unwrap();
        let c = 1.0 - a.overlap(&b).norm_sqr();
        let obs = eigenstate_observable_rng(&a, &mut rng).unwrap();
        // a is an exact eigenvector of obs.
        let oa = obs.dot(a.amplitudes());
        let e = mismatch::linalg::inner(a.amplitudes(), &oa).re;
        let mut resid = 0.0f64;
        for i in 0..dim {
            resid = resid.max((oa[i] - a.amplitudes()[i] * e).norm());
        }
        assert!(resid < 1e-12, "eigenvector residual {resid}");
        // Unit spectral norm.
        let vals = hermitian_eigvals(&obs).unwrap();
        let norm = vals.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        assert!((norm - 1.0).abs() < 1e-12);
        let err = observable_error(&a, &b, &obs).unwrap();
        assert!(err <= 2.0 * c + 1e-12, "err {err} 2c {}", 2.0 * c);
    }
}

#[test]
fn observable_error_bound_arithmetic() {
    assert!((observable_error_bound(0.01, 1.0, false).unwrap() - 0.2).abs() < 1e-15);
    assert!((observable_error_bound(0.01, 1.0, true).unwrap() - 0.02).abs() < 1e-15);
    assert!((observable_error_bound(0.04, 0.5, false).unwrap() - 0.2).abs() < 1e-15);
    assert!(observable_error_bound(-0.1, 1.0, false).is_err());
    assert!(observable_error_bound(1.1, 1.0, false).is_err());
    assert!(observable_error_bound(0.1, -1.0, false).is_err());
}

#[test]
fn copies_needed_thresholds() {
    // Near eta = 2/3 (Q ~ 1/2) three copies suffice for the sqrt(c) level.
    let n = copies_needed(2.0 / 3.0 - 1e-3, 0.999, CopiesTarget::GeneralSqrt).unwrap();
    assert_eq!(n, 3);
    // Near eta = 4/5 (Q ~ 1/4) four copies reach the eigenstate level.
    let n = copies_needed(0.8 - 1e-3, 0.999, CopiesTarget::EigenstateQuadratic).unwrap();
    assert_eq!(n, 4);
    // Invalid parameters.
    assert!(copies_needed(0.5, 2.0, CopiesTarget::GeneralSqrt).is_err());
    assert!(copies_needed(0.0, 0.5, CopiesTarget::GeneralSqrt).is_err());
    assert!(copies_needed(0.4, 0.9, CopiesTarget::GeneralSqrt).is_err(), "Q >= 1");
    // Minimum of two copies even for tiny Q.
    assert_eq!(copies_needed(0.999, 0.01, CopiesTarget::GeneralSqrt).unwrap(), 2);
}

#[test]
fn copies_needed_monotone_in_mu1() {
    let mut prev = 0;
    for &mu1 in &[0.2, 0.4, 0.6, 0.8, 0.999] {
        let n = copies_needed(0.7, mu1, CopiesTarget::GeneralSqrt).unwrap();
        assert!(n >= prev, "copies decreased at mu1 {mu1}");
        prev = n;
    }
}

#[test]
fn random_observable_properties() {
    let a = random_normalized_observable(5, 9).unwrap();
    let b = random_normalized_observable(5, 9).unwrap();
    for (x, y) in a.iter().zip(b.iter()) {
        assert_eq!(x, y);
    }
    let eig = hermitian_eig(&a).unwrap();
    let norm = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()));
    assert!((norm - 1.0).abs() < 1e-12);
    assert!(random_normalized_observable(1, 0).is_err());
}
