//! Property-based checks over randomly generated states and parameters.

use mismatch::arrowhead::{decompose, mismatch_direct, secular_eigenvalues};
use mismatch::bounds::{commutator_lower_bound, commutator_metrics, commutator_upper_bound};
use mismatch::circuits::{f_bound, FBoundForm};
use mismatch::linalg::{hermitian_eigvals, trace_distance};
use mismatch::states::{
    haar_random_pure, mix, random_density, renyi_entropy, seeded_rng, random_simplex_rng,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn secular_roots_match_dense_and_interlace(seed in 0u64..1u64 << 48, dim in 2usize..24) {
        let rho = random_density(dim, seed).unwrap();
        let psi = haar_random_pure(dim, seed ^ 0xabcd).unwrap();
        let form = decompose(&rho, &psi).unwrap();
        let dense = hermitian_eigvals(rho.matrix()).unwrap();
        let secular = secular_eigenvalues(&form);
        for (a, b) in dense.iter().zip(secular.iter()) {
            prop_assert!((a - b).abs() <= 1e-10 * dim as f64);
        }
        for k in 0..dim - 1 {
            prop_assert!(dense[k] >= form.d[k] - 1e-10);
            prop_assert!(form.d[k] >= dense[k + 1] - 1e-10);
        }
    }

    #[test]
    fn sandwich_never_violated(seed in 0u64..1u64 << 48, dim in 2usize..16, eta in 0.5f64..0.99) {
        let psi = haar_random_pure(dim, seed).unwrap();
        let err = random_density(dim, seed ^ 0x1234).unwrap();
        let rho = mix(eta, &psi, &err).unwrap();
        if let Ok(res) = mismatch_direct(&rho, &psi) {
            let met = commutator_metrics(&rho, &psi).unwrap();
            prop_assert!(commutator_lower_bound(&met) <= res.c + 1e-10);
            prop_assert!(res.c <= commutator_upper_bound(&met) + 1e-10);
        }
    }

    #[test]
    fn renyi_entropies_are_ordered(seed in 0u64..1u64 << 48, dim in 2usize..12) {
        let p = random_simplex_rng(dim, &mut seeded_rng(seed));
        let h1 = renyi_entropy(&p, 1.0).unwrap();
        let h2 = renyi_entropy(&p, 2.0).unwrap();
        let hinf = renyi_entropy(&p, f64::INFINITY).unwrap();
        prop_assert!(hinf <= h2 + 1e-12);
        prop_assert!(h2 <= h1 + 1e-12);
        prop_assert!(h1 <= (dim as f64).ln() + 1e-12);
    }

    #[test]
    fn trace_distance_triangle(seed in 0u64..1u64 << 48, dim in 2usize..10) {
        let a = random_density(dim, seed).unwrap();
        let b = random_density(dim, seed ^ 1).unwrap();
        let c = random_density(dim, seed ^ 2).unwrap();
        let tab = trace_distance(a.matrix(), b.matrix()).unwrap();
        let tbc = trace_distance(b.matrix(), c.matrix()).unwrap();
        let tac = trace_distance(a.matrix(), c.matrix()).unwrap();
        prop_assert!(tac <= tab + tbc + 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&tab));
    }

    #[test]
    fn f_bound_forms_agree_for_large_nu(xi in 0.01f64..2.0, nu_scale in 200f64..2000.0) {
        let exact = f_bound(xi, nu_scale, FBoundForm::Exact).unwrap();
        let approx = f_bound(xi, nu_scale, FBoundForm::Approx).unwrap();
        // Neglected terms, relative to f ~ xi^2/nu: the 2 xi/nu piece from
        // (1-eps)^{-2} in base - 1 dominates, plus xi^2/nu-order corrections.
        let slack = 5.0 * (xi / nu_scale + xi * xi / nu_scale) + 1e-12;
        prop_assert!((exact - approx).abs() <= slack * exact.max(approx) + 1e-15);
        prop_assert!(exact >= 0.0 && approx >= 0.0);
    }
}
