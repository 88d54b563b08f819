use proptest::prelude::*;
use qmetro::families::{local_hamiltonian, DenseCap};
use qmetro::qfi::{
    convex_roof_trace, convex_roof_upper_bound, optimal_env_hamiltonian, qfi_eigen, qfi_pure, qfi_purification, sld,
};
use qmetro::random;
use qmetro::{DensityMatrix, HermitianMatrix};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn three_routes_agree_on_500_states() {
    let mut rng = random::rng(2024);
    let dims = [2, 3, 4, 5, 8, 16];
    for i in 0..510 {
        let dim = dims[i % dims.len()];
        // Mix full-rank Hilbert–Schmidt draws with rank-deficient ones.
        let rho = if i % 3 == 0 {
            random::induced(dim, 1 + i % dim, &mut rng).unwrap()
        } else {
            random::hilbert_schmidt(dim, &mut rng).unwrap()
        };
        let h = random::hermitian(dim, &mut rng);
        let f = qfi_eigen(&rho, &h).unwrap().value;
        let l = sld(&rho, &h).unwrap();
        let fs = l.fisher_information().unwrap().value;
        let fp = qfi_purification(&rho, &h).unwrap().value;
        assert!(close(f, fs, 1e-8), "sld route: {f} vs {fs}");
        assert!(close(f, fp, 1e-8), "purification route: {f} vs {fp}");
        assert!(l.lyapunov_residual().unwrap() <= 1e-8 * (1.0 + h.operator_norm().unwrap()));
        let he = optimal_env_hamiltonian(&rho, &h).unwrap();
        assert!(he.operator_norm().unwrap() <= h.operator_norm().unwrap() + 1e-10);
    }
}

#[test]
fn rank_one_routes_reduce_to_variance() {
    let mut rng = random::rng(8);
    for dim in [2, 4, 8] {
        let psi = random::haar_state(dim, &mut rng);
        let h = random::hermitian(dim, &mut rng);
        let rho = psi.to_density().unwrap();
        let v = qfi_pure(&psi, &h).unwrap().value;
        assert!(close(v, qfi_eigen(&rho, &h).unwrap().value, 1e-10));
        assert!(close(v, qfi_purification(&rho, &h).unwrap().value, 1e-10));
        assert!(close(v, sld(&rho, &h).unwrap().fisher_information().unwrap().value, 1e-10));
    }
}

#[test]
fn maximally_mixed_qubit_env_hamiltonian_oracle() {
    // Direct evaluation: λ = (1/2, 1/2), ξ = computational basis, so
    // h_ij = -2·(1/2)/1 · ⟨j|σ_z/2|i⟩ = -(σ_z/2)_ji.
    let rho = DensityMatrix::maximally_mixed(2).unwrap();
    let h = HermitianMatrix::from_real_diagonal(&[0.5, -0.5]);
    let he = optimal_env_hamiltonian(&rho, &h).unwrap();
    assert_eq!(he.real_diagonal().unwrap(), vec![-0.5, 0.5]);
    assert_eq!(he.operator_norm().unwrap(), 0.5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unitary_covariance(seed in any::<u64>(), dim in 2usize..=8) {
        let mut rng = random::rng(seed);
        let rho = random::hilbert_schmidt(dim, &mut rng).unwrap();
        let h = random::hermitian(dim, &mut rng);
        let u = random::haar_unitary(dim, &mut rng);
        let f = qfi_eigen(&rho, &h).unwrap().value;
        let g = qfi_eigen(&rho.evolve(&u).unwrap(), &h.conjugate_by(&u).unwrap()).unwrap().value;
        prop_assert!((f - g).abs() <= 1e-8 * (1.0 + f));
    }

    #[test]
    fn convexity(seed in any::<u64>(), dim in 2usize..=8, w in 0.0f64..=1.0) {
        let mut rng = random::rng(seed);
        let a = random::hilbert_schmidt(dim, &mut rng).unwrap();
        let b = random::induced(dim, 1, &mut rng).unwrap();
        let h = random::hermitian(dim, &mut rng);
        let mix = DensityMatrix::mixture(w, &a, &b).unwrap();
        let lhs = qfi_eigen(&mix, &h).unwrap().value;
        let rhs = w * qfi_eigen(&a, &h).unwrap().value + (1.0 - w) * qfi_eigen(&b, &h).unwrap().value;
        prop_assert!(lhs <= rhs + 1e-8);
    }

    #[test]
    fn additivity(seed in any::<u64>(), da in 2usize..=4, db in 2usize..=4) {
        let mut rng = random::rng(seed);
        let a = random::hilbert_schmidt(da, &mut rng).unwrap();
        let b = random::hilbert_schmidt(db, &mut rng).unwrap();
        let ha = random::hermitian(da, &mut rng);
        let hb = random::hermitian(db, &mut rng);
        let joint_h = ha.kron(&HermitianMatrix::identity(db))
            .checked_add(&HermitianMatrix::identity(da).kron(&hb)).unwrap();
        let joint = qfi_eigen(&a.kron(&b).unwrap(), &joint_h).unwrap().value;
        let sum = qfi_eigen(&a, &ha).unwrap().value + qfi_eigen(&b, &hb).unwrap().value;
        prop_assert!((joint - sum).abs() <= 1e-8 * (1.0 + sum));
    }

    #[test]
    fn separable_states_stay_below_n(seed in any::<u64>(), n in 1usize..=5, terms in 1usize..=4) {
        let mut rng = random::rng(seed);
        let rho = random::separable_state(n, terms, &mut rng).unwrap();
        let h = local_hamiltonian(n, DenseCap::default()).unwrap();
        prop_assert!(qfi_eigen(&rho, &h).unwrap().value <= n as f64 + 1e-8);
    }

    #[test]
    fn qfi_is_capped_by_spread(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = random::rng(seed);
        let rho = random::hilbert_schmidt(1 << n, &mut rng).unwrap();
        let h = local_hamiltonian(n, DenseCap::default()).unwrap();
        let f = qfi_eigen(&rho, &h).unwrap().value;
        prop_assert!(f >= 0.0);
        prop_assert!(f <= (n * n) as f64 + 1e-8);
    }

    #[test]
    fn convex_roof_is_an_upper_bound(seed in any::<u64>(), dim in 2usize..=6, rank in 1usize..=6) {
        let mut rng = random::rng(seed);
        let rho = random::induced(dim, rank.min(dim), &mut rng).unwrap();
        let h = random::hermitian(dim, &mut rng);
        let exact = qfi_eigen(&rho, &h).unwrap().value;
        let roof = convex_roof_upper_bound(&rho, &h, 50, seed).unwrap();
        prop_assert!(roof >= exact - 1e-8);
    }
}

#[test]
fn convex_roof_running_minimum_is_monotone_and_reproducible() {
    let mut rng = random::rng(99);
    let rho = random::hilbert_schmidt(4, &mut rng).unwrap();
    let h = random::hermitian(4, &mut rng);
    let exact = qfi_eigen(&rho, &h).unwrap().value;
    let trace = convex_roof_trace(&rho, &h, 10_000, 5, None).unwrap();
    assert!(trace.windows(2).all(|w| w[1] <= w[0]));
    assert!(*trace.last().unwrap() >= exact - 1e-8);
    // A shorter run is a prefix of the longer one.
    let short = convex_roof_trace(&rho, &h, 100, 5, None).unwrap();
    assert_eq!(&trace[..100], &short[..]);
    assert_eq!(convex_roof_upper_bound(&rho, &h, 100, 5).unwrap(), short[99]);
    // A larger environment is still a valid upper bound.
    let wide = convex_roof_trace(&rho, &h, 200, 5, Some(12)).unwrap();
    assert!(*wide.last().unwrap() >= exact - 1e-8);
}
