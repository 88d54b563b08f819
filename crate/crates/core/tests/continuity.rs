use qmetro::bounds::{
    audit_pair, audit_state, continuity_bound, gme_qfi_cap, kprod_qfi_cap, CheckStatus, ContinuityVariant,
    DistanceTerm, PurityCase, VariantChoice,
};
use qmetro::entanglement::{ek_prod_lower_bound, gme_werner};
use qmetro::families::{analytic_gme, analytic_qfi, build_state, local_hamiltonian, DenseCap, StateFamilySpec};
use qmetro::geometry::distance_report;
use qmetro::random;
use qmetro::DensityMatrix;

const CAP: DenseCap = DenseCap { max_dim: 1 << 12 };

fn qubit_state(i: usize, n: usize, rng: &mut random::StdRng) -> DensityMatrix {
    let dim = 1 << n;
    match i % 4 {
        0 => random::hilbert_schmidt(dim, rng).unwrap(),
        1 => random::haar_state(dim, rng).to_density().unwrap(),
        2 => random::induced(dim, 2, rng).unwrap(),
        _ => random::separable_state(n, 3, rng).unwrap(),
    }
}

#[test]
fn random_pairs_with_random_hamiltonians() {
    let mut rng = random::rng(4242);
    let dims = [2, 3, 4, 8, 16];
    let mut checked = 0;
    for i in 0..1000 {
        let dim = dims[i % dims.len()];
        let rho = if i % 2 == 0 {
            random::hilbert_schmidt(dim, &mut rng).unwrap()
        } else {
            random::haar_state(dim, &mut rng).to_density().unwrap()
        };
        let sigma = if i % 3 == 0 {
            random::haar_state(dim, &mut rng).to_density().unwrap()
        } else {
            random::induced(dim, 1 + i % dim, &mut rng).unwrap()
        };
        let h = random::hermitian(dim, &mut rng);
        let a = audit_pair(&rho, &sigma, &h, None).unwrap();
        assert!(a.pass, "pair {i}: {:?}", a.checks);
        checked += a.checks.len();
    }
    assert!(checked >= 3000);
}

#[test]
fn random_qubit_pairs_local_forms() {
    let mut rng = random::rng(17);
    for i in 0..400 {
        let n = 1 + i % 4;
        let rho = qubit_state(i, n, &mut rng);
        let sigma = qubit_state(i / 4 + 1, n, &mut rng);
        let h = local_hamiltonian(n, CAP).unwrap();
        let a = audit_pair(&rho, &sigma, &h, Some(n)).unwrap();
        assert!(a.pass, "pair {i}: {:?}", a.checks);
        assert!(a.checks.iter().any(|c| c.name.starts_with("continuity-local")));
    }
}

fn family_grid(n: usize) -> Vec<StateFamilySpec> {
    let mut out = vec![StateFamilySpec::ghz(), StateFamilySpec::product_zero(), StateFamilySpec::maximally_mixed()];
    for p in [0.1, 0.3, 0.5] {
        out.push(StateFamilySpec::non_max(p).unwrap());
        out.push(StateFamilySpec::tailored_pure(p, (n / 2).max(1)).unwrap());
    }
    for p in [0.2, 0.6, 0.9] {
        out.push(StateFamilySpec::werner(p).unwrap());
        out.push(StateFamilySpec::tailored_werner(p, (n / 2).max(1)).unwrap());
    }
    out
}

#[test]
fn family_pairs_up_to_eight_qubits() {
    for n in 2..=8 {
        let h = local_hamiltonian(n, CAP).unwrap();
        let states: Vec<_> = family_grid(n).iter().map(|s| build_state(s, n, CAP).unwrap()).collect();
        // Adjacent pairs plus every pair against GHZ keep the N = 8 grid quick.
        let mut pairs: Vec<(usize, usize)> = (1..states.len()).map(|j| (0, j)).collect();
        if n <= 5 {
            for i in 0..states.len() {
                for j in i + 1..states.len() {
                    pairs.push((i, j));
                }
            }
        } else {
            pairs.extend((1..states.len() - 1).map(|i| (i, i + 1)));
        }
        for (i, j) in pairs {
            let a = audit_pair(&states[i], &states[j], &h, Some(n)).unwrap();
            assert!(a.pass, "N={n} pair ({i},{j}): {:?}", a.checks);
        }
    }
}

#[test]
fn variant_dominance() {
    let mut rng = random::rng(5);
    let general = |m| VariantChoice::Fixed(ContinuityVariant::new(m, PurityCase::General).unwrap());
    for i in 0..300 {
        let dim = 2 + i % 7;
        let rho = random::hilbert_schmidt(dim, &mut rng).unwrap();
        let sigma = random::induced(dim, 1 + i % dim, &mut rng).unwrap();
        let h = random::hermitian(dim, &mut rng);
        let f = continuity_bound(&rho, &sigma, &h, general(DistanceTerm::FidelityRoot)).unwrap();
        let b = continuity_bound(&rho, &sigma, &h, general(DistanceTerm::Bures)).unwrap();
        let t = continuity_bound(&rho, &sigma, &h, general(DistanceTerm::TraceRoot)).unwrap();
        assert!(f <= b * (1.0 + 1e-12) + 1e-12 && b <= t * (1.0 + 1e-12) + 1e-12, "{f} {b} {t}");
    }
}

#[test]
fn werner_pair_local_bound_dominates_closed_form_difference() {
    let n = 4;
    for p in [0.0, 0.2, 0.5, 0.8] {
        let q: f64 = p + 0.1;
        let a = build_state(&StateFamilySpec::werner(p).unwrap(), n, CAP).unwrap();
        let b = build_state(&StateFamilySpec::werner(q).unwrap(), n, CAP).unwrap();
        let fa = analytic_qfi(&StateFamilySpec::werner(p).unwrap(), n).unwrap();
        let fb = analytic_qfi(&StateFamilySpec::werner(q).unwrap(), n).unwrap();
        let bound = qmetro::bounds::continuity_bound_local(&a, &b, n, VariantChoice::Auto).unwrap();
        assert!((fa - fb).abs() <= bound);
    }
}

#[test]
fn ghz_versus_werner_point_nine() {
    let ghz = build_state(&StateFamilySpec::ghz(), 3, CAP).unwrap();
    let w = build_state(&StateFamilySpec::werner(0.9).unwrap(), 3, CAP).unwrap();
    let h = local_hamiltonian(3, CAP).unwrap();
    let d = distance_report(&ghz, &w).unwrap();
    let lhs = (9.0 - analytic_qfi(&StateFamilySpec::werner(0.9).unwrap(), 3).unwrap()).abs();
    let rhs = 24.0 * d.fidelity_root() * h.operator_norm().unwrap().powi(2);
    assert!(lhs <= rhs);
    let v = ContinuityVariant::new(DistanceTerm::FidelityRoot, PurityCase::OnePure).unwrap();
    assert!((continuity_bound(&ghz, &w, &h, VariantChoice::Fixed(v)).unwrap() - rhs).abs() < 1e-12);
}

#[test]
fn kprod_floor_form_against_relaxed_cap() {
    for n in 1..=40 {
        for k in 1..=n {
            let c = kprod_qfi_cap(n, k).unwrap();
            assert!(c.floor_form <= c.relaxed);
            assert_eq!(c.floor_form == c.relaxed, n % k == 0, "N={n} k={k}");
            assert!((c.relaxed - c.r_leb_form).abs() <= 1e-12 * c.relaxed);
        }
    }
}

#[test]
fn soundness_for_exactly_known_states() {
    for n in 3..=12 {
        let mut specs = vec![StateFamilySpec::ghz(), StateFamilySpec::product_zero(), StateFamilySpec::maximally_mixed()];
        for p in [0.05, 0.25, 0.5] {
            specs.push(StateFamilySpec::non_max(p).unwrap());
            specs.push(StateFamilySpec::tailored_pure(p, n - 1).unwrap());
        }
        for spec in &specs {
            let f = analytic_qfi(spec, n).unwrap();
            let e = analytic_gme(spec, n).unwrap();
            assert!(e.is_exact());
            assert!(gme_qfi_cap(n, 1, e.value).unwrap() >= f);
            assert!(ek_prod_lower_bound(f, n, 1).unwrap() <= e.value);
        }
        for p in [0.1, 0.4, 0.7, 1.0] {
            let f = analytic_qfi(&StateFamilySpec::werner(p).unwrap(), n).unwrap();
            let e = gme_werner(n, p).unwrap().value;
            assert!(gme_qfi_cap(n, 1, e).unwrap() >= f);
            assert!(ek_prod_lower_bound(f, n, 1).unwrap() <= e);
        }
    }
}

#[test]
fn werner_cap_round_trip() {
    // Where the cap kN + 6√E N² reaches pN², E must be at least around p²/36.
    for n in [100usize, 1000, 10_000] {
        for p in [0.1, 0.5, 0.9] {
            let f = analytic_qfi(&StateFamilySpec::werner(p).unwrap(), n).unwrap();
            let lower = ek_prod_lower_bound(f, n, 1).unwrap();
            assert!(gme_qfi_cap(n, 1, lower).unwrap() >= f * (1.0 - 1e-12));
            let nf = n as f64;
            assert!((lower - ((f - nf) / (6.0 * nf * nf)).powi(2)).abs() < 1e-15);
            assert!(lower <= p * p / 36.0 + 1e-12);
        }
    }
}

#[test]
fn audits_pass_over_family_grid() {
    for n in 2..=8 {
        for spec in family_grid(n) {
            for k in [1, 2, n] {
                if k > n {
                    continue;
                }
                let r = audit_state(&spec, n, k, CAP).unwrap();
                assert!(r.pass, "{spec} N={n} k={k}: {:?}", r.checks);
                assert!(r.checks.iter().any(|c| c.status == CheckStatus::Pass));
            }
        }
    }
}

#[test]
fn audit_falls_back_to_closed_forms_beyond_the_cap() {
    let r = audit_state(&StateFamilySpec::werner(0.7).unwrap(), 40, 1, CAP).unwrap();
    assert!(r.qfi_dense.is_none());
    assert_eq!(r.qfi, r.qfi_analytic);
    assert!(r.pass);
}
