use super::*;
use crate::aform::AHamiltonian;
use crate::linalg::{c64, symmetric3_max_eigenvalue, C64};
use crate::model::{build_model_hamiltonian, ModelParams};
use crate::spin::SpinLength;
use crate::thermal::ground_state;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spin(two_s: usize) -> SpinLength {
    SpinLength::from_two_s(two_s as u32).unwrap()
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() < tol
}

#[test]
fn closed_forms_match_dense_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for i in 0..300 {
        let s = spin(1 + i % 6);
        let rho = AState::random(s, &mut rng);
        let sf = diagonalize(&rho);
        let (u0, u1) = lqu_branches(&rho, &sf);
        let (f0, f1) = lqfi_branches(&rho, &sf).unwrap();
        let w = oracle_w(&rho);
        let m = oracle_m(&rho);
        assert!(close(u0, 1.0 - w[(2, 2)], 1e-10), "u0 S={s}");
        assert!(close(u1, 1.0 - w[(0, 0)], 1e-10), "u1 S={s}");
        assert!(close(f0, 1.0 - m[(2, 2)], 1e-10), "f0 S={s}");
        assert!(close(f1, 1.0 - m[(0, 0)], 1e-10), "f1 S={s}");
    }
}

#[test]
fn spectral_sums_match_dense_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for i in 0..200 {
        let rho = AState::random(spin(1 + i % 6), &mut rng);
        let sf = diagonalize(&rho);
        let (wxx, wzz) = w_diagonal(&sf);
        let (mxx, mzz) = m_diagonal(&sf);
        let w = oracle_w(&rho);
        let m = oracle_m(&rho);
        assert!(close(wxx, w[(0, 0)], 1e-11) && close(wzz, w[(2, 2)], 1e-11));
        assert!(close(mxx, m[(0, 0)], 1e-11) && close(mzz, m[(2, 2)], 1e-11));
    }
}

#[test]
fn w_and_m_are_diagonal_and_axially_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for i in 0..100 {
        let rho = AState::random(spin(1 + i % 5), &mut rng);
        for mat in [oracle_w(&rho), oracle_m(&rho)] {
            for r in 0..3 {
                for c in 0..3 {
                    if r != c {
                        assert!(mat[(r, c)].abs() < 1e-12);
                    }
                }
            }
            assert!(close(mat[(0, 0)], mat[(1, 1)], 1e-12));
        }
    }
}

#[test]
fn measures_agree_with_top_eigenvalue() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for i in 0..200 {
        let rho = AState::random(spin(1 + i % 6), &mut rng);
        let c = correlations(&rho);
        assert!(close(c.u, lqu_oracle(&rho).max(0.0), 1e-10));
        assert!(close(c.f, lqfi_oracle(&rho).max(0.0), 1e-10));
        assert_eq!(c.method, Method::ClosedForm);
    }
}

#[test]
fn isotropic_ground_states_reproduce_table() {
    let af = [1.0, 8.0 / 9.0, 5.0 / 6.0, 4.0 / 5.0, 7.0 / 9.0];
    let fm = [1.0 / 3.0, 4.0 / 9.0, 0.5, 8.0 / 15.0, 5.0 / 9.0];
    for two_s in 1..=5 {
        for (j, expected) in [(1.0, af[two_s - 1]), (-1.0, fm[two_s - 1])] {
            for scale in [0.3, 1.0, 7.0] {
                let (_, h) = build_model_hamiltonian(&ModelParams::xxx(j * scale), spin(two_s));
                let c = correlations(&ground_state(&h));
                assert!(close(c.u, expected, 1e-9), "U S={} J={j}: {}", two_s, c.u);
                assert!(close(c.f, expected, 1e-9), "F S={} J={j}: {}", two_s, c.f);
            }
        }
    }
}

#[test]
fn rank_deficient_state_uses_fallback() {
    // Spin-1 antiferromagnetic ground state: only the lower level of each
    // block is occupied, so several eigenvalue sums vanish.
    let (_, h) = build_model_hamiltonian(&ModelParams::xxx(1.0), SpinLength::ONE);
    let rho = ground_state(&h);
    let f = lqfi(&rho);
    assert_eq!(f.method, Method::OracleFallback);
    assert!(close(f.value, lqfi_oracle(&rho), 1e-12));
    let u = lqu(&rho);
    assert_eq!(u.method, Method::ClosedForm);
}

#[test]
fn maximally_mixed_and_product_states_are_classical() {
    for two_s in 1..=6 {
        let s = spin(two_s);
        let c = correlations(&AState::maximally_mixed(s));
        assert!(c.u.abs() < 1e-14 && c.f.abs() < 1e-14, "S={s}: {c:?}");

        let weights: Vec<f64> = (0..s.qudit_dim()).map(|i| 1.0 + i as f64).collect();
        let rho = AState::product_diagonal(s, 0.3, &weights).unwrap();
        let c = correlations(&rho);
        assert!(c.u.abs() < 1e-12 && c.f.abs() < 1e-12, "S={s}: {c:?}");
    }
}

#[test]
fn singlet_is_maximally_correlated() {
    let rho = AState::new(SpinLength::HALF, 0.0, 0.0, vec![0.5, 0.5], vec![c64(-0.5, 0.0)]).unwrap();
    let c = correlations(&rho);
    assert!(close(c.u, 1.0, 1e-12));
    assert!(close(c.f, 1.0, 1e-12));
    assert_eq!(c.active_u, ActiveBranch::Tie);
}

#[test]
fn coherence_phases_do_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for i in 0..100 {
        let s = spin(1 + i % 5);
        let rho = AState::random(s, &mut rng);
        let phases: Vec<f64> = (0..s.two_s()).map(|_| rng.random_range(0.0..6.3)).collect();
        let a = correlations(&rho);
        let b = correlations(&rho.with_phases(&phases));
        for (x, y) in [(a.u0, b.u0), (a.u1, b.u1), (a.f0, b.f0), (a.f1, b.f1)] {
            assert!(close(x, y, 1e-12));
        }
    }
}

#[test]
fn pure_states_have_equal_variance_skew_and_fisher() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for i in 0..100 {
        let rho = AState::random_pure(spin(1 + i % 5), &mut rng);
        let n = LocalObservable::along([
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ])
        .unwrap();
        let v = variance(&rho, &n);
        assert!(close(skew_information(&rho, &n), v, 1e-10));
        assert!(close(qfi(&rho, &n), v, 1e-10));
    }
}

#[test]
fn skew_and_fisher_follow_the_quadratic_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for i in 0..60 {
        let rho = AState::random(spin(1 + i % 5), &mut rng);
        let w = oracle_w(&rho);
        let m = oracle_m(&rho);
        let probe = LocalProbe::new(&rho);
        for n in fibonacci_sphere(7) {
            let v = nalgebra::Vector3::from(n.bloch());
            let skew = skew_information(&rho, &n);
            let fisher = qfi(&rho, &n);
            assert!(close(skew, 1.0 - (v.transpose() * w * v)[0], 1e-11));
            assert!(close(fisher, 1.0 - (v.transpose() * m * v)[0], 1e-11));
            assert!(close(probe.skew(&n), skew, 1e-11));
            assert!(close(probe.qfi(&n), fisher, 1e-11));
            assert!(skew <= fisher + 1e-12 && fisher <= 2.0 * skew + 1e-12);
        }
    }
}

#[test]
fn grid_search_brackets_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    for i in 0..20 {
        let rho = AState::random(spin(1 + i % 6), &mut rng);
        let c = correlations(&rho);
        let g = grid_minimum(&rho, 2000);
        assert!(g.skew >= c.u - 1e-9 && g.skew - c.u < 2e-3, "{} vs {}", g.skew, c.u);
        assert!(g.qfi >= c.f - 1e-9 && g.qfi - c.f < 2e-3, "{} vs {}", g.qfi, c.f);
    }
}

#[test]
fn fibonacci_points_are_unit_and_spread() {
    let pts = fibonacci_sphere(500);
    assert_eq!(pts.len(), 500);
    let mean: [f64; 3] = pts.iter().fold([0.0; 3], |acc, p| {
        let b = p.bloch();
        [acc[0] + b[0], acc[1] + b[1], acc[2] + b[2]]
    });
    for x in mean {
        assert!((x / 500.0).abs() < 1e-2);
    }
    for p in &pts {
        let b = p.bloch();
        assert!(close(b.iter().map(|x| x * x).sum::<f64>(), 1.0, 1e-14));
    }
}

#[test]
fn observable_requires_unit_vector() {
    assert!(LocalObservable::new([1.0, 0.0, 0.0]).is_ok());
    assert!(LocalObservable::new([1.0, 1.0, 0.0]).is_err());
    assert!(LocalObservable::along([0.0, 0.0, 0.0]).is_err());
}

#[test]
fn branch_tags() {
    assert_eq!(ActiveBranch::of(0.1, 0.2), ActiveBranch::Zero);
    assert_eq!(ActiveBranch::of(0.3, 0.2), ActiveBranch::One);
    assert_eq!(ActiveBranch::of(0.2, 0.2 + 1e-13), ActiveBranch::Tie);
    assert_eq!(
        Method::ClosedForm.combine(Method::OracleFallback),
        Method::OracleFallback
    );
}

#[test]
fn hamiltonian_gibbs_states_match_oracle_at_low_temperature() {
    use crate::thermal::{gibbs_state, Temperature};
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for i in 0..60 {
        let s = spin(1 + i % 5);
        let h = AHamiltonian::random(s, &mut rng);
        let rho = gibbs_state(&h, Temperature::Finite(rng.random_range(0.01..0.2)));
        let c = correlations(&rho);
        // Eigenvalues near 1e-17 enter the LQU through square roots, so a
        // dense eigensolver only resolves it to about 1e-8 here.
        assert!(close(c.u, lqu_oracle(&rho).max(0.0), 1e-7));
        assert!(close(c.f, lqfi_oracle(&rho).max(0.0), 1e-10));
    }
}

fn arb_state() -> impl Strategy<Value = AState> {
    (1usize..=5, any::<u64>()).prop_map(|(two_s, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        AState::random(spin(two_s), &mut rng)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn measures_are_bounded_and_ordered(rho in arb_state()) {
        let c = correlations(&rho);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c.u));
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c.f));
        prop_assert!(c.u <= c.f + 1e-10);
        prop_assert!(c.f <= 2.0 * c.u + 1e-10);
        prop_assert_eq!(c.u, c.u0.min(c.u1));
        prop_assert_eq!(c.f, c.f0.min(c.f1));
    }

    #[test]
    fn top_eigenvalue_is_largest_diagonal(rho in arb_state()) {
        let w = oracle_w(&rho);
        prop_assert!((symmetric3_max_eigenvalue(&w) - w[(0, 0)].max(w[(2, 2)])).abs() < 1e-11);
    }

    #[test]
    fn zero_branch_needs_coherence(rho in arb_state()) {
        let zeroed = AState { u: vec![C64::new(0.0, 0.0); rho.u.len()], ..rho };
        let sf = diagonalize(&zeroed);
        prop_assert!(lqu_branches(&zeroed, &sf).0.abs() < 1e-12);
        prop_assert!(lqfi_zero_branch(&zeroed).abs() < 1e-15);
    }
}
