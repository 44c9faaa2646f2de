use proptest::prelude::*;
use qtele_core::protocols::{bell_state, BellLabel};
use qtele_core::qsim::{Amplitude, Gate1Q, PureQubit, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_state(n: usize) -> impl Strategy<Value = StateVector> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map(
        "zero vector",
        |v| {
            let norm: f64 = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            (norm > 1e-3).then(|| {
                StateVector::from_amplitudes(
                    v.iter()
                        .map(|&(a, b)| Amplitude::new(a / norm, b / norm))
                        .collect(),
                )
                .unwrap()
            })
        },
    )
}

fn gate() -> impl Strategy<Value = Gate1Q> {
    prop::sample::select(Gate1Q::ALL.to_vec())
}

proptest! {
    #[test]
    fn gates_preserve_norm(s in random_state(4), gates in proptest::collection::vec((gate(), 0usize..4), 1..20)) {
        let mut s = s;
        for (g, q) in gates {
            s.apply_1q(g, q).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cnot_preserves_norm(s in random_state(3), c in 0usize..3, t in 0usize..3) {
        prop_assume!(c != t);
        let mut s = s;
        s.apply_cnot(c, t).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn self_inverse_gates(s in random_state(3), q in 0usize..3, c in 0usize..3) {
        for g in [Gate1Q::H, Gate1Q::X, Gate1Q::Z] {
            let mut t = s.clone();
            t.apply_1q(g, q).unwrap();
            t.apply_1q(g, q).unwrap();
            prop_assert!(t.max_abs_diff(&s) < 1e-12, "{:?}", g);
        }
        if c != q {
            let mut t = s.clone();
            t.apply_cnot(c, q).unwrap();
            t.apply_cnot(c, q).unwrap();
            prop_assert!(t.max_abs_diff(&s) < 1e-12);
        }
    }

    #[test]
    fn gate_commutes_with_tensor(a in random_state(1), b in random_state(2), g in gate()) {
        let mut lhs = a.tensor(&b).unwrap();
        lhs.apply_1q(g, 0).unwrap();
        let mut a2 = a.clone();
        a2.apply_1q(g, 0).unwrap();
        let rhs = a2.tensor(&b).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn tensor_layout(a in random_state(1), b in random_state(2)) {
        let t = a.tensor(&b).unwrap();
        for i in 0..2 {
            for j in 0..4 {
                prop_assert!((t.amplitude(i * 4 + j) - a.amplitude(i) * b.amplitude(j)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn reset_is_idempotent(s in random_state(3), q in 0usize..3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut once = s.clone();
        once.reset_qubit(q, &mut rng).unwrap();
        prop_assert!(once.probability(q, 0).unwrap() > 1.0 - 1e-12);
        prop_assert!((once.norm_sqr() - 1.0).abs() < 1e-12);
        let mut twice = once.clone();
        twice.reset_qubit(q, &mut rng).unwrap();
        prop_assert!(twice.max_abs_diff(&once) < 1e-12);
    }

    #[test]
    fn reduced_density_is_valid(s in random_state(3), q in 0usize..3) {
        let rho = s.reduced_density(q).unwrap();
        prop_assert!(qtele_core::qsim::DensityMatrix2::new(rho.entries()).is_ok());
    }

    #[test]
    fn measurement_renormalizes(s in random_state(3), q in 0usize..3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = s.clone();
        let bit = t.measure_qubit(q, &mut rng).unwrap();
        prop_assert!((t.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((t.probability(q, bit).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn bell_measurement_statistics() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let phi = bell_state(BellLabel::PhiPlus);
    let zeros = (0..10_000)
        .filter(|_| phi.clone().measure_qubit(0, &mut rng).unwrap() == 0)
        .count();
    assert!((4800..=5200).contains(&zeros), "{zeros}");
}

#[test]
fn equation_nine_indices() {
    let psi = PureQubit::real(0.6, 0.8).unwrap();
    let s = psi
        .to_state()
        .tensor(&bell_state(BellLabel::PhiPlus))
        .unwrap();
    let nonzero: Vec<usize> = (0..8).filter(|&i| s.amplitude(i).norm() > 1e-15).collect();
    assert_eq!(nonzero, vec![0, 3, 4, 7]);
}

#[test]
fn golden_dump() {
    let psi = PureQubit::real(0.6, 0.8).unwrap();
    let s = psi
        .to_state()
        .tensor(&StateVector::cbs(&[1]).unwrap())
        .unwrap();
    let want = "0\t00\t0\t0\n\
                1\t01\t6.000000000000000e-1\t0\n\
                2\t10\t0\t0\n\
                3\t11\t8.000000000000000e-1\t0\n";
    assert_eq!(s.dump(), want);
}

#[test]
fn twenty_four_qubit_register() {
    let s = StateVector::zero(24).unwrap();
    assert_eq!(s.len(), 1 << 24);
    assert!(StateVector::zero(25).is_err());
}
