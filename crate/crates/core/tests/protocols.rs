//! Protocol fixtures and statistics. Expected kets below were expanded by
//! hand from the tensor algebra for α = 0.6, β = 0.8.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use qtele_core::protocols::{
    bell_state, noisy_epr, standard_noisy_fidelity_oracle, teleport_simplified, teleport_standard,
    teleport_standard_forced, trace_dump, BellLabel, NoisyEprParams,
};
use qtele_core::qsim::{Amplitude, PureQubit, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHA: f64 = 0.6;
const BETA: f64 = 0.8;
const OUTCOMES: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

/// Builds a state from `(ket, amplitude)` terms; ket strings list qubit 0 first.
fn ket(terms: &[(&str, f64)]) -> StateVector {
    let n = terms[0].0.len();
    let mut amps = vec![Amplitude::new(0.0, 0.0); 1 << n];
    for (bits, a) in terms {
        let idx = usize::from_str_radix(bits, 2).unwrap();
        amps[idx] += Amplitude::new(*a, 0.0);
    }
    StateVector::from_amplitudes(amps).unwrap()
}

fn psi() -> PureQubit {
    PureQubit::real(ALPHA, BETA).unwrap()
}

fn bloch(rng: &mut impl Rng) -> PureQubit {
    let theta = (1.0 - 2.0 * rng.gen::<f64>()).acos().clamp(0.0, PI);
    PureQubit::from_bloch(theta, rng.gen_range(0.0..TAU)).unwrap()
}

fn real_psi(rng: &mut impl Rng) -> PureQubit {
    let t = rng.gen_range(0.0..TAU);
    PureQubit::real(t.cos(), t.sin()).unwrap()
}

#[test]
fn standard_snapshots_match_ket_expansions() {
    let r = FRAC_1_SQRT_2;
    let (a, b) = (ALPHA, BETA);
    let out = teleport_standard_forced(&psi(), &bell_state(BellLabel::PhiPlus), (0, 0)).unwrap();
    let psi0 = ket(&[
        ("000", a * r),
        ("011", a * r),
        ("100", b * r),
        ("111", b * r),
    ]);
    let psi1 = ket(&[
        ("000", a * r),
        ("011", a * r),
        ("110", b * r),
        ("101", b * r),
    ]);
    let psi2 = ket(&[
        ("000", a / 2.0),
        ("100", a / 2.0),
        ("011", a / 2.0),
        ("111", a / 2.0),
        ("010", b / 2.0),
        ("110", -b / 2.0),
        ("001", b / 2.0),
        ("101", -b / 2.0),
    ]);
    assert!(out.snapshot("psi0").unwrap().max_abs_diff(&psi0) < 1e-12);
    assert!(out.snapshot("psi1").unwrap().max_abs_diff(&psi1) < 1e-12);
    assert!(out.snapshot("psi2").unwrap().max_abs_diff(&psi2) < 1e-12);
    assert!(
        out.snapshot("post_measure")
            .unwrap()
            .max_abs_diff(&ket(&[("000", a), ("001", b)]))
            < 1e-12
    );
}

#[test]
fn noisy_standard_snapshots() {
    let (a, b) = (ALPHA, BETA);
    let (na, nb) = (0.8, 0.6);
    let epr = noisy_epr(&NoisyEprParams::from_a(na).unwrap());
    let out = teleport_standard_forced(&psi(), &epr, (0, 0)).unwrap();
    let psi0 = ket(&[
        ("000", a * na),
        ("100", b * na),
        ("011", a * nb),
        ("111", b * nb),
    ]);
    let psi1 = ket(&[
        ("000", a * na),
        ("110", b * na),
        ("011", a * nb),
        ("101", b * nb),
    ]);
    let r = FRAC_1_SQRT_2;
    let psi2 = ket(&[
        ("000", a * na * r),
        ("100", a * na * r),
        ("010", b * na * r),
        ("110", -b * na * r),
        ("011", a * nb * r),
        ("111", a * nb * r),
        ("001", b * nb * r),
        ("101", -b * nb * r),
    ]);
    assert!(out.snapshot("psi0").unwrap().max_abs_diff(&psi0) < 1e-12);
    assert!(out.snapshot("psi1").unwrap().max_abs_diff(&psi1) < 1e-12);
    assert!(out.snapshot("psi2").unwrap().max_abs_diff(&psi2) < 1e-12);
}

#[test]
fn simplified_snapshots_match_ket_expansions() {
    let r = FRAC_1_SQRT_2;
    let (a, b) = (ALPHA, BETA);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let t = teleport_simplified(&psi(), &bell_state(BellLabel::PhiPlus), &mut rng).unwrap();
    let psi0 = ket(&[
        ("000", a * r),
        ("001", b * r),
        ("110", a * r),
        ("111", b * r),
    ]);
    let psi1 = ket(&[
        ("000", a * r),
        ("001", b * r),
        ("100", a * r),
        ("101", b * r),
    ]);
    assert!(t.psi0.max_abs_diff(&psi0) < 1e-12);
    assert!(t.psi1.max_abs_diff(&psi1) < 1e-12);
    // psi1 factorizes as |+⟩|0⟩ ⊗ ψ with ψ intact on q2
    let plus_zero = ket(&[("00", r), ("10", r)]);
    assert!(
        t.psi1
            .max_abs_diff(&plus_zero.tensor(&psi().to_state()).unwrap())
            < 1e-12
    );
    assert!(t.post_reset.max_abs_diff(&ket(&[("000", a), ("001", b)])) < 1e-12);
}

#[test]
fn noisy_simplified_snapshots() {
    let (a, b) = (ALPHA, BETA);
    let (na, nb) = (0.8, 0.6);
    let epr = noisy_epr(&NoisyEprParams::from_a(na).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let t = teleport_simplified(&psi(), &epr, &mut rng).unwrap();
    let psi0 = ket(&[
        ("000", na * a),
        ("110", nb * a),
        ("001", na * b),
        ("111", nb * b),
    ]);
    let psi1 = ket(&[
        ("000", na * a),
        ("100", nb * a),
        ("001", na * b),
        ("101", nb * b),
    ]);
    assert!(t.psi0.max_abs_diff(&psi0) < 1e-12);
    assert!(t.psi1.max_abs_diff(&psi1) < 1e-12);
    // C = A|00⟩ + B|10⟩ factors off the payload
    let c = ket(&[("00", na), ("10", nb)]);
    assert!(t.psi1.max_abs_diff(&c.tensor(&psi().to_state()).unwrap()) < 1e-12);
    assert!((t.fidelity_vs_input - 1.0).abs() < 1e-12);
}

#[test]
fn noiseless_standard_is_perfect_for_random_inputs() {
    let phi = bell_state(BellLabel::PhiPlus);
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..200 {
        let q = bloch(&mut rng);
        for o in OUTCOMES {
            let out = match teleport_standard_forced(&q, &phi, o) {
                Ok(out) => out,
                Err(e) => panic!("{o:?}: {e}"),
            };
            assert!((out.fidelity_vs_input - 1.0).abs() < 1e-12);
            assert_eq!(out.classical_bits_sent, 2);
        }
    }
}

#[test]
fn outcome_distribution_is_uniform() {
    let phi = bell_state(BellLabel::PhiPlus);
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);
    let mut counts = [0usize; 4];
    for _ in 0..10_000 {
        let out = teleport_standard(&psi(), &phi, &mut rng).unwrap();
        counts[(2 * out.b1 + out.b2) as usize] += 1;
        assert!((out.fidelity_vs_input - 1.0).abs() < 1e-12);
    }
    for c in counts {
        assert!((2300..=2700).contains(&c), "{counts:?}");
    }
}

#[test]
fn noisy_standard_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for a in [0.6, 0.7, 0.8, 0.9] {
        let params = NoisyEprParams::from_a(a).unwrap();
        let epr = noisy_epr(&params);
        for _ in 0..50 {
            let q = real_psi(&mut rng);
            for o in OUTCOMES {
                let sim = teleport_standard_forced(&q, &epr, o).unwrap();
                let oracle = standard_noisy_fidelity_oracle(&q, &params, o).unwrap();
                assert!(
                    (sim.fidelity_vs_input - oracle).abs() < 1e-10,
                    "A={a} {o:?}"
                );
                assert!(
                    sim.fidelity_vs_input < 1.0,
                    "A={a} {o:?} F={}",
                    sim.fidelity_vs_input
                );
            }
        }
    }
}

#[test]
fn noisy_standard_spot_value() {
    let params = NoisyEprParams::from_a(0.8).unwrap();
    let out = teleport_standard_forced(&psi(), &noisy_epr(&params), (0, 0)).unwrap();
    assert!((out.fidelity_vs_input - 0.98).abs() < 1e-12);
}

#[test]
fn basis_payloads_survive_noise() {
    for a in [0.6, 0.8, 0.95] {
        let epr = noisy_epr(&NoisyEprParams::from_a(a).unwrap());
        for q in [PureQubit::ZERO, PureQubit::ONE] {
            for o in OUTCOMES {
                let out = teleport_standard_forced(&q, &epr, o).unwrap();
                assert!((out.fidelity_vs_input - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn simplified_is_perfect_with_and_without_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut pairs = vec![bell_state(BellLabel::PhiPlus)];
    for a in [0.6, 0.8, 0.95] {
        pairs.push(noisy_epr(&NoisyEprParams::from_a(a).unwrap()));
    }
    for epr in &pairs {
        for _ in 0..200 {
            let q = bloch(&mut rng);
            let t = teleport_simplified(&q, epr, &mut rng).unwrap();
            assert!((t.fidelity_vs_input - 1.0).abs() < 1e-12);
            assert_eq!(t.classical_bits_sent, 0);
        }
    }
}

#[test]
fn alice_keeps_no_copy() {
    let phi = bell_state(BellLabel::PhiPlus);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let out = teleport_standard(&bloch(&mut rng), &phi, &mut rng).unwrap();
        let post = out.snapshot("post_measure").unwrap();
        assert!(post.reduced_density(0).unwrap().is_diagonal(1e-12));
        assert!(post.reduced_density(1).unwrap().is_diagonal(1e-12));
    }
}

#[test]
fn trace_export() {
    let out = teleport_standard_forced(&psi(), &bell_state(BellLabel::PhiPlus), (1, 1)).unwrap();
    let dump = trace_dump(&out.trace);
    let headers: Vec<_> = dump.lines().filter(|l| l.starts_with("# ")).collect();
    assert_eq!(
        headers,
        [
            "# psi0",
            "# psi1",
            "# psi2",
            "# post_measure",
            "# post_correction"
        ]
    );
    assert_eq!(dump.lines().count(), 5 * 9);
}
