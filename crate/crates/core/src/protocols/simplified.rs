use rand::Rng;

use super::{check_pair, Snapshot};
use crate::error::Result;
use crate::qsim::{fidelity, DensityMatrix2, Gate1Q, PureQubit, StateVector, NORM_TOL};

const PAIR_A: usize = 0;
const PAIR_B: usize = 1;
const PAYLOAD: usize = 2;

/// Result of one run of the simplified (reset-based) protocol.
#[derive(Debug, Clone)]
pub struct SimplifiedTrace {
    pub psi0: StateVector,
    pub psi1: StateVector,
    pub post_hadamard: StateVector,
    pub post_reset: StateVector,
    pub bob_final: DensityMatrix2,
    pub bob_state: PureQubit,
    pub fidelity_vs_input: f64,
    pub classical_bits_sent: u32,
    /// For imbalanced pairs, the unnormalized factor `C = A|00⟩ + B|10⟩`
    /// that multiplies the payload after the CNOT.
    pub unnormalized_factor_note: Option<String>,
}

impl SimplifiedTrace {
    pub fn snapshots(&self) -> Vec<Snapshot> {
        vec![
            Snapshot {
                name: "psi0",
                state: self.psi0.clone(),
            },
            Snapshot {
                name: "psi1",
                state: self.psi1.clone(),
            },
            Snapshot {
                name: "post_hadamard",
                state: self.post_hadamard.clone(),
            },
            Snapshot {
                name: "post_reset",
                state: self.post_reset.clone(),
            },
        ]
    }
}

/// Simplified protocol: `pair ⊗ ψ`, CNOT(q0 → q1), H(q0), then strict reset
/// of q0 and q1. No classical bits are produced and Bob applies nothing.
/// Draws two values from `rng` (one per reset).
pub fn teleport_simplified<R: Rng + ?Sized>(
    psi: &PureQubit,
    epr: &StateVector,
    rng: &mut R,
) -> Result<SimplifiedTrace> {
    check_pair(epr)?;
    let mut state = epr.tensor(&psi.to_state())?;
    let psi0 = state.clone();

    state.apply_cnot(PAIR_A, PAIR_B)?;
    let psi1 = state.clone();

    state.apply_1q(Gate1Q::H, PAIR_A)?;
    let post_hadamard = state.clone();

    state.reset_qubit(PAIR_A, rng)?;
    state.reset_qubit(PAIR_B, rng)?;

    let bob_final = state.reduced_density(PAYLOAD)?;
    let (bob_state, _) = state.split_qubit(PAYLOAD)?;
    Ok(SimplifiedTrace {
        psi0,
        psi1,
        post_hadamard,
        post_reset: state,
        bob_final,
        bob_state,
        fidelity_vs_input: fidelity(psi, &bob_final),
        classical_bits_sent: 0,
        unnormalized_factor_note: factor_note(epr),
    })
}

fn factor_note(epr: &StateVector) -> Option<String> {
    let a = epr.amplitude(0);
    let b = epr.amplitude(3);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let balanced = (a.re - h).abs() <= NORM_TOL
        && (b.re - h).abs() <= NORM_TOL
        && a.im.abs() <= NORM_TOL
        && b.im.abs() <= NORM_TOL;
    if balanced {
        None
    } else {
        Some(format!("C = ({a})|00⟩ + ({b})|10⟩"))
    }
}
