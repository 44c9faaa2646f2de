use rand::Rng;

use super::{check_pair, Snapshot};
use crate::error::Result;
use crate::qsim::{fidelity, DensityMatrix2, Gate1Q, PureQubit, StateVector};

const PSI: usize = 0;
const ALICE: usize = 1;
const BOB: usize = 2;

/// Result of one run of the standard protocol.
///
/// `b1` is the readout of the payload qubit and selects σz; `b2` is the
/// readout of Alice's pair half and selects σx.
#[derive(Debug, Clone)]
pub struct TeleportOutcome {
    pub b1: u8,
    pub b2: u8,
    pub bob_pre_correction: DensityMatrix2,
    pub bob_final: DensityMatrix2,
    /// Bob's qubit as a pure state (it factorizes once Alice has measured).
    pub bob_state: PureQubit,
    pub fidelity_vs_input: f64,
    /// `psi0`, `psi1`, `psi2`, `post_measure`, `post_correction`.
    pub trace: Vec<Snapshot>,
    pub classical_bits_sent: u32,
}

impl TeleportOutcome {
    pub fn snapshot(&self, name: &str) -> Option<&StateVector> {
        self.trace.iter().find(|s| s.name == name).map(|s| &s.state)
    }
}

/// Standard protocol with sampled measurement outcomes.
pub fn teleport_standard<R: Rng + ?Sized>(
    psi: &PureQubit,
    epr: &StateVector,
    rng: &mut R,
) -> Result<TeleportOutcome> {
    run(psi, epr, |s, q| s.measure_qubit(q, rng))
}

/// Standard protocol with the Bell-measurement branch `(b1, b2)` injected.
/// Fails if the branch has zero probability for this input.
pub fn teleport_standard_forced(
    psi: &PureQubit,
    epr: &StateVector,
    outcome: (u8, u8),
) -> Result<TeleportOutcome> {
    run(psi, epr, |s, q| {
        let bit = if q == PSI { outcome.0 } else { outcome.1 };
        s.project_qubit(q, bit).map(|_| bit)
    })
}

fn run(
    psi: &PureQubit,
    epr: &StateVector,
    mut measure: impl FnMut(&mut StateVector, usize) -> Result<u8>,
) -> Result<TeleportOutcome> {
    check_pair(epr)?;
    let mut trace = Vec::with_capacity(5);

    let mut state = psi.to_state().tensor(epr)?;
    trace.push(Snapshot {
        name: "psi0",
        state: state.clone(),
    });

    state.apply_cnot(PSI, ALICE)?;
    trace.push(Snapshot {
        name: "psi1",
        state: state.clone(),
    });

    state.apply_1q(Gate1Q::H, PSI)?;
    trace.push(Snapshot {
        name: "psi2",
        state: state.clone(),
    });

    let b1 = measure(&mut state, PSI)?;
    let b2 = measure(&mut state, ALICE)?;
    trace.push(Snapshot {
        name: "post_measure",
        state: state.clone(),
    });
    let bob_pre_correction = state.reduced_density(BOB)?;

    standard_correction(&mut state, BOB, b1, b2)?;
    trace.push(Snapshot {
        name: "post_correction",
        state: state.clone(),
    });

    let bob_final = state.reduced_density(BOB)?;
    let (bob_state, _) = state.split_qubit(BOB)?;
    Ok(TeleportOutcome {
        b1,
        b2,
        bob_pre_correction,
        bob_final,
        bob_state,
        fidelity_vs_input: fidelity(psi, &bob_final),
        trace,
        classical_bits_sent: 2,
    })
}

/// Bob's recovery gates: σx if `b2`, then σz if `b1`, so that
/// `σz^{b1} σx^{b2}` undoes the `σx^{b2} σz^{b1}` left on his qubit.
pub fn standard_correction(state: &mut StateVector, qubit: usize, b1: u8, b2: u8) -> Result<()> {
    check_bit(b1)?;
    check_bit(b2)?;
    if b2 == 1 {
        state.apply_1q(Gate1Q::X, qubit)?;
    }
    if b1 == 1 {
        state.apply_1q(Gate1Q::Z, qubit)?;
    }
    Ok(())
}

/// [`standard_correction`] on a lone qubit.
pub fn correct_qubit(q: &PureQubit, b1: u8, b2: u8) -> Result<PureQubit> {
    let mut s = q.to_state();
    standard_correction(&mut s, 0, b1, b2)?;
    PureQubit::new(s.amplitude(0), s.amplitude(1))
}

fn check_bit(b: u8) -> Result<()> {
    if b > 1 {
        return Err(crate::Error::NotABit(b));
    }
    Ok(())
}
