//! Bell pairs and the two teleportation protocols.
//!
//! Register layouts:
//! - standard: `[q0 = ψ, q1 = Alice's pair half, q2 = Bob's pair half]`, built as `ψ ⊗ pair`
//! - simplified: `[q0, q1 = pair, q2 = ψ]`, built as `pair ⊗ ψ`

mod bell;
mod oracle;
mod simplified;
mod standard;

pub use bell::{bell_state, noisy_epr, BellLabel, NoisyEprParams};
pub use oracle::standard_noisy_fidelity_oracle;
pub use simplified::{teleport_simplified, SimplifiedTrace};
pub use standard::{
    correct_qubit, standard_correction, teleport_standard, teleport_standard_forced,
    TeleportOutcome,
};

use crate::qsim::StateVector;

/// A named intermediate state.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub name: &'static str,
    pub state: StateVector,
}

/// Concatenated debug dumps, each preceded by `# <name>`.
pub fn trace_dump(snapshots: &[Snapshot]) -> String {
    let mut out = String::new();
    for s in snapshots {
        out.push_str("# ");
        out.push_str(s.name);
        out.push('\n');
        out.push_str(&s.state.dump());
    }
    out
}

fn check_pair(epr: &StateVector) -> crate::Result<()> {
    if epr.n_qubits() != 2 {
        return Err(crate::Error::Arity {
            expected: 2,
            got: epr.n_qubits(),
        });
    }
    Ok(())
}
