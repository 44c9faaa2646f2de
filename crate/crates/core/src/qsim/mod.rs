//! Exact dense statevector engine.
//!
//! Index convention: the ket `|q0 q1 ... q(n-1)⟩` lives at index
//! `Σ q_k · 2^(n-1-k)`, so qubit 0 is the most significant index bit.

mod density;
mod gate;
mod qubit;
mod state;

pub use density::{fidelity, DensityMatrix2};
pub use gate::Gate1Q;
pub use qubit::PureQubit;
pub use state::StateVector;

pub use num_complex::Complex64 as Amplitude;

/// Largest register the engine will allocate.
pub const MAX_QUBITS: usize = 24;
/// Tolerance for normalization, hermiticity and unitarity checks.
pub const NORM_TOL: f64 = 1e-12;
/// Norm deviation beyond which a state is treated as corrupt rather than drifted.
pub const CORRUPT_TOL: f64 = 1e-9;
/// Branches with probability at or below this value are never sampled.
pub(crate) const PROB_FLOOR: f64 = 1e-24;

pub(crate) fn c(re: f64, im: f64) -> Amplitude {
    Amplitude::new(re, im)
}
