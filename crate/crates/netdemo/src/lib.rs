//! Networked teleportation: an entanglement-fabric broker plus Alice and Bob
//! clients talking length-prefixed JSON over TCP.
//!
//! The fabric holds all quantum state and enforces that each party only
//! touches the qubits it owns. Alice's classical disambiguation bits travel
//! on a separate, direct connection to Bob, so the classical cost of each
//! protocol can be read straight off the wire.

pub mod client;
pub mod fabric;
pub mod ledger;
pub mod reference;
pub mod transcript;
pub mod wire;

pub use client::{run_alice, run_bob, AliceConfig, AliceRun, BobRun, FabricClient};
pub use fabric::{Fabric, FabricHandle};
pub use ledger::{LedgerError, SessionLedger, LOCALITY_VIOLATION};
pub use reference::in_process_reference;
pub use transcript::{audit_json, transcript_audit, Audit, Transcript};
pub use wire::{Message, Role, WireGate};

use qtele_core::pipeline::ProtocolKind;

pub const SEED_ENV: &str = "QTELEPORT_SEED";

/// `QTELEPORT_SEED` if set and parseable, otherwise `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

#[derive(Debug, thiserror::Error)]
pub enum NetError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("connection closed by peer")]
    Closed,
    #[error("bad frame: {0}")]
    Decode(#[from] wire::DecodeError),
    #[error("remote error: {0}")]
    Remote(String),
    #[error("expected {expected}, got {got}")]
    Unexpected { expected: String, got: String },
    #[error("protocol mismatch: local {local}, remote {remote}")]
    ProtocolMismatch {
        local: ProtocolKind,
        remote: ProtocolKind,
    },
    #[error("malformed transcript: {0}")]
    Malformed(String),
    #[error("session aborted: {reason}")]
    Aborted {
        reason: String,
        transcript: Box<Transcript>,
    },
    #[error(transparent)]
    Core(#[from] qtele_core::Error),
}
