use serde::{Deserialize, Serialize};

use qtele_core::pipeline::ProtocolKind;

use crate::ledger::LOCALITY_VIOLATION;
use crate::wire::{Message, Role};
use crate::NetError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Sent,
    Received,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Peer {
    Fabric,
    Alice,
    Bob,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub direction: Direction,
    pub peer: Peer,
    pub message: Message,
}

/// Everything one party sent and received during a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub role: Role,
    pub protocol: ProtocolKind,
    pub session: Option<u64>,
    pub entries: Vec<TranscriptEntry>,
    pub notes: Vec<String>,
    /// Set when the session ended early; the entries are then partial.
    pub aborted: Option<String>,
}

impl Transcript {
    pub fn new(role: Role, protocol: ProtocolKind) -> Self {
        Self {
            role,
            protocol,
            session: None,
            entries: Vec::new(),
            notes: Vec::new(),
            aborted: None,
        }
    }

    pub fn record(&mut self, direction: Direction, peer: Peer, message: &Message) {
        self.entries.push(TranscriptEntry {
            direction,
            peer,
            message: message.clone(),
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcripts serialize")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Audit {
    /// Payload bits carried by CLASSICAL messages (2 each).
    pub classical_bits: u64,
    pub messages: usize,
    pub classical_messages: usize,
    /// Locality violations reported by the fabric plus CLASSICAL messages
    /// routed through the fabric.
    pub violations: usize,
}

pub fn transcript_audit(t: &Transcript) -> Result<Audit, NetError> {
    let mut audit = Audit {
        messages: t.entries.len(),
        ..Audit::default()
    };
    for (i, e) in t.entries.iter().enumerate() {
        match &e.message {
            Message::Classical { b1, b2 } => {
                if *b1 > 1 || *b2 > 1 {
                    return Err(NetError::Malformed(format!(
                        "entry {i}: CLASSICAL payload is not two bits"
                    )));
                }
                audit.classical_messages += 1;
                audit.classical_bits += 2;
                if e.peer == Peer::Fabric {
                    audit.violations += 1;
                }
            }
            Message::Error { message } if message.contains(LOCALITY_VIOLATION) => {
                audit.violations += 1;
            }
            _ => {}
        }
    }
    Ok(audit)
}

/// Audits a transcript serialized with [`Transcript::to_json`].
pub fn audit_json(json: &str) -> Result<Audit, NetError> {
    let t: Transcript =
        serde_json::from_str(json).map_err(|e| NetError::Malformed(e.to_string()))?;
    transcript_audit(&t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_transcript_audits_to_zero() {
        let t = Transcript::new(Role::Alice, ProtocolKind::Standard);
        assert_eq!(transcript_audit(&t).unwrap(), Audit::default());
    }

    #[test]
    fn counts_classical_and_violations() {
        let mut t = Transcript::new(Role::Alice, ProtocolKind::Standard);
        t.record(
            Direction::Sent,
            Peer::Bob,
            &Message::Classical { b1: 1, b2: 0 },
        );
        t.record(
            Direction::Sent,
            Peer::Fabric,
            &Message::Classical { b1: 0, b2: 0 },
        );
        t.record(
            Direction::Received,
            Peer::Fabric,
            &Message::error("locality violation: qubit 1 is owned by Bob"),
        );
        let a = transcript_audit(&t).unwrap();
        assert_eq!(a.classical_bits, 4);
        assert_eq!(a.classical_messages, 2);
        assert_eq!(a.violations, 2);
        assert_eq!(a.messages, 3);
        assert_eq!(audit_json(&t.to_json()).unwrap(), a);
    }

    #[test]
    fn malformed_transcripts_rejected() {
        assert!(audit_json("{}").is_err());
        let mut t = Transcript::new(Role::Bob, ProtocolKind::Simplified);
        t.record(
            Direction::Received,
            Peer::Alice,
            &Message::Classical { b1: 2, b2: 0 },
        );
        assert!(transcript_audit(&t).is_err());
    }
}
