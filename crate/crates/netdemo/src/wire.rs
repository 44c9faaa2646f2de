//! Length-prefixed JSON framing.
//!
//! Wire format: `[u32 length (big-endian)][UTF-8 JSON object]`; every object
//! carries a `"type"` field.

use std::io::{self, Read, Write};

use qtele_core::pipeline::ProtocolKind;
use serde::{Deserialize, Serialize};

/// Frames larger than this are rejected before allocation.
pub const MAX_FRAME: usize = 16 * 1024 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Alice,
    Bob,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WireGate {
    H,
    X,
    Z,
    #[serde(rename = "CNOT")]
    Cnot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Message {
    // client -> fabric
    Hello {
        role: Role,
    },
    NewSession {
        protocol: ProtocolKind,
        #[serde(rename = "noise_A", default, skip_serializing_if = "Option::is_none")]
        noise_a: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    /// With `embed`, the fabric also performs the simplified protocol's
    /// pair-to-payload CNOT before splitting ownership.
    AllocEpr {
        session: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        embed: Option<u32>,
    },
    AllocQubit {
        session: u64,
        alpha_re: f64,
        alpha_im: f64,
        beta_re: f64,
        beta_im: f64,
    },
    Apply {
        session: u64,
        gate: WireGate,
        qubits: Vec<u32>,
    },
    Measure {
        session: u64,
        qubit: u32,
    },
    Reset {
        session: u64,
        qubit: u32,
    },
    /// Verification only: not an operation either party could perform.
    ReadRho {
        session: u64,
        qubit: u32,
    },

    // Alice -> Bob, never through the fabric
    Classical {
        b1: u8,
        b2: u8,
    },
    /// Control: announces the session Bob should follow.
    Session {
        session: u64,
        protocol: ProtocolKind,
        count: usize,
    },
    /// Control: the fabric handle of the qubit Bob should read next.
    Handle {
        qubit: u32,
    },
    Bye,

    // fabric -> client
    Welcome {
        role: Role,
    },
    SessionCreated {
        session: u64,
    },
    Epr {
        q_alice: u32,
        q_bob: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q_alice_aux: Option<u32>,
    },
    Qubit {
        q: u32,
    },
    Ack,
    Bit {
        bit: u8,
    },
    /// Row-major `[re, im]` entries of a 2×2 density matrix.
    Rho {
        rho: [[f64; 2]; 4],
    },
    Error {
        message: String,
    },
}

impl Message {
    pub fn kind(&self) -> &'static str {
        match self {
            Message::Hello { .. } => "HELLO",
            Message::NewSession { .. } => "NEW_SESSION",
            Message::AllocEpr { .. } => "ALLOC_EPR",
            Message::AllocQubit { .. } => "ALLOC_QUBIT",
            Message::Apply { .. } => "APPLY",
            Message::Measure { .. } => "MEASURE",
            Message::Reset { .. } => "RESET",
            Message::ReadRho { .. } => "READ_RHO",
            Message::Classical { .. } => "CLASSICAL",
            Message::Session { .. } => "SESSION",
            Message::Handle { .. } => "HANDLE",
            Message::Bye => "BYE",
            Message::Welcome { .. } => "WELCOME",
            Message::SessionCreated { .. } => "SESSION_CREATED",
            Message::Epr { .. } => "EPR",
            Message::Qubit { .. } => "QUBIT",
            Message::Ack => "ACK",
            Message::Bit { .. } => "BIT",
            Message::Rho { .. } => "RHO",
            Message::Error { .. } => "ERROR",
        }
    }

    pub fn error(message: impl Into<String>) -> Self {
        Message::Error {
            message: message.into(),
        }
    }
}

/// Why a frame payload could not be turned into a [`Message`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecodeError {
    #[error("payload is not a JSON object: {0}")]
    NotJson(String),
    #[error("missing \"type\" field")]
    MissingType,
    #[error("unknown message type {0:?}")]
    UnknownType(String),
    #[error("malformed {kind}: {reason}")]
    Malformed { kind: String, reason: String },
}

pub fn decode_message(payload: &[u8]) -> Result<Message, DecodeError> {
    let value: serde_json::Value =
        serde_json::from_slice(payload).map_err(|e| DecodeError::NotJson(e.to_string()))?;
    let kind = value
        .get("type")
        .and_then(|t| t.as_str())
        .ok_or(DecodeError::MissingType)?
        .to_string();
    serde_json::from_value(value).map_err(|e| {
        let reason = e.to_string();
        if reason.starts_with("unknown variant") {
            DecodeError::UnknownType(kind)
        } else {
            DecodeError::Malformed { kind, reason }
        }
    })
}

pub fn encode_frame(msg: &Message) -> Vec<u8> {
    let payload = serde_json::to_vec(msg).expect("messages serialize");
    let mut frame = Vec::with_capacity(4 + payload.len());
    frame.extend_from_slice(&(payload.len() as u32).to_be_bytes());
    frame.extend_from_slice(&payload);
    frame
}

pub fn write_message<W: Write>(w: &mut W, msg: &Message) -> io::Result<()> {
    w.write_all(&encode_frame(msg))?;
    w.flush()
}

/// Reads one frame payload; `Ok(None)` on a clean end of stream.
pub fn read_frame<R: Read>(r: &mut R) -> io::Result<Option<Vec<u8>>> {
    let mut len = [0u8; 4];
    match r.read_exact(&mut len) {
        Ok(()) => {}
        Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => return Ok(None),
        Err(e) => return Err(e),
    }
    let len = u32::from_be_bytes(len) as usize;
    if len > MAX_FRAME {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("frame of {len} bytes exceeds limit"),
        ));
    }
    let mut payload = vec![0u8; len];
    r.read_exact(&mut payload)?;
    Ok(Some(payload))
}

/// Incremental decoder for byte chunks of arbitrary size.
#[derive(Debug, Default)]
pub struct FrameDecoder {
    buf: Vec<u8>,
}

impl FrameDecoder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends `chunk` and returns every frame payload completed by it.
    pub fn push(&mut self, chunk: &[u8]) -> io::Result<Vec<Vec<u8>>> {
        self.buf.extend_from_slice(chunk);
        let mut frames = Vec::new();
        loop {
            if self.buf.len() < 4 {
                break;
            }
            let len =
                u32::from_be_bytes([self.buf[0], self.buf[1], self.buf[2], self.buf[3]]) as usize;
            if len > MAX_FRAME {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidData,
                    "frame exceeds limit",
                ));
            }
            if self.buf.len() < 4 + len {
                break;
            }
            frames.push(self.buf[4..4 + len].to_vec());
            self.buf.drain(..4 + len);
        }
        Ok(frames)
    }

    /// Bytes held back waiting for the rest of a frame.
    pub fn pending(&self) -> usize {
        self.buf.len()
    }
}
