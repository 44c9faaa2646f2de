//! Alice and Bob. Every quantum operation is a request to the fabric; the
//! only Alice→Bob traffic is CLASSICAL payload plus SESSION/HANDLE control.

use std::io::{BufReader, BufWriter};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};

use qtele_core::pipeline::ProtocolKind;
use qtele_core::qsim::{DensityMatrix2, PureQubit};
use qtele_core::sdc::cl2qu;

use crate::transcript::{Direction, Peer, Transcript};
use crate::wire::{decode_message, read_frame, write_message, Message, Role, WireGate};
use crate::NetError;

/// One framed connection whose traffic is logged to a transcript.
pub struct Link {
    reader: BufReader<TcpStream>,
    writer: BufWriter<TcpStream>,
    peer: Peer,
}

impl Link {
    pub fn new(stream: TcpStream, peer: Peer) -> Result<Self, NetError> {
        stream.set_nodelay(true)?;
        Ok(Self {
            reader: BufReader::new(stream.try_clone()?),
            writer: BufWriter::new(stream),
            peer,
        })
    }

    pub fn send(&mut self, t: &mut Transcript, msg: &Message) -> Result<(), NetError> {
        write_message(&mut self.writer, msg)?;
        t.record(Direction::Sent, self.peer, msg);
        Ok(())
    }

    pub fn recv(&mut self, t: &mut Transcript) -> Result<Message, NetError> {
        let payload = read_frame(&mut self.reader)?.ok_or(NetError::Closed)?;
        let msg = decode_message(&payload)?;
        t.record(Direction::Received, self.peer, &msg);
        Ok(msg)
    }

    /// Send and wait for the reply; an ERROR reply becomes [`NetError::Remote`].
    pub fn request(&mut self, t: &mut Transcript, msg: &Message) -> Result<Message, NetError> {
        self.send(t, msg)?;
        match self.recv(t)? {
            Message::Error { message } => Err(NetError::Remote(message)),
            reply => Ok(reply),
        }
    }
}

fn unexpected(expected: &str, got: &Message) -> NetError {
    NetError::Unexpected {
        expected: expected.into(),
        got: got.kind().into(),
    }
}

/// Typed wrapper over a fabric connection.
pub struct FabricClient {
    link: Link,
    pub transcript: Transcript,
}

impl FabricClient {
    pub fn connect<A: ToSocketAddrs>(
        addr: A,
        role: Role,
        protocol: ProtocolKind,
    ) -> Result<Self, NetError> {
        let mut c = Self {
            link: Link::new(TcpStream::connect(addr)?, Peer::Fabric)?,
            transcript: Transcript::new(role, protocol),
        };
        match c.request(&Message::Hello { role })? {
            Message::Welcome { .. } => Ok(c),
            other => Err(unexpected("WELCOME", &other)),
        }
    }

    pub fn request(&mut self, msg: &Message) -> Result<Message, NetError> {
        self.link.request(&mut self.transcript, msg)
    }

    fn ack(&mut self, msg: &Message) -> Result<(), NetError> {
        match self.request(msg)? {
            Message::Ack => Ok(()),
            other => Err(unexpected("ACK", &other)),
        }
    }

    pub fn new_session(
        &mut self,
        protocol: ProtocolKind,
        noise_a: Option<f64>,
        seed: Option<u64>,
    ) -> Result<u64, NetError> {
        match self.request(&Message::NewSession {
            protocol,
            noise_a,
            seed,
        })? {
            Message::SessionCreated { session } => {
                self.transcript.session = Some(session);
                Ok(session)
            }
            other => Err(unexpected("SESSION_CREATED", &other)),
        }
    }

    pub fn alloc_epr(
        &mut self,
        session: u64,
        embed: Option<u32>,
    ) -> Result<(u32, u32, Option<u32>), NetError> {
        match self.request(&Message::AllocEpr { session, embed })? {
            Message::Epr {
                q_alice,
                q_bob,
                q_alice_aux,
            } => Ok((q_alice, q_bob, q_alice_aux)),
            other => Err(unexpected("EPR", &other)),
        }
    }

    pub fn alloc_qubit(&mut self, session: u64, psi: &PureQubit) -> Result<u32, NetError> {
        let (a, b) = (psi.alpha(), psi.beta());
        let msg = Message::AllocQubit {
            session,
            alpha_re: a.re,
            alpha_im: a.im,
            beta_re: b.re,
            beta_im: b.im,
        };
        match self.request(&msg)? {
            Message::Qubit { q } => Ok(q),
            other => Err(unexpected("QUBIT", &other)),
        }
    }

    pub fn apply(&mut self, session: u64, gate: WireGate, qubits: &[u32]) -> Result<(), NetError> {
        self.ack(&Message::Apply {
            session,
            gate,
            qubits: qubits.to_vec(),
        })
    }

    pub fn measure(&mut self, session: u64, qubit: u32) -> Result<u8, NetError> {
        match self.request(&Message::Measure { session, qubit })? {
            Message::Bit { bit } => Ok(bit),
            other => Err(unexpected("BIT", &other)),
        }
    }

    pub fn reset(&mut self, session: u64, qubit: u32) -> Result<(), NetError> {
        self.ack(&Message::Reset { session, qubit })
    }

    pub fn read_rho(&mut self, session: u64, qubit: u32) -> Result<DensityMatrix2, NetError> {
        match self.request(&Message::ReadRho { session, qubit })? {
            Message::Rho { rho } => {
                let z = rho.map(|[re, im]| qtele_core::qsim::Amplitude::new(re, im));
                Ok(DensityMatrix2::new([[z[0], z[1]], [z[2], z[3]]])?)
            }
            other => Err(unexpected("RHO", &other)),
        }
    }

    pub fn bye(&mut self) -> Result<(), NetError> {
        self.ack(&Message::Bye)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AliceConfig {
    pub protocol: ProtocolKind,
    pub noise_a: Option<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct AliceRun {
    pub session: u64,
    /// Fabric and Bob traffic, in order.
    pub transcript: Transcript,
    /// Bell-measurement outcome per bit (standard protocol only).
    pub outcomes: Outcomes,
}

#[derive(Debug, Clone)]
pub struct BobRun {
    pub session: u64,
    pub transcript: Transcript,
    pub bits: Vec<u8>,
}

type Outcomes = Vec<Option<(u8, u8)>>;

/// Keeps whatever was logged before a transport failure.
fn abort(mut t: Transcript, e: NetError) -> NetError {
    match e {
        NetError::Io(_) | NetError::Closed | NetError::Decode(_) => {
            t.aborted = Some(e.to_string());
            NetError::Aborted {
                reason: e.to_string(),
                transcript: Box::new(t),
            }
        }
        other => other,
    }
}

/// Teleports `bits` to the Bob listening at `bob`, one fabric pair per bit.
pub fn run_alice<F: ToSocketAddrs, B: ToSocketAddrs>(
    fabric: F,
    bob: B,
    cfg: &AliceConfig,
    bits: &[u8],
) -> Result<AliceRun, NetError> {
    let mut fc = FabricClient::connect(fabric, Role::Alice, cfg.protocol)?;
    let mut peer = Transcript::new(Role::Alice, cfg.protocol);
    let result = alice_session(&mut fc, &mut peer, bob, cfg, bits);
    // Interleave the two logs into one transcript; order within each link is kept.
    let mut t = fc.transcript;
    t.entries.extend(peer.entries);
    t.notes.extend(peer.notes);
    match result {
        Ok((session, outcomes)) => Ok(AliceRun {
            session,
            transcript: t,
            outcomes,
        }),
        Err(e) => Err(abort(t, e)),
    }
}

fn alice_session<B: ToSocketAddrs>(
    fc: &mut FabricClient,
    peer_log: &mut Transcript,
    bob: B,
    cfg: &AliceConfig,
    bits: &[u8],
) -> Result<(u64, Outcomes), NetError> {
    let session = fc.new_session(cfg.protocol, cfg.noise_a, Some(cfg.seed))?;
    let mut bob = Link::new(TcpStream::connect(bob)?, Peer::Bob)?;
    bob.send(
        peer_log,
        &Message::Session {
            session,
            protocol: cfg.protocol,
            count: bits.len(),
        },
    )?;

    let mut outcomes = Vec::with_capacity(bits.len());
    for pair in bits.chunks(2) {
        let reg = cl2qu(pair)?;
        for k in 0..pair.len() {
            let psi = reg.qubit(k);
            let q = fc.alloc_qubit(session, &psi)?;
            match cfg.protocol {
                ProtocolKind::Standard => {
                    let (qa, qb, _) = fc.alloc_epr(session, None)?;
                    fc.apply(session, WireGate::Cnot, &[q, qa])?;
                    fc.apply(session, WireGate::H, &[q])?;
                    let b1 = fc.measure(session, q)?;
                    let b2 = fc.measure(session, qa)?;
                    bob.send(peer_log, &Message::Handle { qubit: qb })?;
                    bob.send(peer_log, &Message::Classical { b1, b2 })?;
                    outcomes.push(Some((b1, b2)));
                }
                ProtocolKind::Simplified => {
                    let (qa, qb, aux) = fc.alloc_epr(session, Some(q))?;
                    let aux = aux.ok_or_else(|| NetError::Unexpected {
                        expected: "EPR with q_alice_aux".into(),
                        got: "EPR".into(),
                    })?;
                    fc.apply(session, WireGate::H, &[qa])?;
                    fc.reset(session, qa)?;
                    fc.reset(session, aux)?;
                    bob.send(peer_log, &Message::Handle { qubit: qb })?;
                    outcomes.push(None);
                }
            }
        }
    }
    if cfg.protocol == ProtocolKind::Simplified && !bits.is_empty() {
        fc.transcript.notes.push(
            "simplified: the pair-to-payload CNOT ran fabric-side during ALLOC_EPR (embed), \
             before ownership of the payload passed to bob"
                .into(),
        );
    }
    bob.send(peer_log, &Message::Bye)?;
    fc.bye()?;
    Ok((session, outcomes))
}

/// Serves one Alice on `listener`, reading each teleported qubit via MEASURE.
pub fn run_bob<F: ToSocketAddrs>(
    listener: &TcpListener,
    fabric: F,
    protocol: ProtocolKind,
) -> Result<BobRun, NetError> {
    let mut fc = FabricClient::connect(fabric, Role::Bob, protocol)?;
    let mut peer = Transcript::new(Role::Bob, protocol);
    let result = bob_session(&mut fc, &mut peer, listener, protocol);
    let mut t = fc.transcript;
    t.entries.extend(peer.entries);
    match result {
        Ok((session, bits)) => {
            t.session = Some(session);
            Ok(BobRun {
                session,
                transcript: t,
                bits,
            })
        }
        Err(e) => Err(abort(t, e)),
    }
}

fn bob_session(
    fc: &mut FabricClient,
    log: &mut Transcript,
    listener: &TcpListener,
    protocol: ProtocolKind,
) -> Result<(u64, Vec<u8>), NetError> {
    let (stream, _) = listener.accept()?;
    let mut alice = Link::new(stream, Peer::Alice)?;
    let (session, count) = match alice.recv(log)? {
        Message::Session {
            session,
            protocol: remote,
            count,
        } => {
            if remote != protocol {
                return Err(NetError::ProtocolMismatch {
                    local: protocol,
                    remote,
                });
            }
            (session, count)
        }
        other => return Err(unexpected("SESSION", &other)),
    };

    let mut bits = Vec::with_capacity(count);
    loop {
        let qubit = match alice.recv(log)? {
            Message::Handle { qubit } => qubit,
            Message::Bye => break,
            other => return Err(unexpected("HANDLE or BYE", &other)),
        };
        if protocol == ProtocolKind::Standard {
            let (b1, b2) = match alice.recv(log)? {
                Message::Classical { b1, b2 } => (b1, b2),
                other => return Err(unexpected("CLASSICAL", &other)),
            };
            if b2 == 1 {
                fc.apply(session, WireGate::X, &[qubit])?;
            }
            if b1 == 1 {
                fc.apply(session, WireGate::Z, &[qubit])?;
            }
        }
        bits.push(fc.measure(session, qubit)?);
    }
    fc.bye()?;
    if bits.len() != count {
        return Err(NetError::Unexpected {
            expected: format!("{count} qubits"),
            got: format!("{} qubits", bits.len()),
        });
    }
    Ok((session, bits))
}
