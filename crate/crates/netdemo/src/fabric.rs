//! Entanglement-fabric broker: owns every session's quantum state and
//! executes the local operations clients request.

use std::collections::HashMap;
use std::io::{self, BufReader, BufWriter};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::{Arc, Mutex};
use std::thread::{self, JoinHandle};

use qtele_core::protocols::NoisyEprParams;
use qtele_core::qsim::Amplitude;

use crate::ledger::SessionLedger;
use crate::wire::{decode_message, read_frame, write_message, Message, Role};

#[derive(Default)]
struct Registry {
    sessions: HashMap<u64, Arc<Mutex<SessionLedger>>>,
    next_id: u64,
}

type Shared = Arc<Mutex<Registry>>;

pub struct Fabric {
    listener: TcpListener,
    default_seed: u64,
    registry: Shared,
}

impl Fabric {
    pub fn bind<A: ToSocketAddrs>(addr: A) -> io::Result<Self> {
        Ok(Self {
            listener: TcpListener::bind(addr)?,
            default_seed: 0,
            registry: Shared::default(),
        })
    }

    /// Seed used by sessions whose NEW_SESSION omits one.
    pub fn with_default_seed(mut self, seed: u64) -> Self {
        self.default_seed = seed;
        self
    }

    pub fn local_addr(&self) -> io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    /// Accepts connections forever, one handler thread each.
    pub fn serve(self) -> io::Result<()> {
        for stream in self.listener.incoming() {
            let stream = match stream {
                Ok(s) => s,
                Err(e) => {
                    log::warn!("accept failed: {e}");
                    continue;
                }
            };
            let registry = Arc::clone(&self.registry);
            let seed = self.default_seed;
            thread::spawn(move || {
                let peer = stream.peer_addr().ok();
                if let Err(e) = handle_connection(stream, registry, seed) {
                    log::debug!("connection {peer:?} ended: {e}");
                }
            });
        }
        Ok(())
    }

    /// Runs [`Fabric::serve`] on a background thread.
    pub fn spawn(self) -> io::Result<FabricHandle> {
        let addr = self.local_addr()?;
        let registry = Arc::clone(&self.registry);
        let join = thread::spawn(move || self.serve());
        Ok(FabricHandle {
            addr,
            registry,
            join,
        })
    }
}

pub struct FabricHandle {
    addr: SocketAddr,
    registry: Shared,
    #[allow(dead_code)]
    join: JoinHandle<io::Result<()>>,
}

impl FabricHandle {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn session_count(&self) -> usize {
        self.registry.lock().expect("registry lock").sessions.len()
    }

    /// Ownership and embedding notes recorded by a session's ledger.
    pub fn session_notes(&self, session: u64) -> Option<Vec<String>> {
        let ledger = self
            .registry
            .lock()
            .expect("registry lock")
            .sessions
            .get(&session)
            .cloned()?;
        let notes = ledger.lock().expect("session lock").notes().to_vec();
        Some(notes)
    }
}

fn handle_connection(stream: TcpStream, registry: Shared, default_seed: u64) -> io::Result<()> {
    stream.set_nodelay(true)?;
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut writer = BufWriter::new(stream);
    let mut role: Option<Role> = None;

    while let Some(payload) = read_frame(&mut reader)? {
        let reply = match decode_message(&payload) {
            Err(e) => Message::error(e.to_string()),
            Ok(Message::Bye) => {
                write_message(&mut writer, &Message::Ack)?;
                return Ok(());
            }
            Ok(Message::Hello { role: r }) => {
                role = Some(r);
                Message::Welcome { role: r }
            }
            Ok(msg) => match role {
                None => Message::error("HELLO required before other requests"),
                Some(r) => dispatch(&registry, r, msg, default_seed),
            },
        };
        write_message(&mut writer, &reply)?;
    }
    Ok(())
}

fn session(registry: &Shared, id: u64) -> Result<Arc<Mutex<SessionLedger>>, String> {
    registry
        .lock()
        .expect("registry lock")
        .sessions
        .get(&id)
        .cloned()
        .ok_or_else(|| format!("unknown session {id}"))
}

fn with_session<T>(
    registry: &Shared,
    id: u64,
    f: impl FnOnce(&mut SessionLedger) -> Result<T, crate::ledger::LedgerError>,
) -> Result<T, String> {
    let ledger = session(registry, id)?;
    let mut guard = ledger.lock().expect("session lock");
    f(&mut guard).map_err(|e| e.to_string())
}

fn dispatch(registry: &Shared, role: Role, msg: Message, default_seed: u64) -> Message {
    let result = match msg {
        Message::NewSession {
            protocol,
            noise_a,
            seed,
        } => {
            let params = match noise_a {
                None => Ok(NoisyEprParams::noiseless()),
                Some(a) if a > 0.0 && a <= 1.0 => {
                    NoisyEprParams::from_a(a).map_err(|e| e.to_string())
                }
                Some(a) => Err(format!("noise_A must be in (0, 1], got {a}")),
            };
            params.map(|params| {
                let mut reg = registry.lock().expect("registry lock");
                reg.next_id += 1;
                let id = reg.next_id;
                let ledger = SessionLedger::new(id, protocol, params, seed.unwrap_or(default_seed));
                reg.sessions.insert(id, Arc::new(Mutex::new(ledger)));
                log::info!("session {id} opened ({protocol})");
                Message::SessionCreated { session: id }
            })
        }
        Message::AllocEpr { session, embed } => with_session(registry, session, |l| {
            let (q_alice, q_bob, q_alice_aux) = l.alloc_epr(role, embed)?;
            Ok(Message::Epr {
                q_alice,
                q_bob,
                q_alice_aux,
            })
        }),
        Message::AllocQubit {
            session,
            alpha_re,
            alpha_im,
            beta_re,
            beta_im,
        } => with_session(registry, session, |l| {
            let q = l.alloc_qubit(
                role,
                Amplitude::new(alpha_re, alpha_im),
                Amplitude::new(beta_re, beta_im),
            )?;
            Ok(Message::Qubit { q })
        }),
        Message::Apply {
            session,
            gate,
            qubits,
        } => with_session(registry, session, |l| {
            l.apply(role, gate, &qubits).map(|_| Message::Ack)
        }),
        Message::Measure { session, qubit } => with_session(registry, session, |l| {
            l.measure(role, qubit).map(|bit| Message::Bit { bit })
        }),
        Message::Reset { session, qubit } => with_session(registry, session, |l| {
            l.reset(role, qubit).map(|_| Message::Ack)
        }),
        Message::ReadRho { session, qubit } => with_session(registry, session, |l| {
            let rho = l.read_rho(qubit)?;
            let e = rho.entries();
            let flat = [e[0][0], e[0][1], e[1][0], e[1][1]].map(|z| [z.re, z.im]);
            Ok(Message::Rho { rho: flat })
        }),
        Message::Classical { .. } => {
            Err("CLASSICAL messages go directly to the peer, not the fabric".into())
        }
        other => Err(format!("{} is not a fabric request", other.kind())),
    };
    result.unwrap_or_else(Message::error)
}
