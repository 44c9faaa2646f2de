//! Per-session quantum state held by the fabric.
//!
//! Qubits live in groups: each group is an independent [`StateVector`] over
//! the qubits that have interacted. A CNOT across groups merges them; measure
//! and reset split the touched qubit back out. The joint state is the tensor
//! product of all groups.

use std::collections::HashMap;

use qtele_core::pipeline::{derive_seed, ProtocolKind};
use qtele_core::protocols::{noisy_epr, NoisyEprParams};
use qtele_core::qsim::{Amplitude, DensityMatrix2, Gate1Q, PureQubit, StateVector, MAX_QUBITS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::wire::{Role, WireGate};

pub const LOCALITY_VIOLATION: &str = "locality violation";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LedgerError {
    #[error("{LOCALITY_VIOLATION}: {0}")]
    Locality(String),
    #[error("unknown qubit handle {0}")]
    UnknownQubit(u32),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] qtele_core::Error),
}

#[derive(Debug, Clone)]
struct Group {
    state: StateVector,
    /// Handle of each qubit, in register order.
    qubits: Vec<u32>,
}

#[derive(Debug)]
pub struct SessionLedger {
    id: u64,
    protocol: ProtocolKind,
    params: NoisyEprParams,
    seed: u64,
    groups: HashMap<u64, Group>,
    next_group: u64,
    location: HashMap<u32, u64>,
    owner: HashMap<u32, Role>,
    /// Index into `streams` for qubits that belong to an EPR pair's history.
    stream_of: HashMap<u32, usize>,
    streams: Vec<ChaCha8Rng>,
    fallback: ChaCha8Rng,
    next_qubit: u32,
    notes: Vec<String>,
}

impl SessionLedger {
    pub fn new(id: u64, protocol: ProtocolKind, params: NoisyEprParams, seed: u64) -> Self {
        Self {
            id,
            protocol,
            params,
            seed,
            groups: HashMap::new(),
            next_group: 0,
            location: HashMap::new(),
            owner: HashMap::new(),
            stream_of: HashMap::new(),
            streams: Vec::new(),
            fallback: ChaCha8Rng::seed_from_u64(derive_seed(seed, u64::MAX)),
            next_qubit: 0,
            notes: Vec::new(),
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn protocol(&self) -> ProtocolKind {
        self.protocol
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn epr_pairs(&self) -> usize {
        self.streams.len()
    }

    pub fn owner(&self, q: u32) -> Option<Role> {
        self.owner.get(&q).copied()
    }

    /// Ownership transfers and other setup-time events.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    fn insert_group(&mut self, state: StateVector, qubits: Vec<u32>) -> u64 {
        let gid = self.next_group;
        self.next_group += 1;
        for &q in &qubits {
            self.location.insert(q, gid);
        }
        self.groups.insert(gid, Group { state, qubits });
        gid
    }

    fn fresh_handle(&mut self) -> u32 {
        let q = self.next_qubit;
        self.next_qubit += 1;
        q
    }

    fn locate(&self, q: u32) -> Result<(u64, usize), LedgerError> {
        let gid = *self.location.get(&q).ok_or(LedgerError::UnknownQubit(q))?;
        let pos = self.groups[&gid]
            .qubits
            .iter()
            .position(|&x| x == q)
            .expect("location map in sync");
        Ok((gid, pos))
    }

    fn check_owner(&self, role: Role, q: u32) -> Result<(), LedgerError> {
        match self.owner.get(&q) {
            None => Err(LedgerError::UnknownQubit(q)),
            Some(&r) if r == role => Ok(()),
            Some(r) => Err(LedgerError::Locality(format!(
                "qubit {q} is owned by {r:?}"
            ))),
        }
    }

    /// Distributes one pair: `q_alice` to Alice, `q_bob` to Bob.
    ///
    /// With `embed = Some(q)`, the payload `q` (owned by the requester and
    /// not yet entangled) is joined as `pair ⊗ ψ`, the fabric applies
    /// CNOT(pair₀ → pair₁), and then assigns both pair qubits to Alice and the
    /// payload to Bob. Returns `(q_alice, q_bob, q_alice_aux)`.
    pub fn alloc_epr(
        &mut self,
        role: Role,
        embed: Option<u32>,
    ) -> Result<(u32, u32, Option<u32>), LedgerError> {
        let stream = self.streams.len();
        let pair = noisy_epr(&self.params);
        let (a, b) = (self.fresh_handle(), self.fresh_handle());
        let seed = derive_seed(self.seed, stream as u64);
        self.streams.push(ChaCha8Rng::seed_from_u64(seed));
        self.stream_of.insert(a, stream);
        self.stream_of.insert(b, stream);

        let Some(payload) = embed else {
            self.insert_group(pair, vec![a, b]);
            self.owner.insert(a, Role::Alice);
            self.owner.insert(b, Role::Bob);
            return Ok((a, b, None));
        };

        self.check_owner(role, payload)?;
        let (gid, _) = self.locate(payload)?;
        if self.groups[&gid].qubits.len() != 1 {
            return Err(LedgerError::Invalid(format!(
                "qubit {payload} is already entangled; cannot embed"
            )));
        }
        let g = self.groups.remove(&gid).expect("located");
        let mut joint = pair.tensor(&g.state)?;
        joint.apply_cnot(0, 1)?;
        self.insert_group(joint, vec![a, b, payload]);
        self.owner.insert(a, Role::Alice);
        self.owner.insert(b, Role::Alice);
        self.owner.insert(payload, Role::Bob);
        self.stream_of.insert(payload, stream);
        self.notes.push(format!(
            "embed: fabric applied CNOT({a} -> {b}) on pair {stream} with payload {payload}; \
             ownership then set to {a},{b}: alice, {payload}: bob"
        ));
        Ok((a, payload, Some(b)))
    }

    pub fn alloc_qubit(
        &mut self,
        role: Role,
        alpha: Amplitude,
        beta: Amplitude,
    ) -> Result<u32, LedgerError> {
        let psi = PureQubit::new(alpha, beta)?;
        let q = self.fresh_handle();
        self.insert_group(psi.to_state(), vec![q]);
        self.owner.insert(q, role);
        Ok(q)
    }

    pub fn apply(&mut self, role: Role, gate: WireGate, qubits: &[u32]) -> Result<(), LedgerError> {
        for &q in qubits {
            self.check_owner(role, q)?;
        }
        let single = |g| match qubits {
            [q] => Ok((g, *q)),
            _ => Err(LedgerError::Invalid(format!(
                "gate needs 1 qubit, got {}",
                qubits.len()
            ))),
        };
        let (g1, q) = match gate {
            WireGate::H => single(Gate1Q::H)?,
            WireGate::X => single(Gate1Q::X)?,
            WireGate::Z => single(Gate1Q::Z)?,
            WireGate::Cnot => {
                let &[c, t] = qubits else {
                    return Err(LedgerError::Invalid(format!(
                        "CNOT needs 2 qubits, got {}",
                        qubits.len()
                    )));
                };
                if c == t {
                    return Err(LedgerError::Invalid("CNOT control equals target".into()));
                }
                self.merge(c, t)?;
                let (gid, pc) = self.locate(c)?;
                let (_, pt) = self.locate(t)?;
                self.groups
                    .get_mut(&gid)
                    .expect("located")
                    .state
                    .apply_cnot(pc, pt)?;
                return Ok(());
            }
        };
        let (gid, pos) = self.locate(q)?;
        self.groups
            .get_mut(&gid)
            .expect("located")
            .state
            .apply_1q(g1, pos)?;
        Ok(())
    }

    /// Puts `c` and `t` in one group as `group(c) ⊗ group(t)`.
    fn merge(&mut self, c: u32, t: u32) -> Result<(), LedgerError> {
        let (gc, _) = self.locate(c)?;
        let (gt, _) = self.locate(t)?;
        if gc == gt {
            return Ok(());
        }
        let n = self.groups[&gc].qubits.len() + self.groups[&gt].qubits.len();
        if n > MAX_QUBITS {
            return Err(LedgerError::Invalid(format!(
                "joint register would hold {n} qubits"
            )));
        }
        let a = self.groups.remove(&gc).expect("located");
        let b = self.groups.remove(&gt).expect("located");
        let state = a.state.tensor(&b.state)?;
        let mut qubits = a.qubits;
        qubits.extend(b.qubits);
        // Untagged qubits join the stream of the pair they now share a state with.
        if let Some(s) = qubits.iter().find_map(|q| self.stream_of.get(q).copied()) {
            for q in &qubits {
                self.stream_of.entry(*q).or_insert(s);
            }
        }
        self.insert_group(state, qubits);
        Ok(())
    }

    fn collapse(&mut self, role: Role, q: u32, reset: bool) -> Result<u8, LedgerError> {
        self.check_owner(role, q)?;
        let (gid, pos) = self.locate(q)?;
        let mut g = self.groups.remove(&gid).expect("located");
        let rng = match self.stream_of.get(&q) {
            Some(&s) => &mut self.streams[s],
            None => &mut self.fallback,
        };
        let bit = if reset {
            g.state.reset_qubit(pos, rng)?
        } else {
            g.state.measure_qubit(pos, rng)?
        };
        let (single, rest) = g.state.split_qubit(pos)?;
        g.qubits.remove(pos);
        if let Some(rest) = rest {
            self.insert_group(rest, g.qubits);
        }
        self.insert_group(single.to_state(), vec![q]);
        Ok(bit)
    }

    pub fn measure(&mut self, role: Role, q: u32) -> Result<u8, LedgerError> {
        self.collapse(role, q, false)
    }

    /// Measure then flip to |0⟩; returns the pre-reset outcome.
    pub fn reset(&mut self, role: Role, q: u32) -> Result<u8, LedgerError> {
        self.collapse(role, q, true)
    }

    /// Reduced state of `q`. Not subject to ownership: verification only.
    pub fn read_rho(&self, q: u32) -> Result<DensityMatrix2, LedgerError> {
        let (gid, pos) = self.locate(q)?;
        Ok(self.groups[&gid].state.reduced_density(pos)?)
    }

    /// The full session state, groups tensored in handle order of their
    /// first qubit. Fails above the simulator's qubit limit.
    pub fn joint_state(&self) -> Result<(StateVector, Vec<u32>), LedgerError> {
        let mut groups: Vec<&Group> = self.groups.values().collect();
        groups.sort_by_key(|g| g.qubits[0]);
        let mut iter = groups.into_iter();
        let Some(first) = iter.next() else {
            return Err(LedgerError::Invalid("session holds no qubits".into()));
        };
        let mut state = first.state.clone();
        let mut order = first.qubits.clone();
        for g in iter {
            state = state.tensor(&g.state)?;
            order.extend(&g.qubits);
        }
        Ok((state, order))
    }
}
