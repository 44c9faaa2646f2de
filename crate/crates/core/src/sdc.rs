//! Superdense-coding circuit halves used as classical/quantum interfaces.
//!
//! Cl2Qu: bits → Bell state (σx on `b2`, then σz on `b1`, both on qubit 0 of
//! Φ⁺) → CNOT(0→1) + H(0) → computational basis state `|b1 b2⟩`.
//! Qu2Cl: single-shot Z readout of a basis-state register.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocols::{bell_state, BellLabel};
use crate::qsim::{Gate1Q, PureQubit, StateVector, CORRUPT_TOL, MAX_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitPair {
    pub b1: u8,
    pub b2: u8,
}

impl BitPair {
    pub const ALL: [BitPair; 4] = [
        BitPair { b1: 0, b2: 0 },
        BitPair { b1: 0, b2: 1 },
        BitPair { b1: 1, b2: 0 },
        BitPair { b1: 1, b2: 1 },
    ];

    pub fn new(b1: u8, b2: u8) -> Result<Self> {
        for b in [b1, b2] {
            if b > 1 {
                return Err(Error::NotABit(b));
            }
        }
        Ok(Self { b1, b2 })
    }
}

/// A register known to be a computational basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct CbsRegister {
    state: StateVector,
    index: usize,
}

impl CbsRegister {
    /// Accepts `state` iff its largest amplitude has modulus ≥ 1 − 1e-9. The
    /// stored register is the exact basis state, with rounding residue and
    /// global phase discarded.
    pub fn new(state: StateVector) -> Result<Self> {
        let (index, best) = state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| (i, a.norm()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best < 1.0 - CORRUPT_TOL {
            return Err(Error::NotCbs);
        }
        let n = state.n_qubits();
        let bits: Vec<u8> = (0..n).map(|k| ((index >> (n - 1 - k)) & 1) as u8).collect();
        Ok(Self {
            state: StateVector::cbs(&bits)?,
            index,
        })
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }

    pub fn n_qubits(&self) -> usize {
        self.state.n_qubits()
    }

    /// Classical value of qubit `k`.
    pub fn bit(&self, k: usize) -> u8 {
        ((self.index >> (self.n_qubits() - 1 - k)) & 1) as u8
    }

    /// Qubit `k` as a standalone basis qubit.
    pub fn qubit(&self, k: usize) -> PureQubit {
        if self.bit(k) == 1 {
            PureQubit::ONE
        } else {
            PureQubit::ZERO
        }
    }

    /// Builds a register from individual qubits, each of which must be a basis state.
    pub fn from_qubits(qubits: &[PureQubit]) -> Result<Self> {
        let bits = qubits
            .iter()
            .map(|q| q.is_basis(CORRUPT_TOL).ok_or(Error::NotCbs))
            .collect::<Result<Vec<_>>>()?;
        Self::new(StateVector::cbs(&bits)?)
    }
}

/// Bits → encoded Bell state on two qubits.
pub fn cl2qu_encode(pair: BitPair) -> StateVector {
    let mut s = bell_state(BellLabel::PhiPlus);
    // infallible: qubit 0 exists on a 2-qubit register
    if pair.b2 == 1 {
        s.apply_1q(Gate1Q::X, 0).expect("qubit 0");
    }
    if pair.b1 == 1 {
        s.apply_1q(Gate1Q::Z, 0).expect("qubit 0");
    }
    s
}

/// Encoded Bell state → basis state `|b1 b2⟩` via CNOT(0→1) then H on qubit 0.
/// The input may carry any global phase.
pub fn bell_to_cbs(encoded: &StateVector) -> Result<CbsRegister> {
    if encoded.n_qubits() != 2 {
        return Err(Error::Arity {
            expected: 2,
            got: encoded.n_qubits(),
        });
    }
    let valid = BitPair::ALL.iter().any(|&p| {
        cl2qu_encode(p)
            .inner(encoded)
            .map(|ip| ip.norm_sqr() >= 1.0 - CORRUPT_TOL)
            .unwrap_or(false)
    });
    if !valid {
        return Err(Error::NotEncodedBell);
    }
    let mut s = encoded.clone();
    s.apply_cnot(0, 1)?;
    s.apply_1q(Gate1Q::H, 0)?;
    CbsRegister::new(s)
}

/// The fused Cl2Qu block: a bit string becomes the matching basis register,
/// processed two bits at a time. An odd final bit is paired with an ancilla 0
/// that is dropped afterwards.
pub fn cl2qu(bits: &[u8]) -> Result<CbsRegister> {
    if bits.is_empty() {
        return Err(Error::EmptyBits);
    }
    if bits.len() > MAX_QUBITS {
        return Err(Error::QubitCount(bits.len()));
    }
    let mut acc: Option<StateVector> = None;
    for chunk in bits.chunks(2) {
        let pair = BitPair::new(chunk[0], chunk.get(1).copied().unwrap_or(0))?;
        let decoded = bell_to_cbs(&cl2qu_encode(pair))?.into_state();
        let piece = if chunk.len() == 2 {
            decoded
        } else {
            let (_ancilla, rest) = decoded.split_qubit(1)?;
            rest.expect("two-qubit register leaves one qubit")
        };
        acc = Some(match acc {
            None => piece,
            Some(prev) => prev.tensor(&piece)?,
        });
    }
    CbsRegister::new(acc.expect("at least one chunk"))
}

/// Qu2Cl readout of a validated register.
pub fn qu2cl(reg: &CbsRegister) -> Vec<u8> {
    (0..reg.n_qubits()).map(|k| reg.bit(k)).collect()
}

/// Qu2Cl on an arbitrary state; fails if it is not a basis state.
pub fn qu2cl_state(state: &StateVector) -> Result<Vec<u8>> {
    Ok(qu2cl(&CbsRegister::new(state.clone())?))
}

/// Encode, pass through an ideal channel, decode, read out.
pub fn sdc_roundtrip(pair: BitPair) -> Result<BitPair> {
    let channel = cl2qu_encode(pair);
    let bits = qu2cl(&bell_to_cbs(&channel)?);
    BitPair::new(bits[0], bits[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::Amplitude;
    use std::f64::consts::FRAC_1_SQRT_2 as H;

    fn real(v: [f64; 4]) -> StateVector {
        StateVector::from_amplitudes(v.iter().map(|&x| Amplitude::new(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn encode_columns() {
        let cases = [
            ((0, 0), [H, 0.0, 0.0, H]),
            ((0, 1), [0.0, H, H, 0.0]),
            ((1, 0), [H, 0.0, 0.0, -H]),
            ((1, 1), [0.0, H, -H, 0.0]),
        ];
        for ((b1, b2), want) in cases {
            let got = cl2qu_encode(BitPair::new(b1, b2).unwrap());
            assert!(got.max_abs_diff(&real(want)) < 1e-15, "({b1},{b2})");
        }
    }

    #[test]
    fn decode_to_basis() {
        for p in BitPair::ALL {
            let reg = bell_to_cbs(&cl2qu_encode(p)).unwrap();
            assert_eq!(qu2cl(&reg), vec![p.b1, p.b2]);
            assert!(
                reg.state()
                    .max_abs_diff(&StateVector::cbs(&[p.b1, p.b2]).unwrap())
                    < 1e-15
            );
        }
    }

    #[test]
    fn decode_rejects_non_bell() {
        assert_eq!(
            bell_to_cbs(&StateVector::cbs(&[0, 1]).unwrap()),
            Err(Error::NotEncodedBell)
        );
        assert!(bell_to_cbs(&StateVector::zero(3).unwrap()).is_err());
    }

    #[test]
    fn reversed_gate_order_only_flips_sign() {
        let mut s = bell_state(BellLabel::PhiPlus);
        s.apply_1q(Gate1Q::Z, 0).unwrap();
        s.apply_1q(Gate1Q::X, 0).unwrap();
        let canonical = cl2qu_encode(BitPair::new(1, 1).unwrap());
        let ip = canonical.inner(&s).unwrap();
        assert!((ip.re + 1.0).abs() < 1e-15);
        assert_eq!(qu2cl(&bell_to_cbs(&s).unwrap()), vec![1, 1]);
    }

    #[test]
    fn cl2qu_cases() {
        assert_eq!(qu2cl(&cl2qu(&[0]).unwrap()), vec![0]);
        assert_eq!(
            cl2qu(&[0]).unwrap().state(),
            &StateVector::cbs(&[0]).unwrap()
        );
        assert_eq!(qu2cl(&cl2qu(&[1, 0, 1]).unwrap()), vec![1, 0, 1]);
        assert_eq!(cl2qu(&[]), Err(Error::EmptyBits));
        assert_eq!(cl2qu(&[0; 25]), Err(Error::QubitCount(25)));
        assert_eq!(cl2qu(&[3]), Err(Error::NotABit(3)));
    }

    #[test]
    fn qu2cl_rejects_superposition() {
        let plus = StateVector::from_amplitudes(vec![Amplitude::new(H, 0.0); 2]).unwrap();
        assert_eq!(qu2cl_state(&plus), Err(Error::NotCbs));
        assert_eq!(
            qu2cl_state(&StateVector::cbs(&[1, 1]).unwrap()).unwrap(),
            vec![1, 1]
        );
    }

    #[test]
    fn cl2qu_inverts_qu2cl_exhaustively() {
        for n in 1..=8usize {
            for v in 0..(1u32 << n) {
                let bits: Vec<u8> = (0..n).map(|k| ((v >> (n - 1 - k)) & 1) as u8).collect();
                let reg = CbsRegister::new(StateVector::cbs(&bits).unwrap()).unwrap();
                assert_eq!(cl2qu(&qu2cl(&reg)).unwrap(), reg);
            }
        }
    }

    #[test]
    fn roundtrip_all_pairs() {
        for p in BitPair::ALL {
            assert_eq!(sdc_roundtrip(p).unwrap(), p);
        }
    }

    #[test]
    fn register_qubits() {
        let reg = cl2qu(&[1, 0, 1, 1]).unwrap();
        let qs: Vec<_> = (0..4).map(|k| reg.qubit(k)).collect();
        assert_eq!(CbsRegister::from_qubits(&qs).unwrap(), reg);
        let plus = PureQubit::real(H, H).unwrap();
        assert_eq!(CbsRegister::from_qubits(&[plus]), Err(Error::NotCbs));
    }
}
