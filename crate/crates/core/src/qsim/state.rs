use std::fmt::Write as _;

use rand::Rng;

use super::{c, Amplitude, DensityMatrix2, Gate1Q, PureQubit, CORRUPT_TOL, MAX_QUBITS, PROB_FLOOR};
use crate::error::{Error, Result};

/// Dense amplitude vector over `n` qubits (qubit 0 = most significant index bit).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Amplitude>,
}

impl StateVector {
    /// Accepts any finite vector of length `2^n` (1 ≤ n ≤ 24) whose squared norm
    /// is within 1e-9 of one, and renormalizes it.
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(if len.is_power_of_two() {
                Error::QubitCount(0)
            } else {
                Error::NotPowerOfTwo(len)
            });
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(Error::QubitCount(n));
        }
        if let Some(index) = amps
            .iter()
            .position(|a| !(a.re.is_finite() && a.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > CORRUPT_TOL {
            return Err(Error::NormViolation { norm });
        }
        let mut s = Self { n_qubits: n, amps };
        s.scale(1.0 / norm.sqrt());
        Ok(s)
    }

    pub(crate) fn from_normalized(n_qubits: usize, amps: Vec<Amplitude>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        Self { n_qubits, amps }
    }

    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_count(n_qubits)?;
        let mut amps = vec![c(0.0, 0.0); 1 << n_qubits];
        amps[0] = c(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Computational basis state; `bits[0]` is qubit 0.
    pub fn cbs(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyBits);
        }
        check_count(bits.len())?;
        let mut index = 0usize;
        for &b in bits {
            if b > 1 {
                return Err(Error::NotABit(b));
            }
            index = (index << 1) | b as usize;
        }
        let mut amps = vec![c(0.0, 0.0); 1 << bits.len()];
        amps[index] = c(1.0, 0.0);
        Ok(Self {
            n_qubits: bits.len(),
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Amplitude {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Kronecker product `self ⊗ other`; `self` supplies the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.n_qubits + other.n_qubits;
        check_count(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(Self { n_qubits: n, amps })
    }

    pub fn apply_1q(&mut self, gate: Gate1Q, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        match gate {
            Gate1Q::I => {}
            Gate1Q::X => {
                let mask = self.mask(qubit);
                for i in 0..self.amps.len() {
                    if i & mask == 0 {
                        self.amps.swap(i, i | mask);
                    }
                }
            }
            Gate1Q::Z => {
                let mask = self.mask(qubit);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & mask != 0 {
                        *a = -*a;
                    }
                }
            }
            Gate1Q::H => self.apply_matrix(&gate.matrix(), qubit)?,
        }
        Ok(())
    }

    /// Applies an arbitrary 2×2 matrix (row-major) to `qubit`. Callers are
    /// responsible for passing a unitary.
    pub fn apply_matrix(&mut self, m: &[[Amplitude; 2]; 2], qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let mask = self.mask(qubit);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a0, a1) = (self.amps[i], self.amps[j]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::SameQubit(control));
        }
        let cm = self.mask(control);
        let tm = self.mask(target);
        for i in 0..self.amps.len() {
            if i & cm != 0 && i & tm == 0 {
                self.amps.swap(i, i | tm);
            }
        }
        Ok(())
    }

    /// Born probability of reading `outcome` on `qubit`.
    pub fn probability(&self, qubit: usize, outcome: u8) -> Result<f64> {
        self.check_qubit(qubit)?;
        if outcome > 1 {
            return Err(Error::NotABit(outcome));
        }
        let mask = self.mask(qubit);
        let want = if outcome == 1 { mask } else { 0 };
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Projective Z measurement. Draws exactly one `f64` from `rng`.
    pub fn measure_qubit<R: Rng + ?Sized>(&mut self, qubit: usize, rng: &mut R) -> Result<u8> {
        self.check_qubit(qubit)?;
        self.check_norm()?;
        let p1 = self.probability(qubit, 1)?;
        let p0 = (self.norm_sqr() - p1).max(0.0);
        let u: f64 = rng.gen();
        let outcome = if p1 <= PROB_FLOOR {
            0
        } else if p0 <= PROB_FLOOR {
            1
        } else if u * (p0 + p1) < p0 {
            0
        } else {
            1
        };
        self.collapse(qubit, outcome, if outcome == 0 { p0 } else { p1 });
        Ok(outcome)
    }

    /// Projects onto a chosen outcome instead of sampling; returns its probability.
    pub fn project_qubit(&mut self, qubit: usize, outcome: u8) -> Result<f64> {
        self.check_norm()?;
        let p = self.probability(qubit, outcome)?;
        if p <= PROB_FLOOR {
            return Err(Error::ImpossibleOutcome { qubit, outcome });
        }
        self.collapse(qubit, outcome, p);
        Ok(p)
    }

    /// Strict reset: measure, then flip to `|0⟩` if the outcome was 1.
    pub fn reset_qubit<R: Rng + ?Sized>(&mut self, qubit: usize, rng: &mut R) -> Result<u8> {
        let outcome = self.measure_qubit(qubit, rng)?;
        if outcome == 1 {
            self.apply_1q(Gate1Q::X, qubit)?;
        }
        Ok(outcome)
    }

    /// Partial trace over every qubit except `qubit`.
    pub fn reduced_density(&self, qubit: usize) -> Result<DensityMatrix2> {
        self.check_qubit(qubit)?;
        let mask = self.mask(qubit);
        let mut m = [[c(0.0, 0.0); 2]; 2];
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | mask];
                m[0][0] += a0 * a0.conj();
                m[0][1] += a0 * a1.conj();
                m[1][0] += a1 * a0.conj();
                m[1][1] += a1 * a1.conj();
            }
        }
        let tr = m[0][0].re + m[1][1].re;
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                *v /= tr;
            }
        }
        m[0][0].im = 0.0;
        m[1][1].im = 0.0;
        m[1][0] = m[0][1].conj();
        Ok(DensityMatrix2::from_entries_unchecked(m))
    }

    /// Factors `qubit` out of the register when the state is a product across
    /// that cut. Returns the qubit and the remaining register (`None` when the
    /// register had a single qubit).
    pub fn split_qubit(&self, qubit: usize) -> Result<(PureQubit, Option<StateVector>)> {
        self.check_qubit(qubit)?;
        let mask = self.mask(qubit);
        let half = self.amps.len() / 2;
        let pair = |r: usize| {
            let low = r & (mask - 1);
            let high = (r & !(mask - 1)) << 1;
            let i0 = high | low;
            (i0, i0 | mask)
        };
        let (best, _) = (0..half)
            .map(|r| {
                let (i0, i1) = pair(r);
                (r, self.amps[i0].norm_sqr() + self.amps[i1].norm_sqr())
            })
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let (b0, b1) = pair(best);
        let w = (self.amps[b0].norm_sqr() + self.amps[b1].norm_sqr()).sqrt();
        let (qa, qb) = (self.amps[b0] / w, self.amps[b1] / w);
        let mut rest = Vec::with_capacity(half);
        let mut worst = 0.0f64;
        for r in 0..half {
            let (i0, i1) = pair(r);
            let phi = qa.conj() * self.amps[i0] + qb.conj() * self.amps[i1];
            worst = worst
                .max((self.amps[i0] - phi * qa).norm())
                .max((self.amps[i1] - phi * qb).norm());
            rest.push(phi);
        }
        if worst > CORRUPT_TOL {
            return Err(Error::Entangled(qubit));
        }
        let q = PureQubit::new(qa, qb)?;
        let rest = if self.n_qubits == 1 {
            None
        } else {
            Some(StateVector::from_amplitudes(rest)?)
        };
        Ok((q, rest))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Amplitude> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Arity {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest per-amplitude deviation; infinite for mismatched sizes.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        if self.amps.len() != other.amps.len() {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Ket label for an index, e.g. `101`.
    pub fn ket_bits(&self, index: usize) -> String {
        (0..self.n_qubits)
            .map(|q| if index & self.mask(q) != 0 { '1' } else { '0' })
            .collect()
    }

    /// Debug dump: one `index<TAB>ket<TAB>re<TAB>im` line per amplitude.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.amps.iter().enumerate() {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                i,
                self.ket_bits(i),
                fmt_real(a.re),
                fmt_real(a.im)
            );
        }
        out
    }

    fn collapse(&mut self, qubit: usize, outcome: u8, prob: f64) {
        let mask = self.mask(qubit);
        let keep = if outcome == 1 { mask } else { 0 };
        let s = 1.0 / prob.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == keep {
                *a *= s;
            } else {
                *a = c(0.0, 0.0);
            }
        }
    }

    fn scale(&mut self, s: f64) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitIndex {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    fn check_norm(&self) -> Result<()> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > CORRUPT_TOL {
            return Err(Error::CorruptState { norm });
        }
        Ok(())
    }
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount(n));
    }
    Ok(())
}

fn fmt_real(x: f64) -> String {
    // -0 prints as 0 so dumps are stable across sign-of-zero noise
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:.15e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn real(v: &[f64]) -> StateVector {
        StateVector::from_amplitudes(v.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
    }

    fn phi_plus() -> StateVector {
        real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2])
    }

    #[test]
    fn cbs_single_bits() {
        assert_eq!(StateVector::cbs(&[0]).unwrap(), real(&[1.0, 0.0]));
        assert_eq!(StateVector::cbs(&[1]).unwrap(), real(&[0.0, 1.0]));
    }

    #[test]
    fn cbs_index_is_big_endian() {
        let s = StateVector::cbs(&[1, 0, 1]).unwrap();
        assert_eq!(s.n_qubits(), 3);
        for (i, a) in s.amplitudes().iter().enumerate() {
            assert_eq!(a.re, if i == 5 { 1.0 } else { 0.0 });
        }
        assert_eq!(s.ket_bits(5), "101");
    }

    #[test]
    fn cbs_errors() {
        assert_eq!(StateVector::cbs(&[]), Err(Error::EmptyBits));
        assert_eq!(StateVector::cbs(&[2]), Err(Error::NotABit(2)));
        assert_eq!(StateVector::cbs(&[0; 25]), Err(Error::QubitCount(25)));
    }

    #[test]
    fn tensor_zero_zero() {
        let z = StateVector::cbs(&[0]).unwrap();
        assert_eq!(z.tensor(&z).unwrap(), real(&[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn tensor_overflow() {
        let big = StateVector::zero(12).unwrap();
        let other = StateVector::zero(13).unwrap();
        assert_eq!(big.tensor(&other), Err(Error::QubitCount(25)));
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::cbs(&[0]).unwrap();
        s.apply_1q(Gate1Q::H, 0).unwrap();
        assert!(s.max_abs_diff(&real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2])) < 1e-15);
    }

    #[test]
    fn hadamard_on_second_half_of_bell_pair() {
        let mut s = phi_plus();
        s.apply_1q(Gate1Q::H, 1).unwrap();
        // ½(|00⟩ + |10⟩ + |01⟩ − |11⟩)
        assert!(s.max_abs_diff(&real(&[0.5, 0.5, 0.5, -0.5])) < 1e-15);
    }

    #[test]
    fn cnot_basics() {
        let mut s = StateVector::cbs(&[0, 0]).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_eq!(s, StateVector::cbs(&[0, 0]).unwrap());
        let mut s = StateVector::cbs(&[1, 0]).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_eq!(s, StateVector::cbs(&[1, 1]).unwrap());
    }

    #[test]
    fn gate_index_errors() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(matches!(
            s.apply_1q(Gate1Q::H, 2),
            Err(Error::QubitIndex { .. })
        ));
        assert_eq!(s.apply_cnot(1, 1), Err(Error::SameQubit(1)));
        assert!(s.apply_cnot(0, 5).is_err());
        assert!(s.reduced_density(3).is_err());
    }

    #[test]
    fn measure_zero_is_certain() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let mut s = StateVector::cbs(&[0]).unwrap();
            assert_eq!(s.measure_qubit(0, &mut rng).unwrap(), 0);
            assert_eq!(s, StateVector::cbs(&[0]).unwrap());
        }
    }

    #[test]
    fn measure_bell_pair_collapses_both() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut seen = [false; 2];
        for _ in 0..64 {
            let mut s = phi_plus();
            let bit = s.measure_qubit(0, &mut rng).unwrap();
            seen[bit as usize] = true;
            assert_eq!(s, StateVector::cbs(&[bit, bit]).unwrap());
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn forced_projection() {
        let mut s = phi_plus();
        let p = s.project_qubit(0, 1).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert_eq!(s, StateVector::cbs(&[1, 1]).unwrap());
        let mut z = StateVector::cbs(&[0]).unwrap();
        assert_eq!(
            z.project_qubit(0, 1),
            Err(Error::ImpossibleOutcome {
                qubit: 0,
                outcome: 1
            })
        );
    }

    #[test]
    fn reset_one_gives_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = StateVector::cbs(&[1]).unwrap();
        s.reset_qubit(0, &mut rng).unwrap();
        assert_eq!(s, StateVector::cbs(&[0]).unwrap());
    }

    #[test]
    fn reset_pair_leaves_payload() {
        let psi = PureQubit::real(0.6, 0.8).unwrap().to_state();
        let plus = real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let zero = StateVector::cbs(&[0]).unwrap();
        let expected = StateVector::cbs(&[0, 0]).unwrap().tensor(&psi).unwrap();
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut s = plus.tensor(&zero).unwrap().tensor(&psi).unwrap();
            s.reset_qubit(0, &mut rng).unwrap();
            s.reset_qubit(1, &mut rng).unwrap();
            assert!(s.max_abs_diff(&expected) < 1e-12);
        }
    }

    #[test]
    fn reset_imbalanced_pair_leaves_payload() {
        let psi = PureQubit::real(0.6, 0.8).unwrap().to_state();
        let expected = StateVector::cbs(&[0, 0]).unwrap().tensor(&psi).unwrap();
        for a in [0.6f64, 0.8, 0.95, 1.0] {
            let b = (1.0 - a * a).sqrt();
            let pair = real(&[a, 0.0, b, 0.0]);
            for seed in 0..10 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut s = pair.tensor(&psi).unwrap();
                s.reset_qubit(0, &mut rng).unwrap();
                s.reset_qubit(1, &mut rng).unwrap();
                assert!(s.max_abs_diff(&expected) < 1e-12);
            }
        }
    }

    #[test]
    fn reduced_density_fixtures() {
        let rho = StateVector::cbs(&[0, 1])
            .unwrap()
            .reduced_density(1)
            .unwrap();
        assert!(rho.max_abs_diff(&PureQubit::ONE.density()) < 1e-15);
        let rho = phi_plus().reduced_density(0).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix2::maximally_mixed()) < 1e-15);
        let psi = PureQubit::real(0.6, 0.8).unwrap();
        let s = StateVector::cbs(&[0])
            .unwrap()
            .tensor(&psi.to_state())
            .unwrap();
        assert!(s.reduced_density(1).unwrap().max_abs_diff(&psi.density()) < 1e-15);
    }

    #[test]
    fn split_product_and_entangled() {
        let psi = PureQubit::real(0.6, 0.8).unwrap();
        let s = StateVector::cbs(&[1, 0])
            .unwrap()
            .tensor(&psi.to_state())
            .unwrap();
        let (q, rest) = s.split_qubit(2).unwrap();
        assert!((q.overlap(&psi) - 1.0).abs() < 1e-14);
        assert_eq!(rest.unwrap(), StateVector::cbs(&[1, 0]).unwrap());
        let (q, rest) = s.split_qubit(0).unwrap();
        assert_eq!(q.is_basis(1e-12), Some(1));
        assert_eq!(rest.unwrap().n_qubits(), 2);
        assert_eq!(phi_plus().split_qubit(0), Err(Error::Entangled(0)));
    }

    #[test]
    fn from_amplitudes_validation() {
        assert!(matches!(
            StateVector::from_amplitudes(vec![c(1.0, 0.0); 3]),
            Err(Error::NotPowerOfTwo(3))
        ));
        assert!(matches!(
            StateVector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::NormViolation { .. })
        ));
        assert!(matches!(
            StateVector::from_amplitudes(vec![c(f64::INFINITY, 0.0), c(0.0, 0.0)]),
            Err(Error::NonFinite { index: 0 })
        ));
    }

    #[test]
    fn dump_format() {
        let d = StateVector::cbs(&[1, 0]).unwrap().dump();
        let lines: Vec<_> = d.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "0\t00\t0\t0");
        assert_eq!(lines[2], "2\t10\t1.000000000000000e0\t0");
    }
}
