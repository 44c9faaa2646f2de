use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{Amplitude, StateVector, CORRUPT_TOL, NORM_TOL};

/// The four Bell basis states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellLabel {
    /// β₀₀ = (|00⟩ + |11⟩)/√2
    PhiPlus,
    /// β₀₁ = (|00⟩ − |11⟩)/√2
    PhiMinus,
    /// β₁₀ = (|01⟩ + |10⟩)/√2
    PsiPlus,
    /// β₁₁ = (|01⟩ − |10⟩)/√2
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
        BellLabel::PsiPlus,
        BellLabel::PsiMinus,
    ];
}

pub fn bell_state(label: BellLabel) -> StateVector {
    let h = FRAC_1_SQRT_2;
    let amps = match label {
        BellLabel::PhiPlus => [h, 0.0, 0.0, h],
        BellLabel::PhiMinus => [h, 0.0, 0.0, -h],
        BellLabel::PsiPlus => [0.0, h, h, 0.0],
        BellLabel::PsiMinus => [0.0, h, -h, 0.0],
    };
    StateVector::from_amplitudes(amps.iter().map(|&x| Amplitude::new(x, 0.0)).collect())
        .expect("Bell amplitudes are normalized")
}

/// Amplitudes of an imbalanced pair `A|00⟩ + B|11⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoisyEprParams {
    a: Amplitude,
    b: Amplitude,
}

impl NoisyEprParams {
    pub fn new(a: Amplitude, b: Amplitude) -> Result<Self> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > CORRUPT_TOL {
            return Err(Error::NormViolation { norm });
        }
        let s = norm.sqrt();
        Ok(Self { a: a / s, b: b / s })
    }

    /// Real-positive completion: `B = √(1 − A²)`.
    pub fn from_a(a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::OutOfRange {
                name: "A",
                value: a,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Self::new(
            Amplitude::new(a, 0.0),
            Amplitude::new((1.0 - a * a).max(0.0).sqrt(), 0.0),
        )
    }

    /// `A = B = 1/√2`, i.e. Φ⁺.
    pub fn noiseless() -> Self {
        Self {
            a: Amplitude::new(FRAC_1_SQRT_2, 0.0),
            b: Amplitude::new(FRAC_1_SQRT_2, 0.0),
        }
    }

    pub fn a(&self) -> Amplitude {
        self.a
    }

    pub fn b(&self) -> Amplitude {
        self.b
    }

    pub fn is_noisy(&self) -> bool {
        let h = Amplitude::new(FRAC_1_SQRT_2, 0.0);
        !((self.a - h).norm() <= NORM_TOL && (self.b - h).norm() <= NORM_TOL)
    }
}

pub fn noisy_epr(params: &NoisyEprParams) -> StateVector {
    let z = Amplitude::new(0.0, 0.0);
    StateVector::from_amplitudes(vec![params.a, z, z, params.b]).expect("params are normalized")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_plus_and_psi_minus() {
        let h = FRAC_1_SQRT_2;
        let p = bell_state(BellLabel::PhiPlus);
        assert_eq!(p.amplitude(0).re, h);
        assert_eq!(p.amplitude(3).re, h);
        let m = bell_state(BellLabel::PsiMinus);
        assert_eq!(m.amplitude(1).re, h);
        assert_eq!(m.amplitude(2).re, -h);
    }

    #[test]
    fn bell_basis_orthonormal() {
        for x in BellLabel::ALL {
            for y in BellLabel::ALL {
                let ip = bell_state(x).inner(&bell_state(y)).unwrap();
                let want = if x == y { 1.0 } else { 0.0 };
                assert!(
                    (ip.re - want).abs() < 1e-15 && ip.im.abs() < 1e-15,
                    "{x:?} {y:?}"
                );
            }
        }
    }

    #[test]
    fn degenerate_pair_is_product() {
        let s = noisy_epr(&NoisyEprParams::from_a(1.0).unwrap());
        assert_eq!(s, StateVector::cbs(&[0, 0]).unwrap());
        assert!(NoisyEprParams::from_a(1.0).unwrap().is_noisy());
    }

    #[test]
    fn balanced_pair_is_phi_plus() {
        let p = NoisyEprParams::from_a(FRAC_1_SQRT_2).unwrap();
        assert!(!p.is_noisy());
        assert!(noisy_epr(&p).max_abs_diff(&bell_state(BellLabel::PhiPlus)) < 1e-15);
        assert!(!NoisyEprParams::noiseless().is_noisy());
    }

    #[test]
    fn completion_rule() {
        let p = NoisyEprParams::from_a(0.8).unwrap();
        assert!((p.b().re - 0.6).abs() < 1e-15);
        let s = noisy_epr(&p);
        assert!((s.amplitude(0).re - 0.8).abs() < 1e-15);
        assert!((s.amplitude(3).re - 0.6).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_norm() {
        assert!(NoisyEprParams::new(Amplitude::new(0.8, 0.0), Amplitude::new(0.8, 0.0)).is_err());
        assert!(NoisyEprParams::from_a(1.2).is_err());
        assert!(NoisyEprParams::from_a(-0.1).is_err());
    }
}
