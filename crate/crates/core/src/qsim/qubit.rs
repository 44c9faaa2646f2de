use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{c, Amplitude, DensityMatrix2, StateVector, CORRUPT_TOL};
use crate::error::{Error, Result};

/// A normalized single-qubit state `α|0⟩ + β|1⟩`.
///
/// Global phase is never tracked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureQubit {
    alpha: Amplitude,
    beta: Amplitude,
}

impl PureQubit {
    pub const ZERO: PureQubit = PureQubit {
        alpha: Amplitude::new(1.0, 0.0),
        beta: Amplitude::new(0.0, 0.0),
    };
    pub const ONE: PureQubit = PureQubit {
        alpha: Amplitude::new(0.0, 0.0),
        beta: Amplitude::new(1.0, 0.0),
    };

    /// Builds a qubit from amplitudes whose squared norm is within 1e-9 of one;
    /// the result is renormalized exactly.
    pub fn new(alpha: Amplitude, beta: Amplitude) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::NonFinite { index: 0 });
        }
        if !(beta.re.is_finite() && beta.im.is_finite()) {
            return Err(Error::NonFinite { index: 1 });
        }
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > CORRUPT_TOL {
            return Err(Error::NormViolation { norm });
        }
        let s = norm.sqrt();
        Ok(Self {
            alpha: alpha / s,
            beta: beta / s,
        })
    }

    pub fn real(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(c(alpha, 0.0), c(beta, 0.0))
    }

    /// The computational basis state `|bit⟩`.
    pub fn basis(bit: u8) -> Result<Self> {
        match bit {
            0 => Ok(Self::ZERO),
            1 => Ok(Self::ONE),
            b => Err(Error::NotABit(b)),
        }
    }

    /// Point on the Bloch sphere: `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn from_bloch(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: theta,
                lo: 0.0,
                hi: PI,
            });
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::OutOfRange {
                name: "phi",
                value: phi,
                lo: 0.0,
                hi: TAU,
            });
        }
        let half = theta / 2.0;
        Ok(Self {
            alpha: c(half.cos(), 0.0),
            beta: Amplitude::from_polar(half.sin(), phi),
        })
    }

    pub fn alpha(&self) -> Amplitude {
        self.alpha
    }

    pub fn beta(&self) -> Amplitude {
        self.beta
    }

    pub fn to_state(&self) -> StateVector {
        StateVector::from_normalized(1, vec![self.alpha, self.beta])
    }

    pub fn density(&self) -> DensityMatrix2 {
        DensityMatrix2::from_pure(self)
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &PureQubit) -> f64 {
        (self.alpha.conj() * other.alpha + self.beta.conj() * other.beta).norm_sqr()
    }

    /// True when the state is `|0⟩` or `|1⟩` within `tol`.
    pub fn is_basis(&self, tol: f64) -> Option<u8> {
        if self.alpha.norm_sqr() >= 1.0 - tol {
            Some(0)
        } else if self.beta.norm_sqr() >= 1.0 - tol {
            Some(1)
        } else {
            None
        }
    }
}
