use serde::{Deserialize, Serialize};

use super::{c, Amplitude, PureQubit, NORM_TOL};
use crate::error::{Error, Result};

/// Single-qubit density matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix2 {
    entries: [[Amplitude; 2]; 2],
}

impl DensityMatrix2 {
    /// Validates hermiticity, unit trace and positivity within 1e-12.
    pub fn new(entries: [[Amplitude; 2]; 2]) -> Result<Self> {
        let rho = Self { entries };
        if (entries[0][1] - entries[1][0].conj()).norm() > NORM_TOL
            || entries[0][0].im.abs() > NORM_TOL
            || entries[1][1].im.abs() > NORM_TOL
        {
            return Err(Error::NormViolation { norm: f64::NAN });
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > NORM_TOL {
            return Err(Error::NormViolation { norm: tr });
        }
        let (lo, _) = rho.eigenvalues();
        if lo < -NORM_TOL {
            return Err(Error::NormViolation { norm: lo });
        }
        Ok(rho)
    }

    pub(crate) fn from_entries_unchecked(entries: [[Amplitude; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn from_pure(q: &PureQubit) -> Self {
        let v = [q.alpha(), q.beta()];
        let mut entries = [[c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                entries[i][j] = v[i] * v[j].conj();
            }
        }
        Self { entries }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            entries: [[c(0.5, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]],
        }
    }

    pub fn entries(&self) -> [[Amplitude; 2]; 2] {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row][col]
    }

    pub fn trace(&self) -> f64 {
        self.entries[0][0].re + self.entries[1][1].re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let a = self.entries[0][0].re;
        let d = self.entries[1][1].re;
        let off = self.entries[0][1].norm();
        let mean = (a + d) / 2.0;
        let r = (((a - d) / 2.0).powi(2) + off * off).sqrt();
        (mean - r, mean + r)
    }

    /// `tr(ρ²)`; 1 for pure states.
    pub fn purity(&self) -> f64 {
        let m = &self.entries;
        m[0][0].norm_sqr() + m[1][1].norm_sqr() + 2.0 * m[0][1].norm_sqr()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.entries[0][1].norm() <= tol && self.entries[1][0].norm() <= tol
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix2) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        worst
    }
}

/// `⟨ψ|ρ|ψ⟩`, clamped to `[0, 1]`.
pub fn fidelity(target: &PureQubit, rho: &DensityMatrix2) -> f64 {
    let v = [target.alpha(), target.beta()];
    let mut acc = c(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            acc += v[i].conj() * rho.entries[i][j] * v[j];
        }
    }
    acc.re.clamp(0.0, 1.0)
}
