use std::f64::consts::FRAC_1_SQRT_2;

use super::{c, Amplitude};

/// Single-qubit gates used by the protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate1Q {
    I,
    H,
    /// Pauli σx.
    X,
    /// Pauli σz.
    Z,
}

impl Gate1Q {
    pub const ALL: [Gate1Q; 4] = [Gate1Q::I, Gate1Q::H, Gate1Q::X, Gate1Q::Z];

    pub fn name(self) -> &'static str {
        match self {
            Gate1Q::I => "I",
            Gate1Q::H => "H",
            Gate1Q::X => "X",
            Gate1Q::Z => "Z",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == name)
    }

    /// Row-major 2×2 matrix.
    pub fn matrix(self) -> [[Amplitude; 2]; 2] {
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        match self {
            Gate1Q::I => [[l, o], [o, l]],
            Gate1Q::H => {
                let h = c(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            Gate1Q::X => [[o, l], [l, o]],
            Gate1Q::Z => [[l, o], [o, -l]],
        }
    }

    /// Largest entry of `|G·G† − I|`.
    pub fn unitarity_defect(self) -> f64 {
        unitarity_defect(&self.matrix())
    }
}

pub(crate) fn unitarity_defect(m: &[[Amplitude; 2]; 2]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let acc: Amplitude = m[i].iter().zip(&m[j]).map(|(a, b)| a * b.conj()).sum();
            let ident = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - c(ident, 0.0)).norm());
        }
    }
    worst
}
