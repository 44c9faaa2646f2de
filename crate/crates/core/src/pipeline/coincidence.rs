use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::BitAddress;

/// Number of per-plane slots: 3 channels × 8 planes, indexed `channel * 8 + plane`.
pub const PLANE_SLOTS: usize = 24;

/// Bitwise comparison of sent and received bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceReport {
    pub total_bits: u64,
    pub matched: u64,
    pub coincidence: f64,
    /// `None` for planes that contributed no bits.
    pub per_plane: Vec<Option<f64>>,
    /// Counts of `(b1, b2)` indexed `2·b1 + b2`; standard protocol only.
    pub per_outcome_histogram: Option<[u64; 4]>,
    pub classical_bits_total: u64,
}

/// Counts exact matches between `sent` and `received`, aligned by position.
/// Planes without data are reported as `None` and add nothing to the
/// aggregate denominator.
pub fn coincidence_count(sent: &[(BitAddress, u8)], received: &[u8]) -> Result<CoincidenceReport> {
    if sent.len() != received.len() {
        return Err(Error::LengthMismatch {
            sent: sent.len(),
            received: received.len(),
        });
    }
    let mut total = [0u64; PLANE_SLOTS];
    let mut hits = [0u64; PLANE_SLOTS];
    for ((addr, s), r) in sent.iter().zip(received) {
        let slot = addr.plane_slot();
        total[slot] += 1;
        hits[slot] += u64::from(s == r);
    }
    Ok(from_counts(&total, &hits))
}

pub(crate) fn from_counts(
    total: &[u64; PLANE_SLOTS],
    hits: &[u64; PLANE_SLOTS],
) -> CoincidenceReport {
    let total_bits: u64 = total.iter().sum();
    let matched: u64 = hits.iter().sum();
    let per_plane = total
        .iter()
        .zip(hits)
        .map(|(&t, &h)| (t > 0).then(|| h as f64 / t as f64))
        .collect();
    CoincidenceReport {
        total_bits,
        matched,
        coincidence: if total_bits == 0 {
            0.0
        } else {
            matched as f64 / total_bits as f64
        },
        per_plane,
        per_outcome_histogram: None,
        classical_bits_total: 0,
    }
}
