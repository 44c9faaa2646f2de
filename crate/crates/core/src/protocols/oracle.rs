use super::NoisyEprParams;
use crate::error::{Error, Result};
use crate::qsim::{PureQubit, NORM_TOL};

/// Closed-form fidelity of the standard protocol's corrected branch state
/// against ψ for an imbalanced pair `A|00⟩ + B|11⟩`, with real α, β, A, B.
///
/// After correction Bob holds `∝ Aα|0⟩ + Bβ|1⟩` when `b2 = 0` and
/// `∝ Bα|0⟩ + Aβ|1⟩` when `b2 = 1`; `b1` only contributes a sign that the σz
/// correction removes.
pub fn standard_noisy_fidelity_oracle(
    psi: &PureQubit,
    params: &NoisyEprParams,
    outcome: (u8, u8),
) -> Result<f64> {
    let imag = [psi.alpha().im, psi.beta().im, params.a().im, params.b().im];
    if imag.iter().any(|x| x.abs() > NORM_TOL) {
        return Err(Error::Config("oracle requires real amplitudes".into()));
    }
    let (b1, b2) = outcome;
    if b1 > 1 {
        return Err(Error::NotABit(b1));
    }
    let (alpha, beta) = (psi.alpha().re, psi.beta().re);
    let (a, b) = (params.a().re, params.b().re);
    let (w0, w1) = match b2 {
        0 => (a, b),
        1 => (b, a),
        x => return Err(Error::NotABit(x)),
    };
    let den = w0 * w0 * alpha * alpha + w1 * w1 * beta * beta;
    if den <= 1e-300 {
        return Err(Error::ZeroNormBranch);
    }
    let num = w0 * alpha * alpha + w1 * beta * beta;
    Ok(num * num / den)
}
