use qtele_core::pipeline::{derive_seed, PipelineConfig, ProtocolKind};
use qtele_core::protocols::{teleport_simplified, teleport_standard};
use qtele_core::sdc::cl2qu;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Bob's bits from the in-process protocol run that a networked session with
/// the same seed reproduces: bit `k` uses the stream seeded with
/// `derive_seed(seed, k)` for Alice's draws and then Bob's readout.
pub fn in_process_reference(
    protocol: ProtocolKind,
    noise_a: Option<f64>,
    seed: u64,
    bits: &[u8],
) -> qtele_core::Result<Vec<u8>> {
    let mut cfg = PipelineConfig::new(protocol);
    if let Some(a) = noise_a {
        cfg = cfg.with_noise(a);
    }
    let epr = cfg.epr_pair()?;
    let mut out = Vec::with_capacity(bits.len());
    let mut k = 0u64;
    for pair in bits.chunks(2) {
        let reg = cl2qu(pair)?;
        for i in 0..pair.len() {
            let psi = reg.qubit(i);
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, k));
            k += 1;
            let bob = match protocol {
                ProtocolKind::Standard => teleport_standard(&psi, &epr, &mut rng)?.bob_state,
                ProtocolKind::Simplified => teleport_simplified(&psi, &epr, &mut rng)?.bob_state,
            };
            out.push(bob.to_state().measure_qubit(0, &mut rng)?);
        }
    }
    Ok(out)
}
