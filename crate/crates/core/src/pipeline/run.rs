use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::coincidence::from_counts;
use super::{
    PipelineConfig, ProtocolKind, SampleMode, StageTimings, TeleportReport, PLANE_SLOTS,
    REPORT_SCHEMA,
};
use crate::error::{Error, Result};
use crate::image::{
    assemble_bitplanes, slice_bitplanes, BitAddress, Bitplane, Channel, RasterImage,
};
use crate::protocols::{teleport_simplified, teleport_standard};
use crate::qsim::{PureQubit, StateVector};
use crate::sdc::{cl2qu, qu2cl, CbsRegister};

/// Bits per work unit. Even, so a pair never straddles two units.
pub const CHUNK_BITS: usize = 4096;

/// Seed for the work unit starting at `range_start`; independent of worker count.
pub fn derive_seed(master: u64, range_start: u64) -> u64 {
    splitmix64(master ^ splitmix64(range_start))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// One bit-teleportation on a fresh 3-qubit register.
#[derive(Debug, Clone, Copy)]
pub struct BitTeleport {
    pub bob: PureQubit,
    pub outcome: Option<(u8, u8)>,
    pub classical_bits: u32,
    pub fidelity: f64,
}

pub fn teleport_bit<R: Rng + ?Sized>(
    qubit: &PureQubit,
    protocol: ProtocolKind,
    epr: &StateVector,
    rng: &mut R,
) -> Result<BitTeleport> {
    Ok(match protocol {
        ProtocolKind::Standard => {
            let o = teleport_standard(qubit, epr, rng)?;
            BitTeleport {
                bob: o.bob_state,
                outcome: Some((o.b1, o.b2)),
                classical_bits: o.classical_bits_sent,
                fidelity: o.fidelity_vs_input,
            }
        }
        ProtocolKind::Simplified => {
            let t = teleport_simplified(qubit, epr, rng)?;
            BitTeleport {
                bob: t.bob_state,
                outcome: None,
                classical_bits: t.classical_bits_sent,
                fidelity: t.fidelity_vs_input,
            }
        }
    })
}

/// Uniform sample of `n` bits without replacement, reproducible from `seed`.
pub fn sample_bits(img: &RasterImage, n: usize, seed: u64) -> Result<Vec<(BitAddress, u8)>> {
    let offsets = sample_offsets(img.bit_count(), n, seed)?;
    Ok(offsets
        .into_iter()
        .map(|o| {
            let addr =
                BitAddress::from_offset(o, img.width(), img.height()).expect("offset in range");
            (addr, img.get_bit(addr))
        })
        .collect())
}

fn sample_offsets(population: usize, n: usize, seed: u64) -> Result<Vec<usize>> {
    if n > population {
        return Err(Error::SampleTooLarge {
            requested: n,
            population,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(rand::seq::index::sample(&mut rng, population, n).into_vec())
}

enum Items {
    All(usize),
    Sampled(Vec<usize>),
}

impl Items {
    fn len(&self) -> usize {
        match self {
            Items::All(n) => *n,
            Items::Sampled(v) => v.len(),
        }
    }

    fn offset(&self, i: usize) -> usize {
        match self {
            Items::All(_) => i,
            Items::Sampled(v) => v[i],
        }
    }
}

struct ChunkResult {
    received: Vec<u8>,
    histogram: [u64; 4],
    classical: u64,
    pairs: u64,
    ancillas: u64,
    min_fidelity: f64,
}

fn run_chunk(
    bits: &[u8],
    protocol: ProtocolKind,
    epr: &StateVector,
    seed: u64,
) -> Result<ChunkResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ChunkResult {
        received: Vec::with_capacity(bits.len()),
        histogram: [0; 4],
        classical: 0,
        pairs: 0,
        ancillas: 0,
        min_fidelity: 1.0,
    };
    for pair in bits.chunks(2) {
        let padded = [pair[0], pair.get(1).copied().unwrap_or(0)];
        if pair.len() == 1 {
            out.ancillas += 1;
        }
        let reg = cl2qu(&padded)?;
        let mut bob = [PureQubit::ZERO; 2];
        for (k, slot) in bob.iter_mut().enumerate() {
            let t = teleport_bit(&reg.qubit(k), protocol, epr, &mut rng)?;
            if let Some((b1, b2)) = t.outcome {
                out.histogram[(2 * b1 + b2) as usize] += 1;
            }
            out.classical += u64::from(t.classical_bits);
            out.min_fidelity = out.min_fidelity.min(t.fidelity);
            *slot = t.bob;
        }
        let recovered = qu2cl(&CbsRegister::from_qubits(&bob)?);
        out.received.extend_from_slice(&recovered[..pair.len()]);
        out.pairs += 1;
    }
    Ok(out)
}

/// Runs the whole pipeline in memory. Returns the reconstructed image and
/// the report; no files are touched.
pub fn teleport_image(
    img: &RasterImage,
    cfg: &PipelineConfig,
) -> Result<(RasterImage, TeleportReport)> {
    cfg.validate()?;
    let started = Instant::now();
    let mut timings = StageTimings::default();
    let (w, h) = (img.width(), img.height());

    let t = Instant::now();
    let planes: Vec<[Bitplane; 8]> = Channel::ALL
        .iter()
        .map(|&ch| slice_bitplanes(img, ch))
        .collect();
    let items = match cfg.sample {
        SampleMode::All => Items::All(img.bit_count()),
        SampleMode::Count(n) => Items::Sampled(sample_offsets(img.bit_count(), n, cfg.seed)?),
    };
    let addr_of =
        |i: usize| BitAddress::from_offset(items.offset(i), w, h).expect("offset in range");
    let sent: Vec<u8> = (0..items.len())
        .map(|i| {
            let a = addr_of(i);
            planes[a.channel.index()][a.plane as usize].bit(a.row, a.col)
        })
        .collect();
    timings.decompose_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let epr = cfg.epr_pair()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let starts: Vec<usize> = (0..sent.len()).step_by(CHUNK_BITS).collect();
    let chunks: Vec<ChunkResult> = pool.install(|| {
        starts
            .par_iter()
            .map(|&s| {
                let end = (s + CHUNK_BITS).min(sent.len());
                run_chunk(
                    &sent[s..end],
                    cfg.protocol,
                    &epr,
                    derive_seed(cfg.seed, s as u64),
                )
            })
            .collect::<Result<_>>()
    })?;
    timings.teleport_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let mut histogram = [0u64; 4];
    let (mut classical, mut pairs, mut ancillas, mut min_fidelity) = (0u64, 0u64, 0u64, 1.0f64);
    let mut received = Vec::with_capacity(sent.len());
    for c in chunks {
        for (dst, src) in histogram.iter_mut().zip(c.histogram) {
            *dst += src;
        }
        classical += c.classical;
        pairs += c.pairs;
        ancillas += c.ancillas;
        min_fidelity = min_fidelity.min(c.min_fidelity);
        received.extend(c.received);
    }

    let mut total = [0u64; PLANE_SLOTS];
    let mut hits = [0u64; PLANE_SLOTS];
    let mut out_planes = planes.clone();
    for (i, (&s, &r)) in sent.iter().zip(&received).enumerate() {
        let a = addr_of(i);
        total[a.plane_slot()] += 1;
        hits[a.plane_slot()] += u64::from(s == r);
        out_planes[a.channel.index()][a.plane as usize].set_bit(a.row, a.col, r);
    }
    let mut output = img.clone();
    for (ch, ps) in Channel::ALL.iter().zip(&out_planes) {
        output.set_channel(*ch, &assemble_bitplanes(ps)?)?;
    }
    let mut coincidence = from_counts(&total, &hits);
    coincidence.per_outcome_histogram =
        (cfg.protocol == ProtocolKind::Standard).then_some(histogram);
    coincidence.classical_bits_total = classical;
    timings.reconstruct_s = t.elapsed().as_secs_f64();

    let report = TeleportReport {
        schema: REPORT_SCHEMA,
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        width: w,
        height: h,
        bits_teleported: sent.len() as u64,
        pairs_teleported: pairs,
        ancillas,
        min_fidelity,
        coincidence,
        output_identical: output == *img,
        wall_time_s: started.elapsed().as_secs_f64(),
        stage_timings: timings,
    };
    Ok((output, report))
}

/// File-driven run: reads `cfg.input`, writes `cfg.output` and `cfg.report`
/// when set.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<TeleportReport> {
    let started = Instant::now();
    let input = cfg
        .input
        .as_ref()
        .ok_or_else(|| Error::Config("input path required".into()))?;
    let img = RasterImage::load(input)?;
    let (output, mut report) = teleport_image(&img, cfg)?;
    let t = Instant::now();
    if let Some(path) = &cfg.output {
        output.save(path)?;
    }
    report.stage_timings.write_s = t.elapsed().as_secs_f64();
    report.wall_time_s = started.elapsed().as_secs_f64();
    if let Some(path) = &cfg.report {
        std::fs::write(path, report.to_json())?;
    }
    Ok(report)
}
