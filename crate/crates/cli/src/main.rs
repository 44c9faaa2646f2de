use std::fs;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use qtele_core::image::{slice_bitplanes, write_bitplane, Channel, RasterImage};
use qtele_core::pipeline::{
    run_partial_demos, run_pipeline, sample_bits, DemoKind, PipelineConfig, ProtocolKind,
    SampleMode, TeleportReport,
};
use qtele_net::{
    run_alice, run_bob, seed_from_env, transcript_audit, AliceConfig, Fabric, NetError, Transcript,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "qteleport",
    version,
    about = "Quantum teleportation of RGB images, simulated"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Teleport every (or a sample of) image bit and rebuild the image.
    TeleportImage {
        #[arg(long, default_value = "standard")]
        protocol: ProtocolKind,
        #[arg(long = "noise-a")]
        noise_a: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "all")]
        sample: SampleMode,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write the 24 bitplanes of a P6 image as P4 files.
    Bitplanes {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        out_dir: PathBuf,
    },
    /// Rerun a per-protocol partial experiment and print its verdict.
    Demo {
        which: DemoKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare two reports, ignoring timing fields.
    ReportDiff { a: PathBuf, b: PathBuf },
    /// Run the entanglement fabric broker.
    ServeFabric {
        #[arg(long, default_value = "127.0.0.1:7400")]
        bind: String,
        /// Seed for sessions that do not bring their own.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Send bits to a listening Bob through the fabric.
    Alice {
        #[arg(long)]
        fabric: String,
        #[arg(long)]
        bob: String,
        #[arg(long, default_value = "standard")]
        protocol: ProtocolKind,
        /// Text file of 0/1 characters, or a P6 image to sample from.
        #[arg(long = "bits-from")]
        bits_from: PathBuf,
        /// Bits to sample when `--bits-from` is an image.
        #[arg(long, default_value_t = 100)]
        sample: usize,
        #[arg(long = "noise-a")]
        noise_a: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Receive one Alice session and print the recovered bits.
    Bob {
        #[arg(long)]
        listen: String,
        #[arg(long)]
        fabric: String,
        #[arg(long, default_value = "standard")]
        protocol: ProtocolKind,
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn print_json(v: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("json values serialize")
    );
}

fn save_transcript(path: Option<&Path>, t: &Transcript) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, t.to_json()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn read_bits(path: &Path, sample: usize, seed: u64) -> Result<Vec<u8>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    if bytes.starts_with(b"P6") {
        let img = RasterImage::from_p6(&bytes)?;
        return Ok(sample_bits(&img, sample, seed)?
            .into_iter()
            .map(|(_, b)| b)
            .collect());
    }
    let text = String::from_utf8(bytes).context("bit file is not text")?;
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => bail!("unexpected character {other:?} in bit file"),
        })
        .collect()
}

fn bit_string(bits: &[u8]) -> String {
    bits.iter()
        .map(|b| if *b == 1 { '1' } else { '0' })
        .collect()
}

fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::TeleportImage {
            protocol,
            noise_a,
            seed,
            sample,
            threads,
            input,
            output,
            report,
        } => {
            let mut cfg = PipelineConfig::new(protocol)
                .with_seed(seed)
                .with_sample(sample)
                .with_threads(threads);
            cfg.noise_a = noise_a;
            cfg.input = Some(input);
            cfg.output = output;
            cfg.report = report.clone();
            cfg.validate()?;
            let rep = run_pipeline(&cfg)?;
            if report.is_none() {
                println!("{}", rep.to_json());
            }
            let ok = rep.coincidence.coincidence == 1.0 && rep.output_identical;
            eprintln!(
                "{}: {} bits, coincidence {:.6}, classical bits {}, {:.2}s",
                if ok { "PASS" } else { "FAIL" },
                rep.coincidence.total_bits,
                rep.coincidence.coincidence,
                rep.coincidence.classical_bits_total,
                rep.wall_time_s
            );
            Ok(ok)
        }
        Command::Bitplanes { input, out_dir } => {
            let img = RasterImage::load(&input)?;
            fs::create_dir_all(&out_dir)?;
            for ch in Channel::ALL {
                for plane in slice_bitplanes(&img, ch) {
                    let name = format!("{}_plane{}.pbm", ch.letter(), plane.plane_index());
                    fs::write(out_dir.join(name), write_bitplane(&plane))?;
                }
            }
            eprintln!("wrote 24 planes to {}", out_dir.display());
            Ok(true)
        }
        Command::Demo { which, seed } => {
            let verdict = run_partial_demos(which, seed)?;
            print_json(&serde_json::to_value(&verdict)?);
            Ok(verdict.passed)
        }
        Command::ReportDiff { a, b } => {
            let load = |p: &Path| -> Result<TeleportReport> {
                let s =
                    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                TeleportReport::from_json(&s).with_context(|| format!("parsing {}", p.display()))
            };
            let diffs = load(&a)?.diff(&load(&b)?);
            for d in &diffs {
                println!("{d}");
            }
            Ok(diffs.is_empty())
        }
        Command::ServeFabric { bind, seed } => {
            let fabric = Fabric::bind(&bind)
                .with_context(|| format!("binding {bind}"))?
                .with_default_seed(seed_from_env(seed));
            eprintln!("fabric listening on {}", fabric.local_addr()?);
            fabric.serve()?;
            Ok(true)
        }
        Command::Alice {
            fabric,
            bob,
            protocol,
            bits_from,
            sample,
            noise_a,
            seed,
            transcript,
        } => {
            let seed = seed_from_env(seed);
            let bits = read_bits(&bits_from, sample, seed)?;
            let cfg = AliceConfig {
                protocol,
                noise_a,
                seed,
            };
            let run = match run_alice(fabric.as_str(), bob.as_str(), &cfg, &bits) {
                Ok(r) => r,
                Err(NetError::Aborted {
                    reason,
                    transcript: t,
                }) => {
                    save_transcript(transcript.as_deref(), &t)?;
                    bail!("session aborted: {reason}");
                }
                Err(e) => return Err(e.into()),
            };
            save_transcript(transcript.as_deref(), &run.transcript)?;
            let audit = transcript_audit(&run.transcript)?;
            print_json(&json!({
                "session": run.session,
                "protocol": protocol,
                "bits_sent": bit_string(&bits),
                "audit": audit,
            }));
            Ok(audit.violations == 0)
        }
        Command::Bob {
            listen,
            fabric,
            protocol,
            transcript,
        } => {
            let listener =
                TcpListener::bind(&listen).with_context(|| format!("binding {listen}"))?;
            eprintln!("bob listening on {}", listener.local_addr()?);
            let run = match run_bob(&listener, fabric.as_str(), protocol) {
                Ok(r) => r,
                Err(NetError::Aborted {
                    reason,
                    transcript: t,
                }) => {
                    save_transcript(transcript.as_deref(), &t)?;
                    bail!("session aborted: {reason}");
                }
                Err(e) => return Err(e.into()),
            };
            save_transcript(transcript.as_deref(), &run.transcript)?;
            let audit = transcript_audit(&run.transcript)?;
            print_json(&json!({
                "session": run.session,
                "protocol": protocol,
                "bits_received": bit_string(&run.bits),
                "audit": audit,
            }));
            Ok(audit.violations == 0)
        }
    }
}
