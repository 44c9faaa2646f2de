use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocols::{bell_state, noisy_epr, BellLabel, NoisyEprParams};
use crate::qsim::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    Standard,
    Simplified,
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProtocolKind::Standard => "standard",
            ProtocolKind::Simplified => "simplified",
        })
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(ProtocolKind::Standard),
            "simplified" => Ok(ProtocolKind::Simplified),
            other => Err(Error::Config(format!("unknown protocol {other:?}"))),
        }
    }
}

/// Which bits of the image are teleported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleMode {
    All,
    Count(usize),
}

impl FromStr for SampleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(SampleMode::All);
        }
        s.parse()
            .map(SampleMode::Count)
            .map_err(|_| Error::Config(format!("sample must be `all` or a count, got {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub protocol: ProtocolKind,
    /// Pair imbalance; `None` means Φ⁺ pairs, otherwise `B = √(1 − A²)`.
    pub noise_a: Option<f64>,
    pub seed: u64,
    pub sample: SampleMode,
    pub threads: usize,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn new(protocol: ProtocolKind) -> Self {
        Self {
            protocol,
            noise_a: None,
            seed: 0,
            sample: SampleMode::All,
            threads: 1,
            input: None,
            output: None,
            report: None,
        }
    }

    pub fn with_noise(mut self, a: f64) -> Self {
        self.noise_a = Some(a);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_sample(mut self, sample: SampleMode) -> Self {
        self.sample = sample;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(a) = self.noise_a {
            if !(a > 0.0 && a <= 1.0) {
                return Err(Error::Config(format!(
                    "noise A must lie in (0, 1], got {a}"
                )));
            }
        }
        if self.threads == 0 {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(())
    }

    pub fn epr_params(&self) -> Result<NoisyEprParams> {
        match self.noise_a {
            None => Ok(NoisyEprParams::noiseless()),
            Some(a) => NoisyEprParams::from_a(a),
        }
    }

    /// The shared pair every bit-teleportation starts from.
    pub fn epr_pair(&self) -> Result<StateVector> {
        Ok(match self.noise_a {
            None => bell_state(BellLabel::PhiPlus),
            Some(_) => noisy_epr(&self.epr_params()?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_flags() {
        assert_eq!(
            "standard".parse::<ProtocolKind>().unwrap(),
            ProtocolKind::Standard
        );
        assert!("quantum".parse::<ProtocolKind>().is_err());
        assert_eq!("all".parse::<SampleMode>().unwrap(), SampleMode::All);
        assert_eq!("100".parse::<SampleMode>().unwrap(), SampleMode::Count(100));
        assert!("-3".parse::<SampleMode>().is_err());
    }

    #[test]
    fn noise_range() {
        let c = PipelineConfig::new(ProtocolKind::Standard);
        assert!(c.clone().with_noise(0.8).validate().is_ok());
        assert!(c.clone().with_noise(1.0).validate().is_ok());
        assert!(c.clone().with_noise(0.0).validate().is_err());
        assert!(c.clone().with_noise(1.5).validate().is_err());
        assert!(c.with_threads(0).validate().is_err());
    }

    #[test]
    fn json_shape() {
        let c = PipelineConfig::new(ProtocolKind::Simplified).with_sample(SampleMode::Count(100));
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["protocol"], "simplified");
        assert_eq!(v["sample"]["count"], 100);
        let back: PipelineConfig = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }
}
