//! End-to-end image teleportation: bitplane decomposition, Cl2Qu, one
//! teleportation per bit, Qu2Cl, reconstruction and coincidence scoring.

mod coincidence;
mod config;
mod demos;
mod report;
mod run;

pub use coincidence::{coincidence_count, CoincidenceReport, PLANE_SLOTS};
pub use config::{PipelineConfig, ProtocolKind, SampleMode};
pub use demos::{run_partial_demos, DemoCase, DemoKind, DemoVerdict};
pub use report::{StageTimings, TeleportReport, REPORT_SCHEMA};
pub use run::{derive_seed, run_pipeline, sample_bits, teleport_bit, teleport_image, CHUNK_BITS};
