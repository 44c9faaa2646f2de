//! Exact statevector simulation of standard and simplified quantum
//! teleportation, superdense-coding classical/quantum interfaces, and an
//! end-to-end digital image teleportation pipeline scored by a coincidence
//! counter.

pub mod error;
pub mod qsim;

pub use error::{Error, Result};
pub mod image;
pub mod pipeline;
pub mod protocols;
pub mod sdc;
