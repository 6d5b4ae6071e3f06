//! Precision bounds for Kennedy-type interferometric phase detection.
//!
//! - [`closed_forms`]: analytic overlaps and minimum detectable phases for
//!   coherent and squeezed probes.
//! - [`detection`]: the Neyman–Pearson bound, the Kennedy receiver and
//!   threshold root solving.
//! - [`optimizer`]: power-split optimization and figure sweeps.
//! - [`fock`]: the truncated Fock-space oracle all analytic results are
//!   checked against.
//! - [`verify`]: the oracle comparison suite.

pub mod closed_forms;
pub mod detection;
mod error;
pub mod fock;
mod linalg;
pub mod optimizer;
pub mod verify;

pub use error::{Error, Result};
