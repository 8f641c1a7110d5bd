//! Fault-injection simulator for surface codes under radiation-induced
//! transient faults.
//!
//! The crate is organised bottom-up:
//!
//! - [`sim`]: stabilizer tableau engine for Clifford circuits with Z
//!   measurement and reset.
//! - [`noise`]: depolarizing intrinsic noise, the radiation fault intensity
//!   model and circuit instrumentation.
//! - [`codes`]: repetition and XXZZ (rotated) surface-code circuits.
//! - [`arch`]: architecture graphs, bundled device presets and SWAP routing.
//! - [`decode`]: detection events and minimum-weight perfect matching.
//! - [`campaign`]: seeded Monte-Carlo sweeps and their CSV/manifest output.

pub mod arch;
pub mod campaign;
pub mod codes;
pub mod decode;
pub mod error;
pub mod noise;
pub mod sim;

pub use error::{Error, Result};
pub use sim::{Circuit, Gate, GateKind, Tableau};
