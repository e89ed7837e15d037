//! Point-charge molecular dynamics with pluggable electrostatics solvers and
//! parallel-in-time (parareal) integration.
//!
//! The crate is organized around a small set of value types ([`ParticleSystem`],
//! [`StateVector`], [`ForceReport`]) and pure evaluators over them:
//!
//! * [`neighbor`] — link-cell binning and Verlet lists with a skin distance.
//! * [`potentials`] — Lennard-Jones, harmonic bonds, and the cheap
//!   electrostatics backends (direct sum, cutoff, smoothed cutoff, Wolf).
//! * [`msm`] — the multilevel summation method: kernel splitting, grid
//!   hierarchy, and the anterpolation → interpolation pipeline.
//! * [`integrate`] — velocity Verlet and leap-frog propagators.
//! * [`parareal`] — the parareal recurrence, computational windows, and an
//!   executor abstraction so fine evaluations can run concurrently.
//! * [`costmodel`] — analytic flop counts, speedup formulas for the two task
//!   distribution plans, and a discrete-event schedule simulator.
//!
//! Everything here is `no_std` (with `alloc`); IO, file formats, and the
//! threaded executor live in the companion `parmd` crate.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod costmodel;
pub mod error;
pub mod integrate;
mod math;
pub mod msm;
pub mod neighbor;
pub mod parareal;
pub mod potentials;
pub mod report;
pub mod state;
pub mod system;
pub mod units;

pub use error::Error;
pub use report::{EnergyComponents, ForceReport};
pub use state::{DistanceMode, StateVector};
pub use system::{Bond, ParticleSystem};
pub use units::Units;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
