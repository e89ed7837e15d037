//! Error type shared by all evaluators and integrators.

use alloc::string::String;
use core::fmt;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two state vectors (or a state and its system) disagree in length.
    DimensionMismatch { expected: usize, got: usize },
    /// A pair of atoms is close enough to make 1/r (or a bond direction)
    /// numerically meaningless.
    Singularity { i: usize, j: usize, r: f64 },
    /// An atom lies outside the region covered by the grid hierarchy.
    Coverage { atom: usize },
    /// An integrator step produced a non-finite position or velocity.
    BlowUp { step: usize },
    /// A propagator failed inside a parareal window; carries the window-local
    /// time-point index alongside the underlying failure.
    Window { point: usize, source: alloc::boxed::Box<Error> },
    /// Invalid configuration or input data.
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::Singularity { i, j, r } => {
                write!(f, "singular pair ({i}, {j}) at r = {r:e} A")
            }
            Error::Coverage { atom } => {
                write!(f, "atom {atom} is outside the region covered by the grid")
            }
            Error::BlowUp { step } => {
                write!(f, "integrator blow-up at step {step}: non-finite state")
            }
            Error::Window { point, source } => {
                write!(f, "propagator failed at window point {point}: {source}")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn at_window_point(self, point: usize) -> Self {
        Error::Window { point, source: alloc::boxed::Box::new(self) }
    }
}
