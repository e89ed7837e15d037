//! Flat state vector: 3n positions followed by 3n velocities.
//!
//! This is the iterate the parareal recurrence manipulates; it supports the
//! linear combinations the predictor-corrector update needs, and position-only
//! distance norms used for convergence checks.

use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::system::ParticleSystem;
use crate::Result;

/// Norm over the position block used by [`StateVector::distance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMode {
    /// Maximum over atoms of the Euclidean displacement.
    MaxPosition,
    /// Root-mean-square displacement over atoms.
    RmsPosition,
}

/// Flat vector of 6n reals: positions then velocities, in system order.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    data: Vec<f64>,
}

impl StateVector {
    /// Concatenate positions then velocities of `system`.
    pub fn from_system(system: &ParticleSystem) -> Self {
        let n = system.len();
        let mut data = Vec::with_capacity(6 * n);
        for p in &system.positions {
            data.extend_from_slice(p);
        }
        for v in &system.velocities {
            data.extend_from_slice(v);
        }
        StateVector { data }
    }

    /// Wrap a raw 6n-element buffer.
    pub fn from_raw(data: Vec<f64>) -> Result<Self> {
        if data.len() % 6 != 0 {
            return Err(Error::invalid("state length must be a multiple of 6"));
        }
        Ok(StateVector { data })
    }

    /// Write positions and velocities back into `system`. The inverse of
    /// [`StateVector::from_system`]; exact (bitwise) round trip.
    pub fn write_into(&self, system: &mut ParticleSystem) -> Result<()> {
        let n = system.len();
        if self.data.len() != 6 * n {
            return Err(Error::DimensionMismatch { expected: 6 * n, got: self.data.len() });
        }
        for (i, p) in system.positions.iter_mut().enumerate() {
            p.copy_from_slice(&self.data[3 * i..3 * i + 3]);
        }
        for (i, v) in system.velocities.iter_mut().enumerate() {
            v.copy_from_slice(&self.data[3 * n + 3 * i..3 * n + 3 * i + 3]);
        }
        Ok(())
    }

    /// Number of atoms this state describes.
    #[inline]
    pub fn atoms(&self) -> usize {
        self.data.len() / 6
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Position of atom `i`.
    #[inline]
    pub fn position(&self, i: usize) -> [f64; 3] {
        [self.data[3 * i], self.data[3 * i + 1], self.data[3 * i + 2]]
    }

    /// Velocity of atom `i`.
    #[inline]
    pub fn velocity(&self, i: usize) -> [f64; 3] {
        let n = self.atoms();
        [
            self.data[3 * n + 3 * i],
            self.data[3 * n + 3 * i + 1],
            self.data[3 * n + 3 * i + 2],
        ]
    }

    /// True when every component is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Elementwise `alpha · x + y`.
    pub fn axpy(alpha: f64, x: &StateVector, y: &StateVector) -> Result<StateVector> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
        }
        let data = x
            .data
            .iter()
            .zip(&y.data)
            .map(|(&xi, &yi)| alpha * xi + yi)
            .collect();
        Ok(StateVector { data })
    }

    /// Position-block distance between two states of the same size.
    pub fn distance(&self, other: &StateVector, mode: DistanceMode) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: other.len() });
        }
        let n = self.atoms();
        match mode {
            DistanceMode::MaxPosition => {
                let mut worst: f64 = 0.0;
                for i in 0..n {
                    worst = worst.max(math::dist2(self.position(i), other.position(i)));
                }
                Ok(math::sqrt(worst))
            }
            DistanceMode::RmsPosition => {
                let mut acc = 0.0;
                for i in 0..n {
                    acc += math::dist2(self.position(i), other.position(i));
                }
                Ok(math::sqrt(acc / n as f64))
            }
        }
    }
}
