//! Short-range potentials and cheap electrostatics backends.
//!
//! Every evaluator is a pure function of (system, parameters, neighbor list)
//! returning a [`ForceReport`] with analytic forces. Pairs joined by a bond
//! record are excluded from both Lennard-Jones and Coulomb sums.

mod bonded;
mod coulomb;
mod lj;

pub use bonded::bond_energy_forces;
pub use coulomb::{coulomb_cutoff, coulomb_direct, coulomb_smoothed_cutoff, coulomb_wolf};
pub use lj::{lj_energy_forces, LjParams};

use alloc::vec::Vec;

use crate::error::Error;
use crate::msm::{self, MsmParams};
use crate::neighbor::NeighborList;
use crate::report::ForceReport;
use crate::system::ParticleSystem;
use crate::units::Units;
use crate::Result;

/// Default Wolf damping parameter in Å⁻¹.
pub const WOLF_ALPHA_DEFAULT: f64 = 0.2;
/// Default Wolf (and plain cutoff) truncation radius in Å.
pub const WOLF_CUTOFF_DEFAULT: f64 = 12.0;

/// Which electrostatics solver a force field uses.
#[derive(Debug, Clone, PartialEq)]
pub enum ElectrostaticsBackend {
    /// O(N²) direct sum; the oracle for every other backend.
    Direct,
    /// Coulomb truncated at `cutoff`.
    Cutoff { cutoff: f64 },
    /// Coulomb with a C¹ switching function between `switch_on` and `cutoff`.
    SmoothedCutoff { switch_on: f64, cutoff: f64 },
    /// Damped, shifted, charge-neutralized truncated sum.
    Wolf { alpha: f64, cutoff: f64 },
    /// Multilevel summation.
    Msm(MsmParams),
}

impl ElectrostaticsBackend {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ElectrostaticsBackend::Direct => Ok(()),
            ElectrostaticsBackend::Cutoff { cutoff } => {
                if cutoff > 0.0 {
                    Ok(())
                } else {
                    Err(Error::invalid("cutoff must be positive"))
                }
            }
            ElectrostaticsBackend::SmoothedCutoff { switch_on, cutoff } => {
                if 0.0 < switch_on && switch_on < cutoff {
                    Ok(())
                } else {
                    Err(Error::invalid("require 0 < switch_on < cutoff"))
                }
            }
            ElectrostaticsBackend::Wolf { alpha, cutoff } => {
                if alpha > 0.0 && cutoff > 0.0 {
                    Ok(())
                } else {
                    Err(Error::invalid("require wolf_alpha > 0 and cutoff > 0"))
                }
            }
            ElectrostaticsBackend::Msm(ref p) => p.validate(),
        }
    }

    /// Neighbor-list cutoff this backend needs, if any.
    pub fn required_cutoff(&self) -> Option<f64> {
        match *self {
            ElectrostaticsBackend::Direct => None,
            ElectrostaticsBackend::Cutoff { cutoff }
            | ElectrostaticsBackend::SmoothedCutoff { cutoff, .. }
            | ElectrostaticsBackend::Wolf { cutoff, .. } => Some(cutoff),
            ElectrostaticsBackend::Msm(ref p) => Some(p.a),
        }
    }
}

/// Pair exclusion mask derived from the bond records.
#[derive(Debug, Clone, Default)]
pub struct Exclusions {
    sorted: Vec<(usize, usize)>,
}

impl Exclusions {
    pub fn from_system(system: &ParticleSystem) -> Self {
        let mut sorted: Vec<(usize, usize)> = system
            .bonds
            .iter()
            .map(|b| (b.i.min(b.j), b.i.max(b.j)))
            .collect();
        sorted.sort_unstable();
        sorted.dedup();
        Exclusions { sorted }
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        let key = (i.min(j), i.max(j));
        self.sorted.binary_search(&key).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sorted.iter().copied()
    }
}

/// A complete interaction model: electrostatics backend, optional LJ terms,
/// and a flag for the harmonic bond terms.
#[derive(Debug, Clone)]
pub struct ForceField {
    pub electrostatics: Option<ElectrostaticsBackend>,
    pub lj: Option<LjParams>,
    pub bonds: bool,
    pub units: Units,
}

impl ForceField {
    pub fn validate(&self) -> Result<()> {
        if let Some(ref e) = self.electrostatics {
            e.validate()?;
        }
        if let Some(ref lj) = self.lj {
            lj.validate()?;
        }
        Ok(())
    }

    /// Largest neighbor-list cutoff any component needs; `None` when only
    /// all-pair terms (direct sum, bonds) are active.
    pub fn required_cutoff(&self) -> Option<f64> {
        let mut c: Option<f64> = None;
        if let Some(ref lj) = self.lj {
            c = Some(lj.cutoff);
        }
        if let Some(cut) = self.electrostatics.as_ref().and_then(|e| e.required_cutoff()) {
            c = Some(c.map_or(cut, |v| v.max(cut)));
        }
        c
    }

    /// Evaluate all active terms. `list` must be valid at
    /// [`ForceField::required_cutoff`] when one is needed.
    pub fn evaluate(
        &self,
        system: &ParticleSystem,
        list: Option<&NeighborList>,
    ) -> Result<ForceReport> {
        let mut report = ForceReport::zeros(system.len());
        if self.bonds {
            report.absorb(&bond_energy_forces(system)?);
        }
        if let Some(ref lj) = self.lj {
            let list = list.ok_or_else(|| Error::invalid("LJ evaluation requires a neighbor list"))?;
            report.absorb(&lj_energy_forces(system, lj, list)?);
        }
        let k = self.units.coulomb_k;
        match self.electrostatics {
            None => {}
            Some(ElectrostaticsBackend::Direct) => {
                report.absorb(&coulomb_direct(system, k)?);
            }
            Some(ElectrostaticsBackend::Cutoff { cutoff }) => {
                let list = list.ok_or_else(|| Error::invalid("cutoff Coulomb requires a neighbor list"))?;
                report.absorb(&coulomb_cutoff(system, cutoff, k, list)?);
            }
            Some(ElectrostaticsBackend::SmoothedCutoff { switch_on, cutoff }) => {
                let list = list.ok_or_else(|| Error::invalid("smoothed cutoff requires a neighbor list"))?;
                report.absorb(&coulomb_smoothed_cutoff(system, switch_on, cutoff, k, list)?);
            }
            Some(ElectrostaticsBackend::Wolf { alpha, cutoff }) => {
                let list = list.ok_or_else(|| Error::invalid("Wolf summation requires a neighbor list"))?;
                report.absorb(&coulomb_wolf(system, alpha, cutoff, k, list)?);
            }
            Some(ElectrostaticsBackend::Msm(ref params)) => {
                let list = list.ok_or_else(|| Error::invalid("MSM requires a neighbor list"))?;
                report.absorb(&msm::msm_energy_forces(system, params, list, k)?);
            }
        }
        Ok(report)
    }
}

impl Default for ForceField {
    fn default() -> Self {
        ForceField {
            electrostatics: Some(ElectrostaticsBackend::Direct),
            lj: None,
            bonds: true,
            units: Units::REAL,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::Bond;
    use alloc::vec;

    #[test]
    fn exclusions_cover_bonds_both_ways() {
        let s = ParticleSystem::new(
            vec![[0.0; 3], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]],
            vec![[0.0; 3]; 3],
            vec![0.0; 3],
            vec![1.0; 3],
            vec![Bond { i: 2, j: 0, k: 1.0, r0: 1.0 }],
            [10.0; 3],
        )
        .unwrap();
        let ex = Exclusions::from_system(&s);
        assert!(ex.contains(0, 2));
        assert!(ex.contains(2, 0));
        assert!(!ex.contains(0, 1));
    }

    #[test]
    fn backend_validation() {
        assert!(ElectrostaticsBackend::SmoothedCutoff { switch_on: 9.0, cutoff: 6.0 }
            .validate()
            .is_err());
        assert!(ElectrostaticsBackend::Wolf { alpha: 0.0, cutoff: 12.0 }.validate().is_err());
        assert!(ElectrostaticsBackend::Wolf {
            alpha: WOLF_ALPHA_DEFAULT,
            cutoff: WOLF_CUTOFF_DEFAULT
        }
        .validate()
        .is_ok());
    }

    #[test]
    fn required_cutoff_takes_max() {
        let ff = ForceField {
            electrostatics: Some(ElectrostaticsBackend::Cutoff { cutoff: 12.0 }),
            lj: Some(LjParams::uniform(3, 0.1, 3.0, 9.0)),
            bonds: false,
            units: Units::REDUCED,
        };
        assert_eq!(ff.required_cutoff(), Some(12.0));
    }
}
