//! Particle system: positions, velocities, charges, masses, bonds, box.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::Result;

/// Minimum allowed pair separation; below this 1/r is treated as singular.
pub const COINCIDENCE_TOL: f64 = 1e-6;

/// Harmonic bond record: U = k (r - r0)² between atoms `i` and `j`.
///
/// Note the convention carries no ½ factor, matching common force-field usage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    /// Stiffness in energy/Å².
    pub k: f64,
    /// Equilibrium length in Å.
    pub r0: f64,
}

/// The simulated state: n point charges with masses and optional harmonic
/// bonds in an axis-aligned box (open boundary; the box is used only for grid
/// extents and cell binning).
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSystem {
    /// Per-atom species label (informational; used by LJ parameter tables).
    pub species: Vec<String>,
    /// Positions in Å.
    pub positions: Vec<[f64; 3]>,
    /// Velocities in Å/fs.
    pub velocities: Vec<[f64; 3]>,
    /// Partial charges in elementary charges.
    pub charges: Vec<f64>,
    /// Masses in amu, strictly positive.
    pub masses: Vec<f64>,
    /// Harmonic bonds (may be empty).
    pub bonds: Vec<Bond>,
    /// Box edge lengths in Å.
    pub box_edges: [f64; 3],
}

impl ParticleSystem {
    /// Build and validate a system. Species default to "X" when not given.
    pub fn new(
        positions: Vec<[f64; 3]>,
        velocities: Vec<[f64; 3]>,
        charges: Vec<f64>,
        masses: Vec<f64>,
        bonds: Vec<Bond>,
        box_edges: [f64; 3],
    ) -> Result<Self> {
        let species = positions.iter().map(|_| String::from("X")).collect();
        Self::with_species(species, positions, velocities, charges, masses, bonds, box_edges)
    }

    pub fn with_species(
        species: Vec<String>,
        positions: Vec<[f64; 3]>,
        velocities: Vec<[f64; 3]>,
        charges: Vec<f64>,
        masses: Vec<f64>,
        bonds: Vec<Bond>,
        box_edges: [f64; 3],
    ) -> Result<Self> {
        let sys = ParticleSystem {
            species,
            positions,
            velocities,
            charges,
            masses,
            bonds,
            box_edges,
        };
        sys.validate()?;
        Ok(sys)
    }

    /// Number of atoms.
    #[inline]
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Check the type invariants: n ≥ 1, equal field lengths, positive
    /// masses, finite positions, valid bond indices, no coincident atoms.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if n == 0 {
            return Err(Error::invalid("system must contain at least one atom"));
        }
        for (name, len) in [
            ("species", self.species.len()),
            ("velocities", self.velocities.len()),
            ("charges", self.charges.len()),
            ("masses", self.masses.len()),
        ] {
            if len != n {
                return Err(Error::invalid(format!(
                    "{name} length {len} does not match {n} positions"
                )));
            }
        }
        for (i, p) in self.positions.iter().enumerate() {
            if !p.iter().all(|c| c.is_finite()) {
                return Err(Error::invalid(format!("non-finite position for atom {i}")));
            }
        }
        for (i, v) in self.velocities.iter().enumerate() {
            if !v.iter().all(|c| c.is_finite()) {
                return Err(Error::invalid(format!("non-finite velocity for atom {i}")));
            }
        }
        for (i, &m) in self.masses.iter().enumerate() {
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::invalid(format!("mass of atom {i} must be > 0, got {m}")));
            }
        }
        if !self.box_edges.iter().all(|&e| e.is_finite() && e > 0.0) {
            return Err(Error::invalid("box edges must be finite and positive"));
        }
        for (b, bond) in self.bonds.iter().enumerate() {
            if bond.i == bond.j || bond.i >= n || bond.j >= n {
                return Err(Error::invalid(format!(
                    "bond {b} has invalid indices ({}, {})",
                    bond.i, bond.j
                )));
            }
            if !(bond.k.is_finite() && bond.r0.is_finite() && bond.r0 >= 0.0) {
                return Err(Error::invalid(format!("bond {b} has invalid parameters")));
            }
        }
        self.check_coincidence()?;
        Ok(())
    }

    /// Reject pairs closer than [`COINCIDENCE_TOL`]; prevents 1/r blow-ups at load.
    fn check_coincidence(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let r2 = math::dist2(self.positions[i], self.positions[j]);
                if r2 < COINCIDENCE_TOL * COINCIDENCE_TOL {
                    return Err(Error::Singularity { i, j, r: math::sqrt(r2) });
                }
            }
        }
        Ok(())
    }

    /// Axis-aligned bounding box of the atom positions, (min, max).
    pub fn bounding_box(&self) -> ([f64; 3], [f64; 3]) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in &self.positions {
            for a in 0..3 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        (lo, hi)
    }

    /// Largest pair distance (O(n²); intended for tests and small systems).
    pub fn diameter(&self) -> f64 {
        let mut d2: f64 = 0.0;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                d2 = d2.max(math::dist2(self.positions[i], self.positions[j]));
            }
        }
        math::sqrt(d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn dimer(r: f64) -> Result<ParticleSystem> {
        ParticleSystem::new(
            vec![[0.0, 0.0, 0.0], [r, 0.0, 0.0]],
            vec![[0.0; 3]; 2],
            vec![1.0, -1.0],
            vec![1.0, 1.0],
            vec![],
            [10.0, 10.0, 10.0],
        )
    }

    #[test]
    fn valid_dimer() {
        let s = dimer(2.0).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.diameter(), 2.0);
    }

    #[test]
    fn coincident_atoms_rejected() {
        let err = dimer(1e-8).unwrap_err();
        assert!(matches!(err, Error::Singularity { i: 0, j: 1, .. }));
    }

    #[test]
    fn nonpositive_mass_rejected() {
        let mut s = dimer(2.0).unwrap();
        s.masses[1] = 0.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn bad_bond_indices_rejected() {
        let mut s = dimer(2.0).unwrap();
        s.bonds.push(Bond { i: 0, j: 2, k: 1.0, r0: 1.0 });
        assert!(s.validate().is_err());
        s.bonds[0] = Bond { i: 1, j: 1, k: 1.0, r0: 1.0 };
        assert!(s.validate().is_err());
    }

    #[test]
    fn empty_system_rejected() {
        let err = ParticleSystem::new(vec![], vec![], vec![], vec![], vec![], [1.0; 3]);
        assert!(err.is_err());
    }
}
