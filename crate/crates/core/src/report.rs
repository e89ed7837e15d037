//! Force and energy reports returned by every potential evaluator.

use alloc::vec;
use alloc::vec::Vec;

/// Energy decomposition by interaction class.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyComponents {
    pub bonded: f64,
    pub lj: f64,
    pub coulomb_short: f64,
    pub coulomb_long: f64,
}

impl EnergyComponents {
    pub fn sum(&self) -> f64 {
        self.bonded + self.lj + self.coulomb_short + self.coulomb_long
    }
}

/// Per-atom forces and potentials plus the total energy of one evaluation.
///
/// `total_energy` is always the sum of `components`; `per_atom_potential`
/// assigns each atom its share (half of each pair term) so that the per-atom
/// values also sum to the total.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceReport {
    /// Forces in energy/Å.
    pub forces: Vec<[f64; 3]>,
    /// Per-atom energy share.
    pub per_atom_potential: Vec<f64>,
    pub total_energy: f64,
    pub components: EnergyComponents,
}

impl ForceReport {
    /// All-zero report for `n` atoms.
    pub fn zeros(n: usize) -> Self {
        ForceReport {
            forces: vec![[0.0; 3]; n],
            per_atom_potential: vec![0.0; n],
            total_energy: 0.0,
            components: EnergyComponents::default(),
        }
    }

    /// Finalize: set the total from the components.
    pub fn close(mut self) -> Self {
        self.total_energy = self.components.sum();
        self
    }

    /// Accumulate another report (forces, potentials, components).
    pub fn absorb(&mut self, other: &ForceReport) {
        debug_assert_eq!(self.forces.len(), other.forces.len());
        for (f, g) in self.forces.iter_mut().zip(&other.forces) {
            f[0] += g[0];
            f[1] += g[1];
            f[2] += g[2];
        }
        for (u, w) in self.per_atom_potential.iter_mut().zip(&other.per_atom_potential) {
            *u += *w;
        }
        self.components.bonded += other.components.bonded;
        self.components.lj += other.components.lj;
        self.components.coulomb_short += other.components.coulomb_short;
        self.components.coulomb_long += other.components.coulomb_long;
        self.total_energy = self.components.sum();
    }

    /// Net force over all atoms (momentum-conservation diagnostic).
    pub fn net_force(&self) -> [f64; 3] {
        let mut net = [0.0; 3];
        for f in &self.forces {
            net[0] += f[0];
            net[1] += f[1];
            net[2] += f[2];
        }
        net
    }

    /// True when every force component and energy is finite.
    pub fn is_finite(&self) -> bool {
        self.total_energy.is_finite()
            && self.forces.iter().all(|f| f.iter().all(|c| c.is_finite()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_tracks_components() {
        let mut r = ForceReport::zeros(2);
        r.components.lj = 1.5;
        r.components.coulomb_short = -0.5;
        let r = r.close();
        assert!((r.total_energy - r.components.sum()).abs() <= 1e-10 * r.total_energy.abs());
        assert_eq!(r.total_energy, 1.0);
    }

    #[test]
    fn absorb_adds_everything() {
        let mut a = ForceReport::zeros(1);
        a.forces[0] = [1.0, 0.0, 0.0];
        a.components.lj = 2.0;
        let mut b = ForceReport::zeros(1);
        b.forces[0] = [0.5, -1.0, 0.0];
        b.components.bonded = 3.0;
        b.per_atom_potential[0] = 3.0;
        a.absorb(&b);
        assert_eq!(a.forces[0], [1.5, -1.0, 0.0]);
        assert_eq!(a.total_energy, 5.0);
        assert_eq!(a.per_atom_potential[0], 3.0);
    }
}
