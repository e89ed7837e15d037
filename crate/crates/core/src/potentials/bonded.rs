//! Harmonic bond terms, U = k (r − r0)².

use crate::error::Error;
use crate::math;
use crate::report::ForceReport;
use crate::system::{ParticleSystem, COINCIDENCE_TOL};
use crate::Result;

use super::lj::accumulate_pair;

/// Evaluate all harmonic bonds; zero report when the system has none.
pub fn bond_energy_forces(system: &ParticleSystem) -> Result<ForceReport> {
    let mut report = ForceReport::zeros(system.len());
    for bond in &system.bonds {
        let (i, j) = (bond.i, bond.j);
        let r = math::dist(system.positions[i], system.positions[j]);
        if r < COINCIDENCE_TOL {
            return Err(Error::Singularity { i, j, r });
        }
        let dr = r - bond.r0;
        let energy = bond.k * dr * dr;
        let dudr = 2.0 * bond.k * dr;
        accumulate_pair(&mut report, system, i, j, energy, dudr);
        report.components.bonded += energy;
    }
    Ok(report.close())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::Bond;
    use alloc::vec;

    fn bonded_dimer(r: f64, k: f64, r0: f64) -> ParticleSystem {
        ParticleSystem::new(
            vec![[0.0; 3], [r, 0.0, 0.0]],
            vec![[0.0; 3]; 2],
            vec![0.0; 2],
            vec![1.0; 2],
            vec![Bond { i: 0, j: 1, k, r0 }],
            [10.0; 3],
        )
        .unwrap()
    }

    #[test]
    fn equilibrium_is_zero() {
        let rep = bond_energy_forces(&bonded_dimer(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(rep.total_energy, 0.0);
        assert_eq!(rep.forces[0], [0.0; 3]);
    }

    #[test]
    fn stretched_bond_hand_values() {
        // k = 1, r0 = 1, r = 2: U = 1, |F| = dU/dr = 2 along the bond
        let rep = bond_energy_forces(&bonded_dimer(2.0, 1.0, 1.0)).unwrap();
        assert!((rep.total_energy - 1.0).abs() < 1e-14);
        assert!((rep.forces[0][0] - 2.0).abs() < 1e-14);
        assert!((rep.forces[1][0] + 2.0).abs() < 1e-14);
        assert_eq!(rep.forces[0][1], 0.0);
    }

    #[test]
    fn no_bonds_zero_report() {
        let mut s = bonded_dimer(2.0, 1.0, 1.0);
        s.bonds.clear();
        let rep = bond_energy_forces(&s).unwrap();
        assert_eq!(rep.total_energy, 0.0);
    }
}
