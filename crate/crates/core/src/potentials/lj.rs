//! Truncated Lennard-Jones potential with Lorentz-Berthelot combination.

use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::neighbor::NeighborList;
use crate::report::ForceReport;
use crate::system::{ParticleSystem, COINCIDENCE_TOL};
use crate::Result;

use super::Exclusions;

/// Per-atom Lennard-Jones parameters; pair values come from the
/// Lorentz-Berthelot rules (arithmetic σ, geometric ε).
#[derive(Debug, Clone, PartialEq)]
pub struct LjParams {
    pub epsilon: Vec<f64>,
    pub sigma: Vec<f64>,
    pub cutoff: f64,
}

impl LjParams {
    /// Same well depth and size for every atom.
    pub fn uniform(n: usize, epsilon: f64, sigma: f64, cutoff: f64) -> Self {
        LjParams {
            epsilon: alloc::vec![epsilon; n],
            sigma: alloc::vec![sigma; n],
            cutoff,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon.len() != self.sigma.len() {
            return Err(Error::invalid("epsilon and sigma tables differ in length"));
        }
        if self.epsilon.iter().any(|&e| !(e >= 0.0)) {
            return Err(Error::invalid("epsilon must be >= 0"));
        }
        if self.sigma.iter().any(|&s| !(s > 0.0)) {
            return Err(Error::invalid("sigma must be > 0"));
        }
        let sigma_max = self.sigma.iter().cloned().fold(0.0, f64::max);
        if !(self.cutoff > sigma_max) {
            return Err(Error::invalid("cutoff must exceed sigma"));
        }
        Ok(())
    }

    /// Lorentz-Berthelot combined (ε_ij, σ_ij).
    #[inline]
    pub fn pair(&self, i: usize, j: usize) -> (f64, f64) {
        (
            math::sqrt(self.epsilon[i] * self.epsilon[j]),
            0.5 * (self.sigma[i] + self.sigma[j]),
        )
    }
}

/// U = Σ 4ε[(σ/r)¹² − (σ/r)⁶] over non-excluded pairs with r ≤ cutoff.
pub fn lj_energy_forces(
    system: &ParticleSystem,
    params: &LjParams,
    list: &NeighborList,
) -> Result<ForceReport> {
    params.validate()?;
    if params.epsilon.len() != system.len() {
        return Err(Error::DimensionMismatch {
            expected: system.len(),
            got: params.epsilon.len(),
        });
    }
    let excl = Exclusions::from_system(system);
    let cut2 = params.cutoff * params.cutoff;
    let mut report = ForceReport::zeros(system.len());

    for (i, j) in list.iter_pairs() {
        if excl.contains(i, j) {
            continue;
        }
        let ri = system.positions[i];
        let rj = system.positions[j];
        let r2 = math::dist2(ri, rj);
        if r2 > cut2 {
            continue;
        }
        if r2 < COINCIDENCE_TOL * COINCIDENCE_TOL {
            return Err(Error::Singularity { i, j, r: math::sqrt(r2) });
        }
        let (eps, sigma) = params.pair(i, j);
        let r = math::sqrt(r2);
        let s2 = sigma * sigma / r2;
        let s6 = s2 * s2 * s2;
        let energy = 4.0 * eps * (s6 * s6 - s6);
        // dU/dr = 24 ε (s6 − 2 s6²) / r
        let dudr = 24.0 * eps * (s6 - 2.0 * s6 * s6) / r;
        accumulate_pair(&mut report, system, i, j, energy, dudr);
        report.components.lj += energy;
    }
    Ok(report.close())
}

/// Add one pair's energy share and antisymmetric forces.
/// `dudr` is dU/dr; the force on j is −dU/dr · (r_j − r_i)/r.
pub(super) fn accumulate_pair(
    report: &mut ForceReport,
    system: &ParticleSystem,
    i: usize,
    j: usize,
    energy: f64,
    dudr: f64,
) {
    let ri = system.positions[i];
    let rj = system.positions[j];
    let r = math::dist(ri, rj);
    let inv = 1.0 / r;
    for a in 0..3 {
        let u = (rj[a] - ri[a]) * inv;
        report.forces[j][a] -= dudr * u;
        report.forces[i][a] += dudr * u;
    }
    report.per_atom_potential[i] += 0.5 * energy;
    report.per_atom_potential[j] += 0.5 * energy;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neighbor::build_neighbor_list;
    use alloc::vec;

    fn dimer(r: f64) -> ParticleSystem {
        ParticleSystem::new(
            vec![[0.0; 3], [r, 0.0, 0.0]],
            vec![[0.0; 3]; 2],
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![],
            [30.0; 3],
        )
        .unwrap()
    }

    fn eval(r: f64, eps: f64, sigma: f64, cutoff: f64) -> ForceReport {
        let s = dimer(r);
        let params = LjParams::uniform(2, eps, sigma, cutoff);
        let list = build_neighbor_list(&s, cutoff, 0.0).unwrap();
        lj_energy_forces(&s, &params, &list).unwrap()
    }

    #[test]
    fn zero_at_sigma() {
        let rep = eval(3.0, 0.5, 3.0, 10.0);
        assert!(rep.total_energy.abs() < 1e-12);
    }

    #[test]
    fn minimum_at_two_to_the_sixth() {
        // brute-force 1D scan confirms the minimum sits at 2^(1/6) sigma
        let eps = 0.7;
        let sigma = 3.1;
        let scan_min = (0..20000)
            .map(|k| {
                let r = 2.5 + k as f64 * 1e-4;
                let s6 = (sigma / r).powi(6);
                (r, 4.0 * eps * (s6 * s6 - s6))
            })
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        let r_min = 2.0_f64.powf(1.0 / 6.0) * sigma;
        assert!((scan_min.0 - r_min).abs() < 1e-3);

        let rep = eval(r_min, eps, sigma, 10.0);
        assert!((rep.total_energy + eps).abs() < 1e-12);
        let f = rep.forces[0];
        assert!((f[0] * f[0] + f[1] * f[1] + f[2] * f[2]).sqrt() < 1e-12);
    }

    #[test]
    fn truncated_beyond_cutoff() {
        let rep = eval(11.0, 0.5, 3.0, 10.0);
        assert_eq!(rep.total_energy, 0.0);
        assert_eq!(rep.forces[0], [0.0; 3]);
    }

    #[test]
    fn bonded_pair_excluded() {
        let mut s = dimer(3.5);
        s.bonds.push(crate::system::Bond { i: 0, j: 1, k: 1.0, r0: 3.5 });
        let params = LjParams::uniform(2, 0.5, 3.0, 10.0);
        let list = build_neighbor_list(&s, 10.0, 0.0).unwrap();
        let rep = lj_energy_forces(&s, &params, &list).unwrap();
        assert_eq!(rep.total_energy, 0.0);
    }

    #[test]
    fn lorentz_berthelot_combination() {
        let params = LjParams {
            epsilon: vec![0.25, 1.0],
            sigma: vec![2.0, 4.0],
            cutoff: 10.0,
        };
        let (eps, sigma) = params.pair(0, 1);
        assert_eq!(eps, 0.5);
        assert_eq!(sigma, 3.0);
    }
}
