//! Coulomb electrostatics: direct sum, truncation, C¹ switching, and Wolf
//! summation.
//!
//! All sums run over i < j in sorted order and skip bonded pairs. The direct
//! sum is the O(N²) oracle the other backends (and MSM) are validated
//! against.

use crate::error::Error;
use crate::math;
use crate::neighbor::NeighborList;
use crate::report::ForceReport;
use crate::system::{ParticleSystem, COINCIDENCE_TOL};
use crate::Result;

use super::lj::accumulate_pair;
use super::Exclusions;

#[inline]
fn check_pair(i: usize, j: usize, r2: f64) -> Result<f64> {
    if r2 < COINCIDENCE_TOL * COINCIDENCE_TOL {
        Err(Error::Singularity { i, j, r: math::sqrt(r2) })
    } else {
        Ok(math::sqrt(r2))
    }
}

/// U = k Σ_{i<j} q_i q_j / r_ij over all non-excluded pairs.
pub fn coulomb_direct(system: &ParticleSystem, k: f64) -> Result<ForceReport> {
    let excl = Exclusions::from_system(system);
    let n = system.len();
    let mut report = ForceReport::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if excl.contains(i, j) {
                continue;
            }
            let r2 = math::dist2(system.positions[i], system.positions[j]);
            let r = check_pair(i, j, r2)?;
            let qq = k * system.charges[i] * system.charges[j];
            let energy = qq / r;
            let dudr = -qq / r2;
            accumulate_pair(&mut report, system, i, j, energy, dudr);
            report.components.coulomb_short += energy;
        }
    }
    Ok(report.close())
}

/// Coulomb sum restricted to pairs with r ≤ cutoff; zero beyond.
pub fn coulomb_cutoff(
    system: &ParticleSystem,
    cutoff: f64,
    k: f64,
    list: &NeighborList,
) -> Result<ForceReport> {
    let excl = Exclusions::from_system(system);
    let cut2 = cutoff * cutoff;
    let mut report = ForceReport::zeros(system.len());
    for (i, j) in list.iter_pairs() {
        if excl.contains(i, j) {
            continue;
        }
        let r2 = math::dist2(system.positions[i], system.positions[j]);
        if r2 > cut2 {
            continue;
        }
        let r = check_pair(i, j, r2)?;
        let qq = k * system.charges[i] * system.charges[j];
        let energy = qq / r;
        let dudr = -qq / r2;
        accumulate_pair(&mut report, system, i, j, energy, dudr);
        report.components.coulomb_short += energy;
    }
    Ok(report.close())
}

/// CHARMM-style switching polynomial in r²: 1 below `r_on`, 0 above `r_off`,
/// C¹ across both joints.
#[inline]
pub fn switch(r2: f64, r_on2: f64, r_off2: f64) -> f64 {
    if r2 <= r_on2 {
        1.0
    } else if r2 >= r_off2 {
        0.0
    } else {
        let denom = r_off2 - r_on2;
        let a = r_off2 - r2;
        (a * a) * (r_off2 + 2.0 * r2 - 3.0 * r_on2) / (denom * denom * denom)
    }
}

/// dS/dr for the switching polynomial above.
#[inline]
pub fn switch_deriv(r: f64, r2: f64, r_on2: f64, r_off2: f64) -> f64 {
    if r2 <= r_on2 || r2 >= r_off2 {
        0.0
    } else {
        let denom = r_off2 - r_on2;
        12.0 * r * (r_off2 - r2) * (r_on2 - r2) / (denom * denom * denom)
    }
}

/// Coulomb pair terms multiplied by the switching function S(r).
pub fn coulomb_smoothed_cutoff(
    system: &ParticleSystem,
    switch_on: f64,
    cutoff: f64,
    k: f64,
    list: &NeighborList,
) -> Result<ForceReport> {
    if !(0.0 < switch_on && switch_on < cutoff) {
        return Err(Error::invalid("require 0 < switch_on < cutoff"));
    }
    let excl = Exclusions::from_system(system);
    let r_on2 = switch_on * switch_on;
    let r_off2 = cutoff * cutoff;
    let mut report = ForceReport::zeros(system.len());
    for (i, j) in list.iter_pairs() {
        if excl.contains(i, j) {
            continue;
        }
        let r2 = math::dist2(system.positions[i], system.positions[j]);
        if r2 >= r_off2 {
            continue;
        }
        let r = check_pair(i, j, r2)?;
        let qq = k * system.charges[i] * system.charges[j];
        let s = switch(r2, r_on2, r_off2);
        let ds = switch_deriv(r, r2, r_on2, r_off2);
        let energy = qq * s / r;
        // d/dr [ qq S(r) / r ] = qq (S'/r − S/r²)
        let dudr = qq * (ds / r - s / r2);
        accumulate_pair(&mut report, system, i, j, energy, dudr);
        report.components.coulomb_short += energy;
    }
    Ok(report.close())
}

/// Wolf summation: damped, shifted pair term plus the charge-neutralizing
/// self term, so a single ion has finite energy.
///
/// U = k [ Σ_{i<j, r≤Rc} q_i q_j (erfc(αr)/r − erfc(αRc)/Rc)
///        − (erfc(αRc)/(2Rc) + α/√π) Σ_i q_i² ]
pub fn coulomb_wolf(
    system: &ParticleSystem,
    alpha: f64,
    cutoff: f64,
    k: f64,
    list: &NeighborList,
) -> Result<ForceReport> {
    if !(alpha > 0.0) {
        return Err(Error::invalid("wolf_alpha must be positive"));
    }
    let excl = Exclusions::from_system(system);
    let cut2 = cutoff * cutoff;
    let shift = math::erfc(alpha * cutoff) / cutoff;
    let self_coeff = 0.5 * shift + alpha / math::SQRT_PI;
    let mut report = ForceReport::zeros(system.len());

    for (i, j) in list.iter_pairs() {
        if excl.contains(i, j) {
            continue;
        }
        let r2 = math::dist2(system.positions[i], system.positions[j]);
        if r2 > cut2 {
            continue;
        }
        let r = check_pair(i, j, r2)?;
        let qq = k * system.charges[i] * system.charges[j];
        let erfc_ar = math::erfc(alpha * r);
        let energy = qq * (erfc_ar / r - shift);
        // d/dr [erfc(αr)/r] = −erfc(αr)/r² − 2α e^{−α²r²}/(√π r)
        let dudr =
            -qq * (erfc_ar / r2 + 2.0 * alpha * math::exp(-alpha * alpha * r2) / (math::SQRT_PI * r));
        accumulate_pair(&mut report, system, i, j, energy, dudr);
        report.components.coulomb_short += energy;
    }

    for (i, &q) in system.charges.iter().enumerate() {
        let e_self = -k * self_coeff * q * q;
        report.per_atom_potential[i] += e_self;
        report.components.coulomb_short += e_self;
    }
    Ok(report.close())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neighbor::build_neighbor_list;
    use alloc::vec;
    use alloc::vec::Vec;

    fn charges_at(points: &[[f64; 3]], charges: &[f64]) -> ParticleSystem {
        ParticleSystem::new(
            points.to_vec(),
            vec![[0.0; 3]; points.len()],
            charges.to_vec(),
            vec![1.0; points.len()],
            vec![],
            [50.0; 3],
        )
        .unwrap()
    }

    #[test]
    fn direct_dipole() {
        let s = charges_at(&[[0.0; 3], [2.0, 0.0, 0.0]], &[1.0, -1.0]);
        let rep = coulomb_direct(&s, 1.0).unwrap();
        assert!((rep.total_energy + 0.5).abs() < 1e-14);
    }

    #[test]
    fn direct_single_atom() {
        let s = charges_at(&[[1.0, 1.0, 1.0]], &[1.0]);
        let rep = coulomb_direct(&s, 1.0).unwrap();
        assert_eq!(rep.total_energy, 0.0);
    }

    #[test]
    fn direct_unit_cube() {
        // 8 unit charges on cube corners, edge 1: brute-force pair sum over
        // the 28 pairs gives 12/1 + 12/sqrt(2) + 4/sqrt(3).
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push([x as f64, y as f64, z as f64]);
                }
            }
        }
        let s = charges_at(&pts, &[1.0; 8]);
        let rep = coulomb_direct(&s, 1.0).unwrap();

        let mut brute = 0.0;
        for i in 0..8 {
            for j in (i + 1)..8 {
                brute += 1.0 / math::dist(pts[i], pts[j]);
            }
        }
        let expected = 12.0 + 12.0 / 2.0_f64.sqrt() + 4.0 / 3.0_f64.sqrt();
        assert!((brute - expected).abs() < 1e-12);
        assert!((rep.total_energy - brute).abs() < 1e-12);
        assert!((rep.total_energy - 22.7947).abs() < 1e-3);
    }

    #[test]
    fn cutoff_equals_direct_when_uncut() {
        let s = charges_at(
            &[[0.0; 3], [3.0, 0.0, 0.0], [0.0, 4.0, 0.0]],
            &[0.5, -1.0, 0.5],
        );
        let list = build_neighbor_list(&s, 40.0, 0.0).unwrap();
        let a = coulomb_direct(&s, 1.0).unwrap();
        let b = coulomb_cutoff(&s, 40.0, 1.0, &list).unwrap();
        assert!((a.total_energy - b.total_energy).abs() < 1e-12);
        for (fa, fb) in a.forces.iter().zip(&b.forces) {
            for c in 0..3 {
                assert!((fa[c] - fb[c]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cutoff_truncates() {
        let s = charges_at(&[[0.0; 3], [10.1, 0.0, 0.0]], &[1.0, 1.0]);
        let list = build_neighbor_list(&s, 10.0, 2.0).unwrap();
        let rep = coulomb_cutoff(&s, 10.0, 1.0, &list).unwrap();
        assert_eq!(rep.total_energy, 0.0);
    }

    #[test]
    fn smoothed_branches() {
        let s = charges_at(&[[0.0; 3], [4.0, 0.0, 0.0]], &[1.0, 1.0]);
        let list = build_neighbor_list(&s, 10.0, 0.0).unwrap();
        // r <= switch_on: bare Coulomb
        let rep = coulomb_smoothed_cutoff(&s, 6.0, 10.0, 1.0, &list).unwrap();
        assert!((rep.total_energy - 0.25).abs() < 1e-14);
        // midway: strictly between 0 and bare
        let mid = charges_at(&[[0.0; 3], [8.0, 0.0, 0.0]], &[1.0, 1.0]);
        let list = build_neighbor_list(&mid, 10.0, 0.0).unwrap();
        let rep = coulomb_smoothed_cutoff(&mid, 6.0, 10.0, 1.0, &list).unwrap();
        assert!(rep.total_energy > 0.0 && rep.total_energy < 1.0 / 8.0);
        // beyond cutoff: zero
        let far = charges_at(&[[0.0; 3], [10.5, 0.0, 0.0]], &[1.0, 1.0]);
        let list = build_neighbor_list(&far, 10.0, 1.0).unwrap();
        let rep = coulomb_smoothed_cutoff(&far, 6.0, 10.0, 1.0, &list).unwrap();
        assert_eq!(rep.total_energy, 0.0);
    }

    #[test]
    fn switch_is_c1_at_joints() {
        let (r_on2, r_off2) = (36.0, 100.0);
        assert_eq!(switch(r_on2, r_on2, r_off2), 1.0);
        assert_eq!(switch(r_off2, r_on2, r_off2), 0.0);
        // value and slope continuous at r_on within 1e-8 (finite difference)
        let h = 1e-6;
        for r in [6.0, 10.0] {
            let below = switch((r - h) * (r - h), r_on2, r_off2);
            let above = switch((r + h) * (r + h), r_on2, r_off2);
            assert!((above - below).abs() < 1e-8);
            let fd = (above - below) / (2.0 * h);
            assert!((fd - switch_deriv(r, r * r, r_on2, r_off2)).abs() < 1e-6);
        }
    }

    #[test]
    fn wolf_single_ion_self_energy() {
        let s = charges_at(&[[5.0, 5.0, 5.0]], &[1.0]);
        let list = build_neighbor_list(&s, 10.0, 0.0).unwrap();
        let rep = coulomb_wolf(&s, 0.2, 10.0, 1.0, &list).unwrap();
        let expected = -(math::erfc(2.0) / 20.0 + 0.2 / math::SQRT_PI);
        assert!((rep.total_energy - expected).abs() < 1e-14);
        assert!((rep.total_energy + 0.1131).abs() < 2e-4);
    }

    #[test]
    fn wolf_zero_charges() {
        let s = charges_at(&[[0.0; 3], [3.0, 0.0, 0.0]], &[0.0, 0.0]);
        let list = build_neighbor_list(&s, 10.0, 0.0).unwrap();
        let rep = coulomb_wolf(&s, 0.2, 10.0, 1.0, &list).unwrap();
        assert_eq!(rep.total_energy, 0.0);
        assert_eq!(rep.forces[0], [0.0; 3]);
    }

    #[test]
    fn wolf_approaches_direct_for_neutral_pair() {
        let s = charges_at(&[[0.0; 3], [3.0, 0.0, 0.0]], &[1.0, -1.0]);
        let rc = s.diameter() * 10.0;
        let list = build_neighbor_list(&s, rc, 0.0).unwrap();
        let wolf = coulomb_wolf(&s, 1e-4, rc, 1.0, &list).unwrap();
        let direct = coulomb_direct(&s, 1.0).unwrap();
        let rel = (wolf.total_energy - direct.total_energy).abs() / direct.total_energy.abs();
        assert!(rel < 1e-3, "relative gap {rel}");
    }
}
