//! Shared helpers for the integration tests: seeded random systems.

#![allow(dead_code)]

use parmd_core::system::ParticleSystem;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random cluster inside [pad, box_edge − pad]³ with a minimum pair
/// separation, alternating ±charge (net zero for even n), unit-ish masses.
pub fn random_cluster(
    seed: u64,
    n: usize,
    box_edge: f64,
    pad: f64,
    min_sep: f64,
    charge_mag: f64,
) -> ParticleSystem {
    let mut rng = rng(seed);
    let mut positions: Vec<[f64; 3]> = Vec::with_capacity(n);
    let mut attempts = 0usize;
    'outer: while positions.len() < n {
        attempts += 1;
        assert!(
            attempts < 200_000,
            "cannot place {n} atoms with min_sep {min_sep} in a {:.1} A region",
            box_edge - 2.0 * pad
        );
        let cand = [
            rng.gen_range(pad..box_edge - pad),
            rng.gen_range(pad..box_edge - pad),
            rng.gen_range(pad..box_edge - pad),
        ];
        for p in &positions {
            let d2 = (0..3).map(|a| (p[a] - cand[a]) * (p[a] - cand[a])).sum::<f64>();
            if d2 < min_sep * min_sep {
                continue 'outer;
            }
        }
        positions.push(cand);
    }
    let charges = (0..n)
        .map(|i| if i % 2 == 0 { charge_mag } else { -charge_mag })
        .collect();
    ParticleSystem::new(
        positions,
        vec![[0.0; 3]; n],
        charges,
        vec![12.0; n],
        vec![],
        [box_edge; 3],
    )
    .unwrap()
}

/// Seed small random velocities, uniform per component in ±scale.
pub fn randomize_velocities(system: &mut ParticleSystem, seed: u64, scale: f64) {
    let mut rng = rng(seed);
    for v in &mut system.velocities {
        for c in v.iter_mut() {
            *c = rng.gen_range(-scale..scale);
        }
    }
}

/// Relative aggregate force error: ‖F − F_ref‖₂ / ‖F_ref‖₂ over all 3N
/// components.
pub fn relative_force_error(forces: &[[f64; 3]], reference: &[[f64; 3]]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (f, r) in forces.iter().zip(reference) {
        for c in 0..3 {
            num += (f[c] - r[c]) * (f[c] - r[c]);
            den += r[c] * r[c];
        }
    }
    (num / den).sqrt()
}
