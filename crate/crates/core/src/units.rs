//! Unit conventions.
//!
//! Lengths are in angstrom, time in femtoseconds, masses in atomic mass
//! units, and charges in elementary charges. The energy unit is fixed by the
//! Coulomb prefactor: with [`COULOMB_K_KCAL`] energies come out in kcal/mol,
//! and forces in kcal/(mol·Å). Converting such a force over a mass in amu to
//! an acceleration in Å/fs² costs one constant factor
//! ([`ACCEL_KCAL`] = 4.184e-4, from 1 kcal = 4184 J and amu·N_A = 1 g/mol).
//!
//! A "reduced" profile sets both constants to 1 so analytic tests read off
//! Coulomb energies directly.

/// Coulomb prefactor 1/(4πε₀) in kcal·Å/(mol·e²).
pub const COULOMB_K_KCAL: f64 = 332.0636;

/// Force/mass → acceleration conversion for the kcal/mol unit system
/// (kcal/(mol·Å·amu) → Å/fs²).
pub const ACCEL_KCAL: f64 = 4.184e-4;

/// Unit profile carried by propagators and energy reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    /// Coulomb prefactor 1/(4πε₀) in energy·Å/e².
    pub coulomb_k: f64,
    /// Multiplies force[energy/Å]/mass to give acceleration in Å/fs².
    pub accel_factor: f64,
}

impl Units {
    /// Å / fs / amu / e with energies in kcal/mol.
    pub const REAL: Units = Units { coulomb_k: COULOMB_K_KCAL, accel_factor: ACCEL_KCAL };

    /// Reduced profile: COULOMB_K = 1 and unit accelerations, for analytic tests.
    pub const REDUCED: Units = Units { coulomb_k: 1.0, accel_factor: 1.0 };

    /// Kinetic energy of one particle, ½mv², expressed in the energy unit.
    #[inline]
    pub fn kinetic(&self, mass: f64, v2: f64) -> f64 {
        0.5 * mass * v2 / self.accel_factor
    }
}

impl Default for Units {
    fn default() -> Self {
        Units::REAL
    }
}
