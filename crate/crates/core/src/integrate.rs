//! Sequential-in-time propagators: velocity Verlet and leap-frog.
//!
//! A [`Propagator`] bundles the force field with a timestep and a step count;
//! [`propagate`] advances a state by one interval of `steps_per_interval`
//! steps, rebuilding the neighbor list whenever an atom has moved more than
//! half the skin. Pair sums run in sorted order and the rebuild schedule is a
//! pure function of the inputs, so propagation is bitwise deterministic.

use crate::error::Error;
use crate::neighbor::{build_neighbor_list, list_valid, NeighborList, DEFAULT_SKIN};
use crate::potentials::ForceField;
use crate::report::ForceReport;
use crate::state::StateVector;
use crate::system::ParticleSystem;
use crate::Result;

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Positions and velocities at the same time point.
    VelocityVerlet,
    /// Staggered: velocities live at t + ½Δt.
    Leapfrog,
}

/// A force backend plus discretization: fine and coarse propagators for the
/// parareal scheme differ only in their force field (never in timestep).
#[derive(Debug, Clone)]
pub struct Propagator {
    pub force_field: ForceField,
    /// Timestep in fs.
    pub dt: f64,
    /// Steps per interval; the parareal ΔT is dt × steps_per_interval.
    pub steps_per_interval: usize,
    pub scheme: Scheme,
    /// Neighbor-list skin in Å.
    pub skin: f64,
    /// Constant test force applied to every atom (integration tests only;
    /// carries no potential energy).
    pub external_force: Option<[f64; 3]>,
}

impl Propagator {
    pub fn new(force_field: ForceField, dt: f64, steps_per_interval: usize) -> Self {
        Propagator {
            force_field,
            dt,
            steps_per_interval,
            scheme: Scheme::VelocityVerlet,
            skin: DEFAULT_SKIN,
            external_force: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::invalid("timestep must be positive and finite"));
        }
        if self.steps_per_interval < 1 {
            return Err(Error::invalid("steps_per_interval must be at least 1"));
        }
        if !(self.skin >= 0.0) {
            return Err(Error::invalid("skin must be non-negative"));
        }
        self.force_field.validate()
    }

    /// Interval length ΔT in fs.
    pub fn interval(&self) -> f64 {
        self.dt * self.steps_per_interval as f64
    }
}

struct Workspace {
    system: ParticleSystem,
    cutoff: Option<f64>,
    list: Option<NeighborList>,
}

impl Workspace {
    fn prepare(state: &StateVector, meta: &ParticleSystem, prop: &Propagator) -> Result<Self> {
        let mut system = meta.clone();
        state.write_into(&mut system)?;
        let cutoff = prop.force_field.required_cutoff();
        let list = match cutoff {
            Some(c) => Some(build_neighbor_list(&system, c, prop.skin)?),
            None => None,
        };
        Ok(Workspace { system, cutoff, list })
    }

    fn refresh_list(&mut self, prop: &Propagator) -> Result<()> {
        if let (Some(c), Some(list)) = (self.cutoff, self.list.as_ref()) {
            if !list_valid(list, &self.system) {
                self.list = Some(build_neighbor_list(&self.system, c, prop.skin)?);
            }
        }
        Ok(())
    }

    fn forces(&self, prop: &Propagator) -> Result<ForceReport> {
        prop.force_field.evaluate(&self.system, self.list.as_ref())
    }

    fn kick(&mut self, report: &ForceReport, prop: &Propagator, dt: f64) {
        let accel = prop.force_field.units.accel_factor;
        let ext = prop.external_force.unwrap_or([0.0; 3]);
        for (i, v) in self.system.velocities.iter_mut().enumerate() {
            let scale = dt * accel / self.system.masses[i];
            v[0] += scale * (report.forces[i][0] + ext[0]);
            v[1] += scale * (report.forces[i][1] + ext[1]);
            v[2] += scale * (report.forces[i][2] + ext[2]);
        }
    }

    fn drift(&mut self, dt: f64) {
        for (p, v) in self.system.positions.iter_mut().zip(&self.system.velocities) {
            p[0] += dt * v[0];
            p[1] += dt * v[1];
            p[2] += dt * v[2];
        }
    }

    fn check_finite(&self, step: usize) -> Result<()> {
        let ok = self
            .system
            .positions
            .iter()
            .chain(self.system.velocities.iter())
            .all(|x| x.iter().all(|c| c.is_finite()));
        if ok {
            Ok(())
        } else {
            Err(Error::BlowUp { step })
        }
    }
}

fn run(
    state: &StateVector,
    meta: &ParticleSystem,
    prop: &Propagator,
    steps: usize,
    scheme: Scheme,
) -> Result<StateVector> {
    prop.validate()?;
    let mut ws = Workspace::prepare(state, meta, prop)?;
    let mut report = ws.forces(prop)?;
    for step in 0..steps {
        match scheme {
            Scheme::VelocityVerlet => {
                ws.kick(&report, prop, 0.5 * prop.dt);
                ws.drift(prop.dt);
                ws.refresh_list(prop)?;
                report = ws.forces(prop)?;
                ws.kick(&report, prop, 0.5 * prop.dt);
            }
            Scheme::Leapfrog => {
                ws.drift(prop.dt);
                ws.refresh_list(prop)?;
                report = ws.forces(prop)?;
                ws.kick(&report, prop, prop.dt);
            }
        }
        ws.check_finite(step)?;
    }
    Ok(StateVector::from_system(&ws.system))
}

/// One velocity Verlet step: half-kick, drift, force re-evaluation, half-kick.
pub fn velocity_verlet_step(
    state: &StateVector,
    meta: &ParticleSystem,
    prop: &Propagator,
) -> Result<StateVector> {
    run(state, meta, prop, 1, Scheme::VelocityVerlet)
}

/// One leap-frog step. The state's velocities are interpreted at t + ½Δt.
pub fn leapfrog_step(
    state: &StateVector,
    meta: &ParticleSystem,
    prop: &Propagator,
) -> Result<StateVector> {
    run(state, meta, prop, 1, Scheme::Leapfrog)
}

/// Produce the staggered initial state for leap-frog by one Euler half-kick
/// from synchronized (t = 0) positions and velocities.
pub fn leapfrog_init(
    state: &StateVector,
    meta: &ParticleSystem,
    prop: &Propagator,
) -> Result<StateVector> {
    prop.validate()?;
    let mut ws = Workspace::prepare(state, meta, prop)?;
    let report = ws.forces(prop)?;
    ws.kick(&report, prop, 0.5 * prop.dt);
    Ok(StateVector::from_system(&ws.system))
}

/// Advance one interval: `steps_per_interval` steps of the configured scheme.
pub fn propagate(
    state: &StateVector,
    meta: &ParticleSystem,
    prop: &Propagator,
) -> Result<StateVector> {
    run(state, meta, prop, prop.steps_per_interval, prop.scheme)
}

/// Kinetic energy plus a full force/potential report for a state.
pub fn measure(
    state: &StateVector,
    meta: &ParticleSystem,
    prop: &Propagator,
) -> Result<(f64, ForceReport)> {
    let ws = Workspace::prepare(state, meta, prop)?;
    let report = ws.forces(prop)?;
    let units = prop.force_field.units;
    let kinetic = ws
        .system
        .velocities
        .iter()
        .zip(&ws.system.masses)
        .map(|(v, &m)| units.kinetic(m, v[0] * v[0] + v[1] * v[1] + v[2] * v[2]))
        .sum();
    Ok((kinetic, report))
}
