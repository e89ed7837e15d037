//! Parareal parallel-in-time integration.
//!
//! A computational window of `window` time points is first filled by a
//! sequential sweep of the cheap coarse propagator G, then corrected
//! iteratively: each iteration evaluates the expensive fine propagator F on
//! every point of the previous iterate (these are independent and run through
//! an [`Executor`], concurrently if the executor supports it) and performs a
//! sequential predictor-corrector sweep
//!
//!   λ_{n+1}^{k+1} = G(λ_n^{k+1}) + F(λ_n^k) − G(λ_n^k).
//!
//! G(λ_n^k) is cached from the previous sweep, so one iteration costs one
//! fine and one coarse evaluation per point. Iterates converge to the
//! sequential fine solution; after k iterations the first k+1 points are
//! exact, so `k_max = window − 1` guarantees exactness regardless of the
//! coarse function's quality.

use alloc::vec::Vec;

use crate::error::Error;
use crate::integrate::{propagate, Propagator};
use crate::state::{DistanceMode, StateVector};
use crate::system::ParticleSystem;
use crate::Result;

/// Default window width (time points per window).
pub const DEFAULT_WINDOW: usize = 16;
/// Default convergence tolerance on the max-position norm, in Å.
pub const DEFAULT_EPSILON: f64 = 1e-3;

/// Runs batches of independent fine evaluations.
///
/// Implementations must return outputs in input order and must not reorder
/// floating-point work inside a task; under those rules every executor
/// produces bitwise-identical results to [`SequentialExecutor`].
pub trait Executor {
    fn run_batch(
        &self,
        inputs: &[StateVector],
        task: &(dyn Fn(&StateVector) -> Result<StateVector> + Sync),
    ) -> Result<Vec<StateVector>>;

    /// Monotonic clock in seconds for task-class timing; 0 when no clock is
    /// available (e.g. in no_std builds).
    fn now_seconds(&self) -> f64 {
        0.0
    }
}

/// Reference executor: evaluates the batch one task at a time, in order.
#[derive(Debug, Clone, Copy, Default)]
pub struct SequentialExecutor;

impl Executor for SequentialExecutor {
    fn run_batch(
        &self,
        inputs: &[StateVector],
        task: &(dyn Fn(&StateVector) -> Result<StateVector> + Sync),
    ) -> Result<Vec<StateVector>> {
        inputs.iter().map(task).collect()
    }
}

/// Parareal configuration.
#[derive(Debug, Clone)]
pub struct PararealConfig {
    pub fine: Propagator,
    pub coarse: Propagator,
    /// T_W: time points per window, including the seed point.
    pub window: usize,
    /// Convergence tolerance on the max-per-atom position displacement
    /// between successive iterates, in Å.
    pub epsilon: f64,
    /// Iteration cap per window; `window − 1` guarantees exactness.
    pub k_max: usize,
    /// Total new time points over the whole run; a multiple of window − 1.
    pub total_points: usize,
}

impl PararealConfig {
    pub fn new(fine: Propagator, coarse: Propagator, total_points: usize) -> Self {
        let window = DEFAULT_WINDOW;
        PararealConfig {
            fine,
            coarse,
            window,
            epsilon: DEFAULT_EPSILON,
            k_max: window - 1,
            total_points,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.fine.validate()?;
        self.coarse.validate()?;
        if self.window < 2 {
            return Err(Error::invalid("window must contain at least 2 time points"));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::invalid("epsilon must be positive"));
        }
        if self.k_max < 1 || self.k_max > self.window - 1 {
            return Err(Error::invalid("require 1 <= k_max <= window - 1"));
        }
        let df = self.fine.interval();
        let dg = self.coarse.interval();
        if (df - dg).abs() > 1e-12 * df.abs() {
            return Err(Error::invalid(
                "fine and coarse propagators must cover the same interval",
            ));
        }
        if self.total_points == 0 || self.total_points % (self.window - 1) != 0 {
            return Err(Error::invalid(
                "total_points must be a positive multiple of window - 1",
            ));
        }
        Ok(())
    }

    /// Number of windows in a full simulation.
    pub fn window_count(&self) -> usize {
        self.total_points / (self.window - 1)
    }
}

/// Everything one window produced: the init sweep, every iterate row, the
/// per-iteration Δ, and where it converged.
#[derive(Debug, Clone)]
pub struct WindowTrace {
    /// λ'_n for n = 0..T_W (index 0 is the seed).
    pub init: Vec<StateVector>,
    /// λ_n^k rows, one per iteration actually run.
    pub iterates: Vec<Vec<StateVector>>,
    /// max_n ‖λ_n^{k} − λ_n^{k−1}‖ per iteration (max-position norm).
    pub deltas: Vec<f64>,
    /// Iteration index at which Δ dropped below ε (= k_max when it never did).
    pub converged_at: usize,
    pub converged: bool,
    /// Wallclock spent in fine tasks (0 without a clock).
    pub fine_seconds: f64,
    /// Wallclock spent in coarse sweeps (0 without a clock).
    pub coarse_seconds: f64,
}

impl WindowTrace {
    /// The row the window ends with (last iterate).
    pub fn final_row(&self) -> &[StateVector] {
        self.iterates.last().map(Vec::as_slice).unwrap_or(&self.init)
    }
}

/// Full-run result: the stitched trajectory and per-window traces.
#[derive(Debug, Clone)]
pub struct SimulationRun {
    /// total_points + 1 states, starting with the initial condition.
    pub trajectory: Vec<StateVector>,
    pub windows: Vec<WindowTrace>,
}

impl SimulationRun {
    pub fn all_converged(&self) -> bool {
        self.windows.iter().all(|w| w.converged)
    }

    pub fn max_iterations(&self) -> usize {
        self.windows.iter().map(|w| w.iterates.len()).max().unwrap_or(0)
    }
}

/// Sequential coarse sweep seeding a window: λ'_0 = v, λ'_{n+1} = G(λ'_n).
pub fn init_sweep(
    v: &StateVector,
    config: &PararealConfig,
    meta: &ParticleSystem,
) -> Result<Vec<StateVector>> {
    let mut out = Vec::with_capacity(config.window);
    out.push(v.clone());
    for n in 1..config.window {
        let next =
            propagate(&out[n - 1], meta, &config.coarse).map_err(|e| e.at_window_point(n))?;
        out.push(next);
    }
    Ok(out)
}

/// The three-term predictor-corrector combination
/// G(λ_n^{k+1}) + F(λ_n^k) − G(λ_n^k), with both G terms evaluated here.
/// Inside [`run_window`] the G(λ_n^k) term is cached instead; for
/// deterministic propagators the two are identical.
pub fn parareal_update(
    lambda_prev_new: &StateVector,
    lambda_prev_old: &StateVector,
    f_cache: &StateVector,
    config: &PararealConfig,
    meta: &ParticleSystem,
) -> Result<StateVector> {
    let g_new = propagate(lambda_prev_new, meta, &config.coarse)?;
    let g_old = propagate(lambda_prev_old, meta, &config.coarse)?;
    combine(&g_new, f_cache, &g_old)
}

/// g_new + (f − g_old) via state axpy.
fn combine(g_new: &StateVector, f: &StateVector, g_old: &StateVector) -> Result<StateVector> {
    let delta = StateVector::axpy(-1.0, g_old, f)?;
    StateVector::axpy(1.0, &delta, g_new)
}

/// Run one computational window from seed `v`.
pub fn run_window(
    v: &StateVector,
    config: &PararealConfig,
    meta: &ParticleSystem,
    executor: &dyn Executor,
) -> Result<WindowTrace> {
    config.validate()?;
    let tw = config.window;
    let mut fine_seconds = 0.0;
    let mut coarse_seconds = 0.0;

    let t0 = executor.now_seconds();
    let init = init_sweep(v, config, meta)?;
    coarse_seconds += executor.now_seconds() - t0;

    // G(λ_n) for the current row, cached for the next iteration's update
    let mut g_cache: Vec<StateVector> = init[1..].to_vec();
    let mut prev = init.clone();
    let mut iterates: Vec<Vec<StateVector>> = Vec::new();
    let mut deltas: Vec<f64> = Vec::new();
    let mut converged = false;
    let mut converged_at = config.k_max;

    let fine_prop = &config.fine;
    let fine_task = move |s: &StateVector| propagate(s, meta, fine_prop);

    for k in 0..config.k_max {
        // concurrent fine evaluations on every point of the previous row
        let t0 = executor.now_seconds();
        let f_vals = executor.run_batch(&prev[..tw - 1], &fine_task)?;
        fine_seconds += executor.now_seconds() - t0;

        // sequential coarse-and-update sweep
        let t0 = executor.now_seconds();
        let mut cur: Vec<StateVector> = Vec::with_capacity(tw);
        cur.push(v.clone());
        for n in 0..tw - 1 {
            let g_new = propagate(&cur[n], meta, &config.coarse)
                .map_err(|e| e.at_window_point(n + 1))?;
            cur.push(combine(&g_new, &f_vals[n], &g_cache[n])?);
            g_cache[n] = g_new;
        }
        coarse_seconds += executor.now_seconds() - t0;

        let mut delta: f64 = 0.0;
        for (a, b) in cur.iter().zip(&prev) {
            delta = delta.max(a.distance(b, DistanceMode::MaxPosition)?);
        }
        deltas.push(delta);
        iterates.push(cur.clone());
        prev = cur;
        if delta < config.epsilon {
            converged = true;
            converged_at = k;
            break;
        }
    }

    Ok(WindowTrace {
        init,
        iterates,
        deltas,
        converged_at,
        converged,
        fine_seconds,
        coarse_seconds,
    })
}

/// Run the whole simulation: windows in sequence, each seeded by the previous
/// window's last point; the stitched trajectory has no duplicated points.
/// Per-window non-convergence is recorded in the traces, not an error.
pub fn run_simulation(
    v: &StateVector,
    config: &PararealConfig,
    meta: &ParticleSystem,
    executor: &dyn Executor,
) -> Result<SimulationRun> {
    config.validate()?;
    let mut trajectory = Vec::with_capacity(config.total_points + 1);
    trajectory.push(v.clone());
    let mut windows = Vec::with_capacity(config.window_count());
    let mut seed = v.clone();
    for _ in 0..config.window_count() {
        let trace = run_window(&seed, config, meta, executor)?;
        {
            let row = trace.final_row();
            trajectory.extend(row[1..].iter().cloned());
            seed = row[row.len() - 1].clone();
        }
        windows.push(trace);
    }
    Ok(SimulationRun { trajectory, windows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{ElectrostaticsBackend, ForceField};
    use crate::units::Units;
    use alloc::vec;

    fn cluster() -> ParticleSystem {
        ParticleSystem::new(
            vec![
                [4.0, 4.0, 4.0],
                [6.0, 4.5, 4.0],
                [5.0, 6.0, 5.5],
                [3.5, 5.5, 6.0],
            ],
            vec![
                [0.01, -0.02, 0.0],
                [-0.01, 0.0, 0.015],
                [0.0, 0.01, -0.01],
                [0.005, 0.005, 0.0],
            ],
            vec![0.5, -0.5, 0.5, -0.5],
            vec![2.0, 2.0, 2.0, 2.0],
            vec![],
            [10.0; 3],
        )
        .unwrap()
    }

    fn direct_prop(steps: usize) -> Propagator {
        let ff = ForceField {
            electrostatics: Some(ElectrostaticsBackend::Direct),
            lj: None,
            bonds: false,
            units: Units::REDUCED,
        };
        Propagator::new(ff, 0.02, steps)
    }

    fn cutoff_prop(steps: usize, cutoff: f64) -> Propagator {
        let ff = ForceField {
            electrostatics: Some(ElectrostaticsBackend::Cutoff { cutoff }),
            lj: None,
            bonds: false,
            units: Units::REDUCED,
        };
        Propagator::new(ff, 0.02, steps)
    }

    fn fine_sequence(v: &StateVector, meta: &ParticleSystem, prop: &Propagator, points: usize) -> Vec<StateVector> {
        let mut out = vec![v.clone()];
        for n in 1..points {
            out.push(propagate(&out[n - 1], meta, prop).unwrap());
        }
        out
    }

    #[test]
    fn init_sweep_two_points() {
        let meta = cluster();
        let v = StateVector::from_system(&meta);
        let mut config = PararealConfig::new(direct_prop(2), direct_prop(2), 1);
        config.window = 2;
        config.k_max = 1;
        let sweep = init_sweep(&v, &config, &meta).unwrap();
        assert_eq!(sweep.len(), 2);
        assert_eq!(sweep[0], v);
        assert_eq!(sweep[1], propagate(&v, &meta, &config.coarse).unwrap());
    }

    #[test]
    fn init_sweep_identity_coarse_fixed_point() {
        // zero-force system at rest: G is the identity
        let meta = ParticleSystem::new(
            vec![[1.0, 1.0, 1.0], [3.0, 3.0, 3.0]],
            vec![[0.0; 3]; 2],
            vec![0.0; 2],
            vec![1.0; 2],
            vec![],
            [10.0; 3],
        )
        .unwrap();
        let v = StateVector::from_system(&meta);
        let ff = ForceField {
            electrostatics: None,
            lj: None,
            bonds: false,
            units: Units::REDUCED,
        };
        let prop = Propagator::new(ff, 0.1, 3);
        let mut config = PararealConfig::new(prop.clone(), prop, 4);
        config.window = 5;
        config.k_max = 4;
        let sweep = init_sweep(&v, &config, &meta).unwrap();
        for lam in &sweep {
            assert_eq!(lam.as_slice(), v.as_slice());
        }
    }

    #[test]
    fn update_collapses_when_coarse_equals_fine() {
        let meta = cluster();
        let v = StateVector::from_system(&meta);
        let config = PararealConfig::new(direct_prop(3), direct_prop(3), DEFAULT_WINDOW - 1);
        let old = propagate(&v, &meta, &config.coarse).unwrap();
        let new = StateVector::axpy(1e-4, &StateVector::from_raw(vec![1.0; old.len()]).unwrap(), &old).unwrap();
        let f_of_old = propagate(&old, &meta, &config.fine).unwrap();
        let updated = parareal_update(&new, &old, &f_of_old, &config, &meta).unwrap();
        // G = F ⇒ result is F(new) exactly (the G/F terms on `old` cancel)
        let expected = propagate(&new, &meta, &config.fine).unwrap();
        for (a, b) in updated.as_slice().iter().zip(expected.as_slice()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn update_reduces_to_fine_on_equal_iterates() {
        let meta = cluster();
        let v = StateVector::from_system(&meta);
        let config = PararealConfig::new(direct_prop(3), cutoff_prop(3, 2.5), DEFAULT_WINDOW - 1);
        let f_of_v = propagate(&v, &meta, &config.fine).unwrap();
        let updated = parareal_update(&v, &v, &f_of_v, &config, &meta).unwrap();
        for (a, b) in updated.as_slice().iter().zip(f_of_v.as_slice()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn update_matches_scalar_arithmetic() {
        let meta = cluster();
        let v = StateVector::from_system(&meta);
        let config = PararealConfig::new(direct_prop(2), cutoff_prop(2, 2.5), DEFAULT_WINDOW - 1);
        let old = propagate(&v, &meta, &config.coarse).unwrap();
        let new = propagate(&old, &meta, &config.coarse).unwrap();
        let f_old = propagate(&old, &meta, &config.fine).unwrap();
        let updated = parareal_update(&new, &old, &f_old, &config, &meta).unwrap();
        let g_new = propagate(&new, &meta, &config.coarse).unwrap();
        let g_old = propagate(&old, &meta, &config.coarse).unwrap();
        for i in 0..updated.len() {
            let scalar = g_new.as_slice()[i] + (f_old.as_slice()[i] - g_old.as_slice()[i]);
            assert!((updated.as_slice()[i] - scalar).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_coarse_converges_immediately() {
        let meta = cluster();
        let v = StateVector::from_system(&meta);
        let mut config = PararealConfig::new(direct_prop(4), direct_prop(4), 7);
        config.window = 8;
        config.k_max = 7;
        let trace = run_window(&v, &config, &meta, &SequentialExecutor).unwrap();
        assert!(trace.converged);
        assert_eq!(trace.converged_at, 0);
        let fine = fine_sequence(&v, &meta, &config.fine, config.window);
        for (got, want) in trace.final_row().iter().zip(&fine) {
            let d = got.distance(want, DistanceMode::MaxPosition).unwrap();
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn exactness_after_k_iterations() {
        let meta = cluster();
        let v = StateVector::from_system(&meta);
        let mut config = PararealConfig::new(direct_prop(4), cutoff_prop(4, 2.2), 7);
        config.window = 8;
        config.k_max = 7;
        config.epsilon = 1e-30; // force all iterations to run
        let trace = run_window(&v, &config, &meta, &SequentialExecutor).unwrap();
        let fine = fine_sequence(&v, &meta, &config.fine, config.window);
        for (k, row) in trace.iterates.iter().enumerate() {
            for n in 0..=(k + 1).min(config.window - 1) {
                let d = row[n].distance(&fine[n], DistanceMode::MaxPosition).unwrap();
                assert!(d < 1e-9, "k = {k}, n = {n}: {d}");
            }
        }
        // worst case: after k_max = T_W − 1 iterations the whole window is exact
        for (n, want) in fine.iter().enumerate() {
            let d = trace.final_row()[n].distance(want, DistanceMode::MaxPosition).unwrap();
            assert!(d < 1e-8, "point {n}: {d}");
        }
    }

    #[test]
    fn simulation_stitches_windows() {
        let meta = cluster();
        let v = StateVector::from_system(&meta);
        let mut config = PararealConfig::new(direct_prop(2), direct_prop(2), 6);
        config.window = 4;
        config.k_max = 3;
        let run = run_simulation(&v, &config, &meta, &SequentialExecutor).unwrap();
        assert_eq!(run.windows.len(), 2);
        assert_eq!(run.trajectory.len(), 7);
        assert!(run.all_converged());
        // coarse = fine across two windows equals one sequential fine run
        let fine = fine_sequence(&v, &meta, &config.fine, 7);
        for (got, want) in run.trajectory.iter().zip(&fine) {
            let d = got.distance(want, DistanceMode::MaxPosition).unwrap();
            assert!(d < 1e-10);
        }
    }

    #[test]
    fn config_validation() {
        let mut config = PararealConfig::new(direct_prop(2), direct_prop(2), 6);
        config.window = 1;
        assert!(config.validate().is_err());
        config.window = 4;
        config.k_max = 4;
        assert!(config.validate().is_err());
        config.k_max = 3;
        config.total_points = 7; // not a multiple of window − 1
        assert!(config.validate().is_err());
        config.total_points = 6;
        assert!(config.validate().is_ok());
        // mismatched intervals rejected
        config.coarse = cutoff_prop(3, 2.5);
        assert!(config.validate().is_err());
    }
}
