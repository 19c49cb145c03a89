//! Time loop: repeated steps, observer notification, automatic step-size
//! fallback, and boundary sanity checks.

use log::warn;

use crate::error::Error;
use crate::params::{SchemeParams, StepRatio, MAX_R_RESTARTS};
use crate::scheme::stages::{advance, compute_velocity, resolve_auto_r, WorkBuffers};
use crate::state::StateField;
use crate::systems::SystemDefinition;

/// Step metadata passed to observers alongside each state.
#[derive(Debug, Clone, Copy)]
pub struct StepInfo {
    /// Time increment of one step, `r * h`.
    pub dt: f64,
    /// Step ratio `dt / h` currently in force (exact, not recomputed).
    pub r: f64,
}

/// Hook invoked on the initial state and after every completed step.
///
/// The driver calls `reset` followed by `observe(initial)` at the start of
/// every attempt — including restarts of the automatic step-size policy —
/// then `observe` once per step. Observing must not mutate the state, so
/// runs with and without observers produce identical fields.
pub trait StepObserver {
    /// Clears accumulated quantities before a (re)started run.
    fn reset(&mut self) {}

    /// Sees the state at one time level.
    fn observe(&mut self, state: &StateField, info: &StepInfo);
}

/// What a completed run reports back.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// State at the last computed time level (its `t()` may overshoot the
    /// requested final time by a fraction of a step).
    pub final_state: StateField,
    /// Number of steps taken.
    pub steps: u64,
    /// Step ratio actually used (after any automatic halvings).
    pub r_used: f64,
    /// Restarts spent by the automatic step-size policy.
    pub restarts: u32,
    /// True if any cell within four of a boundary drifted from its initial
    /// value by more than `1e-10` relative — a sign the constant-extension
    /// boundary assumption was violated.
    pub boundary_flagged: bool,
}

/// Cells per side inspected by the boundary drift check.
const EDGE_WINDOW: usize = 4;
/// Relative drift (against `1 + |initial|`) that trips the boundary flag.
const EDGE_DRIFT_TOL: f64 = 1e-10;

fn edge_drift(ic: &StateField, state: &StateField) -> bool {
    let n = ic.n_cells();
    let w = EDGE_WINDOW.min(n);
    let check = |a: &[f64], b: &[f64]| -> bool {
        let drifted = |i: usize| (b[i] - a[i]).abs() > EDGE_DRIFT_TOL * (1.0 + a[i].abs());
        (0..w).any(drifted) || (n - w..n).any(drifted)
    };
    check(ic.u(), state.u()) || check(ic.v(), state.v())
}

/// Runs the scheme from `ic` until time `params.t_final`.
///
/// The run takes `ceil((t_final - ic.t()) / (r*h))` equal steps, so the
/// final state may overshoot `t_final` by a fraction of a step; the actual
/// time is in the outcome. With the automatic step-ratio policy a CFL
/// violation restarts the whole run (state *and* observers) with `r`
/// halved, at most [`MAX_R_RESTARTS`] times; with a fixed `r` it is fatal.
///
/// Observers see the initial state once per attempt and every state after
/// it. All their reductions, like the driver's own scans, run sequentially,
/// so results do not depend on thread count.
pub fn run_simulation(
    ic: &StateField,
    system: &SystemDefinition,
    params: &SchemeParams,
    observers: &mut [&mut dyn StepObserver],
) -> Result<RunOutcome, Error> {
    params.validate()?;
    let h = ic.grid().h();
    let mut r = match params.step_ratio {
        StepRatio::Fixed { r } => r,
        StepRatio::Auto { cfl_target } => {
            let phi = compute_velocity(ic, system)?;
            let max_phi = phi.iter().fold(0.0f64, |m, &p| m.max(p.abs()));
            resolve_auto_r(cfl_target, max_phi)
        }
    };

    let mut bufs = WorkBuffers::new(ic.n_cells());
    let mut restarts = 0u32;

    'attempt: loop {
        let dt = r * h;
        let span = params.t_final - ic.t();
        let n_steps = if span <= 0.0 {
            0
        } else {
            (span / dt).ceil() as u64
        };
        let info = StepInfo { dt, r };

        for obs in observers.iter_mut() {
            obs.reset();
            obs.observe(ic, &info);
        }

        let mut state = ic.clone();
        let mut boundary_flagged = false;

        for _ in 0..n_steps {
            state = match advance(state, system, r, params.alpha, params.blowup_cap, &mut bufs) {
                Ok(next) => next,
                Err(Error::CflViolation { cell, step, r_phi })
                    if matches!(params.step_ratio, StepRatio::Auto { .. }) =>
                {
                    if restarts >= MAX_R_RESTARTS {
                        return Err(Error::CflSearchExhausted {
                            restarts,
                            last_r: r,
                        });
                    }
                    warn!(
                        "CFL violation (r*|phi| = {r_phi:.3} at cell {cell}, step {step}); \
                         restarting with r = {:.3e}",
                        r / 2.0
                    );
                    restarts += 1;
                    r /= 2.0;
                    continue 'attempt;
                }
                Err(e) => return Err(e),
            };

            if !boundary_flagged && edge_drift(ic, &state) {
                boundary_flagged = true;
                warn!(
                    "solution reached the domain boundary (drift at t = {:.6}); \
                     constant-extension values are no longer exact",
                    state.t()
                );
            }

            for obs in observers.iter_mut() {
                obs.observe(&state, &info);
            }
        }

        return Ok(RunOutcome {
            final_state: state,
            steps: n_steps,
            r_used: r,
            restarts,
            boundary_flagged,
        });
    }
}
