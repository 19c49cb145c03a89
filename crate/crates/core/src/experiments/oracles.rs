//! Closed-form reference values and measurements for Riemann runs.
//!
//! These are the independent checks the experiment suite validates the
//! scheme against: exact jump speeds from the Rankine–Hugoniot condition,
//! a level-crossing shock locator, and windowed mass tracking for delta
//! waves.

use crate::ic::RiemannData;
use crate::scheme::{StepInfo, StepObserver};
use crate::state::StateField;
use crate::stats;
use crate::systems::SystemDefinition;

/// Exact speed of a `u`-shock for the pressureless system, whose first
/// conserved flux is `u^2`: the Rankine–Hugoniot condition gives
/// `s = (u_l^2 - u_r^2) / (u_l - u_r) = u_l + u_r`.
pub fn burgers_shock_speed(u_left: f64, u_right: f64) -> f64 {
    u_left + u_right
}

/// Rankine–Hugoniot speed of a single jump connecting the two Riemann
/// states, from the first conserved equation. `None` when `u` does not
/// jump (the condition then fixes no speed).
pub fn riemann_shock_speed(system: &SystemDefinition, data: &RiemannData) -> Option<f64> {
    let du = data.u_left - data.u_right;
    if du == 0.0 {
        return None;
    }
    let f_l = system.conserved_flux_u(data.u_left, data.v_left);
    let f_r = system.conserved_flux_u(data.u_right, data.v_right);
    Some((f_l - f_r) / du)
}

/// Reference level for locating a shock in a `u` profile: the arithmetic
/// mean of the two Riemann states.
pub fn shock_level(data: &RiemannData) -> f64 {
    0.5 * (data.u_left + data.u_right)
}

/// Position of the first crossing of `level` in the `u` profile, linearly
/// interpolated between cell centers. For an exact step profile this lands
/// within half a cell of the jump. `None` when the profile never meets the
/// level.
pub fn measure_shock_position(state: &StateField, level: f64) -> Option<f64> {
    let u = state.u();
    let grid = state.grid();
    for i in 0..u.len() {
        let d_here = u[i] - level;
        if d_here == 0.0 {
            return Some(grid.cell_center(i));
        }
        if i + 1 < u.len() {
            let d_next = u[i + 1] - level;
            if d_here * d_next < 0.0 {
                let frac = d_here / (d_here - d_next);
                let c = grid.cell_center(i);
                return Some(c + frac * (grid.cell_center(i + 1) - c));
            }
        }
    }
    None
}

/// Discrete masses `(sum u_i h, sum v_i h)` over the cells whose centers
/// lie in the closed window.
pub fn window_mass(state: &StateField, window: (f64, f64)) -> (f64, f64) {
    let (lo, hi) = window;
    let grid = state.grid();
    let h = grid.h();
    let mut mass_u = 0.0;
    let mut mass_v = 0.0;
    for i in 0..grid.n_cells() {
        let c = grid.cell_center(i);
        if lo <= c && c <= hi {
            mass_u += state.u()[i] * h;
            mass_v += state.v()[i] * h;
        }
    }
    (mass_u, mass_v)
}

/// Observer recording the windowed `v`-mass after every step, for tracking
/// the linear-in-time growth of a forming delta wave.
#[derive(Debug, Clone)]
pub struct DeltaMassRecorder {
    window: (f64, f64),
    samples: Vec<(f64, f64)>,
}

impl DeltaMassRecorder {
    pub fn new(window: (f64, f64)) -> Self {
        DeltaMassRecorder {
            window,
            samples: Vec::new(),
        }
    }

    /// `(t, windowed v-mass)` samples in time order, including `t = 0`.
    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// Least-squares slope of mass against time over `t` in
    /// `[t_lo, t_hi]`; `None` with fewer than two samples there.
    pub fn mass_slope(&self, t_lo: f64, t_hi: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .samples
            .iter()
            .filter(|(t, _)| (t_lo..=t_hi).contains(t))
            .copied()
            .collect();
        stats::linear_slope(&pts)
    }
}

impl StepObserver for DeltaMassRecorder {
    fn reset(&mut self) {
        self.samples.clear();
    }

    fn observe(&mut self, state: &StateField, _info: &StepInfo) {
        let (_, mass_v) = window_mass(state, self.window);
        self.samples.push((state.t(), mass_v));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::presets::korchinski_delta;
    use crate::grid::GridSpec;
    use crate::ic::{discretize_initial, InitialData};
    use crate::params::SchemeParams;
    use crate::scheme::run_simulation;

    #[test]
    fn pressureless_shock_speeds() {
        assert_eq!(burgers_shock_speed(-1.0, 1.0), 0.0);
        assert_eq!(burgers_shock_speed(1.0, 0.0), 1.0);
        // The generic Rankine-Hugoniot speed agrees with the closed form.
        let sys = SystemDefinition::korchinski();
        for (ul, ur) in [(1.0, 0.0), (2.0, -0.5), (-1.0, -3.0)] {
            let data = RiemannData::new(ul, 1.0, ur, 1.0);
            let s = riemann_shock_speed(&sys, &data).unwrap();
            assert!((s - burgers_shock_speed(ul, ur)).abs() < 1e-15);
        }
    }

    #[test]
    fn cubic_system_singular_data_speed() {
        // u^2 - v jumps from 2.25 to ~2.8553; u jumps by ~3.5654.
        let sys = SystemDefinition::keyfitz_kranzer();
        let data = RiemannData::new(1.5, 0.0, -2.065426, 1.410639);
        let s = riemann_shock_speed(&sys, &data).unwrap();
        assert!((s - (-0.16978)).abs() < 1e-4, "s = {s}");
    }

    #[test]
    fn equal_u_states_fix_no_speed() {
        let sys = SystemDefinition::korchinski();
        let data = RiemannData::new(1.0, 0.0, 1.0, 2.0);
        assert!(riemann_shock_speed(&sys, &data).is_none());
    }

    #[test]
    fn step_profile_is_located_at_the_jump() {
        let g = GridSpec::new(0.0, 1.0, 0.1).unwrap();
        let u: Vec<f64> = (0..10).map(|i| if i < 5 { 1.0 } else { 0.0 }).collect();
        let s = StateField::new(g, u, vec![0.0; 10]).unwrap();
        let x = measure_shock_position(&s, 0.5).unwrap();
        assert!((x - 0.5).abs() < 1e-12, "x = {x}");
    }

    #[test]
    fn linear_ramp_crossing_is_exact() {
        // u(x) = 2x - 1 crosses 0.2 at x = 0.6; interpolation between
        // centers reproduces a linear profile exactly.
        let g = GridSpec::new(0.0, 1.0, 0.05).unwrap();
        let u: Vec<f64> = (0..20).map(|i| 2.0 * g.cell_center(i) - 1.0).collect();
        let s = StateField::new(g, u, vec![0.0; 20]).unwrap();
        let x = measure_shock_position(&s, 0.2).unwrap();
        assert!((x - 0.6).abs() < 1e-12, "x = {x}");
    }

    #[test]
    fn level_never_met_gives_none() {
        let g = GridSpec::new(0.0, 1.0, 0.25).unwrap();
        let s = StateField::new(g, vec![1.0; 4], vec![0.0; 4]).unwrap();
        assert!(measure_shock_position(&s, 2.0).is_none());
    }

    #[test]
    fn window_mass_sums_selected_cells() {
        let g = GridSpec::new(-1.0, 1.0, 0.25).unwrap();
        let u = vec![1.0; 8];
        let v: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let s = StateField::new(g, u, v).unwrap();
        // Centers in [-0.5, 0.5]: -0.375, -0.125, 0.125, 0.375 (cells 2-5).
        let (mu, mv) = window_mass(&s, (-0.5, 0.5));
        assert!((mu - 4.0 * 0.25).abs() < 1e-15);
        assert!((mv - (2.0 + 3.0 + 4.0 + 5.0) * 0.25).abs() < 1e-15);
    }

    #[test]
    fn delta_mass_grows_linearly_at_the_exact_rate() {
        // Colliding pressureless data (1,1) | (-1,1): the v field piles up
        // at x = 0 with d(mass)/dt = [v u] = 2 while the window background
        // stays constant, so the windowed mass slope is 2.
        let preset = korchinski_delta();
        let grid = preset.grid_for(0.01).unwrap();
        let ic = discretize_initial(&InitialData::Riemann(preset.riemann.clone()), &grid).unwrap();
        let params = SchemeParams::fixed(0.45, preset.t_final).with_alpha(preset.alpha);
        let mut rec = DeltaMassRecorder::new(preset.delta_window.unwrap());
        {
            let mut obs: [&mut dyn StepObserver; 1] = [&mut rec];
            run_simulation(&ic, &preset.system, &params, &mut obs).unwrap();
        }
        let slope = rec.mass_slope(0.1, 0.5).unwrap();
        assert!((slope - 2.0).abs() < 0.05, "slope = {slope}");
        // Mass is increasing sample to sample once the wave forms.
        let samples = rec.samples();
        assert!(samples.len() > 100);
        assert!(samples.last().unwrap().1 > samples[0].1 + 0.9);
    }
}
