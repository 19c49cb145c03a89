//! Streaming evaluation of the weak-form residual integrals.
//!
//! For a numerical trajectory `u_h` (piecewise constant on space-time cells
//! `I_i x [t_n, t_n + dt)`) and a smooth test function `psi`, the residuals
//!
//! ```text
//! I_u = integral( u_h psi_t + (u_h phi_h - A_h) psi_x )
//! I_v = integral( v_h psi_t + (v_h phi_h - B_h) psi_x )
//! ```
//!
//! measure how far the discrete solution is from being a weak solution: they
//! tend to 0 with `h` for test functions supported inside the domain. Since
//! the fields are constant on each cell, the integrals factor into per-cell
//! x-integrals of the test function (precomputed once per grid) and per-step
//! t-integrals, each evaluated by Gauss–Legendre; this equals the full
//! tensor-product rule on every space-time cell.
//!
//! The accumulator is a [`StepObserver`]: it consumes states as the run
//! produces them and never stores the trajectory.

use crate::error::Error;
use crate::grid::GridSpec;
use crate::residual::bump::TestFunction;
use crate::residual::gauss::{gauss_rule, integrate};
use crate::scheme::{StepInfo, StepObserver};
use crate::state::StateField;
use crate::systems::SystemDefinition;

/// Default number of Gauss points per axis.
pub const DEFAULT_GAUSS_POINTS: usize = 2;

/// Streaming residual evaluator for one test function on one grid.
#[derive(Debug, Clone)]
pub struct ResidualAccumulator {
    psi: TestFunction,
    system: SystemDefinition,
    rule: Vec<(f64, f64)>,
    /// First cell whose x-integrals are stored.
    i_lo: usize,
    /// `integral over cell (i_lo + k) of g((x-xc)/wx) dx`.
    sx: Vec<f64>,
    /// `integral over cell (i_lo + k) of g'((x-xc)/wx)/wx dx`.
    dxw: Vec<f64>,
    t_lo: f64,
    t_hi: f64,
    i_u: f64,
    i_v: f64,
}

impl ResidualAccumulator {
    /// Prepares the per-cell x-integrals for `grid`. Fails if the test
    /// function's support leaves the domain or `(0, t_final)`, or if the
    /// Gauss order is unsupported.
    pub fn new(
        psi: TestFunction,
        grid: &GridSpec,
        t_final: f64,
        system: SystemDefinition,
        gauss_points: usize,
    ) -> Result<Self, Error> {
        psi.check_support(grid, t_final)?;
        let rule = gauss_rule(gauss_points)?;
        let (x_lo, x_hi) = psi.x_support();
        let i_lo = grid.cell_of(x_lo);
        let i_hi = grid.cell_of(x_hi);
        let mut sx = Vec::with_capacity(i_hi - i_lo + 1);
        let mut dxw = Vec::with_capacity(i_hi - i_lo + 1);
        for i in i_lo..=i_hi {
            let a = grid.cell_left(i);
            let b = grid.cell_right(i);
            sx.push(integrate(&rule, a, b, |x| psi.x_factor(x)));
            dxw.push(integrate(&rule, a, b, |x| psi.x_factor_deriv(x)));
        }
        let (t_lo, t_hi) = psi.t_support();
        Ok(ResidualAccumulator {
            psi,
            system,
            rule,
            i_lo,
            sx,
            dxw,
            t_lo,
            t_hi,
            i_u: 0.0,
            i_v: 0.0,
        })
    }

    pub fn psi(&self) -> &TestFunction {
        &self.psi
    }

    /// The accumulated pair `(I_u, I_v)`.
    pub fn integrals(&self) -> (f64, f64) {
        (self.i_u, self.i_v)
    }
}

impl StepObserver for ResidualAccumulator {
    fn reset(&mut self) {
        self.i_u = 0.0;
        self.i_v = 0.0;
    }

    fn observe(&mut self, state: &StateField, info: &StepInfo) {
        // The state at t_n is the trajectory's value on [t_n, t_n + dt).
        let t0 = state.t();
        let t1 = t0 + info.dt;
        if t1 <= self.t_lo || t0 >= self.t_hi {
            return;
        }
        let st = integrate(&self.rule, t0, t1, |t| self.psi.t_factor(t));
        let dt_int = integrate(&self.rule, t0, t1, |t| self.psi.t_factor_deriv(t));
        let u = state.u();
        let v = state.v();
        let mut acc_u = 0.0;
        let mut acc_v = 0.0;
        for (k, i) in (self.i_lo..self.i_lo + self.sx.len()).enumerate() {
            let (ui, vi) = (u[i], v[i]);
            let phi = self.system.phi(ui, vi);
            let a = self.system.a_flux(ui, vi);
            let b = self.system.b_flux(ui, vi);
            acc_u += ui * self.sx[k] * dt_int + (ui * phi - a) * self.dxw[k] * st;
            acc_v += vi * self.sx[k] * dt_int + (vi * phi - b) * self.dxw[k] * st;
        }
        self.i_u += acc_u;
        self.i_v += acc_v;
    }
}

/// Residual pair for a stored trajectory of equally spaced states (time
/// step `dt`, first state at its own `t()`). Convenience wrapper around the
/// streaming accumulator for small cases and tests.
pub fn residual_integrals(
    trajectory: &[StateField],
    dt: f64,
    t_final: f64,
    system: &SystemDefinition,
    psi: &TestFunction,
    gauss_points: usize,
) -> Result<(f64, f64), Error> {
    let first = trajectory.first().ok_or(Error::InsufficientData {
        needed: 1,
        got: 0,
    })?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::config(format!("time step dt = {dt} must be positive")));
    }
    let mut acc = ResidualAccumulator::new(
        psi.clone(),
        first.grid(),
        t_final,
        system.clone(),
        gauss_points,
    )?;
    let info = StepInfo {
        dt,
        r: dt / first.grid().h(),
    };
    for state in trajectory {
        acc.observe(state, &info);
    }
    Ok(acc.integrals())
}
