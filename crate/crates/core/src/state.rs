//! Discrete solution state: cell values of both conserved fields plus time
//! bookkeeping.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::grid::GridSpec;

/// Cell-centered values of the two conserved fields at one time level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateField {
    grid: GridSpec,
    u: Vec<f64>,
    v: Vec<f64>,
    t: f64,
    step_index: u64,
}

impl StateField {
    /// Wraps cell values at time 0, step 0. Both vectors must match the grid
    /// and contain only finite entries.
    pub fn new(grid: GridSpec, u: Vec<f64>, v: Vec<f64>) -> Result<Self, Error> {
        Self::at_time(grid, u, v, 0.0, 0)
    }

    /// Wraps cell values with explicit time bookkeeping.
    pub fn at_time(
        grid: GridSpec,
        u: Vec<f64>,
        v: Vec<f64>,
        t: f64,
        step_index: u64,
    ) -> Result<Self, Error> {
        if u.len() != grid.n_cells() || v.len() != grid.n_cells() {
            return Err(Error::config(format!(
                "field length {} / {} does not match grid with {} cells",
                u.len(),
                v.len(),
                grid.n_cells()
            )));
        }
        for (cell, &x) in u.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite {
                    quantity: "u",
                    cell,
                    step: step_index,
                    t,
                });
            }
        }
        for (cell, &x) in v.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite {
                    quantity: "v",
                    cell,
                    step: step_index,
                    t,
                });
            }
        }
        Ok(StateField {
            grid,
            u,
            v,
            t,
            step_index,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn step_index(&self) -> u64 {
        self.step_index
    }

    pub fn n_cells(&self) -> usize {
        self.grid.n_cells()
    }

    /// Largest magnitude among the `u` values (sequential scan).
    pub fn max_abs_u(&self) -> f64 {
        self.u.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    /// Largest magnitude among the `v` values (sequential scan).
    pub fn max_abs_v(&self) -> f64 {
        self.v.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    /// `sum_i |u_i| * h`, accumulated left to right.
    pub fn l1_u(&self) -> f64 {
        self.u.iter().fold(0.0, |s, &x| s + x.abs()) * self.grid.h()
    }

    /// `sum_i |v_i| * h`, accumulated left to right.
    pub fn l1_v(&self) -> f64 {
        self.v.iter().fold(0.0, |s, &x| s + x.abs()) * self.grid.h()
    }

    /// Plain sums of both fields (no `h` weight), accumulated left to right.
    pub fn sums(&self) -> (f64, f64) {
        let su = self.u.iter().fold(0.0, |s, &x| s + x);
        let sv = self.v.iter().fold(0.0, |s, &x| s + x);
        (su, sv)
    }

    pub(crate) fn into_parts(self) -> (GridSpec, Vec<f64>, Vec<f64>, f64, u64) {
        (self.grid, self.u, self.v, self.t, self.step_index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> GridSpec {
        GridSpec::new(0.0, 1.0, 0.25).unwrap()
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let g = small_grid();
        assert!(StateField::new(g, vec![0.0; 3], vec![0.0; 4]).is_err());
    }

    #[test]
    fn non_finite_entry_is_rejected_with_location() {
        let g = small_grid();
        let err = StateField::new(g, vec![0.0, f64::NAN, 0.0, 0.0], vec![0.0; 4]).unwrap_err();
        match err {
            Error::NonFinite { quantity, cell, .. } => {
                assert_eq!(quantity, "u");
                assert_eq!(cell, 1);
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn norms_and_sums() {
        let g = small_grid();
        let s = StateField::new(g, vec![1.0, -2.0, 0.5, 0.0], vec![0.0, 1.0, -1.0, 3.0]).unwrap();
        assert_eq!(s.max_abs_u(), 2.0);
        assert_eq!(s.max_abs_v(), 3.0);
        assert!((s.l1_u() - 3.5 * 0.25).abs() < 1e-15);
        assert!((s.l1_v() - 5.0 * 0.25).abs() < 1e-15);
        let (su, sv) = s.sums();
        assert!((su - (-0.5)).abs() < 1e-15);
        assert!((sv - 3.0).abs() < 1e-15);
    }
}
