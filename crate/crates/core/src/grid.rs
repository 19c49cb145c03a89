//! Uniform one-dimensional cell grid.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Relative slack allowed between `h * n_cells` and the domain width when a
/// grid is built from a target spacing.
const DIVISIBILITY_TOL: f64 = 1e-9;

/// A uniform grid of `n_cells` cells covering `[x_min, x_max]`.
///
/// Cell `i` is the interval `[x_min + i*h, x_min + (i+1)*h]`; values attach
/// to cell centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    h: f64,
    n_cells: usize,
}

impl GridSpec {
    /// Builds a grid from a target spacing `h`. The spacing must tile the
    /// domain: `(x_max - x_min) / h` has to be an integer up to a relative
    /// slack of `1e-9` (the stored `h` is then `width / n_cells` exactly).
    pub fn new(x_min: f64, x_max: f64, h: f64) -> Result<Self, Error> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidGrid {
                reason: format!("domain [{x_min}, {x_max}] is not a finite interval"),
            });
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidGrid {
                reason: format!("cell width h = {h} must be positive"),
            });
        }
        let width = x_max - x_min;
        let ratio = width / h;
        let n = ratio.round();
        if n < 1.0 || (ratio - n).abs() > DIVISIBILITY_TOL * ratio.max(1.0) {
            return Err(Error::InvalidGrid {
                reason: format!("h = {h} does not divide the domain width {width} evenly"),
            });
        }
        Ok(Self::with_cell_count(x_min, x_max, n as usize)?)
    }

    /// Builds a grid from an explicit cell count.
    pub fn with_cell_count(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self, Error> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidGrid {
                reason: format!("domain [{x_min}, {x_max}] is not a finite interval"),
            });
        }
        if n_cells == 0 {
            return Err(Error::InvalidGrid {
                reason: "grid needs at least one cell".into(),
            });
        }
        let h = (x_max - x_min) / n_cells as f64;
        Ok(GridSpec {
            x_min,
            x_max,
            h,
            n_cells,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Cell width.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    /// Left edge of cell `i`.
    pub fn cell_left(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.h
    }

    /// Right edge of cell `i`.
    pub fn cell_right(&self, i: usize) -> f64 {
        self.x_min + (i + 1) as f64 * self.h
    }

    /// Center of cell `i`.
    pub fn cell_center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.h
    }

    /// Index of the cell containing `x`, clamped to the grid.
    pub fn cell_of(&self, x: f64) -> usize {
        let raw = ((x - self.x_min) / self.h).floor();
        (raw.max(0.0) as usize).min(self.n_cells - 1)
    }
}
