//! Smooth compactly supported space-time test functions.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::grid::GridSpec;

/// The standard mollifier profile `g(s) = exp(-1/(1-s^2))` for `|s| < 1`,
/// zero outside. Infinitely differentiable everywhere, including the
/// cut-off points.
#[inline]
pub fn mollifier(s: f64) -> f64 {
    if s.abs() < 1.0 {
        (-1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

/// Derivative of [`mollifier`]: `g'(s) = g(s) * (-2s) / (1-s^2)^2`.
#[inline]
pub fn mollifier_deriv(s: f64) -> f64 {
    if s.abs() < 1.0 {
        let d = 1.0 - s * s;
        (-1.0 / d).exp() * (-2.0 * s) / (d * d)
    } else {
        0.0
    }
}

/// A product bump `psi(x, t) = g((x-xc)/wx) * g((t-tc)/wt)`, supported on
/// `(xc-wx, xc+wx) x (tc-wt, tc+wt)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub id: String,
    pub x_center: f64,
    pub x_width: f64,
    pub t_center: f64,
    pub t_width: f64,
}

impl TestFunction {
    pub fn new(
        id: impl Into<String>,
        x_center: f64,
        x_width: f64,
        t_center: f64,
        t_width: f64,
    ) -> Result<Self, Error> {
        let tf = TestFunction {
            id: id.into(),
            x_center,
            x_width,
            t_center,
            t_width,
        };
        if tf.id.is_empty() {
            return Err(Error::config("test function needs a non-empty id"));
        }
        for (name, val) in [
            ("x_center", x_center),
            ("x_width", x_width),
            ("t_center", t_center),
            ("t_width", t_width),
        ] {
            if !val.is_finite() {
                return Err(Error::config(format!("test function {name} = {val}")));
            }
        }
        if x_width <= 0.0 || t_width <= 0.0 {
            return Err(Error::config(format!(
                "test function widths must be positive (wx = {x_width}, wt = {t_width})"
            )));
        }
        Ok(tf)
    }

    /// Checks that the support fits inside the spatial domain and strictly
    /// inside the open time interval `(0, t_final)`, as the weak form
    /// requires (boundary terms must vanish).
    pub fn check_support(&self, grid: &GridSpec, t_final: f64) -> Result<(), Error> {
        if self.x_center - self.x_width < grid.x_min()
            || self.x_center + self.x_width > grid.x_max()
        {
            return Err(Error::config(format!(
                "test function '{}' x-support [{}, {}] exceeds the domain [{}, {}]",
                self.id,
                self.x_center - self.x_width,
                self.x_center + self.x_width,
                grid.x_min(),
                grid.x_max()
            )));
        }
        if self.t_center - self.t_width <= 0.0 || self.t_center + self.t_width >= t_final {
            return Err(Error::config(format!(
                "test function '{}' t-support [{}, {}] must lie strictly inside (0, {t_final})",
                self.id,
                self.t_center - self.t_width,
                self.t_center + self.t_width
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn value(&self, x: f64, t: f64) -> f64 {
        self.x_factor(x) * self.t_factor(t)
    }

    /// Spatial partial derivative `psi_x`.
    #[inline]
    pub fn dx(&self, x: f64, t: f64) -> f64 {
        self.x_factor_deriv(x) * self.t_factor(t)
    }

    /// Temporal partial derivative `psi_t`.
    #[inline]
    pub fn dt(&self, x: f64, t: f64) -> f64 {
        self.x_factor(x) * self.t_factor_deriv(t)
    }

    /// `g((x-xc)/wx)`.
    #[inline]
    pub fn x_factor(&self, x: f64) -> f64 {
        mollifier((x - self.x_center) / self.x_width)
    }

    /// `d/dx g((x-xc)/wx) = g'(s)/wx`.
    #[inline]
    pub fn x_factor_deriv(&self, x: f64) -> f64 {
        mollifier_deriv((x - self.x_center) / self.x_width) / self.x_width
    }

    /// `g((t-tc)/wt)`.
    #[inline]
    pub fn t_factor(&self, t: f64) -> f64 {
        mollifier((t - self.t_center) / self.t_width)
    }

    /// `d/dt g((t-tc)/wt) = g'(s)/wt`.
    #[inline]
    pub fn t_factor_deriv(&self, t: f64) -> f64 {
        mollifier_deriv((t - self.t_center) / self.t_width) / self.t_width
    }

    /// Support interval in `x`.
    pub fn x_support(&self) -> (f64, f64) {
        (self.x_center - self.x_width, self.x_center + self.x_width)
    }

    /// Support interval in `t`.
    pub fn t_support(&self) -> (f64, f64) {
        (self.t_center - self.t_width, self.t_center + self.t_width)
    }
}
