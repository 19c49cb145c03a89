//! Scheme parameters: step-size policy, averaging weight, scaling exponents,
//! final time, boundary handling, and the blow-up guard.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// How ghost cells are filled at the two domain ends.
///
/// `ConstantExtension` pads each stage's input with two copies of the
/// nearest interior value. This approximates an infinite domain with
/// constant far fields; runs whose solution still varies near the boundary
/// are flagged by the driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BoundaryPolicy {
    #[default]
    ConstantExtension,
}

/// Step-size ratio policy. `r` is the ratio `dt / h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StepRatio {
    /// Use a caller-chosen constant `r` for the whole run; a CFL violation
    /// aborts the run.
    Fixed { r: f64 },
    /// Start from `r = cfl_target / max|phi(initial)|` and, whenever a step
    /// violates the CFL bound, restart the whole run with `r` halved
    /// (at most [`MAX_R_RESTARTS`] times).
    Auto { cfl_target: f64 },
}

/// Number of halvings the automatic step-size policy will attempt before
/// giving up.
pub const MAX_R_RESTARTS: u32 = 10;

/// Default blow-up cap: the run aborts once either field's magnitude
/// crosses this value.
pub const DEFAULT_BLOWUP_CAP: f64 = 1e12;

/// All knobs of a run. Fields are public; call [`SchemeParams::validate`]
/// (the driver does) before use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    /// Step-size ratio policy.
    pub step_ratio: StepRatio,
    /// Three-point averaging weight, `0 <= alpha < 0.5`. Zero disables the
    /// averaging stage (it becomes the identity).
    pub alpha: f64,
    /// Exponent in the velocity-growth quantity `h^beta * max|phi|`.
    pub beta: f64,
    /// Exponent in the flux-sum quantities `h^(1+gamma) * sum|A|, sum|B|`.
    pub gamma: f64,
    /// Final time; the run takes `ceil(T / (r*h))` equal steps and may
    /// overshoot `T` by a fraction of a step.
    pub t_final: f64,
    /// Ghost-cell policy.
    pub boundary: BoundaryPolicy,
    /// Magnitude cap that triggers the blow-up abort.
    pub blowup_cap: f64,
}

impl SchemeParams {
    /// Parameters for a fixed step-size ratio run, with neutral defaults
    /// elsewhere (`alpha = beta = gamma = 0`).
    pub fn fixed(r: f64, t_final: f64) -> Self {
        SchemeParams {
            step_ratio: StepRatio::Fixed { r },
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
            t_final,
            boundary: BoundaryPolicy::ConstantExtension,
            blowup_cap: DEFAULT_BLOWUP_CAP,
        }
    }

    /// Parameters for an automatically chosen step-size ratio.
    pub fn auto(cfl_target: f64, t_final: f64) -> Self {
        SchemeParams {
            step_ratio: StepRatio::Auto { cfl_target },
            ..Self::fixed(0.0, t_final)
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_exponents(mut self, beta: f64, gamma: f64) -> Self {
        self.beta = beta;
        self.gamma = gamma;
        self
    }

    /// Checks every field against its admissible range.
    pub fn validate(&self) -> Result<(), Error> {
        match self.step_ratio {
            StepRatio::Fixed { r } => {
                if !(r.is_finite() && r > 0.0) {
                    return Err(Error::InvalidParams {
                        reason: format!("fixed step ratio r = {r} must be positive"),
                    });
                }
            }
            StepRatio::Auto { cfl_target } => {
                if !(cfl_target.is_finite() && cfl_target > 0.0 && cfl_target <= 1.0) {
                    return Err(Error::InvalidParams {
                        reason: format!("cfl_target = {cfl_target} must lie in (0, 1]"),
                    });
                }
            }
        }
        if !(self.alpha.is_finite() && (0.0..0.5).contains(&self.alpha)) {
            return Err(Error::InvalidParams {
                reason: format!("alpha = {} must lie in [0, 0.5)", self.alpha),
            });
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::InvalidParams {
                reason: format!("beta = {} must be non-negative", self.beta),
            });
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::InvalidParams {
                reason: format!("gamma = {} must be non-negative", self.gamma),
            });
        }
        // T = 0 is allowed and yields a zero-step run returning the initial
        // state unchanged.
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return Err(Error::InvalidParams {
                reason: format!("t_final = {} must be non-negative", self.t_final),
            });
        }
        if !(self.blowup_cap.is_finite() && self.blowup_cap > 0.0) {
            return Err(Error::InvalidParams {
                reason: format!("blowup_cap = {} must be positive", self.blowup_cap),
            });
        }
        Ok(())
    }
}
