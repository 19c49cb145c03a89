//! Error type shared across the crate.

use crate::state::StateField;

/// Everything that can go wrong while configuring or running the scheme.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Grid construction rejected the requested geometry.
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },

    /// Scheme parameters are out of their admissible ranges.
    #[error("invalid parameters: {reason}")]
    InvalidParams { reason: String },

    /// A configuration value (initial data, system table, test function,
    /// preset, CLI input) is inconsistent.
    #[error("configuration error: {reason}")]
    Config { reason: String },

    /// A computed quantity stopped being a finite number.
    #[error("non-finite {quantity} at cell {cell}, step {step} (t = {t:.6})")]
    NonFinite {
        quantity: &'static str,
        cell: usize,
        step: u64,
        t: f64,
    },

    /// The transport stage would move mass further than one cell:
    /// `r * |phi|` exceeded 1 somewhere.
    #[error("CFL violation at cell {cell}, step {step}: r*|phi| = {r_phi:.6}")]
    CflViolation { cell: usize, step: u64, r_phi: f64 },

    /// State magnitudes crossed the configured blow-up cap. The last state
    /// that was still finite and under the cap is carried along so callers
    /// can inspect or dump it.
    #[error("blow-up at t = {t:.6}: max|u| = {max_u:.3e}, max|v| = {max_v:.3e}")]
    Blowup {
        t: f64,
        max_u: f64,
        max_v: f64,
        last_valid: Box<StateField>,
    },

    /// Automatic step-size selection kept violating the CFL bound even
    /// after the allowed number of halvings.
    #[error("step-size search exhausted after {restarts} restarts (last r = {last_r:.3e})")]
    CflSearchExhausted { restarts: u32, last_r: f64 },

    /// An aggregate (verdict, order fit) was asked for with too few inputs.
    #[error("insufficient data: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Shorthand for [`Error::Config`].
    pub fn config(reason: impl Into<String>) -> Self {
        Error::Config {
            reason: reason.into(),
        }
    }
}
