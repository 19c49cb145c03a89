//! Weak-form residual verification: test functions, quadrature, streaming
//! accumulation, and convergence-order fits.

pub mod accumulate;
pub mod bump;
pub mod gauss;
pub mod order;

pub use accumulate::{residual_integrals, ResidualAccumulator, DEFAULT_GAUSS_POINTS};
pub use bump::{mollifier, mollifier_deriv, TestFunction};
pub use gauss::gauss_rule;
pub use order::{
    order_csv, order_estimate, residual_csv, OrderEstimate, ResidualSample, ResidualStudy,
    NOISE_FLOOR,
};
