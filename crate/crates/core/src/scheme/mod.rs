//! The splitting scheme: overlap weights, the three stages, and the driver.

pub mod driver;
pub mod overlap;
pub mod stages;

pub use driver::{run_simulation, RunOutcome, StepInfo, StepObserver};
pub use overlap::overlap_length;
pub use stages::{
    advance, averaging_step, centered_step, compute_velocity, full_step, transport_step,
    WorkBuffers,
};
