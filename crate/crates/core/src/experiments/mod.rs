//! Riemann-problem experiment presets, reference oracles, and sweep
//! runners.

pub mod oracles;
pub mod presets;
pub mod runner;

pub use oracles::{
    burgers_shock_speed, measure_shock_position, riemann_shock_speed, shock_level, window_mass,
    DeltaMassRecorder,
};
pub use presets::{
    all_presets, kk_classic, kk_overcompressive, kk_singular, kk_singular_small, korchinski_delta,
    preset_by_name, ExperimentPreset, RowRatios,
};
pub use runner::{
    default_test_functions, run_preset_row, run_residual_study, run_table, run_table_rows,
    RowSuccess, TableOutput, TableRow,
};
