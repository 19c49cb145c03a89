//! JSON config loading, flag/file merging, and resolution into ready-to-run
//! setups. Explicit flags always win over config-file fields; presets fill
//! whatever is still missing.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use singshock_core::residual::DEFAULT_GAUSS_POINTS;
use singshock_core::{
    all_presets, preset_by_name, ExperimentPreset, GridSpec, RiemannData, SchemeParams, StepRatio,
    SystemDefinition, TestFunction,
};

use crate::{CliError, ResidualArgs, RunArgs, SweepArgs};

/// Default target for `r * max|phi|` in auto-ratio mode.
pub const DEFAULT_CFL_TARGET: f64 = 0.9;

/// The JSON config file. Every field is optional; flags override, presets
/// backfill. Unknown keys are rejected so typos surface immediately.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// `kk`, `korchinski`, or `custom:<path>`.
    pub system: Option<String>,
    /// `[u_left, v_left, u_right, v_right]`.
    pub ic: Option<[f64; 4]>,
    /// Jump location of the Riemann data (default 0).
    pub jump_x: Option<f64>,
    /// Built-in preset name.
    pub preset: Option<String>,
    /// Path to a preset JSON file (alternative to `preset`).
    pub preset_file: Option<PathBuf>,
    /// `[x_min, x_max]`.
    pub domain: Option<[f64; 2]>,
    pub h: Option<f64>,
    /// Alternative to `h`: split the domain into this many cells.
    pub n_cells: Option<usize>,
    pub r: Option<f64>,
    pub auto_r: Option<bool>,
    pub cfl_target: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub t_final: Option<f64>,
    pub out: Option<PathBuf>,
    pub snapshots: Option<Vec<f64>>,
    /// Record growth monitors during `run` (default true).
    pub monitors: Option<bool>,
    /// Accumulate weak-form residuals during `run` (default false).
    pub residuals: Option<bool>,
    /// Explicit test functions for residual accumulation.
    pub test_functions: Option<Vec<TestFunctionSpec>>,
    /// Gauss points per cell/slab for residual quadrature.
    pub gauss_points: Option<usize>,
    /// Row subset for `table` / `residual`.
    pub rows: Option<Vec<usize>>,
}

/// Space-time bump parameters as written in config files.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunctionSpec {
    pub id: String,
    pub x_center: f64,
    pub x_width: f64,
    pub t_center: f64,
    pub t_width: f64,
}

impl TestFunctionSpec {
    fn build(&self) -> Result<TestFunction, CliError> {
        TestFunction::new(
            &self.id,
            self.x_center,
            self.x_width,
            self.t_center,
            self.t_width,
        )
        .map_err(CliError::usage_from)
    }
}

pub fn load_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))
}

/// Everything `run` needs, fully resolved and validated.
#[derive(Debug)]
pub struct RunSetup {
    pub system: SystemDefinition,
    pub data: RiemannData,
    pub grid: GridSpec,
    pub params: SchemeParams,
    pub out: PathBuf,
    pub snapshots: Vec<f64>,
    pub monitors: bool,
    pub residuals: bool,
    /// Explicit test functions from the config, already validated.
    pub test_functions: Option<Vec<TestFunction>>,
    pub gauss_points: usize,
    /// Preset the setup was based on, kept for default test functions.
    pub preset: Option<ExperimentPreset>,
}

/// Everything `table` / `residual` need: a preset plus a row selection.
#[derive(Debug)]
pub struct SweepSetup {
    pub preset: ExperimentPreset,
    pub rows: Vec<usize>,
    pub out: Option<PathBuf>,
    pub test_functions: Option<Vec<TestFunction>>,
    pub gauss_points: usize,
}

fn known_presets() -> String {
    all_presets()
        .iter()
        .map(|p| p.name.clone())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Loads a preset by built-in name or from a JSON file; name takes priority.
fn resolve_preset(
    name: Option<&str>,
    file: Option<&Path>,
) -> Result<Option<ExperimentPreset>, CliError> {
    if let Some(name) = name {
        return match preset_by_name(name) {
            Some(p) => Ok(Some(p)),
            None => Err(CliError::usage(format!(
                "unknown preset '{name}'; available: {}",
                known_presets()
            ))),
        };
    }
    if let Some(path) = file {
        let preset = ExperimentPreset::from_json_file(path).map_err(CliError::usage_from)?;
        preset.validate().map_err(CliError::usage_from)?;
        return Ok(Some(preset));
    }
    Ok(None)
}

fn parse_system(selector: &str) -> Result<SystemDefinition, CliError> {
    match selector {
        "kk" => Ok(SystemDefinition::keyfitz_kranzer()),
        "korchinski" => Ok(SystemDefinition::korchinski()),
        other => {
            if let Some(path) = other.strip_prefix("custom:") {
                SystemDefinition::from_json_file(path).map_err(CliError::usage_from)
            } else {
                Err(CliError::usage(format!(
                    "unknown system '{other}': expected kk, korchinski, or custom:<path>"
                )))
            }
        }
    }
}

/// Parses a comma-separated list of floats, e.g. `-1,1` or `0.1,0.25,0.4`.
fn parse_f64_list(what: &str, raw: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|e| CliError::usage(format!("{what} '{raw}': {e}")))
        })
        .collect()
}

fn parse_fixed<const N: usize>(what: &str, raw: &str) -> Result<[f64; N], CliError> {
    let vals = parse_f64_list(what, raw)?;
    vals.try_into()
        .map_err(|v: Vec<f64>| CliError::usage(format!("{what} '{raw}': expected {N} values, got {}", v.len())))
}

fn parse_usize_list(what: &str, raw: &str) -> Result<Vec<usize>, CliError> {
    raw.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|e| CliError::usage(format!("{what} '{raw}': {e}")))
        })
        .collect()
}

pub fn build_run_setup(args: &RunArgs, file: &FileConfig) -> Result<RunSetup, CliError> {
    let preset = resolve_preset(
        args.preset.as_deref().or(file.preset.as_deref()),
        file.preset_file.as_deref(),
    )?;

    let system = match args.system.as_deref().or(file.system.as_deref()) {
        Some(sel) => parse_system(sel)?,
        None => match &preset {
            Some(p) => p.system.clone(),
            None => {
                return Err(CliError::usage(
                    "no system: pass --system, set \"system\" in the config, or use --preset",
                ))
            }
        },
    };

    let ic_values = match &args.ic {
        Some(raw) => Some(parse_fixed::<4>("--ic", raw)?),
        None => file.ic,
    };
    let data = match ic_values {
        Some([ul, vl, ur, vr]) => {
            let jump = file
                .jump_x
                .or_else(|| preset.as_ref().map(|p| p.riemann.jump_x))
                .unwrap_or(0.0);
            RiemannData::new(ul, vl, ur, vr).with_jump_at(jump)
        }
        None => match &preset {
            Some(p) => {
                let mut d = p.riemann;
                if let Some(jump) = file.jump_x {
                    d = d.with_jump_at(jump);
                }
                d
            }
            None => {
                return Err(CliError::usage(
                    "no initial data: pass --ic u_l,v_l,u_r,v_r, set \"ic\" in the config, \
                     or use --preset",
                ))
            }
        },
    };

    let domain = match &args.domain {
        Some(raw) => {
            let [lo, hi] = parse_fixed::<2>("--domain", raw)?;
            (lo, hi)
        }
        None => match (file.domain, &preset) {
            (Some([lo, hi]), _) => (lo, hi),
            (None, Some(p)) => p.domain,
            (None, None) => {
                return Err(CliError::usage(
                    "no domain: pass --domain x_min,x_max, set \"domain\" in the config, \
                     or use --preset",
                ))
            }
        },
    };

    if file.h.is_some() && file.n_cells.is_some() {
        return Err(CliError::usage(
            "config sets both \"h\" and \"n_cells\"; they are alternative ways to fix \
             the grid, choose one",
        ));
    }
    let grid = match (args.h.or(file.h), file.n_cells, &preset) {
        (Some(h), _, _) => GridSpec::new(domain.0, domain.1, h),
        (None, Some(n), _) => GridSpec::with_cell_count(domain.0, domain.1, n),
        (None, None, Some(p)) => GridSpec::new(domain.0, domain.1, p.grid_h[0]),
        (None, None, None) => {
            return Err(CliError::usage(
                "no grid: pass --h, set \"h\" or \"n_cells\" in the config, or use --preset",
            ))
        }
    }
    .map_err(CliError::usage_from)?;

    let auto = args.auto_r || file.auto_r.unwrap_or(false);
    let step_ratio = if auto {
        StepRatio::Auto {
            cfl_target: args
                .cfl_target
                .or(file.cfl_target)
                .unwrap_or(DEFAULT_CFL_TARGET),
        }
    } else {
        match (args.r.or(file.r), &preset) {
            (Some(r), _) => StepRatio::Fixed { r },
            (None, Some(p)) => p.step_ratio_for(0),
            (None, None) => {
                return Err(CliError::usage(
                    "no step ratio: pass --r or --auto-r, or set \"r\"/\"auto_r\" in the config",
                ))
            }
        }
    };

    let t_final = match (args.t_final.or(file.t_final), &preset) {
        (Some(t), _) => t,
        (None, Some(p)) => p.t_final,
        (None, None) => {
            return Err(CliError::usage(
                "no final time: pass --T or set \"t_final\" in the config",
            ))
        }
    };
    let from_preset = |v: Option<f64>, pick: fn(&ExperimentPreset) -> f64| {
        v.or_else(|| preset.as_ref().map(pick)).unwrap_or(0.0)
    };
    let alpha = from_preset(args.alpha.or(file.alpha), |p| p.alpha);
    let beta = from_preset(args.beta.or(file.beta), |p| p.beta);
    let gamma = from_preset(args.gamma.or(file.gamma), |p| p.gamma);

    let mut params = SchemeParams::fixed(1.0, t_final)
        .with_alpha(alpha)
        .with_exponents(beta, gamma);
    params.step_ratio = step_ratio;
    params.validate().map_err(CliError::usage_from)?;

    let snapshots = match &args.snapshots {
        Some(raw) => parse_f64_list("--snapshots", raw)?,
        None => file.snapshots.clone().unwrap_or_default(),
    };
    for &t in &snapshots {
        if !t.is_finite() || t < 0.0 {
            return Err(CliError::usage(format!("snapshot time {t} must be >= 0")));
        }
    }

    let test_functions = file
        .test_functions
        .as_ref()
        .map(|specs| specs.iter().map(|s| s.build()).collect::<Result<Vec<_>, _>>())
        .transpose()?;

    Ok(RunSetup {
        system,
        data,
        grid,
        params,
        out: args
            .out
            .clone()
            .or_else(|| file.out.clone())
            .unwrap_or_else(|| PathBuf::from("singshock")),
        snapshots,
        monitors: file.monitors.unwrap_or(true),
        residuals: file.residuals.unwrap_or(false),
        test_functions,
        gauss_points: file.gauss_points.unwrap_or(DEFAULT_GAUSS_POINTS),
        preset,
    })
}

fn resolve_rows(
    flag: Option<&str>,
    file: Option<&[usize]>,
    n_rows: usize,
) -> Result<Vec<usize>, CliError> {
    let rows = match flag {
        Some(raw) => parse_usize_list("--rows", raw)?,
        None => match file {
            Some(rows) => rows.to_vec(),
            None => (0..n_rows).collect(),
        },
    };
    if rows.is_empty() {
        return Err(CliError::usage("empty row selection"));
    }
    for &row in &rows {
        if row >= n_rows {
            return Err(CliError::usage(format!(
                "row {row} out of range: preset has {n_rows} rows"
            )));
        }
    }
    Ok(rows)
}

fn build_sweep_common(
    preset_flag: Option<&str>,
    rows_flag: Option<&str>,
    out_flag: Option<&Path>,
    file: &FileConfig,
) -> Result<SweepSetup, CliError> {
    let preset = resolve_preset(
        preset_flag.or(file.preset.as_deref()),
        file.preset_file.as_deref(),
    )?
    .ok_or_else(|| {
        CliError::usage(format!(
            "missing preset: pass --preset <name> or set \"preset\"/\"preset_file\" in the \
             config; available: {}",
            known_presets()
        ))
    })?;
    let rows = resolve_rows(rows_flag, file.rows.as_deref(), preset.grid_h.len())?;
    let test_functions = file
        .test_functions
        .as_ref()
        .map(|specs| specs.iter().map(|s| s.build()).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    Ok(SweepSetup {
        preset,
        rows,
        out: out_flag.map(Path::to_path_buf).or_else(|| file.out.clone()),
        test_functions,
        gauss_points: file.gauss_points.unwrap_or(DEFAULT_GAUSS_POINTS),
    })
}

pub fn build_table_setup(args: &SweepArgs, file: &FileConfig) -> Result<SweepSetup, CliError> {
    build_sweep_common(
        args.preset.as_deref(),
        args.rows.as_deref(),
        args.out.as_deref(),
        file,
    )
}

pub fn build_residual_setup(
    args: &ResidualArgs,
    file: &FileConfig,
) -> Result<SweepSetup, CliError> {
    build_sweep_common(
        args.preset.as_deref(),
        args.rows.as_deref(),
        args.out.as_deref(),
        file,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_config(json: &str) -> (tempfile::TempDir, PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(json.as_bytes()).unwrap();
        (dir, path)
    }

    fn run_args() -> RunArgs {
        RunArgs::default()
    }

    #[test]
    fn explicit_flags_build_a_full_setup() {
        let args = RunArgs {
            system: Some("korchinski".into()),
            ic: Some("1,1,-1,1".into()),
            domain: Some("-1,1".into()),
            h: Some(0.002),
            r: Some(0.45),
            t_final: Some(0.5),
            ..run_args()
        };
        let setup = build_run_setup(&args, &FileConfig::default()).unwrap();
        assert_eq!(setup.grid.n_cells(), 1000);
        assert_eq!(setup.data.u_left, 1.0);
        assert_eq!(setup.data.u_right, -1.0);
        assert_eq!(setup.data.v_left, 1.0);
        assert!(matches!(
            setup.params.step_ratio,
            StepRatio::Fixed { r } if r == 0.45
        ));
        assert_eq!(setup.params.t_final, 0.5);
        assert!(setup.monitors);
        assert!(!setup.residuals);
    }

    #[test]
    fn zero_cell_width_is_a_usage_error() {
        let args = RunArgs {
            system: Some("korchinski".into()),
            ic: Some("1,0,0,0".into()),
            domain: Some("-1,1".into()),
            h: Some(0.0),
            r: Some(0.45),
            t_final: Some(0.5),
            ..run_args()
        };
        match build_run_setup(&args, &FileConfig::default()) {
            Err(CliError::Usage(_)) => {}
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn flags_override_config_fields() {
        let (_dir, path) = write_config(
            r#"{"system": "korchinski", "ic": [1, 0, 0, 0], "domain": [-1, 1],
                "h": 0.01, "r": 0.3, "t_final": 0.5, "alpha": 0.1}"#,
        );
        let file = load_config(Some(&path)).unwrap();
        let args = RunArgs {
            h: Some(0.02),
            alpha: Some(0.2),
            ..run_args()
        };
        let setup = build_run_setup(&args, &file).unwrap();
        assert_eq!(setup.grid.h(), 0.02);
        assert_eq!(setup.params.alpha, 0.2);
        assert!(matches!(
            setup.params.step_ratio,
            StepRatio::Fixed { r } if r == 0.3
        ));
    }

    #[test]
    fn config_with_both_h_and_n_cells_is_rejected() {
        let (_dir, path) = write_config(
            r#"{"system": "kk", "ic": [1, 0, 0, 0], "domain": [-1, 1],
                "h": 0.01, "n_cells": 100, "r": 0.3, "t_final": 1.0}"#,
        );
        let file = load_config(Some(&path)).unwrap();
        let err = build_run_setup(&run_args(), &file).unwrap_err();
        match err {
            CliError::Usage(e) => assert!(e.to_string().contains("n_cells"), "{e}"),
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn n_cells_alone_fixes_the_grid() {
        let (_dir, path) = write_config(
            r#"{"system": "kk", "ic": [1, 0, 0, 0], "domain": [-1, 1],
                "n_cells": 128, "r": 0.3, "t_final": 1.0}"#,
        );
        let file = load_config(Some(&path)).unwrap();
        let setup = build_run_setup(&run_args(), &file).unwrap();
        assert_eq!(setup.grid.n_cells(), 128);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let (_dir, path) = write_config(r#"{"sytem": "kk"}"#);
        match load_config(Some(&path)) {
            Err(CliError::Usage(e)) => assert!(e.to_string().contains("sytem"), "{e}"),
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn preset_backfills_everything() {
        let args = RunArgs {
            preset: Some("korchinski-delta".into()),
            ..run_args()
        };
        let setup = build_run_setup(&args, &FileConfig::default()).unwrap();
        assert_eq!(setup.data.u_left, 1.0);
        assert_eq!(setup.data.u_right, -1.0);
        assert_eq!(setup.params.t_final, 0.5);
        assert!(setup.preset.is_some());
        // First preset row: h = 0.01 on [-1, 1].
        assert_eq!(setup.grid.n_cells(), 200);
    }

    #[test]
    fn missing_preset_names_the_alternatives() {
        let args = SweepArgs::default();
        match build_table_setup(&args, &FileConfig::default()) {
            Err(CliError::Usage(e)) => {
                let msg = e.to_string();
                assert!(msg.contains("missing preset"), "{msg}");
                assert!(msg.contains("korchinski-delta"), "{msg}");
            }
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_preset_is_a_usage_error() {
        let args = SweepArgs {
            preset: Some("no-such-preset".into()),
            ..SweepArgs::default()
        };
        assert!(matches!(
            build_table_setup(&args, &FileConfig::default()),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn row_selection_is_validated() {
        let args = SweepArgs {
            preset: Some("korchinski-delta".into()),
            rows: Some("0,9".into()),
            ..SweepArgs::default()
        };
        match build_table_setup(&args, &FileConfig::default()) {
            Err(CliError::Usage(e)) => assert!(e.to_string().contains("out of range"), "{e}"),
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn config_test_functions_are_validated() {
        let (_dir, path) = write_config(
            r#"{"preset": "korchinski-delta", "residuals": true,
                "test_functions": [{"id": "bad", "x_center": 0, "x_width": -1,
                                    "t_center": 0.2, "t_width": 0.1}]}"#,
        );
        let file = load_config(Some(&path)).unwrap();
        assert!(matches!(
            build_run_setup(&run_args(), &file),
            Err(CliError::Usage(_))
        ));
    }
}
