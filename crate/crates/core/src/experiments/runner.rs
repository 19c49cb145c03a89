//! Executes preset refinement sweeps: monitor tables and residual studies.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Error;
use crate::experiments::oracles::riemann_shock_speed;
use crate::experiments::presets::ExperimentPreset;
use crate::ic::{discretize_initial, InitialData};
use crate::monitors::{assumption_verdict, AssumptionVerdict, MonitorAccumulator, MonitorReport};
use crate::params::StepRatio;
use crate::residual::{ResidualAccumulator, ResidualSample, ResidualStudy, TestFunction};
use crate::scheme::{run_simulation, RunOutcome, StepObserver};

/// Result of one refinement row.
#[derive(Debug)]
pub struct TableRow {
    pub h: f64,
    /// Ratio the preset asked for; `None` means automatic selection.
    pub r_requested: Option<f64>,
    pub result: Result<RowSuccess, Error>,
}

/// What a successfully completed row reports.
#[derive(Debug, Clone)]
pub struct RowSuccess {
    pub report: MonitorReport,
    pub restarts: u32,
    pub boundary_flagged: bool,
}

/// A full sweep: per-row results plus the aggregate boundedness verdict
/// over the rows that completed.
#[derive(Debug)]
pub struct TableOutput {
    pub preset_name: String,
    pub rows: Vec<TableRow>,
    /// Verdict over the successful rows; an error when fewer than three
    /// completed.
    pub verdict: Result<AssumptionVerdict, Error>,
}

impl TableOutput {
    /// Reports of the rows that completed, in row order.
    pub fn successful_reports(&self) -> Vec<&MonitorReport> {
        self.rows
            .iter()
            .filter_map(|row| row.result.as_ref().ok().map(|s| &s.report))
            .collect()
    }

    /// Monitor CSV over the successful rows (header + one line per row,
    /// trailing newline). Failed rows are reported in the formatted table,
    /// not here.
    pub fn monitor_csv(&self) -> String {
        let mut out = String::from(MonitorReport::CSV_HEADER);
        out.push('\n');
        for report in self.successful_reports() {
            out.push_str(&report.csv_row());
            out.push('\n');
        }
        out
    }

    /// Human-readable table with a verdict footer.
    pub fn formatted(&self) -> String {
        let mut out = format!("sweep '{}'\n", self.preset_name);
        out.push_str(&format!(
            "{:>12} {:>9} {:>11} {:>9} {:>12} {:>12} {:>12} {:>12} {:>9}\n",
            "h", "r", "h/r", "cfl_max", "q_velocity", "q_mass", "q_flux", "peak_v", "steps"
        ));
        for row in &self.rows {
            match &row.result {
                Ok(s) => {
                    let rep = &s.report;
                    out.push_str(&format!(
                        "{:>12.6} {:>9.4} {:>11.5} {:>9.5} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e} {:>9}",
                        rep.h,
                        rep.r,
                        rep.h_over_r,
                        rep.cfl_max,
                        rep.q_velocity,
                        rep.q_mass,
                        rep.q_flux,
                        rep.peak_v,
                        rep.steps
                    ));
                    if s.restarts > 0 {
                        out.push_str(&format!("  ({} restarts)", s.restarts));
                    }
                    if s.boundary_flagged {
                        out.push_str("  (boundary reached)");
                    }
                    out.push('\n');
                }
                Err(e) => {
                    out.push_str(&format!("{:>12.6}  FAILED: {e}\n", row.h));
                }
            }
        }
        match &self.verdict {
            Ok(v) => {
                out.push_str(&format!(
                    "h/r decreasing: {}{}\n",
                    if v.h_over_r_decreasing { "yes" } else { "no" },
                    v.h_over_r_slope
                        .map(|s| format!(" (log-log slope {s:.3})"))
                        .unwrap_or_default()
                ));
                out.push_str(&format!(
                    "bounded: {} (q_velocity max {:.5e}{}, q_mass max {:.5e}{}, q_flux max {:.5e}{})\n",
                    if v.bounded() { "yes" } else { "SUSPECT" },
                    v.q_velocity_max,
                    if v.q_velocity_suspect { " SUSPECT" } else { "" },
                    v.q_mass_max,
                    if v.q_mass_suspect { " SUSPECT" } else { "" },
                    v.q_flux_max,
                    if v.q_flux_suspect { " SUSPECT" } else { "" },
                ));
            }
            Err(e) => out.push_str(&format!("verdict: {e}\n")),
        }
        out
    }
}

/// Runs one row of a preset: builds the grid and initial data, attaches the
/// requested observers, and returns the outcome.
pub fn run_preset_row(
    preset: &ExperimentPreset,
    h: f64,
    ratio: StepRatio,
    observers: &mut [&mut dyn StepObserver],
) -> Result<RunOutcome, Error> {
    let grid = preset.grid_for(h)?;
    let ic = discretize_initial(&InitialData::Riemann(preset.riemann.clone()), &grid)?;
    let params = preset.params_with(ratio);
    run_simulation(&ic, &preset.system, &params, observers)
}

fn execute_monitor_row(preset: &ExperimentPreset, h: f64, ratio: StepRatio) -> TableRow {
    let r_requested = match ratio {
        StepRatio::Fixed { r } => Some(r),
        StepRatio::Auto { .. } => None,
    };
    let mut acc = MonitorAccumulator::new(preset.system.clone(), preset.beta, preset.gamma);
    let result = (|| {
        let outcome = {
            let mut obs: [&mut dyn StepObserver; 1] = [&mut acc];
            run_preset_row(preset, h, ratio, &mut obs)?
        };
        Ok(RowSuccess {
            report: acc.report()?,
            restarts: outcome.restarts,
            boundary_flagged: outcome.boundary_flagged,
        })
    })();
    TableRow {
        h,
        r_requested,
        result,
    }
}

/// Runs every row of the preset and aggregates the verdict. A failing row
/// is recorded and the remaining rows still run. Rows execute in parallel
/// when the `parallel` feature is on; results are ordered and
/// thread-count-independent either way.
pub fn run_table(preset: &ExperimentPreset) -> Result<TableOutput, Error> {
    let all: Vec<usize> = (0..preset.grid_h.len()).collect();
    run_table_rows(preset, &all)
}

/// [`run_table`] restricted to a subset of row indices (in the given
/// order).
pub fn run_table_rows(preset: &ExperimentPreset, rows: &[usize]) -> Result<TableOutput, Error> {
    preset.validate()?;
    if let Some(&bad) = rows.iter().find(|&&i| i >= preset.grid_h.len()) {
        return Err(Error::config(format!(
            "row index {bad} out of range (preset '{}' has {} rows)",
            preset.name,
            preset.grid_h.len()
        )));
    }
    let specs: Vec<(f64, StepRatio)> = rows
        .iter()
        .map(|&i| (preset.grid_h[i], preset.step_ratio_for(i)))
        .collect();

    #[cfg(feature = "parallel")]
    let table_rows: Vec<TableRow> = specs
        .par_iter()
        .map(|&(h, ratio)| execute_monitor_row(preset, h, ratio))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let table_rows: Vec<TableRow> = specs
        .iter()
        .map(|&(h, ratio)| execute_monitor_row(preset, h, ratio))
        .collect();

    let reports: Vec<MonitorReport> = table_rows
        .iter()
        .filter_map(|row| row.result.as_ref().ok().map(|s| s.report.clone()))
        .collect();
    let verdict = assumption_verdict(&reports);
    Ok(TableOutput {
        preset_name: preset.name.clone(),
        rows: table_rows,
        verdict,
    })
}

/// The default family of test functions for a preset's residual study:
/// one bump centered on the exact jump path, one straddling its edge, and
/// one in the far field, all active over the middle of the run.
pub fn default_test_functions(preset: &ExperimentPreset) -> Result<Vec<TestFunction>, Error> {
    let (x_lo, x_hi) = preset.domain;
    let width = x_hi - x_lo;
    let t_total = preset.t_final;
    if t_total <= 0.0 {
        return Err(Error::config(format!(
            "preset '{}' has no time extent for a residual study",
            preset.name
        )));
    }
    let speed = riemann_shock_speed(&preset.system, &preset.riemann).unwrap_or(0.0);
    let t_center = 0.5 * t_total;
    let t_width = 0.35 * t_total;
    // Shrink a bump that would poke out of the domain.
    let fit = |xc: f64, wx: f64| wx.min(0.95 * (xc - x_lo)).min(0.95 * (x_hi - xc));

    let xc_path = preset.riemann.jump_x + speed * t_center;
    let wx_path = fit(xc_path, 0.15 * width);
    let xc_edge = xc_path + 0.5 * wx_path;
    let wx_edge = fit(xc_edge, wx_path);
    // The far-field bump sits deep in the constant state on the roomier
    // side, clear of the wave fan even on coarse (strongly smearing) grids.
    let room_l = preset.riemann.jump_x - x_lo;
    let room_r = x_hi - preset.riemann.jump_x;
    let xc_far = if room_r >= room_l {
        preset.riemann.jump_x + 0.85 * room_r
    } else {
        preset.riemann.jump_x - 0.85 * room_l
    };
    let wx_far = fit(xc_far, 0.08 * width);

    Ok(vec![
        TestFunction::new("on-path", xc_path, wx_path, t_center, t_width)?,
        TestFunction::new("straddle", xc_edge, wx_edge, t_center, t_width)?,
        TestFunction::new("far-field", xc_far, wx_far, t_center, t_width)?,
    ])
}

fn execute_residual_row(
    preset: &ExperimentPreset,
    h: f64,
    ratio: StepRatio,
    psis: &[TestFunction],
    gauss_points: usize,
) -> Result<Vec<ResidualSample>, Error> {
    let grid = preset.grid_for(h)?;
    let mut accs: Vec<ResidualAccumulator> = psis
        .iter()
        .map(|psi| {
            ResidualAccumulator::new(
                psi.clone(),
                &grid,
                preset.t_final,
                preset.system.clone(),
                gauss_points,
            )
        })
        .collect::<Result<_, _>>()?;
    {
        let mut obs: Vec<&mut dyn StepObserver> = accs
            .iter_mut()
            .map(|a| a as &mut dyn StepObserver)
            .collect();
        run_preset_row(preset, h, ratio, &mut obs)?;
    }
    Ok(accs
        .iter()
        .map(|a| {
            let (i_u, i_v) = a.integrals();
            ResidualSample { h, i_u, i_v }
        })
        .collect())
}

/// Runs the preset's physics on the given `(h, optional fixed r)` rows with
/// every test function attached, and groups the outcomes per test function.
/// `None` ratios fall back to automatic selection with a CFL target of 0.9.
/// Unlike monitor sweeps, any row failure aborts the study: a residual
/// order fit with holes would be misleading.
pub fn run_residual_study(
    preset: &ExperimentPreset,
    rows: &[(f64, Option<f64>)],
    psis: &[TestFunction],
    gauss_points: usize,
) -> Result<Vec<ResidualStudy>, Error> {
    if psis.is_empty() {
        return Err(Error::config("residual study needs at least one test function"));
    }
    if rows.is_empty() {
        return Err(Error::config("residual study needs at least one grid"));
    }
    let as_ratio = |r: Option<f64>| match r {
        Some(r) => StepRatio::Fixed { r },
        None => StepRatio::Auto { cfl_target: 0.9 },
    };

    #[cfg(feature = "parallel")]
    let per_row: Vec<Result<Vec<ResidualSample>, Error>> = rows
        .par_iter()
        .map(|&(h, r)| execute_residual_row(preset, h, as_ratio(r), psis, gauss_points))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let per_row: Vec<Result<Vec<ResidualSample>, Error>> = rows
        .iter()
        .map(|&(h, r)| execute_residual_row(preset, h, as_ratio(r), psis, gauss_points))
        .collect();

    let mut studies: Vec<ResidualStudy> = psis
        .iter()
        .map(|psi| ResidualStudy {
            psi_id: psi.id.clone(),
            samples: Vec::with_capacity(rows.len()),
        })
        .collect();
    for row in per_row {
        let samples = row?;
        for (study, sample) in studies.iter_mut().zip(samples) {
            study.samples.push(sample);
        }
    }
    Ok(studies)
}
