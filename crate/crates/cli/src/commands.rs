//! Subcommand implementations. Each builds its setup from flags + config,
//! delegates to the library, prints a report, and maps failures onto the
//! exit-code convention (1 runtime, 2 usage).

use std::path::PathBuf;

use singshock_core::residual::{order_csv, residual_csv};
use singshock_core::{
    default_test_functions, discretize_initial, run_residual_study, run_simulation,
    run_table_rows, InitialData, MonitorAccumulator, OrderEstimate, ResidualAccumulator,
    ResidualStudy, StepObserver, TestFunction, VerifyConfig,
};

use crate::config::{
    build_residual_setup, build_run_setup, build_table_setup, load_config, RunSetup, SweepSetup,
};
use crate::output::{emit_plot_script, write_profile_csv, SnapshotWriter};
use crate::{CliError, ResidualArgs, RunArgs, SweepArgs, VerifyArgs};

fn with_suffix(prefix: &PathBuf, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}{suffix}", prefix.display()))
}

/// Test functions for residual accumulation: explicit config entries win,
/// otherwise the preset's default family.
fn resolve_test_functions(
    explicit: Option<&[TestFunction]>,
    preset: Option<&singshock_core::ExperimentPreset>,
) -> Result<Vec<TestFunction>, CliError> {
    if let Some(psis) = explicit {
        return Ok(psis.to_vec());
    }
    match preset {
        Some(p) => default_test_functions(p).map_err(CliError::usage_from),
        None => Err(CliError::usage(
            "residuals need test functions: set \"test_functions\" in the config or use a preset",
        )),
    }
}

fn format_order(which: &str, estimate: &OrderEstimate) -> String {
    match estimate {
        OrderEstimate::Slope { p, grids_used } => {
            format!("order {which} = {p:.3} ({grids_used} grids)")
        }
        OrderEstimate::Indeterminate { reason } => format!("order {which} indeterminate: {reason}"),
    }
}

pub fn run(args: &RunArgs) -> Result<(), CliError> {
    let file = load_config(args.config.as_deref())?;
    let setup: RunSetup = build_run_setup(args, &file)?;

    let ic = discretize_initial(&InitialData::Riemann(setup.data), &setup.grid)
        .map_err(CliError::usage_from)?;

    let mut monitor = setup
        .monitors
        .then(|| MonitorAccumulator::new(setup.system.clone(), setup.params.beta, setup.params.gamma));
    let mut snapshots = (!setup.snapshots.is_empty())
        .then(|| SnapshotWriter::new(&setup.out, &setup.snapshots));
    let mut residual_accs: Vec<ResidualAccumulator> = if setup.residuals {
        let psis = resolve_test_functions(setup.test_functions.as_deref(), setup.preset.as_ref())?;
        psis.into_iter()
            .map(|psi| {
                ResidualAccumulator::new(
                    psi,
                    &setup.grid,
                    setup.params.t_final,
                    setup.system.clone(),
                    setup.gauss_points,
                )
                .map_err(CliError::usage_from)
            })
            .collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };

    let mut observers: Vec<&mut dyn StepObserver> = Vec::new();
    if let Some(m) = monitor.as_mut() {
        observers.push(m);
    }
    if let Some(s) = snapshots.as_mut() {
        observers.push(s);
    }
    for acc in residual_accs.iter_mut() {
        observers.push(acc);
    }

    let outcome = run_simulation(&ic, &setup.system, &setup.params, &mut observers)
        .map_err(CliError::runtime_from)?;

    println!(
        "run complete: system {}, {} cells, t = {:.6} after {} steps (r = {}{})",
        setup.system.name(),
        setup.grid.n_cells(),
        outcome.final_state.t(),
        outcome.steps,
        outcome.r_used,
        if outcome.restarts > 0 {
            format!(", {} restarts", outcome.restarts)
        } else {
            String::new()
        }
    );
    if outcome.boundary_flagged {
        println!(
            "warning: near-boundary cells drifted; the domain is too small for this run \
             and the constant-extension boundaries polluted the solution"
        );
    }

    if let Some(m) = &monitor {
        let report = m.report().map_err(CliError::runtime_from)?;
        println!(
            "monitors: cfl_max = {:.4}, q_velocity = {:.5e}, q_mass = {:.5e}, \
             q_flux = {:.5e}, peak |v| = {:.5e}",
            report.cfl_max, report.q_velocity, report.q_mass, report.q_flux, report.peak_v
        );
    }
    for acc in &residual_accs {
        let (i_u, i_v) = acc.integrals();
        println!(
            "residual {}: I_u = {i_u:+.6e}, I_v = {i_v:+.6e}",
            acc.psi().id
        );
    }

    let final_csv = with_suffix(&setup.out, "_final.csv");
    write_profile_csv(&outcome.final_state, &final_csv).map_err(CliError::runtime_from)?;
    println!("wrote {}", final_csv.display());

    let mut profile_paths = vec![final_csv];
    if let Some(writer) = snapshots.as_mut() {
        if let Some(err) = writer.take_error() {
            return Err(CliError::runtime_from(err));
        }
        for missed in writer.missed() {
            println!("note: snapshot time {missed} is past the end of the run; skipped");
        }
        for snap in writer.written() {
            println!(
                "wrote {} (requested t = {}, captured t = {})",
                snap.path.display(),
                snap.requested,
                snap.actual
            );
        }
        profile_paths.extend(writer.written().iter().map(|s| s.path.clone()));
    }

    let script = with_suffix(&setup.out, "_profiles.gp");
    emit_plot_script(&profile_paths, &script).map_err(CliError::runtime_from)?;
    println!("wrote {}", script.display());
    Ok(())
}

pub fn table(args: &SweepArgs) -> Result<(), CliError> {
    let file = load_config(args.config.as_deref())?;
    let setup: SweepSetup = build_table_setup(args, &file)?;

    let output =
        run_table_rows(&setup.preset, &setup.rows).map_err(CliError::usage_from)?;
    print!("{}", output.formatted());

    if let Some(out) = &setup.out {
        let path = with_suffix(out, "_monitors.csv");
        std::fs::write(&path, output.monitor_csv()).map_err(CliError::runtime_from)?;
        println!("wrote {}", path.display());
    }

    let failed = output.rows.iter().filter(|r| r.result.is_err()).count();
    if failed > 0 {
        return Err(CliError::Runtime(anyhow::anyhow!(
            "{failed} of {} rows failed",
            output.rows.len()
        )));
    }
    Ok(())
}

pub fn residual(args: &ResidualArgs) -> Result<(), CliError> {
    let file = load_config(args.config.as_deref())?;
    let setup: SweepSetup = build_residual_setup(args, &file)?;

    let psis = resolve_test_functions(setup.test_functions.as_deref(), Some(&setup.preset))?;
    let pairs = setup.preset.row_pairs();
    let selected: Vec<_> = setup.rows.iter().map(|&i| pairs[i]).collect();

    let studies: Vec<ResidualStudy> =
        run_residual_study(&setup.preset, &selected, &psis, setup.gauss_points)
            .map_err(CliError::runtime_from)?;

    println!(
        "residual study '{}': {} grids, {} test functions",
        setup.preset.name,
        selected.len(),
        studies.len()
    );
    for study in &studies {
        println!("psi {}:", study.psi_id);
        for s in &study.samples {
            println!("  h = {:>10.6}  I_u = {:+.6e}  I_v = {:+.6e}", s.h, s.i_u, s.i_v);
        }
        println!(
            "  {}; {}",
            format_order("u", &study.order_u()),
            format_order("v", &study.order_v())
        );
    }

    if let Some(out) = &setup.out {
        let residuals_path = with_suffix(out, "_residuals.csv");
        std::fs::write(&residuals_path, residual_csv(&studies))
            .map_err(CliError::runtime_from)?;
        println!("wrote {}", residuals_path.display());
        let orders_path = with_suffix(out, "_orders.csv");
        std::fs::write(&orders_path, order_csv(&studies)).map_err(CliError::runtime_from)?;
        println!("wrote {}", orders_path.display());
    }
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let config = if args.quick {
        VerifyConfig::quick()
    } else {
        VerifyConfig::default()
    };
    let summary =
        singshock_core::run_verification(args.seed, &config).map_err(CliError::runtime_from)?;
    print!("{}", summary.formatted());
    if !summary.passed() {
        return Err(CliError::Runtime(anyhow::anyhow!(
            "verification failed; see the suite report above"
        )));
    }
    Ok(())
}
