//! Seeded randomized verification suites for the scheme's structural
//! guarantees: the overlap partition of unity, the pressureless
//! maximum principle with L¹ stability, and per-stage mass conservation.
//!
//! The suites return structured reports instead of panicking so both the
//! acceptance tests and the command-line `verify` command can consume
//! them. All randomness comes from a caller-supplied seed; a given seed
//! reproduces the exact same cases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::grid::GridSpec;
use crate::params::{SchemeParams, DEFAULT_BLOWUP_CAP};
use crate::scheme::{
    averaging_step, centered_step, compute_velocity, full_step, overlap_length, transport_step,
};
use crate::state::StateField;
use crate::systems::SystemDefinition;

/// Absolute tolerance for the partition-of-unity identity.
pub const PARTITION_TOL: f64 = 1e-15;
/// Absolute slack allowed on the per-step three-point bound.
pub const BOUND_SLACK: f64 = 1e-12;
/// Absolute slack allowed on per-step L¹ growth (in mass units).
pub const L1_SLACK: f64 = 1e-12;
/// Per-step sum drift allowed, relative to the initial L¹ mass.
pub const MASS_DRIFT_TOL: f64 = 1e-12;

/// How many failure descriptions a report keeps (all failures are counted).
const MAX_RECORDED_FAILURES: usize = 5;

/// Case counts for one verification pass.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Random shifts for the overlap partition identity.
    pub overlap_cases: usize,
    /// Random initial fields for the maximum-principle/L¹ suite.
    pub field_runs: usize,
    /// Steps taken per random field.
    pub field_steps: usize,
    /// Random compact fields per system for the mass suite.
    pub mass_runs: usize,
    /// Steps per mass run.
    pub mass_steps: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            overlap_cases: 10_000,
            field_runs: 200,
            field_steps: 500,
            mass_runs: 12,
            mass_steps: 100,
        }
    }
}

impl VerifyConfig {
    /// A reduced configuration for quick interactive checks.
    pub fn quick() -> Self {
        VerifyConfig {
            overlap_cases: 1_000,
            field_runs: 20,
            field_steps: 100,
            mass_runs: 4,
            mass_steps: 40,
        }
    }
}

/// Outcome of the overlap partition suite.
#[derive(Debug, Clone)]
pub struct OverlapReport {
    pub cases: usize,
    /// Largest `|sum of the three weights - 1|` seen.
    pub max_partition_error: f64,
    /// Smallest and largest single weight seen.
    pub weight_range: (f64, f64),
}

impl OverlapReport {
    pub fn passed(&self) -> bool {
        self.max_partition_error <= PARTITION_TOL
            && self.weight_range.0 >= 0.0
            && self.weight_range.1 <= 1.0
    }
}

/// Outcome of the pressureless maximum-principle and L¹ suite.
#[derive(Debug, Clone)]
pub struct MaxPrincipleReport {
    pub runs: usize,
    pub steps_per_run: usize,
    /// Worst violation of `min3 <= new value <= max3` (negative when the
    /// bound always held with margin).
    pub worst_bound_slack: f64,
    /// Worst per-step increase of the discrete L¹ mass of `u` / of `v`.
    pub worst_l1_growth_u: f64,
    pub worst_l1_growth_v: f64,
    /// Occurrences of each sign pattern of `(u_{i-1}, u_i, u_{i+1})`
    /// (index bit 2 = left positive, bit 1 = center, bit 0 = right);
    /// triples containing a zero are not classified.
    pub sign_patterns: [u64; 8],
    /// Bound or L¹ violations.
    pub failure_count: usize,
    /// Runs that aborted because a step itself failed.
    pub step_failures: usize,
    pub failures: Vec<String>,
}

impl MaxPrincipleReport {
    pub fn all_sign_patterns_seen(&self) -> bool {
        self.sign_patterns.iter().all(|&c| c > 0)
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.step_failures == 0 && self.all_sign_patterns_seen()
    }
}

/// Outcome of the per-stage mass-conservation suite for one system.
#[derive(Debug, Clone)]
pub struct MassConservationReport {
    pub system_name: String,
    pub runs: usize,
    pub steps_per_run: usize,
    /// Worst per-step sum drift of each stage, relative to the initial L¹
    /// mass of the respective field: transport, averaging, centered.
    pub worst_drift: [f64; 3],
    /// Runs that ended early (CFL violation on randomized data); their
    /// completed steps still count.
    pub early_stops: usize,
    pub failure_count: usize,
    pub failures: Vec<String>,
}

impl MassConservationReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// All suites of one verification pass.
#[derive(Debug, Clone)]
pub struct VerifySummary {
    pub seed: u64,
    pub overlap: OverlapReport,
    pub max_principle: MaxPrincipleReport,
    pub mass: Vec<MassConservationReport>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.overlap.passed()
            && self.max_principle.passed()
            && self.mass.iter().all(|m| m.passed())
    }

    /// Multi-line human-readable summary, one suite per line.
    pub fn formatted(&self) -> String {
        let mut out = format!("verification (seed {})\n", self.seed);
        let o = &self.overlap;
        out.push_str(&format!(
            "overlap partition: {} cases, max |sum-1| = {:.2e}, weights in [{:.2e}, {}] -> {}\n",
            o.cases,
            o.max_partition_error,
            o.weight_range.0,
            o.weight_range.1,
            if o.passed() { "PASS" } else { "FAIL" }
        ));
        let m = &self.max_principle;
        out.push_str(&format!(
            "max principle + L1: {} runs x {} steps, worst bound slack {:.2e}, \
             worst L1 growth u {:.2e} v {:.2e}, sign patterns {}/8 -> {}\n",
            m.runs,
            m.steps_per_run,
            m.worst_bound_slack,
            m.worst_l1_growth_u,
            m.worst_l1_growth_v,
            m.sign_patterns.iter().filter(|&&c| c > 0).count(),
            if m.passed() { "PASS" } else { "FAIL" }
        ));
        for c in &self.mass {
            out.push_str(&format!(
                "mass conservation [{}]: {} runs x {} steps, worst relative drift \
                 transport {:.2e} averaging {:.2e} centered {:.2e}{} -> {}\n",
                c.system_name,
                c.runs,
                c.steps_per_run,
                c.worst_drift[0],
                c.worst_drift[1],
                c.worst_drift[2],
                if c.early_stops > 0 {
                    format!(" ({} early stops)", c.early_stops)
                } else {
                    String::new()
                },
                if c.passed() { "PASS" } else { "FAIL" }
            ));
        }
        for f in self
            .max_principle
            .failures
            .iter()
            .chain(self.mass.iter().flat_map(|c| c.failures.iter()))
        {
            out.push_str(&format!("  failure: {f}\n"));
        }
        out
    }
}

/// Checks the partition identity `L(-1+a, a) + L(a, 1+a) + L(1+a, 2+a) = 1`
/// and the bounds `0 <= L <= 1` on random shifts `a` in `[-1, 1]`.
pub fn verify_overlap_partition(seed: u64, cases: usize) -> OverlapReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_err = 0.0f64;
    let mut w_min = f64::INFINITY;
    let mut w_max = f64::NEG_INFINITY;
    for _ in 0..cases {
        let a: f64 = rng.gen_range(-1.0..=1.0);
        let w = [
            overlap_length(-1.0 + a, a),
            overlap_length(a, 1.0 + a),
            overlap_length(1.0 + a, 2.0 + a),
        ];
        max_err = max_err.max((w[0] + w[1] + w[2] - 1.0).abs());
        for &x in &w {
            w_min = w_min.min(x);
            w_max = w_max.max(x);
        }
    }
    OverlapReport {
        cases,
        max_partition_error: max_err,
        weight_range: (w_min, w_max),
    }
}

/// A random compactly supported field: `support` cells of uniform values in
/// `[-amp, amp]` centered in an `n`-cell zero background.
fn random_compact_field(rng: &mut ChaCha8Rng, n: usize, support: usize, amp: f64) -> Vec<f64> {
    let mut field = vec![0.0; n];
    let start = (n - support) / 2;
    for x in field.iter_mut().skip(start).take(support) {
        *x = rng.gen_range(-amp..=amp);
    }
    field
}

fn record_failure(failures: &mut Vec<String>, count: &mut usize, msg: String) {
    *count += 1;
    if failures.len() < MAX_RECORDED_FAILURES {
        failures.push(msg);
    }
}

/// Runs random pressureless fields with `r * max|u0| <= 1/2` and checks,
/// after every step, the three-point bound
/// `min(u_{i-1}, u_i, u_{i+1}) <= u'_i <= max(u_{i-1}, u_i, u_{i+1})`
/// (against the pre-step neighbors, boundary cells clamped) and that the
/// discrete L¹ mass of `u` and of `v` never grows. Runs use `alpha = 0`,
/// where one full step is exactly the transport stage.
pub fn verify_max_principle_l1(seed: u64, runs: usize, steps: usize) -> MaxPrincipleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let system = SystemDefinition::korchinski();
    let n = 224;
    let support = 32;

    let mut worst_slack = f64::NEG_INFINITY;
    let mut worst_growth_u = f64::NEG_INFINITY;
    let mut worst_growth_v = f64::NEG_INFINITY;
    let mut patterns = [0u64; 8];
    let mut failures = Vec::new();
    let mut failure_count = 0usize;
    let mut step_failures = 0usize;

    for run in 0..runs {
        let amp_u: f64 = rng.gen_range(0.3..2.0);
        let amp_v: f64 = rng.gen_range(0.1..2.0);
        let u = random_compact_field(&mut rng, n, support, amp_u);
        let v = random_compact_field(&mut rng, n, support, amp_v);
        let grid = GridSpec::with_cell_count(0.0, 1.0, n).expect("static grid");
        let mut state = StateField::new(grid, u, v).expect("finite random field");

        // r * max|u0| = cfl_budget <= 1/2, the maximum-principle regime.
        let cfl_budget: f64 = rng.gen_range(0.1..0.499);
        let r = cfl_budget / state.max_abs_u();
        let params = SchemeParams::fixed(r, 1.0);

        for step in 0..steps {
            let next = match full_step(&state, &system, &params) {
                Ok(s) => s,
                Err(e) => {
                    step_failures += 1;
                    if failures.len() < MAX_RECORDED_FAILURES {
                        failures.push(format!("run {run} step {step}: step failed: {e}"));
                    }
                    break;
                }
            };

            let u_old = state.u();
            let u_new = next.u();
            for i in 0..n {
                let um = u_old[i.saturating_sub(1)];
                let uc = u_old[i];
                let up = u_old[(i + 1).min(n - 1)];
                let lo = um.min(uc).min(up);
                let hi = um.max(uc).max(up);
                let slack = (lo - u_new[i]).max(u_new[i] - hi);
                worst_slack = worst_slack.max(slack);
                if slack > BOUND_SLACK {
                    record_failure(
                        &mut failures,
                        &mut failure_count,
                        format!(
                            "run {run} step {step} cell {i}: {} outside [{lo}, {hi}] by {slack:.3e}",
                            u_new[i]
                        ),
                    );
                }
                if um != 0.0 && uc != 0.0 && up != 0.0 {
                    let idx = ((um > 0.0) as usize) << 2
                        | ((uc > 0.0) as usize) << 1
                        | ((up > 0.0) as usize);
                    patterns[idx] += 1;
                }
            }

            let growth_u = next.l1_u() - state.l1_u();
            let growth_v = next.l1_v() - state.l1_v();
            worst_growth_u = worst_growth_u.max(growth_u);
            worst_growth_v = worst_growth_v.max(growth_v);
            if growth_u > L1_SLACK || growth_v > L1_SLACK {
                record_failure(
                    &mut failures,
                    &mut failure_count,
                    format!("run {run} step {step}: L1 grew by u {growth_u:.3e} v {growth_v:.3e}"),
                );
            }

            state = next;
        }
    }

    MaxPrincipleReport {
        runs,
        steps_per_run: steps,
        worst_bound_slack: worst_slack,
        worst_l1_growth_u: worst_growth_u,
        worst_l1_growth_v: worst_growth_v,
        sign_patterns: patterns,
        failure_count,
        step_failures,
        failures,
    }
}

fn sum(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |acc, &x| acc + x)
}

/// Steps random compact fields with every stage applied separately and
/// checks that each stage conserves the plain sum of each field to
/// [`MASS_DRIFT_TOL`] relative to the initial L¹ mass.
pub fn verify_mass_conservation(
    seed: u64,
    system: &SystemDefinition,
    runs: usize,
    steps: usize,
) -> Result<MassConservationReport, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let n = 256;
    let support = 48;

    let mut worst = [f64::NEG_INFINITY; 3];
    let mut early_stops = 0usize;
    let mut failures = Vec::new();
    let mut failure_count = 0usize;

    for run in 0..runs {
        let u = random_compact_field(&mut rng, n, support, 0.5);
        let v = random_compact_field(&mut rng, n, support, 0.5);
        let grid = GridSpec::with_cell_count(-2.0, 2.0, n)?;
        let mut state = StateField::new(grid, u, v)?;
        let scale_u = state.l1_u() / state.grid().h();
        let scale_v = state.l1_v() / state.grid().h();
        let r = 0.35;
        let alpha: f64 = rng.gen_range(0.0..0.45);

        'steps: for step in 0..steps {
            let (sum_u0, sum_v0) = state.sums();
            let phi = compute_velocity(&state, system)?;
            let (bar_u, bar_v) = match transport_step(&state, &phi, r) {
                Ok(out) => out,
                Err(Error::CflViolation { .. }) => {
                    // Randomized cubic-system data may sharpen until the
                    // fixed r is no longer admissible; conservation up to
                    // this point has been checked.
                    early_stops += 1;
                    break 'steps;
                }
                Err(e) => return Err(e),
            };
            let (tld_u, tld_v) = averaging_step(&bar_u, &bar_v, alpha)?;
            let next = centered_step(&state, &tld_u, &tld_v, system, r, DEFAULT_BLOWUP_CAP)?;

            let stage_sums = [
                (sum(&bar_u), sum(&bar_v)),
                (sum(&tld_u), sum(&tld_v)),
                next.sums(),
            ];
            let mut prev = (sum_u0, sum_v0);
            for (stage, &(su, sv)) in stage_sums.iter().enumerate() {
                let drift =
                    ((su - prev.0).abs() / scale_u).max((sv - prev.1).abs() / scale_v);
                worst[stage] = worst[stage].max(drift);
                if drift > MASS_DRIFT_TOL {
                    record_failure(
                        &mut failures,
                        &mut failure_count,
                        format!(
                            "{} run {run} step {step} stage {stage}: relative drift {drift:.3e}",
                            system.name()
                        ),
                    );
                }
                prev = (su, sv);
            }
            state = next;
        }
    }

    Ok(MassConservationReport {
        system_name: system.name().to_string(),
        runs,
        steps_per_run: steps,
        worst_drift: worst,
        early_stops,
        failure_count,
        failures,
    })
}

/// Runs every suite with case counts from `config`.
pub fn run_verification(seed: u64, config: &VerifyConfig) -> Result<VerifySummary, Error> {
    let overlap = verify_overlap_partition(seed, config.overlap_cases);
    let max_principle = verify_max_principle_l1(seed, config.field_runs, config.field_steps);
    let mass = vec![
        verify_mass_conservation(
            seed,
            &SystemDefinition::korchinski(),
            config.mass_runs,
            config.mass_steps,
        )?,
        verify_mass_conservation(
            seed,
            &SystemDefinition::keyfitz_kranzer(),
            config.mass_runs,
            config.mass_steps,
        )?,
    ];
    Ok(VerifySummary {
        seed,
        overlap,
        max_principle,
        mass,
    })
}
