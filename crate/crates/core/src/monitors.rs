//! Streaming monitors for the convergence-theory assumptions.
//!
//! The scheme's convergence argument rests on empirically checkable
//! conditions: `h/r` must shrink as the grid refines, the CFL quantity
//! `r*|phi|` must stay at most 1, and three growth quantities must stay
//! bounded along the refinement sequence:
//!
//! - `q_velocity = h^beta * max_{i,n} |phi_i^n|` — scaled velocity sup,
//! - `q_mass     = max_n max(sum_i |u_i^n| h, sum_i |v_i^n| h)` — peak
//!   discrete L¹ mass of either field,
//! - `q_flux     = max_n max(sum_i |A_i^n| h^(1+gamma), sum_i |B_i^n|
//!   h^(1+gamma))` — scaled flux-correction sums.
//!
//! [`MonitorAccumulator`] streams these over a run as a [`StepObserver`]
//! (no trajectory is stored); [`assumption_verdict`] aggregates the
//! per-run reports of a refinement sweep into a boundedness verdict.

use crate::error::Error;
use crate::scheme::{StepInfo, StepObserver};
use crate::state::StateField;
use crate::stats;
use crate::systems::SystemDefinition;

/// Per-run monitor summary.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorReport {
    pub h: f64,
    pub r: f64,
    pub h_over_r: f64,
    /// Largest `r*|phi|` seen; at most 1 on any completed run.
    pub cfl_max: f64,
    /// `h^beta * max|phi|` over all cells and observed levels.
    pub q_velocity: f64,
    /// Peak discrete L¹ mass of either field over observed levels.
    pub q_mass: f64,
    /// Peak scaled flux-correction sum over observed levels.
    pub q_flux: f64,
    /// Largest `|v|` seen (tracks delta-shock growth).
    pub peak_v: f64,
    /// Step index of the last observed level.
    pub steps: u64,
}

impl MonitorReport {
    /// Header of the monitor-table CSV emitted by sweeps.
    pub const CSV_HEADER: &'static str = "h,r,h_over_r,q_velocity,q_mass,q_flux,peak_v,steps";

    /// One CSV row matching [`Self::CSV_HEADER`] (no trailing newline).
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            fmt_g(self.h),
            fmt_g(self.r),
            fmt_g(self.h_over_r),
            fmt_g(self.q_velocity),
            fmt_g(self.q_mass),
            fmt_g(self.q_flux),
            fmt_g(self.peak_v),
            self.steps
        )
    }
}

/// Full-precision float formatting shared by all emitted CSVs: 17
/// significant digits round-trip any f64 exactly.
pub(crate) fn fmt_g(x: f64) -> String {
    format!("{x:.16e}")
}

/// Streaming accumulator of the monitored quantities over one run.
///
/// Pure observer: it never touches the state, so runs with and without it
/// are bit-identical. All sums and maxima are taken in index order.
#[derive(Debug, Clone)]
pub struct MonitorAccumulator {
    system: SystemDefinition,
    beta: f64,
    gamma: f64,
    h: f64,
    r: f64,
    max_phi: f64,
    cfl_max: f64,
    q_mass: f64,
    flux_sum_max: f64,
    peak_v: f64,
    steps: u64,
    observed: bool,
}

impl MonitorAccumulator {
    pub fn new(system: SystemDefinition, beta: f64, gamma: f64) -> Self {
        MonitorAccumulator {
            system,
            beta,
            gamma,
            h: 0.0,
            r: 0.0,
            max_phi: 0.0,
            cfl_max: 0.0,
            q_mass: 0.0,
            flux_sum_max: 0.0,
            peak_v: 0.0,
            steps: 0,
            observed: false,
        }
    }

    /// Latest value of the mass quantity (useful for step-by-step checks).
    pub fn current_mass(&self) -> f64 {
        self.q_mass
    }

    /// Finalizes the report. Fails if the accumulator never saw a state.
    pub fn report(&self) -> Result<MonitorReport, Error> {
        if !self.observed {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        Ok(MonitorReport {
            h: self.h,
            r: self.r,
            h_over_r: self.h / self.r,
            cfl_max: self.cfl_max,
            q_velocity: self.h.powf(self.beta) * self.max_phi,
            q_mass: self.q_mass,
            q_flux: self.flux_sum_max * self.h.powf(1.0 + self.gamma),
            peak_v: self.peak_v,
            steps: self.steps,
        })
    }
}

impl StepObserver for MonitorAccumulator {
    fn reset(&mut self) {
        let (system, beta, gamma) = (self.system.clone(), self.beta, self.gamma);
        *self = MonitorAccumulator::new(system, beta, gamma);
    }

    fn observe(&mut self, state: &StateField, info: &StepInfo) {
        self.h = state.grid().h();
        self.r = info.r;
        self.steps = state.step_index();
        self.observed = true;

        let u = state.u();
        let v = state.v();
        let mut max_phi = 0.0f64;
        let mut sum_u = 0.0;
        let mut sum_v = 0.0;
        let mut sum_a = 0.0;
        let mut sum_b = 0.0;
        let mut peak_v = 0.0f64;
        for i in 0..u.len() {
            let phi = self.system.phi(u[i], v[i]);
            max_phi = max_phi.max(phi.abs());
            sum_u += u[i].abs();
            sum_v += v[i].abs();
            sum_a += self.system.a_flux(u[i], v[i]).abs();
            sum_b += self.system.b_flux(u[i], v[i]).abs();
            peak_v = peak_v.max(v[i].abs());
        }
        self.max_phi = self.max_phi.max(max_phi);
        self.cfl_max = self.cfl_max.max(info.r * max_phi);
        self.q_mass = self.q_mass.max((sum_u * self.h).max(sum_v * self.h));
        self.flux_sum_max = self.flux_sum_max.max(sum_a.max(sum_b));
        self.peak_v = self.peak_v.max(peak_v);
    }
}

/// Aggregate boundedness verdict over a refinement sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionVerdict {
    /// Is `h/r` strictly decreasing from row to row?
    pub h_over_r_decreasing: bool,
    /// Least-squares slope of `log(h/r)` against `log(h)`, if fittable.
    pub h_over_r_slope: Option<f64>,
    pub q_velocity_max: f64,
    pub q_mass_max: f64,
    pub q_flux_max: f64,
    /// Per quantity: does the finest-grid value exceed the median across
    /// rows by more than 25%? A heuristic "possibly unbounded" flag, not a
    /// failure.
    pub q_velocity_suspect: bool,
    pub q_mass_suspect: bool,
    pub q_flux_suspect: bool,
}

impl AssumptionVerdict {
    /// True when none of the growth quantities looks unbounded.
    pub fn bounded(&self) -> bool {
        !(self.q_velocity_suspect || self.q_mass_suspect || self.q_flux_suspect)
    }
}

/// Margin over the median that marks a quantity as possibly unbounded.
const SUSPECT_FACTOR: f64 = 1.25;

/// Aggregates per-run reports (ordered by decreasing `h`) into a verdict.
/// Needs at least three rows to say anything meaningful.
pub fn assumption_verdict(reports: &[MonitorReport]) -> Result<AssumptionVerdict, Error> {
    if reports.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: reports.len(),
        });
    }
    let decreasing = reports
        .windows(2)
        .all(|w| w[1].h_over_r < w[0].h_over_r);
    let slope_pts: Vec<(f64, f64)> = reports.iter().map(|r| (r.h, r.h_over_r)).collect();
    let slope = stats::log_log_slope(&slope_pts);

    let suspect = |values: Vec<f64>| -> (f64, bool) {
        let max = values.iter().fold(0.0f64, |m, &x| m.max(x));
        let med = stats::median(&values).unwrap_or(0.0);
        let last = *values.last().unwrap();
        (max, last > SUSPECT_FACTOR * med)
    };
    let (q_velocity_max, q_velocity_suspect) =
        suspect(reports.iter().map(|r| r.q_velocity).collect());
    let (q_mass_max, q_mass_suspect) = suspect(reports.iter().map(|r| r.q_mass).collect());
    let (q_flux_max, q_flux_suspect) = suspect(reports.iter().map(|r| r.q_flux).collect());

    Ok(AssumptionVerdict {
        h_over_r_decreasing: decreasing,
        h_over_r_slope: slope,
        q_velocity_max,
        q_mass_max,
        q_flux_max,
        q_velocity_suspect,
        q_mass_suspect,
        q_flux_suspect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::params::SchemeParams;
    use crate::scheme::run_simulation;

    const TOL: f64 = 1e-14;

    fn observe_once(acc: &mut MonitorAccumulator, state: &StateField, r: f64) {
        let info = StepInfo {
            dt: r * state.grid().h(),
            r,
        };
        acc.observe(state, &info);
    }

    #[test]
    fn zero_state_gives_zero_quantities() {
        let g = GridSpec::new(0.0, 1.0, 0.25).unwrap();
        let s = StateField::new(g, vec![0.0; 4], vec![0.0; 4]).unwrap();
        let mut acc = MonitorAccumulator::new(SystemDefinition::keyfitz_kranzer(), 0.5, 0.4);
        observe_once(&mut acc, &s, 0.3);
        let rep = acc.report().unwrap();
        assert_eq!(rep.q_velocity, 0.0);
        assert_eq!(rep.q_mass, 0.0);
        assert_eq!(rep.q_flux, 0.0);
        assert_eq!(rep.cfl_max, 0.0);
    }

    #[test]
    fn single_state_quantities_match_hand_computation() {
        // h = 0.5, u = [1, -2], v = [0.5, 0]: max|phi| = 2,
        // sum|u| h = 1.5, sum|v| h = 0.25, A = v so sum|A| = 0.5,
        // B = vu - u^3/3 + u: B(1,0.5)=0.5-1/3+1, B(-2,0)=8/3-2.
        let g = GridSpec::new(0.0, 1.0, 0.5).unwrap();
        let s = StateField::new(g, vec![1.0, -2.0], vec![0.5, 0.0]).unwrap();
        let mut acc = MonitorAccumulator::new(SystemDefinition::keyfitz_kranzer(), 0.5, 0.4);
        observe_once(&mut acc, &s, 0.4);
        let rep = acc.report().unwrap();
        assert!((rep.q_velocity - 0.5f64.powf(0.5) * 2.0).abs() < TOL);
        assert!((rep.q_mass - 1.5).abs() < TOL);
        let sum_b = (0.5 - 1.0 / 3.0 + 1.0f64).abs() + (8.0 / 3.0 - 2.0f64).abs();
        let expect_flux = sum_b.max(0.5) * 0.5f64.powf(1.4);
        assert!((rep.q_flux - expect_flux).abs() < TOL);
        assert!((rep.cfl_max - 0.8).abs() < TOL);
        assert!((rep.peak_v - 0.5).abs() < TOL);
    }

    #[test]
    fn report_without_observations_is_an_error() {
        let acc = MonitorAccumulator::new(SystemDefinition::korchinski(), 0.0, 0.0);
        assert!(acc.report().is_err());
    }

    #[test]
    fn cfl_max_is_at_most_one_on_completed_runs() {
        // r * max|u0| = 0.5 keeps the run in the maximum-principle regime,
        // so |u| (and with it r*|phi|) can never exceed its initial peak.
        let g = GridSpec::with_cell_count(-2.0, 2.0, 100).unwrap();
        let u: Vec<f64> = (0..100)
            .map(|i| {
                let x: f64 = g.cell_center(i);
                (-x * x * 4.0).exp()
            })
            .collect();
        let ic = StateField::new(g, u, vec![0.0; 100]).unwrap();
        let sys = SystemDefinition::korchinski();
        let mut acc = MonitorAccumulator::new(sys.clone(), 0.0, 0.0);
        let params = SchemeParams::fixed(0.5, 0.5);
        {
            let mut obs: [&mut dyn StepObserver; 1] = [&mut acc];
            run_simulation(&ic, &sys, &params, &mut obs).unwrap();
        }
        let rep = acc.report().unwrap();
        assert!(rep.cfl_max <= 1.0);
        assert!(rep.cfl_max > 0.45, "pulse peak should dominate");
        assert_eq!(rep.h_over_r, rep.h / rep.r);
    }

    #[test]
    fn mass_quantity_never_increases_for_pressureless_runs() {
        // L¹ stability: the transport stage is a convex redistribution, so
        // sum|u| h cannot grow. Checked per step via current_mass().
        struct MassMonotone {
            inner: MonitorAccumulator,
            prev: Option<f64>,
            ok: bool,
        }
        impl StepObserver for MassMonotone {
            fn reset(&mut self) {
                self.inner.reset();
                self.prev = None;
                self.ok = true;
            }
            fn observe(&mut self, state: &StateField, info: &StepInfo) {
                self.inner.observe(state, info);
                let mass = state.l1_u().max(state.l1_v());
                if let Some(p) = self.prev {
                    if mass > p + 1e-12 {
                        self.ok = false;
                    }
                }
                self.prev = Some(mass);
            }
        }

        let g = GridSpec::with_cell_count(-2.0, 2.0, 128).unwrap();
        let u: Vec<f64> = (0..128)
            .map(|i| {
                let x: f64 = g.cell_center(i);
                (-x * x * 6.0).exp() * if x > 0.0 { 1.0 } else { -0.8 }
            })
            .collect();
        let v: Vec<f64> = (0..128)
            .map(|i| {
                let x: f64 = g.cell_center(i);
                0.5 * (-x * x * 3.0).exp()
            })
            .collect();
        let ic = StateField::new(g, u, v).unwrap();
        let sys = SystemDefinition::korchinski();
        let mut mono = MassMonotone {
            inner: MonitorAccumulator::new(sys.clone(), 0.0, 0.0),
            prev: None,
            ok: true,
        };
        let params = SchemeParams::fixed(0.5, 1.0);
        {
            let mut obs: [&mut dyn StepObserver; 1] = [&mut mono];
            run_simulation(&ic, &sys, &params, &mut obs).unwrap();
        }
        assert!(mono.ok, "L¹ mass grew during a pressureless run");
    }

    fn report_with(h: f64, r: f64, q: f64) -> MonitorReport {
        MonitorReport {
            h,
            r,
            h_over_r: h / r,
            cfl_max: 0.9,
            q_velocity: q,
            q_mass: q,
            q_flux: q,
            peak_v: q,
            steps: 10,
        }
    }

    #[test]
    fn verdict_requires_three_reports() {
        let reps = vec![report_with(0.1, 0.3, 1.0), report_with(0.05, 0.25, 1.0)];
        assert!(matches!(
            assumption_verdict(&reps),
            Err(Error::InsufficientData { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn identical_reports_are_bounded_but_not_decreasing() {
        let reps = vec![report_with(0.1, 0.3, 1.0); 3];
        let v = assumption_verdict(&reps).unwrap();
        assert!(!v.h_over_r_decreasing);
        assert!(v.bounded());
        assert_eq!(v.q_mass_max, 1.0);
    }

    #[test]
    fn square_root_scaling_is_recovered() {
        // h/r proportional to sqrt(h) across four halvings.
        let reps: Vec<MonitorReport> = [0.04, 0.02, 0.01, 0.005]
            .iter()
            .map(|&h: &f64| report_with(h, h / (0.5 * h.powf(0.5)), 2.0))
            .collect();
        let v = assumption_verdict(&reps).unwrap();
        assert!(v.h_over_r_decreasing);
        let slope = v.h_over_r_slope.unwrap();
        assert!((slope - 0.5).abs() < 1e-10, "slope = {slope}");
    }

    #[test]
    fn growth_in_the_last_row_is_flagged() {
        let mut reps = vec![
            report_with(0.1, 0.3, 1.0),
            report_with(0.05, 0.28, 1.0),
            report_with(0.025, 0.26, 1.0),
        ];
        reps.last_mut().unwrap().q_flux = 2.0;
        let v = assumption_verdict(&reps).unwrap();
        assert!(v.q_flux_suspect);
        assert!(!v.q_mass_suspect);
        assert!(!v.bounded());
    }

    #[test]
    fn csv_row_matches_header_arity() {
        let rep = report_with(0.1, 0.3, 1.0);
        let row = rep.csv_row();
        assert_eq!(
            row.split(',').count(),
            MonitorReport::CSV_HEADER.split(',').count()
        );
        // 17 significant digits round-trip: parse back and compare bits.
        let first: f64 = row.split(',').next().unwrap().parse().unwrap();
        assert_eq!(first.to_bits(), 0.1f64.to_bits());
    }
}
