//! Convergence-order estimation from residual magnitudes across grids.

use crate::stats;

/// Residual magnitudes below this are quadrature/rounding noise, not
/// signal; they are excluded from order fits.
pub const NOISE_FLOOR: f64 = 1e-14;

/// The residual pair measured for one test function on one grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSample {
    pub h: f64,
    pub i_u: f64,
    pub i_v: f64,
}

/// Result of fitting `|I| ~ C * h^p` over a refinement sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum OrderEstimate {
    /// Least-squares slope of `log|I|` against `log h`.
    Slope { p: f64, grids_used: usize },
    /// Too few usable magnitudes (all at noise floor, or fewer than two
    /// grids). Reported, never fatal: residuals at the noise floor mean the
    /// integrals are effectively converged.
    Indeterminate { reason: String },
}

impl OrderEstimate {
    /// The fitted order, if one exists.
    pub fn value(&self) -> Option<f64> {
        match self {
            OrderEstimate::Slope { p, .. } => Some(*p),
            OrderEstimate::Indeterminate { .. } => None,
        }
    }

    /// Number of grids that entered the fit (0 when indeterminate).
    pub fn grids_used(&self) -> usize {
        match self {
            OrderEstimate::Slope { grids_used, .. } => *grids_used,
            OrderEstimate::Indeterminate { .. } => 0,
        }
    }
}

/// Fits the decay order of one residual column. `points` pairs `h` with the
/// signed integral `I`; magnitudes at or below [`NOISE_FLOOR`] are dropped
/// before the log-log fit.
pub fn order_estimate(points: &[(f64, f64)]) -> OrderEstimate {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, i)| i.abs() > NOISE_FLOOR)
        .map(|&(h, i)| (h, i.abs()))
        .collect();
    if usable.len() < 2 {
        return OrderEstimate::Indeterminate {
            reason: format!(
                "{} of {} residuals above the noise floor ({NOISE_FLOOR:.0e}); need 2",
                usable.len(),
                points.len()
            ),
        };
    }
    match stats::log_log_slope(&usable) {
        Some(p) => OrderEstimate::Slope {
            p,
            grids_used: usable.len(),
        },
        None => OrderEstimate::Indeterminate {
            reason: "degenerate log-log fit (repeated h?)".into(),
        },
    }
}

/// All samples of one test function across a refinement sequence, ordered
/// by decreasing `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualStudy {
    pub psi_id: String,
    pub samples: Vec<ResidualSample>,
}

impl ResidualStudy {
    pub fn order_u(&self) -> OrderEstimate {
        order_estimate(&self.samples.iter().map(|s| (s.h, s.i_u)).collect::<Vec<_>>())
    }

    pub fn order_v(&self) -> OrderEstimate {
        order_estimate(&self.samples.iter().map(|s| (s.h, s.i_v)).collect::<Vec<_>>())
    }
}

/// CSV of raw residuals: `h,psi_id,I_u,I_v`, one row per (grid, test
/// function), grids in the order given, full float precision.
pub fn residual_csv(studies: &[ResidualStudy]) -> String {
    use crate::monitors::fmt_g;
    let mut out = String::from("h,psi_id,I_u,I_v\n");
    if studies.is_empty() {
        return out;
    }
    let n_grids = studies[0].samples.len();
    for k in 0..n_grids {
        for study in studies {
            let s = &study.samples[k];
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_g(s.h),
                study.psi_id,
                fmt_g(s.i_u),
                fmt_g(s.i_v)
            ));
        }
    }
    out
}

/// CSV of fitted orders: `psi_id,p_u,p_v,grids_used`. Indeterminate fits
/// print as `nan` with 0 grids.
pub fn order_csv(studies: &[ResidualStudy]) -> String {
    let mut out = String::from("psi_id,p_u,p_v,grids_used\n");
    for study in studies {
        let ou = study.order_u();
        let ov = study.order_v();
        let fmt = |o: &OrderEstimate| match o.value() {
            Some(p) => format!("{p:.6}"),
            None => "nan".into(),
        };
        out.push_str(&format!(
            "{},{},{},{}\n",
            study.psi_id,
            fmt(&ou),
            fmt(&ov),
            ou.grids_used().max(ov.grids_used())
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_first_order_decay() {
        let pts: Vec<(f64, f64)> = [0.04, 0.02, 0.01, 0.005]
            .iter()
            .map(|&h| (h, -2.0 * h))
            .collect();
        match order_estimate(&pts) {
            OrderEstimate::Slope { p, grids_used } => {
                assert!((p - 1.0).abs() < 1e-10);
                assert_eq!(grids_used, 4);
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn noise_floor_points_are_dropped() {
        let pts = vec![(0.04, 0.8e-1), (0.02, 0.4e-1), (0.01, 5e-15)];
        match order_estimate(&pts) {
            OrderEstimate::Slope { p, grids_used } => {
                assert_eq!(grids_used, 2);
                assert!((p - 1.0).abs() < 1e-10);
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn all_noise_is_indeterminate() {
        let pts = vec![(0.04, 1e-16), (0.02, -3e-15), (0.01, 0.0)];
        match order_estimate(&pts) {
            OrderEstimate::Indeterminate { reason } => {
                assert!(reason.contains("0 of 3"), "{reason}");
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn csv_shapes() {
        let study = ResidualStudy {
            psi_id: "on-path".into(),
            samples: vec![
                ResidualSample {
                    h: 0.02,
                    i_u: 0.1,
                    i_v: -0.2,
                },
                ResidualSample {
                    h: 0.01,
                    i_u: 0.05,
                    i_v: -0.1,
                },
            ],
        };
        let res = residual_csv(std::slice::from_ref(&study));
        assert_eq!(res.lines().count(), 3);
        assert!(res.starts_with("h,psi_id,I_u,I_v\n"));
        let ord = order_csv(&[study]);
        assert_eq!(ord.lines().count(), 2);
        let row = ord.lines().nth(1).unwrap();
        assert!(row.starts_with("on-path,"));
        assert!(row.ends_with(",2"));
    }
}
