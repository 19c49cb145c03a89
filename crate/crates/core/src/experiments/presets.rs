//! Ready-made Riemann experiment configurations.
//!
//! The four cubic-system presets cover the three qualitative Riemann
//! regimes: a singular-shock regime on a wide and a narrow domain, an
//! overcompressive regime whose monitored quantities are h-independent, and
//! a classical two-shock regime. The pressureless preset produces a delta
//! wave in `v` with an analytically known mass growth rate.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::grid::GridSpec;
use crate::ic::RiemannData;
use crate::params::{SchemeParams, StepRatio};
use crate::systems::SystemDefinition;

/// Step-ratio policy of a preset's rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RowRatios {
    /// One fixed `r` per grid, same length as the grid list.
    Fixed(Vec<f64>),
    /// Automatic selection with the given CFL target on every grid.
    Auto { cfl_target: f64 },
}

/// A complete experiment description: system, Riemann data, domain, scheme
/// parameters, and the refinement rows to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPreset {
    pub name: String,
    pub system: SystemDefinition,
    pub riemann: RiemannData,
    /// Nominal domain `[x_min, x_max]` (see `center_jump_on_cell`).
    pub domain: (f64, f64),
    pub t_final: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Grid spacings, coarse to fine.
    pub grid_h: Vec<f64>,
    pub row_ratios: RowRatios,
    /// When set, each grid is shifted by half a cell and widened by one
    /// cell so the jump location is a cell *center* (the jump cell then
    /// carries the mean of the two states). Off by default: the reference
    /// tables place the jump on a cell edge, and the difference is
    /// observable — overcompressive shock layers remember their
    /// initialization, so a mean-valued jump cell suppresses the layer's
    /// internal velocity overshoot at every `h`.
    pub center_jump_on_cell: bool,
    /// Window for delta-shock mass tracking, if the preset grows one.
    pub delta_window: Option<(f64, f64)>,
    pub monitors: bool,
    pub residuals: bool,
}

/// Minimum number of cells any preset row may have.
const MIN_CELLS: usize = 16;

impl ExperimentPreset {
    /// Checks the grid list, ratio list, and parameter ranges.
    pub fn validate(&self) -> Result<(), Error> {
        let (x_lo, x_hi) = self.domain;
        if !(x_lo.is_finite() && x_hi.is_finite() && x_lo < x_hi) {
            return Err(Error::config(format!(
                "preset '{}': domain [{x_lo}, {x_hi}] is not an interval",
                self.name
            )));
        }
        for &h in &self.grid_h {
            let grid = self.grid_for(h)?;
            if grid.n_cells() < MIN_CELLS {
                return Err(Error::config(format!(
                    "preset '{}': h = {h} gives only {} cells (< {MIN_CELLS})",
                    self.name,
                    grid.n_cells()
                )));
            }
        }
        if let RowRatios::Fixed(rs) = &self.row_ratios {
            if rs.len() != self.grid_h.len() {
                return Err(Error::config(format!(
                    "preset '{}': {} ratios for {} grids",
                    self.name,
                    rs.len(),
                    self.grid_h.len()
                )));
            }
            if let Some(&bad) = rs.iter().find(|&&r| !(r.is_finite() && r > 0.0)) {
                return Err(Error::config(format!(
                    "preset '{}': step ratio {bad} must be positive",
                    self.name
                )));
            }
        }
        // Parameter ranges are the scheme's own.
        self.params_for(0.1).validate()
    }

    /// The grid for one row, honoring the jump-centering convention.
    pub fn grid_for(&self, h: f64) -> Result<GridSpec, Error> {
        let (x_lo, x_hi) = self.domain;
        if self.center_jump_on_cell {
            GridSpec::new(x_lo - 0.5 * h, x_hi + 0.5 * h, h)
        } else {
            GridSpec::new(x_lo, x_hi, h)
        }
    }

    /// Scheme parameters for one row given its step ratio.
    pub fn params_for(&self, r: f64) -> SchemeParams {
        self.params_with(StepRatio::Fixed { r })
    }

    /// Scheme parameters for one row given its step-ratio policy.
    pub fn params_with(&self, ratio: StepRatio) -> SchemeParams {
        let mut params = SchemeParams::fixed(1.0, self.t_final)
            .with_alpha(self.alpha)
            .with_exponents(self.beta, self.gamma);
        params.step_ratio = ratio;
        params
    }

    /// `(h, r)` pairs of all rows; `None` means "choose automatically".
    pub fn row_pairs(&self) -> Vec<(f64, Option<f64>)> {
        match &self.row_ratios {
            RowRatios::Fixed(rs) => self
                .grid_h
                .iter()
                .zip(rs)
                .map(|(&h, &r)| (h, Some(r)))
                .collect(),
            RowRatios::Auto { .. } => self.grid_h.iter().map(|&h| (h, None)).collect(),
        }
    }

    /// Step-ratio policy for one row.
    pub fn step_ratio_for(&self, row: usize) -> StepRatio {
        match &self.row_ratios {
            RowRatios::Fixed(rs) => StepRatio::Fixed { r: rs[row] },
            RowRatios::Auto { cfl_target } => StepRatio::Auto {
                cfl_target: *cfl_target,
            },
        }
    }

    /// Loads a preset from its JSON form.
    pub fn from_json_str(json: &str) -> Result<Self, Error> {
        let preset: ExperimentPreset = serde_json::from_str(json)?;
        preset.validate()?;
        Ok(preset)
    }

    /// Loads a preset from a JSON file.
    pub fn from_json_file(path: impl AsRef<std::path::Path>) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }
}

/// Singular-shock regime on the wide domain: Riemann data
/// `(1.5, 0, -2.065426, 1.410639)`, domain `[-4, 4]`, `T = 5`,
/// `alpha = 0.2`, `beta = 0.5`, `gamma = 0.4`, eight halving rows with
/// hand-tuned near-maximal step ratios.
pub fn kk_singular() -> ExperimentPreset {
    ExperimentPreset {
        name: "kk-singular".into(),
        system: SystemDefinition::keyfitz_kranzer(),
        riemann: RiemannData::new(1.5, 0.0, -2.065426, 1.410639),
        domain: (-4.0, 4.0),
        t_final: 5.0,
        alpha: 0.2,
        beta: 0.5,
        gamma: 0.4,
        grid_h: vec![
            0.04, 0.02, 0.01, 0.005, 0.0025, 0.00125, 0.000625, 0.0003125,
        ],
        row_ratios: RowRatios::Fixed(vec![
            0.300, 0.240, 0.170, 0.132, 0.095, 0.065, 0.040, 0.025,
        ]),
        center_jump_on_cell: false,
        delta_window: None,
        monitors: true,
        residuals: false,
    }
}

/// Singular-shock regime on the narrow domain `[-0.5, 0.5]`, `T = 1`:
/// twelve rows reaching h = 1/80000. Same Riemann data and exponents as
/// [`kk_singular`]. The spacings are exact fractions of the domain width
/// (they round to 0.002, 0.001, 0.0005, ...).
pub fn kk_singular_small() -> ExperimentPreset {
    ExperimentPreset {
        name: "kk-singular-small".into(),
        system: SystemDefinition::keyfitz_kranzer(),
        riemann: RiemannData::new(1.5, 0.0, -2.065426, 1.410639),
        domain: (-0.5, 0.5),
        t_final: 1.0,
        alpha: 0.2,
        beta: 0.5,
        gamma: 0.4,
        grid_h: vec![
            1.0 / 500.0,
            1.0 / 1000.0,
            1.0 / 2000.0,
            1.0 / 4000.0,
            1.0 / 8000.0,
            1.0 / 12000.0,
            1.0 / 16000.0,
            1.0 / 20000.0,
            1.0 / 30000.0,
            1.0 / 40000.0,
            1.0 / 60000.0,
            1.0 / 80000.0,
        ],
        row_ratios: RowRatios::Fixed(vec![
            0.18, 0.13, 0.09, 0.06, 0.043, 0.035, 0.030, 0.026, 0.021, 0.019, 0.015, 0.012,
        ]),
        center_jump_on_cell: false,
        delta_window: None,
        monitors: true,
        residuals: true,
    }
}

/// Overcompressive regime: Riemann data `(1.5, 0, -1.895644, 1.343466)`,
/// `alpha = 0.2`, `beta = gamma = 0`, fixed `r = 0.45` on every row,
/// domain `[-0.5, 0.5]`, `T = 1`. The peak velocity is set by the Riemann
/// states themselves, so the monitored quantities are h-independent.
pub fn kk_overcompressive() -> ExperimentPreset {
    ExperimentPreset {
        name: "kk-overcompressive".into(),
        system: SystemDefinition::keyfitz_kranzer(),
        riemann: RiemannData::new(1.5, 0.0, -1.895644, 1.343466),
        domain: (-0.5, 0.5),
        t_final: 1.0,
        alpha: 0.2,
        beta: 0.0,
        gamma: 0.0,
        grid_h: vec![0.005, 0.001, 0.0005, 0.00025, 0.000125, 0.0000625],
        row_ratios: RowRatios::Fixed(vec![0.45; 6]),
        center_jump_on_cell: false,
        delta_window: None,
        monitors: true,
        residuals: false,
    }
}

/// Classical two-shock regime: Riemann data `(1.5, 0, -1.725862,
/// 1.276293)`, otherwise identical to [`kk_overcompressive`]. No singular
/// growth; residuals decay at first order.
pub fn kk_classic() -> ExperimentPreset {
    ExperimentPreset {
        name: "kk-classic".into(),
        riemann: RiemannData::new(1.5, 0.0, -1.725862, 1.276293),
        residuals: true,
        ..kk_overcompressive()
    }
}

/// Pressureless delta-shock preset: Riemann data `(1, 1, -1, 1)`, domain
/// `[-1, 1]`, `T = 0.5`, `alpha = 0`, `r = 0.45` (inside the
/// maximum-principle regime `r*max|u| <= 1/2`). The `v` field concentrates
/// a growing point mass at the stationary shock; the window `[-0.1, 0.1]`
/// captures it on all listed grids.
pub fn korchinski_delta() -> ExperimentPreset {
    ExperimentPreset {
        name: "korchinski-delta".into(),
        system: SystemDefinition::korchinski(),
        riemann: RiemannData::new(1.0, 1.0, -1.0, 1.0),
        domain: (-1.0, 1.0),
        t_final: 0.5,
        alpha: 0.0,
        beta: 0.0,
        gamma: 0.0,
        grid_h: vec![0.01, 0.005, 0.002, 0.001],
        row_ratios: RowRatios::Fixed(vec![0.45; 4]),
        center_jump_on_cell: false,
        delta_window: Some((-0.1, 0.1)),
        monitors: true,
        residuals: false,
    }
}

/// All built-in presets.
pub fn all_presets() -> Vec<ExperimentPreset> {
    vec![
        kk_singular(),
        kk_singular_small(),
        kk_overcompressive(),
        kk_classic(),
        korchinski_delta(),
    ]
}

/// Looks a built-in preset up by its name.
pub fn preset_by_name(name: &str) -> Option<ExperimentPreset> {
    all_presets().into_iter().find(|p| p.name == name)
}
