//! Profile CSV emission/parsing, gnuplot script generation, and the
//! snapshot observer. All emitted files are byte-deterministic for
//! identical inputs.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _};

use singshock_core::{StateField, StepInfo, StepObserver};

/// 17-significant-digit decimal float, enough to round-trip an `f64` exactly.
fn fmt_g(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `x,u,v` rows (cell centers in ascending order) with full float
/// precision and a trailing newline.
pub fn write_profile_csv(state: &StateField, path: &Path) -> anyhow::Result<()> {
    let grid = state.grid();
    let n = grid.n_cells();
    let mut out = String::with_capacity(8 + 72 * n);
    out.push_str("x,u,v\n");
    for i in 0..n {
        out.push_str(&fmt_g(grid.cell_center(i)));
        out.push(',');
        out.push_str(&fmt_g(state.u()[i]));
        out.push(',');
        out.push_str(&fmt_g(state.v()[i]));
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// Reads a profile CSV back into `(x, u, v)` columns. Values written by
/// [`write_profile_csv`] parse back bit-exactly.
#[cfg_attr(not(test), allow(dead_code))]
pub fn parse_profile_csv(path: &Path) -> anyhow::Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some("x,u,v") => {}
        other => bail!(
            "{}: expected header 'x,u,v', found {other:?}",
            path.display()
        ),
    }
    let (mut xs, mut us, mut vs) = (Vec::new(), Vec::new(), Vec::new());
    for (k, line) in lines.enumerate() {
        let mut fields = line.split(',');
        let mut next = |name: &str| -> anyhow::Result<f64> {
            fields
                .next()
                .with_context(|| format!("{}: row {}: missing {name}", path.display(), k + 1))?
                .parse::<f64>()
                .with_context(|| format!("{}: row {}: bad {name}", path.display(), k + 1))
        };
        xs.push(next("x")?);
        us.push(next("u")?);
        vs.push(next("v")?);
    }
    Ok((xs, us, vs))
}

/// Emits a gnuplot script plotting the `u` and `v` columns of each profile
/// CSV (two curves per file). The script is plain text; nothing is executed.
pub fn emit_plot_script(csv_paths: &[PathBuf], path: &Path) -> anyhow::Result<()> {
    if csv_paths.is_empty() {
        bail!("no profile files to plot");
    }
    let mut out = String::from(
        "# u and v profiles; render with: gnuplot -persist <this file>\n\
         set datafile separator ','\n\
         set xlabel 'x'\n\
         set grid\n\
         set key outside\n\
         plot \\\n",
    );
    for (k, csv) in csv_paths.iter().enumerate() {
        let label = csv
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| format!("profile {k}"));
        let file = csv.to_string_lossy();
        out.push_str(&format!(
            "  '{file}' using 1:2 every ::1 with lines title 'u ({label})', \\\n"
        ));
        out.push_str(&format!(
            "  '{file}' using 1:3 every ::1 with lines title 'v ({label})'"
        ));
        out.push_str(if k + 1 < csv_paths.len() { ", \\\n" } else { "\n" });
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// One written snapshot: the requested time, the completed step time that
/// was actually captured, and where it went.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub requested: f64,
    pub actual: f64,
    pub path: PathBuf,
}

/// Step observer that writes a profile CSV for each requested time, rounded
/// down to the nearest completed step: the state at step time `t` covers
/// `[t, t + dt)`, so a request inside that slab captures this state. The
/// actual time goes into the filename (`<prefix>_t<actual>.csv`).
pub struct SnapshotWriter {
    prefix: PathBuf,
    requested: Vec<f64>,
    written: Vec<Snapshot>,
    error: Option<anyhow::Error>,
}

impl SnapshotWriter {
    pub fn new(prefix: impl Into<PathBuf>, times: &[f64]) -> Self {
        let mut requested = times.to_vec();
        requested.sort_by(f64::total_cmp);
        requested.dedup();
        SnapshotWriter {
            prefix: prefix.into(),
            requested,
            written: Vec::new(),
            error: None,
        }
    }

    /// Snapshots written so far, in capture order.
    pub fn written(&self) -> &[Snapshot] {
        &self.written
    }

    /// Requested times the run never reached (request at or beyond the
    /// final step's slab).
    pub fn missed(&self) -> Vec<f64> {
        self.requested
            .iter()
            .copied()
            .filter(|&req| !self.written.iter().any(|s| s.requested == req))
            .collect()
    }

    /// First I/O failure, if any; writes after a failure are skipped.
    pub fn take_error(&mut self) -> Option<anyhow::Error> {
        self.error.take()
    }

    fn snapshot_path(&self, t: f64) -> PathBuf {
        PathBuf::from(format!("{}_t{t}.csv", self.prefix.display()))
    }
}

impl StepObserver for SnapshotWriter {
    /// A restarted run (auto-ratio halving) replays from the initial data;
    /// snapshots from the aborted attempt are stale, so drop them.
    fn reset(&mut self) {
        for snap in &self.written {
            let _ = fs::remove_file(&snap.path);
        }
        self.written.clear();
        self.error = None;
    }

    fn observe(&mut self, state: &StateField, info: &StepInfo) {
        if self.error.is_some() {
            return;
        }
        let t = state.t();
        for &req in &self.requested {
            if t <= req && req < t + info.dt {
                let already = self.written.iter().find(|s| s.actual == t).map(|s| s.path.clone());
                let path = match already {
                    // Two requests inside one slab capture the same state.
                    Some(path) => path,
                    None => {
                        let path = self.snapshot_path(t);
                        if let Err(e) = write_profile_csv(state, &path) {
                            self.error = Some(e);
                            return;
                        }
                        path
                    }
                };
                self.written.push(Snapshot {
                    requested: req,
                    actual: t,
                    path,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use singshock_core::{
        discretize_initial, run_simulation, GridSpec, InitialData, RiemannData, SchemeParams,
        StateField, SystemDefinition,
    };

    fn small_state() -> StateField {
        let grid = GridSpec::new(-1.0, 0.5, 0.5).unwrap();
        StateField::new(
            grid,
            vec![1.5, -0.25, 1.0 / 3.0],
            vec![0.0, 1e-300, -7.25e11],
        )
        .unwrap()
    }

    #[test]
    fn three_cells_give_header_plus_three_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("profile.csv");
        write_profile_csv(&small_state(), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("x,u,v\n"));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let state = small_state();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("profile.csv");
        write_profile_csv(&state, &path).unwrap();
        let (xs, us, vs) = parse_profile_csv(&path).unwrap();
        for i in 0..3 {
            assert_eq!(xs[i].to_bits(), state.grid().cell_center(i).to_bits());
            assert_eq!(us[i].to_bits(), state.u()[i].to_bits());
            assert_eq!(vs[i].to_bits(), state.v()[i].to_bits());
        }
    }

    #[test]
    fn identical_states_give_identical_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let (p1, p2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        write_profile_csv(&small_state(), &p1).unwrap();
        write_profile_csv(&small_state(), &p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }

    #[test]
    fn plot_script_has_two_curves_per_csv() {
        let dir = tempfile::tempdir().unwrap();
        let script = dir.path().join("plot.gp");
        emit_plot_script(&[PathBuf::from("one.csv")], &script).unwrap();
        let text = std::fs::read_to_string(&script).unwrap();
        assert_eq!(text.matches("using 1:").count(), 2);

        emit_plot_script(&[PathBuf::from("one.csv"), PathBuf::from("two.csv")], &script).unwrap();
        let text = std::fs::read_to_string(&script).unwrap();
        assert_eq!(text.matches("using 1:").count(), 4);
        assert_eq!(text.matches("title 'u").count(), 2);
        assert_eq!(text.matches("title 'v").count(), 2);
    }

    #[test]
    fn plot_script_bytes_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let (s1, s2) = (dir.path().join("a.gp"), dir.path().join("b.gp"));
        let csvs = vec![PathBuf::from("x.csv"), PathBuf::from("y.csv")];
        emit_plot_script(&csvs, &s1).unwrap();
        emit_plot_script(&csvs, &s2).unwrap();
        assert_eq!(std::fs::read(&s1).unwrap(), std::fs::read(&s2).unwrap());
    }

    #[test]
    fn empty_plot_list_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(emit_plot_script(&[], &dir.path().join("plot.gp")).is_err());
    }

    #[test]
    fn snapshots_round_down_to_completed_steps() {
        // h = 0.1, r = 0.5 -> dt = 0.05; completed step times are multiples
        // of 0.05. A request at 0.12 must capture the state at t = 0.10.
        let grid = GridSpec::new(-1.0, 1.0, 0.1).unwrap();
        let ic = discretize_initial(
            &InitialData::Riemann(RiemannData::new(1.0, 0.0, 0.0, 0.0)),
            &grid,
        )
        .unwrap();
        let system = SystemDefinition::korchinski();
        let params = SchemeParams::fixed(0.5, 0.3);
        let dir = tempfile::tempdir().unwrap();
        let prefix = dir.path().join("snap");
        let mut writer = SnapshotWriter::new(&prefix, &[0.0, 0.12, 9.0]);
        run_simulation(&ic, &system, &params, &mut [&mut writer]).unwrap();
        assert!(writer.take_error().is_none());

        let written = writer.written();
        assert_eq!(written.len(), 2);
        assert_eq!(written[0].requested, 0.0);
        assert_eq!(written[0].actual, 0.0);
        assert_eq!(written[1].requested, 0.12);
        assert!((written[1].actual - 0.10).abs() < 1e-12);
        for snap in written {
            assert!(snap.actual <= snap.requested);
            assert!(snap.path.exists(), "{}", snap.path.display());
            let name = snap.path.file_name().unwrap().to_string_lossy().into_owned();
            assert!(
                name.contains(&format!("t{}", snap.actual)),
                "{name} should contain the actual time {}",
                snap.actual
            );
        }
        assert_eq!(writer.missed(), vec![9.0]);
    }

    #[test]
    fn reset_discards_snapshots_from_an_aborted_attempt() {
        let state = small_state();
        let dir = tempfile::tempdir().unwrap();
        let mut writer = SnapshotWriter::new(dir.path().join("snap"), &[0.0]);
        writer.observe(&state, &StepInfo { dt: 0.1, r: 0.2 });
        let first = writer.written()[0].path.clone();
        assert!(first.exists());
        writer.reset();
        assert!(writer.written().is_empty());
        assert!(!first.exists());
    }
}
