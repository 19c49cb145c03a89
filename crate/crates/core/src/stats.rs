//! Small fitting helpers shared by monitors, residual order estimation, and
//! experiment oracles.

/// Least-squares slope of `y` against `x`. Returns `None` for fewer than two
/// points or a degenerate (constant-`x`) design.
pub fn linear_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx <= 0.0 || !sxx.is_finite() || !sxy.is_finite() {
        return None;
    }
    Some(sxy / sxx)
}

/// Least-squares slope of `log(y)` against `log(x)`; inputs must be
/// positive. Returns `None` if any point is unusable or the fit degenerates.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Option<Vec<(f64, f64)>> = points
        .iter()
        .map(|&(x, y)| {
            if x > 0.0 && y > 0.0 {
                Some((x.ln(), y.ln()))
            } else {
                None
            }
        })
        .collect();
    linear_slope(&logs?)
}

/// Median of a sample (mean of the two middle values for even lengths).
/// Returns `None` for an empty sample.
pub fn median(sample: &[f64]) -> Option<f64> {
    if sample.is_empty() {
        return None;
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let m = sorted.len() / 2;
    Some(if sorted.len() % 2 == 1 {
        sorted[m]
    } else {
        0.5 * (sorted[m - 1] + sorted[m])
    })
}
