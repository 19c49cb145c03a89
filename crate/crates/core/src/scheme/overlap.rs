//! Interval-overlap weights of the transport stage.

/// Length of the intersection of `[a, b]` with the unit interval `[0, 1]`:
/// `max(0, min(1, b) - max(0, a))`.
///
/// These lengths are the donor weights of the transport stage: a cell's
/// content shifted by `r*phi` cell widths overlaps its three potential
/// target cells with weights that sum to exactly 1 while `|r*phi| <= 1`.
/// Total on all inputs; degenerate (`a >= b`) and disjoint intervals give 0.
#[inline]
pub fn overlap_length(a: f64, b: f64) -> f64 {
    (b.min(1.0) - a.max(0.0)).max(0.0)
}
