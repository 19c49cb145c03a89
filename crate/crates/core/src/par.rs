//! Data-parallel fill helpers.
//!
//! Every parallel site in the crate is a pure per-cell map writing disjoint
//! output slots, so results are bit-identical to the sequential fallback
//! regardless of thread count. Reductions (sums, maxima, scans) are *never*
//! parallelized; they stay sequential left-to-right for reproducibility.

/// Below this many elements the parallel path falls back to a plain loop;
/// rayon task overhead dwarfs the work on small grids.
#[cfg(feature = "parallel")]
const MIN_PAR_LEN: usize = 8192;

/// Fills `out[i] = f(offset + i)` for all `i`.
#[cfg(feature = "parallel")]
pub(crate) fn fill_indexed<F>(out: &mut [f64], offset: usize, f: F)
where
    F: Fn(usize) -> f64 + Sync,
{
    use rayon::prelude::*;
    if out.len() < MIN_PAR_LEN {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = f(offset + i);
        }
    } else {
        out.par_iter_mut()
            .with_min_len(MIN_PAR_LEN / 8)
            .enumerate()
            .for_each(|(i, slot)| *slot = f(offset + i));
    }
}

/// Fills `out[i] = f(offset + i)` for all `i`.
#[cfg(not(feature = "parallel"))]
pub(crate) fn fill_indexed<F>(out: &mut [f64], offset: usize, f: F)
where
    F: Fn(usize) -> f64 + Sync,
{
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = f(offset + i);
    }
}

/// Fills two equally long slices in lockstep:
/// `(out_a[i], out_b[i]) = f(offset + i)`.
#[cfg(feature = "parallel")]
pub(crate) fn fill_indexed2<F>(out_a: &mut [f64], out_b: &mut [f64], offset: usize, f: F)
where
    F: Fn(usize) -> (f64, f64) + Sync,
{
    use rayon::prelude::*;
    debug_assert_eq!(out_a.len(), out_b.len());
    if out_a.len() < MIN_PAR_LEN {
        for (i, (a, b)) in out_a.iter_mut().zip(out_b.iter_mut()).enumerate() {
            (*a, *b) = f(offset + i);
        }
    } else {
        out_a
            .par_iter_mut()
            .zip(out_b.par_iter_mut())
            .with_min_len(MIN_PAR_LEN / 8)
            .enumerate()
            .for_each(|(i, (a, b))| (*a, *b) = f(offset + i));
    }
}

/// Fills two equally long slices in lockstep:
/// `(out_a[i], out_b[i]) = f(offset + i)`.
#[cfg(not(feature = "parallel"))]
pub(crate) fn fill_indexed2<F>(out_a: &mut [f64], out_b: &mut [f64], offset: usize, f: F)
where
    F: Fn(usize) -> (f64, f64) + Sync,
{
    debug_assert_eq!(out_a.len(), out_b.len());
    for (i, (a, b)) in out_a.iter_mut().zip(out_b.iter_mut()).enumerate() {
        (*a, *b) = f(offset + i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fill_matches_direct_loop() {
        let mut out = vec![0.0; 100];
        fill_indexed(&mut out, 5, |i| i as f64 * 0.5);
        for (i, &x) in out.iter().enumerate() {
            assert_eq!(x, (i + 5) as f64 * 0.5);
        }
    }

    #[test]
    fn fill2_matches_direct_loop() {
        let mut a = vec![0.0; 64];
        let mut b = vec![0.0; 64];
        fill_indexed2(&mut a, &mut b, 2, |i| (i as f64, -(i as f64)));
        for i in 0..64 {
            assert_eq!(a[i], (i + 2) as f64);
            assert_eq!(b[i], -((i + 2) as f64));
        }
    }
}
