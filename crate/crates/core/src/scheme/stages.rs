//! The three stages of one time step and their composition.
//!
//! A step of ratio `r = dt/h` applies, in order:
//!
//! 1. **transport** — each cell's content is shifted by `r*phi` cell widths
//!    and deposited into the up-to-three cells it overlaps, with
//!    [`overlap_length`] weights;
//! 2. **averaging** — a three-point smoothing with weight `alpha`
//!    (`alpha = 0` is the identity);
//! 3. **centered correction** — adds `r/2` times the centered difference of
//!    the flux corrections `A`, `B` evaluated on the *pre-step* values.
//!
//! Every stage pads its own input with two copies of the nearest interior
//! value (constant extension), so composing the stand-alone stage functions
//! reproduces [`advance`] bit for bit.
//!
//! All per-cell loops are pure indexed maps and run through [`crate::par`],
//! so enabling the `parallel` feature cannot change results. Scans and sums
//! stay sequential.

use crate::error::Error;
use crate::par;
use crate::params::{SchemeParams, StepRatio};
use crate::scheme::overlap::overlap_length;
use crate::state::StateField;
use crate::systems::SystemDefinition;

/// Ghost cells added on each side of the working arrays.
const GHOST: usize = 2;

/// Scratch arrays reused across steps. All have length `n_cells + 4`: two
/// ghost slots on each side, interior cell `i` at slot `i + 2`.
#[derive(Debug, Clone)]
pub struct WorkBuffers {
    n: usize,
    ext_u: Vec<f64>,
    ext_v: Vec<f64>,
    phi: Vec<f64>,
    bar_u: Vec<f64>,
    bar_v: Vec<f64>,
    tld_u: Vec<f64>,
    tld_v: Vec<f64>,
}

impl WorkBuffers {
    pub fn new(n_cells: usize) -> Self {
        let len = n_cells + 2 * GHOST;
        WorkBuffers {
            n: n_cells,
            ext_u: vec![0.0; len],
            ext_v: vec![0.0; len],
            phi: vec![0.0; len],
            bar_u: vec![0.0; len],
            bar_v: vec![0.0; len],
            tld_u: vec![0.0; len],
            tld_v: vec![0.0; len],
        }
    }

    fn ensure(&mut self, n_cells: usize) {
        if self.n != n_cells {
            *self = WorkBuffers::new(n_cells);
        }
    }
}

/// Copies `src` into the interior of `dst` and fills both ghost pairs with
/// the nearest interior value.
fn extend_into(src: &[f64], dst: &mut [f64]) {
    let n = src.len();
    debug_assert_eq!(dst.len(), n + 2 * GHOST);
    dst[GHOST..GHOST + n].copy_from_slice(src);
    dst[0] = src[0];
    dst[1] = src[0];
    dst[n + GHOST] = src[n - 1];
    dst[n + GHOST + 1] = src[n - 1];
}

/// Constant-extends the single ghost slot adjacent to each interior edge
/// (slots `1` and `n+2`), which is all the averaging stage reads.
fn pad_inner_ghosts(buf: &mut [f64], n: usize) {
    buf[1] = buf[2];
    buf[n + GHOST] = buf[n + GHOST - 1];
}

/// Fills `phi` at interior slots from the extended fields, then copies the
/// edge values outward. Returns the interior index of the first non-finite
/// entry, if any.
fn velocity_kernel(
    ext_u: &[f64],
    ext_v: &[f64],
    system: &SystemDefinition,
    phi: &mut [f64],
) -> Result<(), usize> {
    let n = ext_u.len() - 2 * GHOST;
    par::fill_indexed(&mut phi[GHOST..GHOST + n], GHOST, |s| {
        system.phi(ext_u[s], ext_v[s])
    });
    phi[0] = phi[GHOST];
    phi[1] = phi[GHOST];
    phi[n + GHOST] = phi[n + GHOST - 1];
    phi[n + GHOST + 1] = phi[n + GHOST - 1];
    for (i, &p) in phi[GHOST..GHOST + n].iter().enumerate() {
        if !p.is_finite() {
            return Err(i);
        }
    }
    Ok(())
}

/// Sequential CFL scan: first interior cell where `r*|phi| > 1`, with the
/// offending value.
fn cfl_scan(phi: &[f64], r: f64) -> Option<(usize, f64)> {
    let n = phi.len() - 2 * GHOST;
    for (i, &p) in phi[GHOST..GHOST + n].iter().enumerate() {
        let rp = r * p;
        if rp.abs() > 1.0 {
            return Some((i, rp.abs()));
        }
    }
    None
}

/// Transport stage on extended arrays: writes slots `2 ..= n+1`.
fn transport_kernel(
    ext_u: &[f64],
    ext_v: &[f64],
    phi: &[f64],
    r: f64,
    bar_u: &mut [f64],
    bar_v: &mut [f64],
) {
    let n = ext_u.len() - 2 * GHOST;
    par::fill_indexed2(
        &mut bar_u[GHOST..GHOST + n],
        &mut bar_v[GHOST..GHOST + n],
        GHOST,
        |s| {
            let am = r * phi[s - 1];
            let ac = r * phi[s];
            let ap = r * phi[s + 1];
            let wm = overlap_length(-1.0 + am, am);
            let wc = overlap_length(ac, 1.0 + ac);
            let wp = overlap_length(1.0 + ap, 2.0 + ap);
            let ub = ext_u[s - 1] * wm + ext_u[s] * wc + ext_u[s + 1] * wp;
            let vb = ext_v[s - 1] * wm + ext_v[s] * wc + ext_v[s + 1] * wp;
            (ub, vb)
        },
    );
}

/// Averaging stage on extended arrays (expects slots `1` and `n+2` of the
/// inputs padded): writes slots `2 ..= n+1`.
fn averaging_kernel(bar_u: &[f64], bar_v: &[f64], alpha: f64, tld_u: &mut [f64], tld_v: &mut [f64]) {
    let n = bar_u.len() - 2 * GHOST;
    let center = 1.0 - 2.0 * alpha;
    par::fill_indexed2(
        &mut tld_u[GHOST..GHOST + n],
        &mut tld_v[GHOST..GHOST + n],
        GHOST,
        |s| {
            let tu = alpha * bar_u[s - 1] + center * bar_u[s] + alpha * bar_u[s + 1];
            let tv = alpha * bar_v[s - 1] + center * bar_v[s] + alpha * bar_v[s + 1];
            (tu, tv)
        },
    );
}

/// Centered flux-correction stage: reads the *pre-step* extended fields and
/// the averaged values, writes the interior-length outputs.
fn centered_kernel(
    ext_u: &[f64],
    ext_v: &[f64],
    tld_u: &[f64],
    tld_v: &[f64],
    system: &SystemDefinition,
    r: f64,
    out_u: &mut [f64],
    out_v: &mut [f64],
) {
    let half_r = 0.5 * r;
    par::fill_indexed2(out_u, out_v, GHOST, |s| {
        let a_p = system.a_flux(ext_u[s + 1], ext_v[s + 1]);
        let a_m = system.a_flux(ext_u[s - 1], ext_v[s - 1]);
        let b_p = system.b_flux(ext_u[s + 1], ext_v[s + 1]);
        let b_m = system.b_flux(ext_u[s - 1], ext_v[s - 1]);
        let nu = tld_u[s] + half_r * (a_p - a_m);
        let nv = tld_v[s] + half_r * (b_p - b_m);
        (nu, nv)
    });
}

/// Sequential post-step scan: rejects non-finite values and magnitudes past
/// the blow-up cap, and reports the field maxima.
fn check_output(u: &[f64], v: &[f64], cap: f64) -> Result<(f64, f64), (&'static str, usize)> {
    let mut max_u = 0.0f64;
    let mut max_v = 0.0f64;
    for (i, &x) in u.iter().enumerate() {
        if !x.is_finite() || x.abs() > cap {
            return Err(("u", i));
        }
        max_u = max_u.max(x.abs());
    }
    for (i, &x) in v.iter().enumerate() {
        if !x.is_finite() || x.abs() > cap {
            return Err(("v", i));
        }
        max_v = max_v.max(x.abs());
    }
    Ok((max_u, max_v))
}

/// Transport velocity `phi(u_i, v_i)` for every cell.
pub fn compute_velocity(state: &StateField, system: &SystemDefinition) -> Result<Vec<f64>, Error> {
    let mut phi = vec![0.0; state.n_cells()];
    par::fill_indexed(&mut phi, 0, |i| system.phi(state.u()[i], state.v()[i]));
    for (cell, &p) in phi.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::NonFinite {
                quantity: "phi",
                cell,
                step: state.step_index(),
                t: state.t(),
            });
        }
    }
    Ok(phi)
}

/// Transport stage: shifts both fields by `r*phi` cell widths using overlap
/// weights. `phi` must hold one velocity per cell (see [`compute_velocity`])
/// and satisfy `r*|phi| <= 1` everywhere. Returns the transported fields.
pub fn transport_step(
    state: &StateField,
    phi: &[f64],
    r: f64,
) -> Result<(Vec<f64>, Vec<f64>), Error> {
    let n = state.n_cells();
    if phi.len() != n {
        return Err(Error::config(format!(
            "velocity slice has length {}, expected {n}",
            phi.len()
        )));
    }
    let mut ext_u = vec![0.0; n + 2 * GHOST];
    let mut ext_v = vec![0.0; n + 2 * GHOST];
    let mut ext_phi = vec![0.0; n + 2 * GHOST];
    extend_into(state.u(), &mut ext_u);
    extend_into(state.v(), &mut ext_v);
    extend_into(phi, &mut ext_phi);
    if let Some((cell, r_phi)) = cfl_scan(&ext_phi, r) {
        return Err(Error::CflViolation {
            cell,
            step: state.step_index(),
            r_phi,
        });
    }
    let mut bar_u = vec![0.0; n + 2 * GHOST];
    let mut bar_v = vec![0.0; n + 2 * GHOST];
    transport_kernel(&ext_u, &ext_v, &ext_phi, r, &mut bar_u, &mut bar_v);
    Ok((
        bar_u[GHOST..GHOST + n].to_vec(),
        bar_v[GHOST..GHOST + n].to_vec(),
    ))
}

/// Averaging stage: three-point smoothing with weight `alpha in [0, 0.5)`.
/// Conserves the sum of each field exactly (the ghost contributions cancel).
pub fn averaging_step(
    bar_u: &[f64],
    bar_v: &[f64],
    alpha: f64,
) -> Result<(Vec<f64>, Vec<f64>), Error> {
    if bar_u.len() != bar_v.len() || bar_u.is_empty() {
        return Err(Error::config(format!(
            "averaging inputs must be equally long and non-empty ({} / {})",
            bar_u.len(),
            bar_v.len()
        )));
    }
    if !(alpha.is_finite() && (0.0..0.5).contains(&alpha)) {
        return Err(Error::InvalidParams {
            reason: format!("alpha = {alpha} must lie in [0, 0.5)"),
        });
    }
    let n = bar_u.len();
    let mut pad_u = vec![0.0; n + 2 * GHOST];
    let mut pad_v = vec![0.0; n + 2 * GHOST];
    extend_into(bar_u, &mut pad_u);
    extend_into(bar_v, &mut pad_v);
    let mut tld_u = vec![0.0; n + 2 * GHOST];
    let mut tld_v = vec![0.0; n + 2 * GHOST];
    averaging_kernel(&pad_u, &pad_v, alpha, &mut tld_u, &mut tld_v);
    Ok((
        tld_u[GHOST..GHOST + n].to_vec(),
        tld_v[GHOST..GHOST + n].to_vec(),
    ))
}

/// Centered correction stage: adds `r/2` times the centered difference of
/// the flux corrections, evaluated on `state_n` (the pre-step values), to
/// the averaged fields, and advances the time bookkeeping by one step of
/// size `r*h`. Aborts with a blow-up diagnostic carrying `state_n` if any
/// result exceeds `blowup_cap` or stops being finite.
pub fn centered_step(
    state_n: &StateField,
    tld_u: &[f64],
    tld_v: &[f64],
    system: &SystemDefinition,
    r: f64,
    blowup_cap: f64,
) -> Result<StateField, Error> {
    let n = state_n.n_cells();
    if tld_u.len() != n || tld_v.len() != n {
        return Err(Error::config(format!(
            "averaged fields have length {} / {}, expected {n}",
            tld_u.len(),
            tld_v.len()
        )));
    }
    let mut ext_u = vec![0.0; n + 2 * GHOST];
    let mut ext_v = vec![0.0; n + 2 * GHOST];
    let mut pad_tu = vec![0.0; n + 2 * GHOST];
    let mut pad_tv = vec![0.0; n + 2 * GHOST];
    extend_into(state_n.u(), &mut ext_u);
    extend_into(state_n.v(), &mut ext_v);
    extend_into(tld_u, &mut pad_tu);
    extend_into(tld_v, &mut pad_tv);
    let mut out_u = vec![0.0; n];
    let mut out_v = vec![0.0; n];
    centered_kernel(
        &ext_u, &ext_v, &pad_tu, &pad_tv, system, r, &mut out_u, &mut out_v,
    );
    let new_t = state_n.t() + r * state_n.grid().h();
    match check_output(&out_u, &out_v, blowup_cap) {
        Ok(_) => StateField::at_time(
            state_n.grid().clone(),
            out_u,
            out_v,
            new_t,
            state_n.step_index() + 1,
        ),
        Err(_) => Err(blowup_error(
            &out_u,
            &out_v,
            new_t,
            state_n.clone(),
            state_n.step_index() + 1,
        )),
    }
}

/// Builds the blow-up / non-finite diagnostic from an offending output.
fn blowup_error(
    out_u: &[f64],
    out_v: &[f64],
    t: f64,
    last_valid: StateField,
    step: u64,
) -> Error {
    // Distinguish "left the finite range" from "finite but past the cap":
    // the former is reported per cell, the latter as a blow-up with maxima.
    for (cell, &x) in out_u.iter().enumerate() {
        if !x.is_finite() {
            return Error::NonFinite {
                quantity: "u",
                cell,
                step,
                t,
            };
        }
    }
    for (cell, &x) in out_v.iter().enumerate() {
        if !x.is_finite() {
            return Error::NonFinite {
                quantity: "v",
                cell,
                step,
                t,
            };
        }
    }
    let max_u = out_u.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let max_v = out_v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    Error::Blowup {
        t,
        max_u,
        max_v,
        last_valid: Box::new(last_valid),
    }
}

/// One complete step using reusable scratch buffers. Consumes the state and
/// recycles its allocations. See [`full_step`] for the allocating wrapper;
/// the two produce bit-identical results.
pub fn advance(
    state: StateField,
    system: &SystemDefinition,
    r: f64,
    alpha: f64,
    blowup_cap: f64,
    bufs: &mut WorkBuffers,
) -> Result<StateField, Error> {
    let n = state.n_cells();
    bufs.ensure(n);
    let (grid, mut u, mut v, t, step) = state.into_parts();
    extend_into(&u, &mut bufs.ext_u);
    extend_into(&v, &mut bufs.ext_v);

    if let Err(cell) = velocity_kernel(&bufs.ext_u, &bufs.ext_v, system, &mut bufs.phi) {
        return Err(Error::NonFinite {
            quantity: "phi",
            cell,
            step,
            t,
        });
    }
    if let Some((cell, r_phi)) = cfl_scan(&bufs.phi, r) {
        return Err(Error::CflViolation { cell, step, r_phi });
    }

    transport_kernel(
        &bufs.ext_u,
        &bufs.ext_v,
        &bufs.phi,
        r,
        &mut bufs.bar_u,
        &mut bufs.bar_v,
    );
    pad_inner_ghosts(&mut bufs.bar_u, n);
    pad_inner_ghosts(&mut bufs.bar_v, n);

    averaging_kernel(
        &bufs.bar_u,
        &bufs.bar_v,
        alpha,
        &mut bufs.tld_u,
        &mut bufs.tld_v,
    );

    centered_kernel(
        &bufs.ext_u,
        &bufs.ext_v,
        &bufs.tld_u,
        &bufs.tld_v,
        system,
        r,
        &mut u,
        &mut v,
    );

    let new_t = t + r * grid.h();
    match check_output(&u, &v, blowup_cap) {
        Ok(_) => StateField::at_time(grid, u, v, new_t, step + 1),
        Err(_) => {
            let last_valid = StateField::at_time(
                grid.clone(),
                bufs.ext_u[GHOST..GHOST + n].to_vec(),
                bufs.ext_v[GHOST..GHOST + n].to_vec(),
                t,
                step,
            )?;
            Err(blowup_error(&u, &v, new_t, last_valid, step + 1))
        }
    }
}

/// One complete step of the scheme: velocity, transport, averaging,
/// centered correction. Equals the composition of the stand-alone stage
/// functions bit for bit.
///
/// The step ratio comes from `params`: a fixed `r` is used as-is, while the
/// automatic policy derives `r = cfl_target / max|phi(state)|` from the
/// current state.
pub fn full_step(
    state: &StateField,
    system: &SystemDefinition,
    params: &SchemeParams,
) -> Result<StateField, Error> {
    params.validate()?;
    let r = match params.step_ratio {
        StepRatio::Fixed { r } => r,
        StepRatio::Auto { cfl_target } => {
            let phi = compute_velocity(state, system)?;
            let max_phi = phi.iter().fold(0.0f64, |m, &p| m.max(p.abs()));
            resolve_auto_r(cfl_target, max_phi)
        }
    };
    let mut bufs = WorkBuffers::new(state.n_cells());
    advance(
        state.clone(),
        system,
        r,
        params.alpha,
        params.blowup_cap,
        &mut bufs,
    )
}

/// Initial step ratio of the automatic policy. With an all-zero velocity
/// field any ratio is CFL-admissible; the target itself is used then.
pub(crate) fn resolve_auto_r(cfl_target: f64, max_phi: f64) -> f64 {
    if max_phi > 0.0 {
        cfl_target / max_phi
    } else {
        cfl_target
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    const TOL: f64 = 1e-14;

    fn state_on(n: usize, u: Vec<f64>, v: Vec<f64>) -> StateField {
        let g = GridSpec::with_cell_count(0.0, n as f64, n).unwrap();
        StateField::new(g, u, v).unwrap()
    }

    #[test]
    fn transport_moves_quarter_cell() {
        // A unit pulse shifted by r*phi = 0.25 donates a quarter to its
        // right neighbour and keeps the rest.
        let s = state_on(3, vec![0.0, 1.0, 0.0], vec![0.0; 3]);
        let phi = vec![1.0; 3];
        let (bar_u, _) = transport_step(&s, &phi, 0.25).unwrap();
        let expect = [0.0, 0.75, 0.25];
        for (b, e) in bar_u.iter().zip(expect) {
            assert!((b - e).abs() < TOL, "{bar_u:?}");
        }
    }

    #[test]
    fn transport_all_positive_donor_weight() {
        // For positive data moving right at phi = u with r = 1, a cell
        // receives r*u^2 from its left neighbour: 0.8^2 = 0.64.
        let s = state_on(3, vec![0.8, 0.0, 0.0], vec![0.0; 3]);
        let phi = vec![0.8, 0.0, 0.0];
        let (bar_u, _) = transport_step(&s, &phi, 1.0).unwrap();
        assert!((bar_u[0] - 0.8).abs() < TOL, "constant edge stays");
        assert!((bar_u[1] - 0.64).abs() < TOL);
        assert!(bar_u[2].abs() < TOL);
    }

    #[test]
    fn transport_rejects_cfl_violation() {
        let s = state_on(3, vec![0.0, 1.0, 0.0], vec![0.0; 3]);
        let phi = vec![0.0, 3.0, 0.0];
        match transport_step(&s, &phi, 0.5) {
            Err(Error::CflViolation { cell, r_phi, .. }) => {
                assert_eq!(cell, 1);
                assert!((r_phi - 1.5).abs() < TOL);
            }
            other => panic!("expected CFL violation, got {other:?}"),
        }
    }

    #[test]
    fn transport_conserves_sums_with_flat_edges() {
        // Compact data: edge cells are zero, so ghost traffic cancels.
        let u = vec![0.0, 0.3, -0.8, 0.5, 0.0];
        let v = vec![0.0, 1.0, 2.0, -1.0, 0.0];
        let s = state_on(5, u.clone(), v.clone());
        let phi = vec![0.0, 0.3, -0.8, 0.5, 0.0];
        let (bar_u, bar_v) = transport_step(&s, &phi, 0.9).unwrap();
        let before: f64 = u.iter().sum();
        let after: f64 = bar_u.iter().sum();
        assert!((before - after).abs() < TOL);
        let before_v: f64 = v.iter().sum();
        let after_v: f64 = bar_v.iter().sum();
        assert!((before_v - after_v).abs() < TOL);
    }

    #[test]
    fn averaging_conserves_sums_for_any_data() {
        let bar_u = vec![1.0, -2.0, 5.0, 0.25, 3.0];
        let bar_v = vec![0.5, 0.5, -4.0, 1.0, 2.0];
        let (tld_u, tld_v) = averaging_step(&bar_u, &bar_v, 0.2).unwrap();
        let su: f64 = bar_u.iter().sum();
        let tu: f64 = tld_u.iter().sum();
        assert!((su - tu).abs() < 1e-13);
        let sv: f64 = bar_v.iter().sum();
        let tv: f64 = tld_v.iter().sum();
        assert!((sv - tv).abs() < 1e-13);
    }

    #[test]
    fn averaging_with_zero_alpha_is_identity() {
        let bar_u = vec![1.0, -2.0, 5.0];
        let bar_v = vec![0.5, 0.5, -4.0];
        let (tld_u, tld_v) = averaging_step(&bar_u, &bar_v, 0.0).unwrap();
        assert_eq!(tld_u, bar_u);
        assert_eq!(tld_v, bar_v);
    }

    #[test]
    fn averaging_rejects_bad_alpha() {
        let d = vec![0.0; 3];
        assert!(averaging_step(&d, &d, 0.5).is_err());
        assert!(averaging_step(&d, &d, -0.1).is_err());
    }

    #[test]
    fn centered_step_uses_pre_step_values() {
        // With the cubic system, A = v: the correction to u at cell i is
        // (r/2) * (v_{i+1} - v_{i-1}) from the *original* state even when
        // the averaged fields differ.
        let sys = SystemDefinition::keyfitz_kranzer();
        let s = state_on(3, vec![0.0; 3], vec![1.0, 2.0, 5.0]);
        let tld_u = vec![10.0, 10.0, 10.0];
        let tld_v = vec![0.0; 3];
        let next = centered_step(&s, &tld_u, &tld_v, &sys, 0.5, 1e12).unwrap();
        // cell 1: 10 + 0.25 * (v_2 - v_0) = 10 + 0.25 * 4
        assert!((next.u()[1] - 11.0).abs() < TOL);
        // cell 0: ghost v = v_0, so 10 + 0.25 * (v_1 - v_0) = 10.25
        assert!((next.u()[0] - 10.25).abs() < TOL);
        assert_eq!(next.step_index(), 1);
        assert!((next.t() - 0.5).abs() < TOL);
    }

    #[test]
    fn centered_step_blowup_carries_last_valid_state() {
        let sys = SystemDefinition::keyfitz_kranzer();
        let s = state_on(3, vec![0.0; 3], vec![0.0, 1e9, 0.0]);
        let tld = vec![0.0; 3];
        match centered_step(&s, &tld, &tld, &sys, 0.5, 1e6) {
            Err(Error::Blowup { last_valid, .. }) => {
                assert_eq!(last_valid.v(), s.v());
            }
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn full_step_equals_stage_composition_bitwise() {
        let sys = SystemDefinition::keyfitz_kranzer();
        let u = vec![1.5, 1.2, -0.3, -2.0, -2.0, 0.7];
        let v = vec![0.0, 0.4, 1.4, 1.4, -0.2, 0.0];
        let s = state_on(6, u, v);
        let params = SchemeParams::fixed(0.3, 1.0).with_alpha(0.2);

        let composed = {
            let phi = compute_velocity(&s, &sys).unwrap();
            let (bu, bv) = transport_step(&s, &phi, 0.3).unwrap();
            let (tu, tv) = averaging_step(&bu, &bv, 0.2).unwrap();
            centered_step(&s, &tu, &tv, &sys, 0.3, params.blowup_cap).unwrap()
        };
        let fused = full_step(&s, &sys, &params).unwrap();

        for i in 0..6 {
            assert_eq!(composed.u()[i].to_bits(), fused.u()[i].to_bits());
            assert_eq!(composed.v()[i].to_bits(), fused.v()[i].to_bits());
        }
    }

    #[test]
    fn full_step_without_averaging_or_corrections_is_pure_transport() {
        // The pressureless system has A = B = 0; with alpha = 0 the whole
        // step must equal the transport stage bit for bit.
        let sys = SystemDefinition::korchinski();
        let u = vec![0.9, 0.1, -0.4, 0.6];
        let v = vec![1.0, 2.0, 0.5, 0.0];
        let s = state_on(4, u, v);
        let params = SchemeParams::fixed(0.45, 1.0);

        let phi = compute_velocity(&s, &sys).unwrap();
        let (bu, bv) = transport_step(&s, &phi, 0.45).unwrap();
        let next = full_step(&s, &sys, &params).unwrap();
        for i in 0..4 {
            assert_eq!(next.u()[i].to_bits(), bu[i].to_bits());
            assert_eq!(next.v()[i].to_bits(), bv[i].to_bits());
        }
    }

    #[test]
    fn constant_state_is_a_fixed_point() {
        // Constant fields are exact steady solutions; every stage must
        // preserve them to rounding.
        let sys = SystemDefinition::keyfitz_kranzer();
        let s = state_on(5, vec![1.5; 5], vec![-0.7; 5]);
        let params = SchemeParams::fixed(0.4, 1.0).with_alpha(0.3);
        let next = full_step(&s, &sys, &params).unwrap();
        for i in 0..5 {
            assert!((next.u()[i] - 1.5).abs() < TOL);
            assert!((next.v()[i] + 0.7).abs() < TOL);
        }
    }
}
