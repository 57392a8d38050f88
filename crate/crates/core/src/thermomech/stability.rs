use std::f64::consts::PI;

use super::model::{cw_equilibrium, simulate_sampled};
use super::ringdown::ringdown_extract_about;
use super::{AbsorptionModel, DriveMode, IntensityDrive, MechParams, MirrorState};
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthOptions {
    /// Initial displacement about equilibrium, as `|k_a1 x|`.
    pub kick: f64,
    /// Simulated duration in units of `1 / gamma_m`.
    pub decay_times: f64,
    pub steps_per_period: usize,
    pub record_every: usize,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        Self { kick: 1e-7, decay_times: 20.0, steps_per_period: 64, record_every: 4 }
    }
}

/// Equilibrium displaced by `dx`, with the temperature already carrying the
/// in-phase part of its forced response so the slow thermal mode is barely
/// excited.
pub fn forced_initial_state(
    mech: &MechParams,
    abs: &AbsorptionModel,
    drive: &IntensityDrive,
    dx: f64,
) -> Result<MirrorState> {
    let eq = cw_equilibrium(mech, abs, drive.l0)?;
    let mut heating = drive.l0 * abs.a_h0 * abs.slope(eq.x);
    if let DriveMode::ClosedLoop { coupling, t_n, .. } = drive.mode {
        let sign = if abs.slope(eq.x) > 0.0 { 1.0 } else { -1.0 };
        heating -= sign * coupling / t_n * drive.l0 * abs.absorption(eq.x);
    }
    let w = mech.omega_m;
    let k = mech.kappa_m;
    Ok(MirrorState {
        x: eq.x + dx,
        v: 0.0,
        t_r: eq.t_r + heating * dx * k / (k * k + w * w),
    })
}

/// Fitted amplitude growth rate (negative damping) of a small oscillation
/// about the cw equilibrium. Positive means the oscillation grows.
pub fn growth_rate(
    mech: &MechParams,
    abs: &AbsorptionModel,
    drive: &IntensityDrive,
    opts: &GrowthOptions,
) -> Result<f64> {
    if matches!(drive.mode, DriveMode::Comb { .. }) {
        return Err(domain("growth rate is defined for cw and locked drives only"));
    }
    if !(mech.gamma_m > 0.0) {
        return Err(domain("growth rate runs are scaled by gamma_m > 0"));
    }
    let dx = if abs.k_a1 != 0.0 { opts.kick / abs.k_a1.abs() } else { 1e-12 };
    let init = forced_initial_state(mech, abs, drive, dx)?;
    let eq = cw_equilibrium(mech, abs, drive.l0)?;
    let dt = 2.0 * PI / (mech.omega_m * opts.steps_per_period as f64);
    let t_end = opts.decay_times / mech.gamma_m;
    let traj = simulate_sampled(mech, abs, drive, init, t_end, dt, opts.record_every)?;
    let fit = ringdown_extract_about(&traj, eq.x)?;
    Ok(-fit.gamma)
}

/// Bisects on the sign of [`growth_rate`] for the intensity where the
/// oscillation turns from decaying to growing. `lo` must decay and `hi`
/// must grow.
pub fn search_threshold<F>(
    mech: &MechParams,
    abs: &AbsorptionModel,
    drive_at: F,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
    opts: &GrowthOptions,
) -> Result<f64>
where
    F: Fn(f64) -> IntensityDrive,
{
    if !(lo >= 0.0 && hi > lo && rel_tol > 0.0) {
        return Err(domain("need 0 <= lo < hi and rel_tol > 0"));
    }
    let rate = |l0: f64| growth_rate(mech, abs, &drive_at(l0), opts);
    if rate(lo)? > 0.0 || rate(hi)? < 0.0 {
        return Err(domain(format!("[{lo}, {hi}] does not bracket the threshold")));
    }
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if rate(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
