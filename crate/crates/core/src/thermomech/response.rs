use super::model::cw_equilibrium;
use super::{AbsorptionModel, MechParams};
use crate::error::{domain, Result};

/// Thermal phase lag angle `atan(kappa / omega)`.
pub fn theta_t(kappa_m: f64, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(domain(format!("omega must be positive, got {omega}")));
    }
    Ok((kappa_m / omega).atan())
}

/// Damping added by the average intensity, `k_a1 theta_fh l0 a_h0 / (2 m omega^2)`.
pub fn gamma_h0(mech: &MechParams, abs: &AbsorptionModel, l0: f64) -> f64 {
    abs.k_a1 * mech.theta_fh * l0 * abs.a_h0 / (2.0 * mech.m_m * mech.omega_m * mech.omega_m)
}

/// Damping added by mode-locked pulses, `-(2 omega_m / t_n) gamma_h0`.
pub fn gamma_h1(mech: &MechParams, abs: &AbsorptionModel, l0: f64, t_n: f64) -> Result<f64> {
    if !(t_n > 0.0) {
        return Err(domain(format!("t_n must be positive, got {t_n}")));
    }
    Ok(-(2.0 * mech.omega_m / t_n) * gamma_h0(mech, abs, l0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    pub omega_eff: f64,
    pub gamma_eff: f64,
}

impl EffectiveParams {
    pub fn unstable(&self) -> bool {
        self.gamma_eff < 0.0
    }
}

/// `omega_m + (kappa_m / omega_m)(g0 + g1)` and `gamma_m + g0 + g1`.
pub fn effective_params(mech: &MechParams, gamma_h0: f64, gamma_h1: f64) -> EffectiveParams {
    let added = gamma_h0 + gamma_h1;
    EffectiveParams {
        omega_eff: mech.omega_m + mech.kappa_m / mech.omega_m * added,
        gamma_eff: mech.gamma_m + added,
    }
}

/// Small-signal response about the cw equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearResponse {
    /// Added damping rate, 1/s.
    pub delta_gamma: f64,
    /// Shift of the undamped angular frequency, rad/s, including the static
    /// shift `theta_ph T_R` of the equilibrium.
    pub delta_omega: f64,
    /// Loop gain `g`: acceleration per unit displacement carried through the
    /// thermal path at zero frequency times `kappa_m`, 1/s^3.
    pub loop_gain: f64,
    /// Frequency at which the thermal transfer function was evaluated.
    pub omega_drive: f64,
}

impl LinearResponse {
    pub fn gamma_eff(&self, mech: &MechParams) -> f64 {
        mech.gamma_m + self.delta_gamma
    }

    /// Angular frequency of the free, damped oscillation.
    pub fn ringdown_frequency(&self, mech: &MechParams) -> f64 {
        let w = mech.omega_m + self.delta_omega;
        let g = self.gamma_eff(mech);
        (w * w - g * g).sqrt()
    }
}

/// Added damping and frequency shift from the thermal transfer function.
///
/// A displacement `x0 cos(w t)` heats the mirror at rate
/// `l0 a_h0 k x0 cos(w t)` with the local slope `k = k_a1 + 2 k_a2 x_eq`.
/// The temperature follows through `1 / (kappa_m + i w)` and acts back as an
/// acceleration `c T` with `c = theta_fh / m_m - 2 omega_0 theta_ph x_eq`.
/// With `g = c l0 a_h0 k` the quadrature part is a damping
/// `g / (2 (kappa_m^2 + w^2))` and the in-phase part shifts the squared
/// frequency by `-g kappa_m / (kappa_m^2 + w^2)`.
pub fn linear_response_oracle(
    mech: &MechParams,
    abs: &AbsorptionModel,
    l0: f64,
    omega_drive: f64,
) -> Result<LinearResponse> {
    mech.validate()?;
    abs.validate()?;
    if !(omega_drive > 0.0) {
        return Err(domain("omega_drive must be positive"));
    }
    let eq = cw_equilibrium(mech, abs, l0)?;
    let omega0 = mech.omega_m + mech.theta_ph * eq.t_r;
    let c = mech.theta_fh / mech.m_m - 2.0 * omega0 * mech.theta_ph * eq.x;
    let g = c * l0 * abs.a_h0 * abs.slope(eq.x);
    let denom = mech.kappa_m * mech.kappa_m + omega_drive * omega_drive;
    let delta_gamma = g / (2.0 * denom);
    let omega_sq = omega0 * omega0 - g * mech.kappa_m / denom;
    Ok(LinearResponse {
        delta_gamma,
        delta_omega: omega_sq.sqrt() - mech.omega_m,
        loop_gain: g,
        omega_drive,
    })
}

/// [`linear_response_oracle`] with the thermal transfer function evaluated
/// at the complex frequency `-gamma_eff + i omega` of the free oscillation
/// itself, iterated to self-consistency from `omega_drive`.
///
/// This is the exact root of the linearized three-variable system; it
/// differs from the real-frequency projection at second order in the
/// coupling, by terms of relative size `kappa_m gamma_eff / omega^2`.
pub fn self_consistent_response(
    mech: &MechParams,
    abs: &AbsorptionModel,
    l0: f64,
    omega_drive: f64,
) -> Result<LinearResponse> {
    let first = linear_response_oracle(mech, abs, l0, omega_drive)?;
    let eq = cw_equilibrium(mech, abs, l0)?;
    let omega0 = mech.omega_m + mech.theta_ph * eq.t_r;
    let g = first.loop_gain;
    let k = mech.kappa_m;
    let (mut decay, mut w) = (mech.gamma_m + first.delta_gamma, omega_drive);
    let mut out = first;
    for _ in 0..200 {
        let denom = (k - decay) * (k - decay) + w * w;
        let delta_gamma = g / (2.0 * denom);
        let omega_sq = omega0 * omega0 - g * (k - 2.0 * decay) / denom;
        let next_decay = mech.gamma_m + delta_gamma;
        let next_w = (omega_sq - next_decay * next_decay).sqrt();
        out = LinearResponse {
            delta_gamma,
            delta_omega: omega_sq.sqrt() - mech.omega_m,
            loop_gain: g,
            omega_drive: next_w,
        };
        let done = (next_w - w).abs() <= 1e-15 * w && (next_decay - decay).abs() <= 1e-13 * w;
        decay = next_decay;
        w = next_w;
        if done {
            break;
        }
    }
    Ok(out)
}

/// Intensity at which the effective damping vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Exists(f64),
    /// The added damping is stabilizing for every intensity.
    Absent,
}

impl Threshold {
    pub fn value(&self) -> Option<f64> {
        match self {
            Threshold::Exists(v) => Some(*v),
            Threshold::Absent => None,
        }
    }
}

fn threshold_from_slope(gamma_m: f64, per_intensity: f64) -> Threshold {
    if per_intensity < 0.0 {
        Threshold::Exists(-gamma_m / per_intensity)
    } else {
        Threshold::Absent
    }
}

/// Self-excited oscillation threshold, `gamma_m + gamma_h0 = 0`.
pub fn seo_threshold(mech: &MechParams, abs: &AbsorptionModel) -> Threshold {
    threshold_from_slope(mech.gamma_m, gamma_h0(mech, abs, 1.0))
}

/// Mechanical mode-locking threshold, `gamma_m + gamma_h0 + gamma_h1 = 0`.
pub fn mml_threshold(mech: &MechParams, abs: &AbsorptionModel, t_n: f64) -> Result<Threshold> {
    let per = gamma_h0(mech, abs, 1.0) + gamma_h1(mech, abs, 1.0, t_n)?;
    Ok(threshold_from_slope(mech.gamma_m, per))
}
