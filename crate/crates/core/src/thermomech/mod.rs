//! Bolometric optomechanics of the suspended mirror.
//!
//! The mirror is a damped oscillator whose spring constant and static force
//! both depend on its temperature rise `T_R` above the base:
//!
//! ```text
//! x'' + 2 gamma_m x' + (omega_m + theta_ph T_R)^2 x = theta_fh T_R / m_m
//! T_R' = L_H(t) A_H(x) - kappa_m T_R
//! A_H(x) = a_h0 (1 + k_a1 x + k_a2 x^2)
//! ```
//!
//! [`simulate`] integrates the full nonlinear model, [`linear_response_oracle`]
//! gives the small-signal damping and frequency shift, and the threshold
//! functions locate the intensities where the effective damping vanishes.

mod model;
mod noise;
mod response;
mod ringdown;
mod stability;

pub use model::{cw_equilibrium, simulate, simulate_sampled};
pub use noise::{effective_noise, noise_figure, round_trip_frequency, NoiseChain, NoiseOutputs};
pub use response::{
    effective_params, gamma_h0, gamma_h1, linear_response_oracle, mml_threshold, self_consistent_response, seo_threshold,
    theta_t, EffectiveParams, LinearResponse, Threshold,
};
pub use ringdown::{ringdown_extract, ringdown_extract_about, RingdownFit};
pub use stability::{forced_initial_state, growth_rate, search_threshold, GrowthOptions};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechParams {
    /// Effective mass, kg.
    pub m_m: f64,
    /// Mechanical angular frequency, rad/s.
    pub omega_m: f64,
    /// Intrinsic damping rate, 1/s.
    pub gamma_m: f64,
    /// Frequency-temperature coefficient, rad/(s K).
    pub theta_ph: f64,
    /// Force-temperature coefficient, N/K.
    pub theta_fh: f64,
    /// Thermal decay rate, 1/s.
    pub kappa_m: f64,
}

impl MechParams {
    /// Sign structure of an aluminum-coated mirror: heating softens the
    /// spring and pushes the mirror toward negative `x`.
    ///
    /// Only the 415 kHz mode frequency and `kappa_m = 0.01 omega_m` are
    /// measured values. The mass, quality factor and thermal coefficients are
    /// placeholder scales to be replaced by a device calibration.
    pub fn aluminum_device() -> Self {
        let omega_m = 2.0 * std::f64::consts::PI * 415e3;
        Self {
            m_m: 1e-12,
            omega_m,
            gamma_m: 1e-3 * omega_m,
            theta_ph: -1e2,
            theta_fh: -1e-9,
            kappa_m: 0.01 * omega_m,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m_m > 0.0) || !(self.omega_m > 0.0) {
            return Err(domain("mass and mechanical frequency must be positive"));
        }
        if !(self.gamma_m >= 0.0 && self.gamma_m < 0.1 * self.omega_m) {
            return Err(domain(format!(
                "gamma_m = {} must lie in [0, 0.1 omega_m)",
                self.gamma_m
            )));
        }
        if !(self.kappa_m >= 0.0) {
            return Err(domain("kappa_m must be nonnegative"));
        }
        if !self.theta_ph.is_finite() || !self.theta_fh.is_finite() {
            return Err(domain("thermal coefficients must be finite"));
        }
        Ok(())
    }

    /// Checks the aluminum-device sign convention `theta_fh < 0`, `theta_ph < 0`.
    pub fn check_aluminum_signs(&self) -> Result<()> {
        if self.theta_fh < 0.0 && self.theta_ph < 0.0 {
            Ok(())
        } else {
            Err(domain(format!(
                "aluminum device requires negative thermal coefficients, got theta_fh = {}, theta_ph = {}",
                self.theta_fh, self.theta_ph
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorptionModel {
    /// Heating per unit intensity, K/(s W).
    pub a_h0: f64,
    /// Linear coefficient, 1/m. Negative on blue detuning, positive on red.
    pub k_a1: f64,
    /// Quadratic coefficient, 1/m^2.
    pub k_a2: f64,
}

impl AbsorptionModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.a_h0 > 0.0) {
            return Err(domain(format!("a_h0 must be positive, got {}", self.a_h0)));
        }
        if !self.k_a1.is_finite() || !self.k_a2.is_finite() {
            return Err(domain("absorption coefficients must be finite"));
        }
        Ok(())
    }

    pub fn absorption(&self, x: f64) -> f64 {
        self.a_h0 * (1.0 + self.k_a1 * x + self.k_a2 * x * x)
    }

    /// Slope `dA_H/dx / a_h0` at `x`.
    pub fn slope(&self, x: f64) -> f64 {
        self.k_a1 + 2.0 * self.k_a2 * x
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveMode {
    /// Constant intensity.
    Cw,
    /// Free-running pulse train `T_beta(omega_pulse t + phase)`.
    Comb { beta: f64, omega_pulse: f64, phase: f64 },
    /// Pulse train locked to the mirror motion.
    ///
    /// The pulse position follows the instantaneous oscillation phase of
    /// `x` about its cw equilibrium and is placed at the absorption minimum,
    /// shifted by `phase_offset`. The neighbor correlation of the pulse
    /// spectrum is `I1/I0(coupling * a / t_n)` for oscillation amplitude `a`,
    /// clipped to `exp(-beta_floor)`.
    ClosedLoop { coupling: f64, beta_floor: f64, t_n: f64, phase_offset: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityDrive {
    /// Average intensity, W.
    pub l0: f64,
    pub mode: DriveMode,
}

impl IntensityDrive {
    pub fn cw(l0: f64) -> Self {
        Self { l0, mode: DriveMode::Cw }
    }

    pub fn comb(l0: f64, beta: f64, omega_pulse: f64, phase: f64) -> Self {
        Self { l0, mode: DriveMode::Comb { beta, omega_pulse, phase } }
    }

    /// Mirror-locked pulse train with coupling `2 omega_m |k_a1|`.
    pub fn mechanical_lock(mech: &MechParams, abs: &AbsorptionModel, l0: f64, t_n: f64) -> Self {
        Self {
            l0,
            mode: DriveMode::ClosedLoop {
                coupling: 2.0 * mech.omega_m * abs.k_a1.abs(),
                beta_floor: 1e-3,
                t_n,
                phase_offset: 0.0,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.l0 >= 0.0) || !self.l0.is_finite() {
            return Err(domain(format!("l0 must be nonnegative, got {}", self.l0)));
        }
        match self.mode {
            DriveMode::Cw => Ok(()),
            DriveMode::Comb { beta, omega_pulse, phase } => {
                if !(beta > 0.0) || !omega_pulse.is_finite() || !phase.is_finite() {
                    Err(domain("comb drive needs beta > 0 and finite frequency and phase"))
                } else {
                    Ok(())
                }
            }
            DriveMode::ClosedLoop { coupling, beta_floor, t_n, phase_offset } => {
                if !(coupling >= 0.0) || !(beta_floor > 0.0) || !(t_n > 0.0) || !phase_offset.is_finite() {
                    Err(domain("closed-loop drive needs coupling >= 0, beta_floor > 0 and t_n > 0"))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Displacement (m), velocity (m/s) and temperature rise (K).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MirrorState {
    pub x: f64,
    pub v: f64,
    pub t_r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Halt {
    /// `|k_a1 x|` exceeded one; the absorption expansion no longer holds.
    AbsorptionRange { time: f64, x: f64 },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MirrorTrajectory {
    pub time: Vec<f64>,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub t_r_rel: Vec<f64>,
    /// Instantaneous intensity `L_H`, W.
    pub drive: Vec<f64>,
    pub halt: Option<Halt>,
}

impl MirrorTrajectory {
    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    pub fn last_state(&self) -> Option<MirrorState> {
        let i = self.time.len().checked_sub(1)?;
        Some(MirrorState { x: self.x[i], v: self.v[i], t_r: self.t_r_rel[i] })
    }
}
