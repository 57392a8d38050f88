use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::{HBAR, SPEED_OF_LIGHT};

/// Amplifier noise figure `2 n_pi (g - 1) / g`.
pub fn noise_figure(g_oa: f64, n_pi: f64) -> Result<f64> {
    if !(g_oa > 1.0) {
        return Err(domain(format!("gain must exceed 1, got {g_oa}")));
    }
    if !(n_pi >= 1.0) {
        return Err(domain(format!("population inversion must be >= 1, got {n_pi}")));
    }
    Ok(2.0 * n_pi * (g_oa - 1.0) / g_oa)
}

/// Round-trip angular frequency `2 pi c / (n_eff l_r)` of a ring.
pub fn round_trip_frequency(l_r: f64, n_eff: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / (n_eff * l_r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseChain {
    pub g_oa: f64,
    pub n_pi: f64,
    /// Optical mode damping rate, 1/s.
    pub gamma_om: f64,
    /// Mean photon number per mode.
    pub n_p: f64,
    /// Carrier wavelength, m.
    pub lambda_l: f64,
    /// Filter bandwidth, m.
    pub delta_lambda: f64,
    /// Ring length, m.
    pub l_r: f64,
    pub n_eff: f64,
    /// Optical carrier angular frequency, rad/s.
    pub omega_p: f64,
}

impl NoiseChain {
    /// The fiber-ring values: 1550 nm carrier, 0.2 nm filter, 553.88 m ring,
    /// gain 1600 with inversion 1.25, 2e6 photons per mode and mode damping
    /// `0.1 omega_r`.
    pub fn fiber_ring(omega_r: f64) -> Self {
        let lambda_l = 1550e-9;
        Self {
            g_oa: 1600.0,
            n_pi: 1.25,
            gamma_om: 0.1 * omega_r,
            n_p: 2e6,
            lambda_l,
            delta_lambda: 0.2e-9,
            l_r: 553.88,
            n_eff: 1.47,
            omega_p: 2.0 * PI * SPEED_OF_LIGHT / lambda_l,
        }
    }

    pub fn validate(&self) -> Result<()> {
        noise_figure(self.g_oa, self.n_pi)?;
        let positive = [
            ("gamma_om", self.gamma_om),
            ("n_p", self.n_p),
            ("lambda_l", self.lambda_l),
            ("delta_lambda", self.delta_lambda),
            ("l_r", self.l_r),
            ("n_eff", self.n_eff),
            ("omega_p", self.omega_p),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseOutputs {
    pub alpha_nf: f64,
    /// Effective phase-noise strength, 1/s.
    pub t_n: f64,
    /// Number of modes inside the filter band.
    pub n_r: f64,
    /// Amplifier output power, W.
    pub p_oa: f64,
}

pub fn effective_noise(chain: &NoiseChain) -> Result<NoiseOutputs> {
    chain.validate()?;
    let alpha_nf = noise_figure(chain.g_oa, chain.n_pi)?;
    let n_r = chain.l_r * chain.delta_lambda / (chain.lambda_l * chain.lambda_l);
    Ok(NoiseOutputs {
        alpha_nf,
        t_n: chain.gamma_om * alpha_nf * chain.g_oa / (4.0 * chain.n_p),
        n_r,
        p_oa: chain.gamma_om * HBAR * chain.omega_p * n_r * chain.n_p,
    })
}
