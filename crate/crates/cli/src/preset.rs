//! Reference configurations built from the published device values.
//!
//! Measured values carry a short note on where they come from. Device
//! constants that were never measured are placeholders of a plausible scale
//! and must be replaced by a calibration before the results mean anything.

use crate::config::Experiment;

const MML: &str = r#"# Mechanical mode locking of a bolometrically coupled mirror.
experiment = "mml"
seed = 0
output_dir = "output/mml"

[parameters]
# mechanical mode of the mirror; the 368.2 kHz mode is the other measured one
omega_m = "415 kHz"
# thermal relaxation rate relative to omega_m
kappa_ratio = 0.01

# Placeholders: not measured, replace with a device calibration.
m_m = "1 pg"
gamma_m = "2607.5 1/s"
theta_fh = "-1 nN/K"
theta_ph = "-100 rad/s/K"
a_h0 = "1e6 K/s/W"
# blue detuning of the short cavity
k_a1 = "-1e7 1/m"
k_a2 = "0 1/m^2"

# Fiber ring and amplifier.
# amplifier gain
g_oa = 1600
# population inversion factor
n_pi = 1.25
# mean photon number per mode
n_p = 2e6
# optical mode damping relative to the round-trip frequency
gamma_om_ratio = 0.1
# carrier wavelength
lambda_l = "1550 nm"
# filter bandwidth
delta_lambda = "0.2 nm"
# ring length
l_r = "553.88 m"
# effective index of the fiber
n_eff = 1.47
# round-trip frequency; 2.48 MHz for the short-ring variant
omega_r = "371.3 kHz"
"#;

const ADLER: &str = r#"# Injection locking of the pulse train to the amplitude modulator.
experiment = "adler"
seed = 0
output_dir = "output/adler"

[parameters]
# round-trip frequency of the long ring
omega_r = "371.3 kHz"
# modulation offset used for the locking calibration
detuning = "100 Hz"
# modulation amplitude at the edge of locking
v_am0 = "0.156 V"
# amplitude sweep from a quarter to twice the locking amplitude
v_am_start = 0.25
v_am_stop = 2.0
v_am_points = 8
duration = "0.5 s"
sample_rate = "1048576 Hz"
band_width = "3 kHz"
"#;

/// Text of the reference configuration for `experiment`, or `None` when
/// there is no measured data to build one from.
pub fn reference_config(experiment: Experiment) -> Option<&'static str> {
    match experiment {
        Experiment::Mml => Some(MML),
        Experiment::Adler => Some(ADLER),
        _ => None,
    }
}
