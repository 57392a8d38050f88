//! Phase synchronization of the pulse train to an external modulation.
//!
//! The relative phase obeys `dphi/dtau + sin(phi) = i_b` in the
//! dimensionless time `tau = zeta_am * v_am * t`. The pulse train locks for
//! `|i_b| <= 1` and slips with mean angular rate `sqrt(i_b^2 - 1)` otherwise.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::combmath::comb_from_beta;
use crate::error::{domain, Error, Result};
use crate::sde_engine::{rk4_step_into, welch_psd, Rk4Workspace, SpectrumResult, DEFAULT_OVERLAP};

/// Largest dimensionless step accepted by [`integrate_adler`].
pub const MAX_DTAU: f64 = 0.01;

/// Minimum number of beat periods a spectrum should cover after the
/// transient is discarded.
pub const MIN_BEAT_PERIODS: f64 = 50.0;

/// Transient length, in beat periods or relaxation times.
pub const TRANSIENT_PERIODS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdlerParams {
    /// Modulation angular frequency, rad/s.
    pub omega_am: f64,
    /// Cavity round-trip angular frequency, rad/s.
    pub omega_r: f64,
    /// Coupling coefficient, rad/(s V).
    pub zeta_am: f64,
    /// Modulation amplitude, V.
    pub v_am: f64,
    /// Locking threshold amplitude, V.
    pub v_am0: f64,
}

impl AdlerParams {
    /// Calibrates `zeta_am` so that locking sets in exactly at `v_am0`.
    pub fn from_threshold(omega_am: f64, omega_r: f64, v_am0: f64, v_am: f64) -> Result<Self> {
        if !(v_am0 > 0.0) {
            return Err(domain(format!("threshold amplitude must be positive, got {v_am0}")));
        }
        if !(v_am >= 0.0) {
            return Err(domain(format!("modulation amplitude must be nonnegative, got {v_am}")));
        }
        Ok(Self {
            omega_am,
            omega_r,
            zeta_am: (omega_am - omega_r) / v_am0,
            v_am,
            v_am0,
        })
    }

    pub fn with_amplitude(&self, v_am: f64) -> Self {
        Self { v_am, ..*self }
    }

    /// Detuning `omega_am - omega_r`, rad/s.
    pub fn detuning(&self) -> f64 {
        self.omega_am - self.omega_r
    }

    /// Conversion factor from dimensionless to physical time, 1/s.
    pub fn time_scale(&self) -> f64 {
        self.zeta_am * self.v_am
    }
}

pub fn normalized_bias(params: &AdlerParams) -> Result<f64> {
    let scale = params.time_scale();
    if params.v_am <= 0.0 || scale == 0.0 || !scale.is_finite() {
        return Err(domain(format!(
            "no modulation (v_am = {}, zeta_am = {}): the bias is unbounded",
            params.v_am, params.zeta_am
        )));
    }
    Ok(params.detuning() / scale)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTrajectory {
    pub tau: Vec<f64>,
    /// Unwrapped relative phase, rad.
    pub phi: Vec<f64>,
}

impl PhaseTrajectory {
    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    /// Phase velocity recovered from the equation of motion.
    pub fn velocity(&self, i_b: f64) -> Vec<f64> {
        self.phi.iter().map(|p| i_b - p.sin()).collect()
    }

    /// True when the phase stays inside one period over the second half
    /// of the record.
    pub fn is_bounded(&self) -> bool {
        let tail = &self.phi[self.phi.len() / 2..];
        let (lo, hi) = tail
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), &p| (lo.min(p), hi.max(p)));
        hi - lo < PI
    }

    /// Times at which the phase passes `pi/2 + 2 pi k`, with the crossing
    /// direction (+1 or -1).
    pub fn slip_times(&self) -> Vec<(f64, f64)> {
        let cell = |p: f64| ((p - FRAC_PI_2) / (2.0 * PI)).floor();
        let mut out = Vec::new();
        for i in 1..self.phi.len() {
            let (c0, c1) = (cell(self.phi[i - 1]), cell(self.phi[i]));
            if c0 == c1 {
                continue;
            }
            let dir = (c1 - c0).signum();
            let level = FRAC_PI_2 + 2.0 * PI * c0.max(c1);
            let frac = (level - self.phi[i - 1]) / (self.phi[i] - self.phi[i - 1]);
            let t = self.tau[i - 1] + frac * (self.tau[i] - self.tau[i - 1]);
            out.push((t, dir));
        }
        out
    }

    /// Mean phase velocity between the first and last slip.
    pub fn mean_slope(&self) -> Result<f64> {
        let slips = self.slip_times();
        if slips.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "{} phase slips recorded; at least two are needed",
                slips.len()
            )));
        }
        let net: f64 = slips[1..].iter().map(|s| s.1).sum();
        let span = slips[slips.len() - 1].0 - slips[0].0;
        Ok(2.0 * PI * net / span)
    }
}

fn adler_rhs(i_b: f64) -> impl FnMut(f64, &[f64], &mut [f64]) {
    move |_, y, dy| dy[0] = i_b - y[0].sin()
}

/// Fixed-step RK4 solution of the phase equation from `phi0` at `tau = 0`.
pub fn integrate_adler(i_b: f64, phi0: f64, tau_end: f64, dtau: f64) -> Result<PhaseTrajectory> {
    if !(dtau > 0.0 && dtau <= MAX_DTAU) {
        return Err(domain(format!("dtau must lie in (0, {MAX_DTAU}], got {dtau}")));
    }
    if !(tau_end > 0.0) || !i_b.is_finite() || !phi0.is_finite() {
        return Err(domain("tau_end must be positive and inputs finite"));
    }
    let steps = (tau_end / dtau).round().max(1.0) as usize;
    let mut tau = Vec::with_capacity(steps + 1);
    let mut phi = Vec::with_capacity(steps + 1);
    let mut y = [phi0];
    let mut ws = Rk4Workspace::new(1);
    let mut f = adler_rhs(i_b);
    tau.push(0.0);
    phi.push(phi0);
    for i in 0..steps {
        let t = i as f64 * dtau;
        rk4_step_into(&mut y, t, dtau, &mut ws, &mut f)?;
        tau.push((i + 1) as f64 * dtau);
        phi.push(y[0]);
    }
    Ok(PhaseTrajectory { tau, phi })
}

/// `sqrt(i_b^2 - 1)`, or zero inside the locking range.
pub fn beat_frequency(i_b: f64) -> f64 {
    if i_b.abs() <= 1.0 {
        0.0
    } else {
        ((i_b.abs() - 1.0) * (i_b.abs() + 1.0)).sqrt()
    }
}

/// `acosh |i_b|` for `|i_b| > 1`.
pub fn bias_beta(i_b: f64) -> Result<f64> {
    if !(i_b.abs() > 1.0) || !i_b.is_finite() {
        return Err(domain(format!("|i_b| = {} is in the locked range", i_b.abs())));
    }
    Ok(i_b.abs().acosh())
}

/// Phase offset of the closed-form solution at `tau = 0`.
pub fn unlocked_theta(i_b: f64) -> Result<f64> {
    let beta = bias_beta(i_b)?;
    Ok(PI - beta.sinh().atan())
}

/// Closed-form phase velocity in the slipping regime.
pub fn unlocked_closed_form(i_b: f64, tau: f64) -> Result<f64> {
    if i_b < -1.0 {
        return Ok(-unlocked_closed_form(-i_b, tau)?);
    }
    let beta = bias_beta(i_b)?;
    let sh = beta.sinh();
    Ok(sh * comb_from_beta(tau * sh + unlocked_theta(i_b)?, beta))
}

fn phase_of_argument(s: f64, beta: f64) -> f64 {
    let c = 1.0 / (0.5 * beta).tanh();
    let turns = ((s + PI) / (2.0 * PI)).floor();
    let r = s - 2.0 * PI * turns;
    2.0 * PI * turns + 2.0 * (c * (0.5 * r).tan()).atan() - FRAC_PI_2
}

/// Unwrapped phase whose derivative is [`unlocked_closed_form`].
pub fn unlocked_phase(i_b: f64, tau: f64) -> Result<f64> {
    if i_b < -1.0 {
        return Ok(-unlocked_phase(-i_b, tau)?);
    }
    let beta = bias_beta(i_b)?;
    Ok(phase_of_argument(tau * beta.sinh() + unlocked_theta(i_b)?, beta))
}

/// Time shift `d` such that `unlocked_phase(i_b, d) = phi0` modulo `2 pi`,
/// taken in `[0, beat period)`.
pub fn unlocked_alignment(i_b: f64, phi0: f64) -> Result<f64> {
    if i_b < -1.0 {
        return unlocked_alignment(-i_b, -phi0);
    }
    let beta = bias_beta(i_b)?;
    let c = 1.0 / (0.5 * beta).tanh();
    let half = 0.5 * (phi0 + FRAC_PI_2);
    let s = 2.0 * (half.sin()).atan2(c * half.cos());
    let period = 2.0 * PI / beta.sinh();
    Ok(((s - unlocked_theta(i_b)?) / beta.sinh()).rem_euclid(period))
}

/// Stable locked phase `asin(i_b)`.
pub fn locked_phase(i_b: f64) -> Result<f64> {
    if i_b.abs() > 1.0 {
        return Err(domain(format!("|i_b| = {} is outside the locking range", i_b.abs())));
    }
    Ok(i_b.asin())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Welch segment length; `None` picks the largest power of two giving at
    /// least eight segments.
    pub segment_len: Option<usize>,
    pub overlap: f64,
    /// Retained frequency band in Hz; `None` keeps everything up to Nyquist.
    pub band: Option<(f64, f64)>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { segment_len: None, overlap: DEFAULT_OVERLAP, band: None }
    }
}

/// Spectral density of the detector signal over an amplitude grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMap {
    pub v_am: Vec<f64>,
    pub i_b: Vec<f64>,
    /// Bin frequencies, Hz.
    pub freqs: Vec<f64>,
    /// `psd[j][k]`: density at `v_am[j]`, `freqs[k]`, per Hz.
    pub psd: Vec<Vec<f64>>,
    pub resolution: f64,
    pub segments: usize,
    pub sample_rate: f64,
    pub duration: f64,
    /// Discarded transient per grid point, s.
    pub transient: Vec<f64>,
    pub warnings: Vec<String>,
}

impl SpectrumMap {
    /// The single-amplitude spectrum at grid index `j`.
    pub fn column(&self, j: usize) -> SpectrumResult {
        SpectrumResult {
            freqs: self.freqs.clone(),
            psd: self.psd[j].clone(),
            resolution: self.resolution,
            segments: self.segments,
        }
    }
}

/// Characteristic time of the phase dynamics in units of tau: the beat
/// period when slipping, the relaxation time when locked.
fn characteristic_tau(i_b: f64) -> f64 {
    let w = beat_frequency(i_b);
    if w > 0.0 {
        2.0 * PI / w
    } else {
        1.0 / (1.0 - i_b * i_b).sqrt().max(1e-12)
    }
}

/// Integrates the phase equation in physical time and returns the
/// detector signal `cos(omega_am t + phi)` after the transient.
pub fn detector_signal(params: &AdlerParams, duration: f64, sample_rate: f64) -> Result<(Vec<f64>, f64)> {
    let i_b = normalized_bias(params)?;
    let scale = params.time_scale();
    let detuning = params.detuning();
    let dt = 1.0 / sample_rate;
    let dtau = scale.abs() * dt;
    let substeps = (dtau / MAX_DTAU).ceil().max(1.0) as usize;
    let h = dt / substeps as f64;

    let transient_tau = (TRANSIENT_PERIODS * characteristic_tau(i_b)).min(0.5 * duration * scale.abs());
    let skip = (transient_tau / dtau).ceil() as usize;
    let total = (duration * sample_rate).round() as usize;
    if total <= skip {
        return Err(Error::InsufficientData("duration shorter than the transient".into()));
    }

    let mut f = move |_: f64, y: &[f64], dy: &mut [f64]| dy[0] = detuning - scale * y[0].sin();
    let mut ws = Rk4Workspace::new(1);
    let mut y = [0.0];
    let mut signal = Vec::with_capacity(total - skip);
    let mut t = 0.0;
    for n in 0..total {
        if n >= skip {
            signal.push((params.omega_am * n as f64 * dt + y[0]).cos());
        }
        for _ in 0..substeps {
            rk4_step_into(&mut y, t, h, &mut ws, &mut f)?;
            t += h;
        }
    }
    Ok((signal, skip as f64 * dt))
}

/// Spectral density map of the synthetic detector signal across `v_am_grid`.
pub fn pd_spectrum_sweep(
    params_base: &AdlerParams,
    v_am_grid: &[f64],
    duration: f64,
    sample_rate: f64,
) -> Result<SpectrumMap> {
    pd_spectrum_sweep_with(params_base, v_am_grid, duration, sample_rate, &SweepOptions::default())
}

pub fn pd_spectrum_sweep_with(
    params_base: &AdlerParams,
    v_am_grid: &[f64],
    duration: f64,
    sample_rate: f64,
    options: &SweepOptions,
) -> Result<SpectrumMap> {
    if v_am_grid.is_empty() || v_am_grid.iter().any(|v| !(*v > 0.0)) {
        return Err(domain("amplitude grid must be non-empty and positive"));
    }
    if !(duration > 0.0 && sample_rate > 0.0) {
        return Err(domain("duration and sample rate must be positive"));
    }
    if params_base.omega_am.abs() / (2.0 * PI) >= 0.5 * sample_rate {
        return Err(domain(format!(
            "modulation frequency {} Hz is above Nyquist for sample rate {sample_rate} Hz",
            params_base.omega_am.abs() / (2.0 * PI)
        )));
    }
    let n_total = (duration * sample_rate).round() as usize;
    let segment_len = match options.segment_len {
        Some(n) => n,
        None => {
            let target = (n_total / 16).max(4);
            1usize << (usize::BITS - 1 - target.leading_zeros())
        }
    };

    let columns: Vec<Result<(f64, f64, SpectrumResult)>> = v_am_grid
        .par_iter()
        .map(|&v| {
            let p = params_base.with_amplitude(v);
            let i_b = normalized_bias(&p)?;
            let (signal, transient) = detector_signal(&p, duration, sample_rate)?;
            let spec = welch_psd(&signal, sample_rate, segment_len, options.overlap)?;
            Ok((i_b, transient, spec))
        })
        .collect();

    let mut map = SpectrumMap {
        v_am: v_am_grid.to_vec(),
        i_b: Vec::new(),
        freqs: Vec::new(),
        psd: Vec::new(),
        resolution: 0.0,
        segments: 0,
        sample_rate,
        duration,
        transient: Vec::new(),
        warnings: Vec::new(),
    };
    for (col, &v) in columns.into_iter().zip(v_am_grid) {
        let (i_b, transient, spec) = col?;
        let keep: Vec<usize> = (0..spec.freqs.len())
            .filter(|&k| match options.band {
                Some((lo, hi)) => spec.freqs[k] >= lo && spec.freqs[k] <= hi,
                None => true,
            })
            .collect();
        if map.freqs.is_empty() {
            map.freqs = keep.iter().map(|&k| spec.freqs[k]).collect();
            map.resolution = spec.resolution;
            map.segments = spec.segments;
        }
        map.psd.push(keep.iter().map(|&k| spec.psd[k]).collect());
        map.i_b.push(i_b);
        map.transient.push(transient);

        let beat_hz = params_base.zeta_am.abs() * v * beat_frequency(i_b) / (2.0 * PI);
        if beat_hz > 0.0 {
            let periods = (duration - transient) * beat_hz;
            if periods < MIN_BEAT_PERIODS {
                map.warnings.push(format!(
                    "v_am = {v}: record covers {periods:.1} beat periods (< {MIN_BEAT_PERIODS})"
                ));
            }
            if beat_hz < 2.0 * spec.resolution {
                map.warnings.push(format!(
                    "v_am = {v}: beat frequency {beat_hz:.3} Hz is below two bins ({:.3} Hz)",
                    spec.resolution
                ));
            }
        }
        if transient >= 0.5 * duration * (1.0 - 1e-9) {
            map.warnings.push(format!("v_am = {v}: transient truncated to half the record"));
        }
    }
    Ok(map)
}

/// Two adjacent lines of the slipping-phase spectrum, as measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidebandLines {
    /// Strongest line, expected at `omega_am + zeta_am v_am sqrt(i_b^2 - 1)`, Hz.
    pub dominant_hz: f64,
    /// Next line further from the modulation frequency, Hz.
    pub neighbor_hz: f64,
    pub spacing_hz: f64,
    /// `sqrt(P_neighbor / P_dominant)`, expected to equal `exp(-beta_b)`.
    pub amplitude_ratio: f64,
}

/// Locates the dominant line and its outer neighbor in `spec` near their
/// predicted positions and compares their powers over +-2 bins.
pub fn sideband_lines(spec: &SpectrumResult, params: &AdlerParams) -> Result<SidebandLines> {
    let i_b = normalized_bias(params)?;
    let w = beat_frequency(i_b);
    if w == 0.0 {
        return Err(domain("phase is locked: there are no beat sidebands"));
    }
    let beat_hz = params.time_scale().abs() * w / (2.0 * PI);
    let dir = params.detuning().signum();
    let predicted = params.omega_am / (2.0 * PI) + dir * beat_hz;
    let locate = |f: f64| -> Result<f64> {
        let lo = f - 0.5 * beat_hz;
        let hi = f + 0.5 * beat_hz;
        let bin = (0..spec.freqs.len())
            .filter(|&k| spec.freqs[k] >= lo && spec.freqs[k] <= hi)
            .max_by(|&a, &b| spec.psd[a].total_cmp(&spec.psd[b]))
            .ok_or_else(|| Error::InsufficientData(format!("no bins near {f} Hz")))?;
        Ok(spec.refined_peak(bin))
    };
    let dominant_hz = locate(predicted)?;
    let neighbor_hz = locate(dominant_hz + dir * beat_hz)?;
    let half = 2.0 * spec.resolution;
    let p_dom = spec.band_power(dominant_hz, half);
    let p_nb = spec.band_power(neighbor_hz, half);
    if !(p_dom > 0.0) {
        return Err(Error::InsufficientData("dominant line carries no power".into()));
    }
    Ok(SidebandLines {
        dominant_hz,
        neighbor_hz,
        spacing_hz: (neighbor_hz - dominant_hz).abs(),
        amplitude_ratio: (p_nb / p_dom).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_like() -> AdlerParams {
        AdlerParams::from_threshold(2.0 * PI * 371.4e3, 2.0 * PI * 371.3e3, 0.156, 0.156).unwrap()
    }

    #[test]
    fn bias_examples() {
        let p = paper_like();
        assert!((normalized_bias(&p).unwrap() - 1.0).abs() < 1e-9);
        assert!((normalized_bias(&p.with_amplitude(0.312)).unwrap() - 0.5).abs() < 1e-9);
        assert!((p.zeta_am - 4027.7).abs() < 0.05);
        assert!(normalized_bias(&p.with_amplitude(0.0)).is_err());
    }

    #[test]
    fn locked_examples() {
        let t = integrate_adler(0.0, 0.1, 50.0, 0.01).unwrap();
        assert!(t.phi.last().unwrap().abs() < 1e-12);
        let t = integrate_adler(0.5, 0.0, 100.0, 0.01).unwrap();
        assert!((t.phi.last().unwrap() - PI / 6.0).abs() < 1e-10);
        assert!(t.is_bounded());
    }

    #[test]
    fn slope_at_two() {
        let t = integrate_adler(2.0, 0.0, 500.0, 0.01).unwrap();
        let w = t.mean_slope().unwrap();
        assert!((w - 3f64.sqrt()).abs() < 1e-3 * 3f64.sqrt(), "{w}");
        assert!(!t.is_bounded());
    }

    #[test]
    fn beat_examples() {
        assert_eq!(beat_frequency(1.0), 0.0);
        assert_eq!(beat_frequency(0.3), 0.0);
        assert!((beat_frequency(2.0) - 3f64.sqrt()).abs() < 1e-15);
        assert!((beat_frequency(1.0001) - 0.0141424).abs() < 1e-6);
        assert!((beat_frequency(-2.0) - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn closed_form_extremes_and_mean() {
        let w = 3f64.sqrt();
        let period = 2.0 * PI / w;
        let n = 4000;
        let vals: Vec<f64> = (0..n)
            .map(|k| unlocked_closed_form(2.0, period * k as f64 / n as f64).unwrap())
            .collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        assert!((mean - w).abs() < 1e-10);
        let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
        let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
        assert!((lo - 1.0).abs() < 1e-5 && (hi - 3.0).abs() < 1e-5, "{lo} {hi}");
        assert!(unlocked_closed_form(1.0, 0.0).is_err());
        assert!(unlocked_closed_form(0.5, 0.0).is_err());
    }

    #[test]
    fn closed_phase_satisfies_equation() {
        for &i_b in &[1.2, 2.0, 5.0, -3.0] {
            for k in 0..200 {
                let tau = 0.037 * k as f64;
                let phi = unlocked_phase(i_b, tau).unwrap();
                let v = unlocked_closed_form(i_b, tau).unwrap();
                assert!((v + phi.sin() - i_b).abs() < 1e-10, "{i_b} {tau}");
            }
        }
    }

    #[test]
    fn closed_phase_is_continuous() {
        let mut prev = unlocked_phase(2.0, 0.0).unwrap();
        for k in 1..5000 {
            let p = unlocked_phase(2.0, 0.002 * k as f64).unwrap();
            assert!(p > prev && p - prev < 0.01);
            prev = p;
        }
    }

    #[test]
    fn alignment_reproduces_initial_phase() {
        for &phi0 in &[0.0, 1.0, -2.5, 3.0] {
            let d = unlocked_alignment(2.0, phi0).unwrap();
            let p = unlocked_phase(2.0, d).unwrap();
            assert!((phi0 - p).rem_euclid(2.0 * PI).min((p - phi0).rem_euclid(2.0 * PI)) < 1e-10);
        }
    }

    #[test]
    fn ode_matches_closed_form() {
        let traj = integrate_adler(2.0, 0.0, 30.0, 0.01).unwrap();
        let d = unlocked_alignment(2.0, 0.0).unwrap();
        let v = traj.velocity(2.0);
        let err = traj
            .tau
            .iter()
            .zip(&v)
            .map(|(t, v)| (v - unlocked_closed_form(2.0, t + d).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3, "{err}");
    }

    #[test]
    fn mirror_symmetry() {
        let a = integrate_adler(1.7, 0.4, 20.0, 0.01).unwrap();
        let b = integrate_adler(-1.7, -0.4, 20.0, 0.01).unwrap();
        for (x, y) in a.phi.iter().zip(&b.phi) {
            assert!((x + y).abs() < 1e-12);
        }
        let w = b.mean_slope().unwrap();
        assert!((w + beat_frequency(1.7)).abs() < 1e-3);
    }

    #[test]
    fn rejects_coarse_step() {
        assert!(integrate_adler(0.5, 0.0, 1.0, 0.02).is_err());
        assert!(integrate_adler(0.5, 0.0, 0.0, 0.01).is_err());
    }

    #[test]
    fn locked_sweep_point_is_a_single_line() {
        let p = paper_like();
        let fs = 1.0 * (1 << 20) as f64;
        let map = pd_spectrum_sweep_with(
            &p,
            &[0.312],
            0.5,
            fs,
            &SweepOptions { segment_len: Some(1 << 16), band: Some((3.6e5, 3.8e5)), ..Default::default() },
        )
        .unwrap();
        let s = map.column(0);
        let peak = s.refined_peak(s.peak_bin());
        assert!((peak - 371.4e3).abs() < s.resolution);
        let line = s.band_power(371.4e3, 3.0 * s.resolution);
        assert!(line > 0.49, "{line}");
    }

    #[test]
    fn short_record_warns() {
        let p = paper_like();
        let map = pd_spectrum_sweep_with(
            &p,
            &[0.15],
            0.02,
            1.0 * (1 << 20) as f64,
            &SweepOptions { segment_len: Some(1 << 12), band: Some((3.7e5, 3.73e5)), ..Default::default() },
        )
        .unwrap();
        assert!(!map.warnings.is_empty());
    }
}
