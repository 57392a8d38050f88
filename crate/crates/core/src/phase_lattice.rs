//! Langevin dynamics of the cavity mode phases.
//!
//! Each longitudinal mode `m` carries a phase `theta_m`. Modulation couples
//! nearest neighbors and amplifier noise kicks every phase independently:
//!
//! `dtheta_m/dt = mu (sin(theta_{m-1} - theta_m) + sin(theta_{m+1} - theta_m)) + q_m`,
//! `<q_m(t) q_n(t')> = 2 T_N delta_mn delta(t - t')`.
//!
//! The drift is `-dH/dtheta_m` with `H = -mu sum cos(theta_{m-1} - theta_m)`,
//! so the stationary density is `exp(-H / T_N)`. On an open chain the bond
//! angles are then independent von Mises variables with concentration
//! `mu / T_N = 1 / (2 beta_N)`; for weak noise they are Gaussian with variance
//! `2 beta_N`.
//!
//! Phases are never wrapped. Every observable here is built from phase
//! differences and is insensitive to multiples of 2π.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::sde_engine::RngStream;

/// Largest `beta_N` for which the Gaussian (weak-noise) sampler is offered.
pub const GAUSSIAN_BETA_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    OpenChain,
    Periodic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeConfig {
    pub n_modes: usize,
    pub mu_m: f64,
    pub t_n: f64,
    pub dt: f64,
    pub seed: u64,
    pub boundary: Boundary,
}

impl LatticeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_modes < 3 {
            return Err(domain(format!("n_modes must be >= 3, got {}", self.n_modes)));
        }
        if !(self.mu_m > 0.0) || !self.mu_m.is_finite() {
            return Err(domain("mu_m must be positive"));
        }
        if !(self.t_n >= 0.0) || !self.t_n.is_finite() {
            return Err(domain("t_n must be nonnegative"));
        }
        if !(self.dt > 0.0) {
            return Err(domain("dt must be positive"));
        }
        if self.dt * self.mu_m > 0.1 {
            return Err(domain(format!(
                "dt * mu_m = {} exceeds the stability guard 0.1",
                self.dt * self.mu_m
            )));
        }
        Ok(())
    }

    /// `beta_N = T_N / (2 mu)`.
    pub fn beta_n(&self) -> f64 {
        self.t_n / (2.0 * self.mu_m)
    }

    /// Default burn-in: ten relaxation times `1/mu`.
    pub fn burn_in_steps(&self) -> usize {
        (10.0 / (self.mu_m * self.dt)).ceil() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    pub theta: Vec<f64>,
    pub time: f64,
}

impl LatticeState {
    pub fn uniform(n_modes: usize, phase: f64) -> Self {
        Self { theta: vec![phase; n_modes], time: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    fn check(&self, n_modes: usize) -> Result<()> {
        if self.theta.len() != n_modes {
            return Err(domain(format!(
                "state has {} phases, configuration expects {n_modes}",
                self.theta.len()
            )));
        }
        if let Some(i) = self.theta.iter().position(|t| !t.is_finite()) {
            return Err(Error::Integration {
                time: self.time,
                reason: format!("phase {i} is not finite"),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeAmplitudes {
    pub r: Vec<f64>,
}

impl ModeAmplitudes {
    /// Frozen equal amplitudes `r_m = 1`.
    pub fn uniform(n_modes: usize) -> Self {
        Self { r: vec![1.0; n_modes] }
    }

    pub fn new(r: Vec<f64>) -> Result<Self> {
        if r.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
            return Err(domain("mode amplitudes must be finite and nonnegative"));
        }
        if r.iter().all(|&x| x == 0.0) {
            return Err(domain("mode amplitudes must not all vanish"));
        }
        Ok(Self { r })
    }
}

fn bond_count(n: usize, boundary: Boundary) -> usize {
    match boundary {
        Boundary::OpenChain => n - 1,
        Boundary::Periodic => n,
    }
}

/// Deterministic part of the phase velocity, written into `out`.
pub fn drift_into(theta: &[f64], mu: f64, boundary: Boundary, out: &mut [f64]) {
    let n = theta.len();
    out.iter_mut().for_each(|d| *d = 0.0);
    for b in 0..bond_count(n, boundary) {
        let right = (b + 1) % n;
        // sin(theta_{m+1} - theta_m) pulls m forward and m+1 back
        let s = mu * (theta[right] - theta[b]).sin();
        out[b] += s;
        out[right] -= s;
    }
}

pub fn drift(state: &LatticeState, config: &LatticeConfig) -> Vec<f64> {
    let mut out = vec![0.0; state.len()];
    drift_into(&state.theta, config.mu_m, config.boundary, &mut out);
    out
}

/// `H = -mu sum_bonds cos(theta_{m-1} - theta_m)`.
pub fn hamiltonian(state: &LatticeState, config: &LatticeConfig) -> f64 {
    let n = state.len();
    let theta = &state.theta;
    -config.mu_m
        * (0..bond_count(n, config.boundary))
            .map(|b| (theta[(b + 1) % n] - theta[b]).cos())
            .sum::<f64>()
}

/// One explicit stochastic Euler step.
pub fn step_lattice(
    state: &LatticeState,
    config: &LatticeConfig,
    rng: &mut RngStream,
) -> Result<LatticeState> {
    config.validate()?;
    state.check(config.n_modes)?;
    let mut next = state.clone();
    let mut scratch = vec![0.0; config.n_modes];
    euler_step(&mut next, config, rng, &mut scratch);
    next.check(config.n_modes)?;
    Ok(next)
}

fn euler_step(state: &mut LatticeState, config: &LatticeConfig, rng: &mut RngStream, scratch: &mut [f64]) {
    drift_into(&state.theta, config.mu_m, config.boundary, scratch);
    let kick = (2.0 * config.t_n * config.dt).sqrt();
    if kick > 0.0 {
        for (theta, d) in state.theta.iter_mut().zip(scratch.iter()) {
            *theta += config.dt * d + kick * rng.normal();
        }
    } else {
        for (theta, d) in state.theta.iter_mut().zip(scratch.iter()) {
            *theta += config.dt * d;
        }
    }
    state.time += config.dt;
}

/// A running Langevin simulation with its own random stream.
#[derive(Debug, Clone)]
pub struct LangevinLattice {
    config: LatticeConfig,
    state: LatticeState,
    rng: RngStream,
    scratch: Vec<f64>,
}

impl LangevinLattice {
    /// Starts from the uniform (fully locked) state.
    pub fn new(config: LatticeConfig) -> Result<Self> {
        let state = LatticeState::uniform(config.n_modes, 0.0);
        Self::from_state(config, state)
    }

    pub fn from_state(config: LatticeConfig, state: LatticeState) -> Result<Self> {
        config.validate()?;
        state.check(config.n_modes)?;
        Ok(Self {
            rng: RngStream::new(config.seed),
            scratch: vec![0.0; config.n_modes],
            config,
            state,
        })
    }

    pub fn config(&self) -> &LatticeConfig {
        &self.config
    }

    pub fn state(&self) -> &LatticeState {
        &self.state
    }

    pub fn advance(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            euler_step(&mut self.state, &self.config, &mut self.rng, &mut self.scratch);
        }
        self.state.check(self.config.n_modes)
    }

    /// Runs `samples * sample_every` steps after `burn_in` steps, calling
    /// `observe` on every `sample_every`-th state.
    pub fn run<F>(&mut self, burn_in: usize, samples: usize, sample_every: usize, mut observe: F) -> Result<()>
    where
        F: FnMut(&LatticeState),
    {
        self.advance(burn_in)?;
        for _ in 0..samples {
            self.advance(sample_every.max(1))?;
            observe(&self.state);
        }
        Ok(())
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Weak-noise Gibbs sampler: independent Gaussian bond angles of variance
/// `2 beta_N`, cumulatively summed from `theta_0 = 0`.
pub fn sample_gibbs(beta_n: f64, n_modes: usize, boundary: Boundary, rng: &mut RngStream) -> Result<LatticeState> {
    check_gibbs_args(beta_n, n_modes, boundary)?;
    if beta_n > GAUSSIAN_BETA_LIMIT {
        return Err(domain(format!(
            "weak-noise sampler needs beta_N <= {GAUSSIAN_BETA_LIMIT}, got {beta_n}"
        )));
    }
    let sigma = (2.0 * beta_n).sqrt();
    Ok(cumulative(n_modes, || sigma * rng.normal()))
}

/// Exact Gibbs sampler for the open chain: von Mises bond angles with
/// concentration `1 / (2 beta_N)`.
pub fn sample_gibbs_exact(beta_n: f64, n_modes: usize, boundary: Boundary, rng: &mut RngStream) -> Result<LatticeState> {
    check_gibbs_args(beta_n, n_modes, boundary)?;
    if beta_n == 0.0 {
        return Ok(LatticeState::uniform(n_modes, 0.0));
    }
    let kappa = 1.0 / (2.0 * beta_n);
    Ok(cumulative(n_modes, || von_mises(kappa, rng)))
}

fn check_gibbs_args(beta_n: f64, n_modes: usize, boundary: Boundary) -> Result<()> {
    if boundary == Boundary::Periodic {
        return Err(Error::Unsupported(
            "Gibbs sampling is only available for the open chain; the winding \
             constraint couples the bond angles of a ring"
                .into(),
        ));
    }
    if !(beta_n >= 0.0) || !beta_n.is_finite() {
        return Err(domain("beta_N must be nonnegative"));
    }
    if n_modes < 2 {
        return Err(domain("at least two modes are required"));
    }
    Ok(())
}

fn cumulative(n: usize, mut bond: impl FnMut() -> f64) -> LatticeState {
    let mut theta = Vec::with_capacity(n);
    let mut acc = 0.0;
    theta.push(acc);
    for _ in 1..n {
        acc += bond();
        theta.push(acc);
    }
    LatticeState { theta, time: 0.0 }
}

/// Best-Fisher rejection sampler for the von Mises distribution on `(-π, π]`.
fn von_mises(kappa: f64, rng: &mut RngStream) -> f64 {
    if kappa < 1e-8 {
        return PI * (2.0 * rng.uniform() - 1.0);
    }
    let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
    let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
    let r = (1.0 + rho * rho) / (2.0 * rho);
    loop {
        let z = (PI * rng.uniform()).cos();
        let f = (1.0 + r * z) / (r + z);
        let c = kappa * (r - f);
        let u2 = rng.uniform();
        if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
            let angle = f.clamp(-1.0, 1.0).acos();
            return if rng.uniform() < 0.5 { -angle } else { angle };
        }
    }
}

/// `I_1(kappa) / I_0(kappa)`: the mean of `cos` of a von Mises angle.
///
/// Evaluated from the continued fraction
/// `I_1/I_0 = 1 / (2/kappa + 1 / (4/kappa + 1 / (6/kappa + ...)))`.
pub fn bessel_i1_over_i0(kappa: f64) -> f64 {
    if kappa <= 0.0 {
        return 0.0;
    }
    if kappa < 1e-8 {
        return 0.5 * kappa;
    }
    let depth = (kappa.ceil() as usize).min(1_000_000) + 60;
    let mut tail = 0.0;
    for n in (1..=depth).rev() {
        tail = 1.0 / (2.0 * n as f64 / kappa + tail);
    }
    tail
}

/// Exact stationary nearest-neighbor correlation `<cos(theta_{m-1} - theta_m)>`
/// of the open chain at noise ratio `beta_N`.
pub fn gibbs_neighbor_correlation(beta_n: f64) -> f64 {
    if beta_n <= 0.0 {
        return 1.0;
    }
    bessel_i1_over_i0(1.0 / (2.0 * beta_n))
}

/// `N^-1 |sum_m r_m exp(i (m s + theta_m))|^2` on each grid point.
pub fn intensity_waveform(state: &LatticeState, amps: &ModeAmplitudes, s_grid: &[f64]) -> Result<Vec<f64>> {
    let n = state.len();
    if amps.r.len() != n {
        return Err(domain(format!(
            "{} amplitudes for {n} modes",
            amps.r.len()
        )));
    }
    let fields: Vec<Complex64> = state
        .theta
        .iter()
        .zip(&amps.r)
        .map(|(&t, &r)| Complex64::from_polar(r, t))
        .collect();
    Ok(s_grid
        .iter()
        .map(|&s| {
            let step = Complex64::from_polar(1.0, s);
            let mut carrier = Complex64::new(1.0, 0.0);
            let mut sum = Complex64::new(0.0, 0.0);
            for (m, f) in fields.iter().enumerate() {
                if m % 64 == 0 {
                    // re-anchor to keep the recurrence from drifting
                    carrier = Complex64::from_polar(1.0, m as f64 * s);
                }
                sum += f * carrier;
                carrier *= step;
            }
            sum.norm_sqr() / n as f64
        })
        .collect())
}

/// Mean and standard error of a scalar observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    /// Mean and naive standard error of independent samples.
    pub fn from_samples(x: &[f64]) -> Self {
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        Self { mean, std_error: (var / n).sqrt() }
    }

    /// Batch-means estimate for a correlated time series.
    pub fn batch_means(x: &[f64], batches: usize) -> Self {
        let batches = batches.clamp(2, x.len().max(2));
        let len = x.len() / batches;
        if len == 0 {
            return Self::from_samples(x);
        }
        let means: Vec<f64> = (0..batches)
            .map(|b| x[b * len..(b + 1) * len].iter().sum::<f64>() / len as f64)
            .collect();
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        Self { mean, std_error: Self::from_samples(&means).std_error }
    }

    /// Number of combined standard errors separating two estimates.
    pub fn z_score(&self, other: &Estimate) -> f64 {
        let se = self.std_error.hypot(other.std_error);
        if se == 0.0 {
            return if self.mean == other.mean { 0.0 } else { f64::INFINITY };
        }
        (self.mean - other.mean).abs() / se
    }

    /// Distance to an exact value in units of this standard error.
    pub fn z_against(&self, exact: f64) -> f64 {
        self.z_score(&Estimate { mean: exact, std_error: 0.0 })
    }
}

/// `<exp(i (theta_{m-k} - theta_m))>` averaged over sites and snapshots.
pub fn phase_correlation(trajectory: &[LatticeState], k: usize) -> Result<Complex64> {
    let first = trajectory
        .first()
        .ok_or_else(|| Error::InsufficientData("empty trajectory".into()))?;
    let n = first.len();
    if k >= n {
        return Err(domain(format!("separation {k} must be below the mode count {n}")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut count = 0usize;
    for state in trajectory {
        if state.len() != n {
            return Err(domain("trajectory states differ in length"));
        }
        sum += site_correlation(&state.theta, k);
        count += n - k;
    }
    Ok(sum / count as f64)
}

fn site_correlation(theta: &[f64], k: usize) -> Complex64 {
    (k..theta.len())
        .map(|m| Complex64::from_polar(1.0, theta[m - k] - theta[m]))
        .sum()
}

/// Mean of the squared (wrapped) neighbor difference over sites.
pub fn mean_square_neighbor_difference(state: &LatticeState) -> f64 {
    let th = &state.theta;
    let n = th.len();
    (1..n).map(|m| wrap_angle(th[m - 1] - th[m]).powi(2)).sum::<f64>() / (n - 1) as f64
}

/// Streaming collector of the stationary statistics of a chain.
///
/// Each observed snapshot contributes its site-averaged squared neighbor
/// difference and site-averaged correlations `Re <exp(i(theta_{m-k} - theta_m))>`
/// for `k = 0..=max_k`. Standard errors use batch means so that the time
/// correlation of successive snapshots is accounted for.
#[derive(Debug, Clone)]
pub struct StationaryStats {
    max_k: usize,
    mean_sq: Vec<f64>,
    corr_re: Vec<Vec<f64>>,
    corr_im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationarySummary {
    pub snapshots: usize,
    pub mean_square_difference: Estimate,
    /// Real part of the correlation at separation `k` (index `k`).
    pub correlation: Vec<Estimate>,
    /// Imaginary part, expected to vanish.
    pub correlation_imag: Vec<Estimate>,
}

impl StationaryStats {
    pub fn new(max_k: usize) -> Self {
        Self {
            max_k,
            mean_sq: Vec::new(),
            corr_re: vec![Vec::new(); max_k + 1],
            corr_im: vec![Vec::new(); max_k + 1],
        }
    }

    pub fn observe(&mut self, state: &LatticeState) {
        let n = state.len();
        self.mean_sq.push(mean_square_neighbor_difference(state));
        for k in 0..=self.max_k.min(n - 1) {
            let c = site_correlation(&state.theta, k) / (n - k) as f64;
            self.corr_re[k].push(c.re);
            self.corr_im[k].push(c.im);
        }
    }

    /// Summary with batch-means errors over `batches` batches; pass the
    /// snapshot count to treat snapshots as independent.
    pub fn summary(&self, batches: usize) -> StationarySummary {
        StationarySummary {
            snapshots: self.mean_sq.len(),
            mean_square_difference: Estimate::batch_means(&self.mean_sq, batches),
            correlation: self.corr_re.iter().map(|v| Estimate::batch_means(v, batches)).collect(),
            correlation_imag: self.corr_im.iter().map(|v| Estimate::batch_means(v, batches)).collect(),
        }
    }
}

/// Pointwise ensemble mean and standard error of the intensity waveform.
pub fn ensemble_waveform(states: &[LatticeState], amps: &ModeAmplitudes, s_grid: &[f64]) -> Result<Vec<Estimate>> {
    if states.len() < 2 {
        return Err(Error::InsufficientData("need at least two states".into()));
    }
    let mut columns = vec![Vec::with_capacity(states.len()); s_grid.len()];
    for st in states {
        for (col, v) in columns.iter_mut().zip(intensity_waveform(st, amps, s_grid)?) {
            col.push(v);
        }
    }
    Ok(columns.iter().map(|c| Estimate::from_samples(c)).collect())
}

/// Exact ensemble mean of the waveform of an `n`-mode open chain with equal
/// amplitudes whose bond phases are independent with `<exp(i delta)> = rho`:
/// `1 + 2 sum_{k=1}^{n-1} (1 - k/n) rho^k cos(k s)`.
///
/// With `rho = exp(-beta)` this is the Fejér-weighted partial sum of the comb
/// series, which tends to `T_beta(s)` only when `1/n << beta`.
pub fn finite_chain_waveform(rho: f64, n: usize, s: f64) -> f64 {
    let mut weight = 1.0;
    let mut sum = 1.0;
    for k in 1..n {
        weight *= rho;
        sum += 2.0 * (1.0 - k as f64 / n as f64) * weight * (k as f64 * s).cos();
    }
    sum
}
