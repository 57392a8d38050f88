use std::f64::consts::PI;

use super::{AbsorptionModel, DriveMode, Halt, IntensityDrive, MechParams, MirrorState, MirrorTrajectory};
use crate::combmath::{comb_from_beta, comb_from_ratio};
use crate::error::{domain, Error, Result};
use crate::phase_lattice::bessel_i1_over_i0;
use crate::sde_engine::{rk4_step_into, Rk4Workspace};

/// Minimum number of steps per mechanical period.
const STEPS_PER_PERIOD: f64 = 50.0;

/// Steady state under constant intensity `l0`.
///
/// Solves `kappa_m T = l0 A_H(x(T))` with the static displacement
/// `x(T) = theta_fh T / (m_m (omega_m + theta_ph T)^2)` by Newton iteration.
pub fn cw_equilibrium(mech: &MechParams, abs: &AbsorptionModel, l0: f64) -> Result<MirrorState> {
    let x_of = |t: f64| {
        let w = mech.omega_m + mech.theta_ph * t;
        mech.theta_fh * t / (mech.m_m * w * w)
    };
    if l0 == 0.0 {
        return Ok(MirrorState::default());
    }
    if !(mech.kappa_m > 0.0) {
        return Err(domain("no cw equilibrium without thermal decay (kappa_m = 0)"));
    }
    let residual = |t: f64| mech.kappa_m * t - l0 * abs.absorption(x_of(t));
    let mut t = l0 * abs.a_h0 / mech.kappa_m;
    for _ in 0..100 {
        let h = 1e-7 * t.abs().max(1e-300);
        let f = residual(t);
        let df = (residual(t + h) - residual(t - h)) / (2.0 * h);
        if df == 0.0 || !df.is_finite() {
            break;
        }
        let step = f / df;
        t -= step;
        if step.abs() <= 1e-15 * t.abs() {
            return Ok(MirrorState { x: x_of(t), v: 0.0, t_r: t });
        }
    }
    let r = residual(t);
    if r.abs() <= 1e-10 * mech.kappa_m * t.abs() {
        Ok(MirrorState { x: x_of(t), v: 0.0, t_r: t })
    } else {
        Err(Error::Integration {
            time: 0.0,
            reason: format!("cw equilibrium did not converge (residual {r:e})"),
        })
    }
}

/// Scales of the internal variables: time in `1/omega_m`, displacement in
/// `x_unit`, temperature in `t_unit`.
struct Scales {
    omega: f64,
    x_unit: f64,
    t_unit: f64,
}

impl Scales {
    fn new(mech: &MechParams, abs: &AbsorptionModel, drive: &IntensityDrive, init: &MirrorState) -> Self {
        let x_unit = if abs.k_a1 != 0.0 {
            0.1 / abs.k_a1.abs()
        } else if init.x != 0.0 || init.v != 0.0 {
            init.x.abs().max(init.v.abs() / mech.omega_m)
        } else {
            1e-9
        };
        let omega = mech.omega_m;
        let t_unit = if mech.theta_fh != 0.0 {
            mech.m_m * omega * omega * x_unit / mech.theta_fh.abs()
        } else if drive.l0 > 0.0 && mech.kappa_m > 0.0 {
            drive.l0 * abs.a_h0 / mech.kappa_m
        } else {
            1.0
        };
        Self { omega, x_unit, t_unit }
    }
}

/// Evaluates `L_H` from the scaled state.
struct DriveEval {
    l0: f64,
    mode: DriveMode,
    /// Pulse frequency over omega_m.
    pulse_ratio: f64,
    /// Scaled equilibrium displacement the locked drive measures against.
    center: f64,
    /// Phase of the pulse peak relative to the oscillation phase.
    peak: f64,
    /// `coupling * x_unit / t_n`.
    gain: f64,
    rho_max: f64,
}

impl DriveEval {
    fn new(drive: &IntensityDrive, mech: &MechParams, abs: &AbsorptionModel, sc: &Scales) -> Self {
        let mut eval = Self {
            l0: drive.l0,
            mode: drive.mode,
            pulse_ratio: 0.0,
            center: 0.0,
            peak: 0.0,
            gain: 0.0,
            rho_max: 0.0,
        };
        match drive.mode {
            DriveMode::Cw => {}
            DriveMode::Comb { omega_pulse, .. } => eval.pulse_ratio = omega_pulse / sc.omega,
            DriveMode::ClosedLoop { coupling, beta_floor, t_n, phase_offset } => {
                let x_eq = cw_equilibrium(mech, abs, drive.l0).map(|s| s.x).unwrap_or(0.0);
                eval.center = x_eq / sc.x_unit;
                // The oscillation phase is pi at the negative turning point.
                let base = if abs.slope(x_eq) > 0.0 { PI } else { 0.0 };
                eval.peak = base + phase_offset;
                eval.gain = coupling * sc.x_unit / t_n;
                eval.rho_max = (-beta_floor).exp();
            }
        }
        eval
    }

    fn intensity(&self, s: f64, xi: f64, eta: f64) -> f64 {
        match self.mode {
            DriveMode::Cw => self.l0,
            DriveMode::Comb { beta, phase, .. } => self.l0 * comb_from_beta(self.pulse_ratio * s + phase, beta),
            DriveMode::ClosedLoop { .. } => {
                let dx = xi - self.center;
                let amp = dx.hypot(eta);
                if amp == 0.0 {
                    return self.l0;
                }
                let rho = bessel_i1_over_i0(self.gain * amp).min(self.rho_max);
                let phase = (-eta).atan2(dx);
                self.l0 * comb_from_ratio(rho, phase - self.peak)
            }
        }
    }
}

/// Integrates the mirror model from `init` and records every step.
pub fn simulate(
    mech: &MechParams,
    abs: &AbsorptionModel,
    drive: &IntensityDrive,
    init: MirrorState,
    t_end: f64,
    dt: f64,
) -> Result<MirrorTrajectory> {
    simulate_sampled(mech, abs, drive, init, t_end, dt, 1)
}

/// As [`simulate`], keeping every `record_every`-th step.
///
/// The run stops early, with [`Halt::AbsorptionRange`] set, once
/// `|k_a1 x| > 1`. A non-finite state is an error that reports the last
/// finite state.
pub fn simulate_sampled(
    mech: &MechParams,
    abs: &AbsorptionModel,
    drive: &IntensityDrive,
    init: MirrorState,
    t_end: f64,
    dt: f64,
    record_every: usize,
) -> Result<MirrorTrajectory> {
    mech.validate()?;
    abs.validate()?;
    drive.validate()?;
    let max_dt = 2.0 * PI / (STEPS_PER_PERIOD * mech.omega_m);
    if !(dt > 0.0 && dt <= max_dt * (1.0 + 1e-12)) {
        return Err(domain(format!("dt = {dt} s exceeds 2 pi / (50 omega_m) = {max_dt} s")));
    }
    if !(t_end > 0.0) || record_every == 0 {
        return Err(domain("t_end must be positive and record_every at least 1"));
    }
    if !(init.x.is_finite() && init.v.is_finite() && init.t_r.is_finite()) {
        return Err(domain("initial state must be finite"));
    }

    let sc = Scales::new(mech, abs, drive, &init);
    let eval = DriveEval::new(drive, mech, abs, &sc);
    let w = sc.omega;
    let damping = 2.0 * mech.gamma_m / w;
    let pull = mech.theta_ph * sc.t_unit / w;
    let force = mech.theta_fh * sc.t_unit / (mech.m_m * w * w * sc.x_unit);
    let heat = abs.a_h0 / (w * sc.t_unit);
    let lin = abs.k_a1 * sc.x_unit;
    let quad = abs.k_a2 * sc.x_unit * sc.x_unit;
    let decay = mech.kappa_m / w;

    let mut rhs = |s: f64, y: &[f64], dy: &mut [f64]| {
        let (xi, eta, th) = (y[0], y[1], y[2]);
        let stiff = 1.0 + pull * th;
        let l_h = eval.intensity(s, xi, eta);
        dy[0] = eta;
        dy[1] = -damping * eta - stiff * stiff * xi + force * th;
        dy[2] = heat * l_h * (1.0 + lin * xi + quad * xi * xi) - decay * th;
    };

    let steps = (t_end / dt).round().max(1.0) as usize;
    let h = dt * w;
    let mut y = [init.x / sc.x_unit, init.v / (w * sc.x_unit), init.t_r / sc.t_unit];
    let mut ws = Rk4Workspace::new(3);
    let capacity = steps / record_every + 1;
    let mut traj = MirrorTrajectory {
        time: Vec::with_capacity(capacity),
        x: Vec::with_capacity(capacity),
        v: Vec::with_capacity(capacity),
        t_r_rel: Vec::with_capacity(capacity),
        drive: Vec::with_capacity(capacity),
        halt: None,
    };
    let record = |traj: &mut MirrorTrajectory, s: f64, y: &[f64; 3]| {
        traj.time.push(s / w);
        traj.x.push(y[0] * sc.x_unit);
        traj.v.push(y[1] * w * sc.x_unit);
        traj.t_r_rel.push(y[2] * sc.t_unit);
        traj.drive.push(eval.intensity(s, y[0], y[1]));
    };
    record(&mut traj, 0.0, &y);

    for n in 0..steps {
        let s = n as f64 * h;
        let last = y;
        if let Err(e) = rk4_step_into(&mut y, s, h, &mut ws, &mut rhs) {
            let reason = match e {
                Error::Integration { reason, .. } => reason,
                other => other.to_string(),
            };
            return Err(Error::Integration {
                time: s / w,
                reason: format!(
                    "{reason}; last finite state x = {:e} m, v = {:e} m/s, T_R = {:e} K",
                    last[0] * sc.x_unit,
                    last[1] * w * sc.x_unit,
                    last[2] * sc.t_unit
                ),
            });
        }
        let s_next = (n + 1) as f64 * h;
        if (lin * y[0]).abs() > 1.0 {
            record(&mut traj, s_next, &y);
            traj.halt = Some(Halt::AbsorptionRange { time: s_next / w, x: y[0] * sc.x_unit });
            return Ok(traj);
        }
        if (n + 1) % record_every == 0 {
            record(&mut traj, s_next, &y);
        }
    }
    Ok(traj)
}
