use std::f64::consts::PI;

use super::MirrorTrajectory;
use crate::error::{Error, Result};

/// Parameters of `A exp(-gamma t) cos(omega t + phi)` fitted to a record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingdownFit {
    pub omega: f64,
    /// Negative for a growing oscillation.
    pub gamma: f64,
    pub extrema: usize,
    pub crossings: usize,
}

/// Fits `x(t)` about zero. See [`ringdown_extract_about`].
pub fn ringdown_extract(traj: &MirrorTrajectory) -> Result<(f64, f64)> {
    let fit = ringdown_extract_about(traj, 0.0)?;
    Ok((fit.omega, fit.gamma))
}

/// Fits `x(t) - center`.
///
/// The damping rate comes from a linear regression of the log of the
/// extremal magnitudes (each refined by a parabola through three samples)
/// against their times. The frequency comes from a least-squares line
/// through the interpolated zero-crossing times, which are spaced by half a
/// period.
pub fn ringdown_extract_about(traj: &MirrorTrajectory, center: f64) -> Result<RingdownFit> {
    fit_oscillation(&traj.time, &traj.x, center)
}

pub(crate) fn fit_oscillation(t: &[f64], x: &[f64], center: f64) -> Result<RingdownFit> {
    if t.len() != x.len() || t.len() < 3 {
        return Err(Error::InsufficientData("trajectory too short".into()));
    }
    let y: Vec<f64> = x.iter().map(|v| v - center).collect();

    let mut crossings = Vec::new();
    let mut crossing_idx = Vec::new();
    for i in 1..y.len() {
        let (a, b) = (y[i - 1], y[i]);
        if (a < 0.0 && b >= 0.0) || (a >= 0.0 && b < 0.0) {
            let frac = a / (a - b);
            crossings.push(t[i - 1] + frac * (t[i] - t[i - 1]));
            crossing_idx.push(i);
        }
    }

    let mut ext_t = Vec::new();
    let mut ext_a = Vec::new();
    for w in crossing_idx.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let k = (lo..hi)
            .max_by(|&i, &j| y[i].abs().total_cmp(&y[j].abs()))
            .unwrap_or(lo);
        if k == 0 || k + 1 >= y.len() {
            continue;
        }
        let (a, b, c) = (y[k - 1].abs(), y[k].abs(), y[k + 1].abs());
        let denom = a - 2.0 * b + c;
        let (shift, peak) = if denom < 0.0 {
            let d = 0.5 * (a - c) / denom;
            (d, b - 0.25 * (a - c) * d)
        } else {
            (0.0, b)
        };
        if peak <= 0.0 {
            continue;
        }
        let step = t[k + 1] - t[k];
        ext_t.push(t[k] + shift * step);
        ext_a.push(peak.ln());
    }

    if ext_t.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "{} extrema found; at least 5 are needed",
            ext_t.len()
        )));
    }
    let gamma = -slope(&ext_t, &ext_a);
    let index: Vec<f64> = (0..crossings.len()).map(|i| i as f64).collect();
    let half_period = slope(&index, &crossings);
    Ok(RingdownFit {
        omega: PI / half_period,
        gamma,
        extrema: ext_t.len(),
        crossings: crossings.len(),
    })
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
