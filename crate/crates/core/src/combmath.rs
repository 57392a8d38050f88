//! The comb function
//!
//! `T_beta(s) = sum_k exp(i k s - |k| beta) = sinh(beta) / (cosh(beta) - cos(s))`
//!
//! is a 2π-periodic train of Lorentzian-like pulses with unit mean. It shows up
//! as the ensemble-averaged cavity intensity, as the Adler phase velocity
//! above the locking range, and as the intensity profile driving the mirror.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Smallest linewidth accepted; below it `coth(beta/2)` overflows the useful
/// range of `f64` arithmetic on the pulse peak.
pub const MIN_BETA: f64 = 1e-6;

/// Absolute accuracy targeted by [`adaptive_truncation`].
pub const SERIES_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombParams {
    pub beta: f64,
    pub truncation_k: usize,
}

impl CombParams {
    pub fn new(beta: f64, truncation_k: usize) -> Result<Self> {
        check_beta(beta)?;
        if truncation_k == 0 {
            return Err(domain("series truncation must be at least 1"));
        }
        Ok(Self { beta, truncation_k })
    }

    /// Parameters whose series truncation meets [`SERIES_TOLERANCE`].
    pub fn adaptive(beta: f64) -> Result<Self> {
        let k = adaptive_truncation(beta, SERIES_TOLERANCE)?;
        Self::new(beta, k)
    }

    pub fn closed(&self, s: f64) -> f64 {
        comb_from_ratio((-self.beta).exp(), s)
    }

    pub fn series(&self, s: f64) -> f64 {
        series_unchecked(s, self.beta, self.truncation_k)
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta < MIN_BETA {
        return Err(domain(format!(
            "beta must be positive and at least {MIN_BETA:e}, got {beta}"
        )));
    }
    Ok(())
}

/// Closed form `sinh(beta) / (cosh(beta) - cos(s))`.
///
/// Evaluated through `q = exp(-beta)` so that large `beta` does not overflow
/// and small `beta` keeps its relative precision near the peak.
pub fn comb_closed(s: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(comb_from_beta(s, beta))
}

pub(crate) fn comb_from_beta(s: f64, beta: f64) -> f64 {
    let one_minus_q = -(-beta).exp_m1();
    let q = 1.0 - one_minus_q;
    let half = (0.5 * s).sin();
    let numerator = -(-2.0 * beta).exp_m1();
    numerator / (one_minus_q * one_minus_q + 4.0 * q * half * half)
}

/// Comb function parameterized by the nearest-neighbor ratio `q = exp(-beta)`
/// in `[0, 1)`: `(1 - q^2) / (1 - 2 q cos s + q^2)`. `q = 0` is the flat
/// (unmodulated) profile.
pub fn comb_from_ratio(q: f64, s: f64) -> f64 {
    let half = (0.5 * s).sin();
    let one_minus_q = 1.0 - q;
    (1.0 - q * q) / (one_minus_q * one_minus_q + 4.0 * q * half * half)
}

/// Truncated Fourier series `1 + 2 sum_{k=1..K} exp(-k beta) cos(k s)`.
pub fn comb_series(s: f64, beta: f64, k_max: usize) -> Result<f64> {
    check_beta(beta)?;
    if k_max == 0 {
        return Err(domain("series truncation must be at least 1"));
    }
    Ok(series_unchecked(s, beta, k_max))
}

fn series_unchecked(s: f64, beta: f64, k_max: usize) -> f64 {
    let ratio = (-beta).exp();
    let mut weight = 1.0;
    let mut tail = 0.0;
    for k in 1..=k_max {
        weight *= ratio;
        tail += weight * (k as f64 * s).cos();
    }
    1.0 + 2.0 * tail
}

/// Bound on `|comb_series(s, beta, K) - comb_closed(s, beta)|`, uniform in `s`.
pub fn series_tail_bound(beta: f64, k_max: usize) -> f64 {
    2.0 * (-(k_max as f64 + 1.0) * beta).exp() / -(-beta).exp_m1()
}

/// Smallest `K` whose tail bound is below `tolerance`.
pub fn adaptive_truncation(beta: f64, tolerance: f64) -> Result<usize> {
    check_beta(beta)?;
    if !(tolerance > 0.0) {
        return Err(domain("tolerance must be positive"));
    }
    // 2 e^{-(K+1) beta} / (1 - e^{-beta}) <= tol
    let needed = ((2.0 / (tolerance * -(-beta).exp_m1())).ln() / beta - 1.0).ceil();
    let mut k = needed.max(1.0) as usize;
    while series_tail_bound(beta, k) > tolerance {
        k += 1;
    }
    Ok(k)
}

/// Series evaluated with the adaptive truncation for [`SERIES_TOLERANCE`].
pub fn comb_series_adaptive(s: f64, beta: f64) -> Result<f64> {
    let k = adaptive_truncation(beta, SERIES_TOLERANCE)?;
    Ok(series_unchecked(s, beta, k))
}

/// Fourier coefficient `exp(-|k| beta)`.
pub fn comb_fourier_coeff(k: i64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok((-(k.unsigned_abs() as f64) * beta).exp())
}

/// Half width at half maximum of one pulse, in radians of `s`.
///
/// Solves `T(s*) = T(0) / 2`, i.e. `cos s* = 2 - cosh beta`, written as
/// `s* = 2 asin(sinh(beta / 2))` to stay accurate for small `beta`.
/// Small-`beta` behavior is `s* = beta + beta^3 / 24 + ...`; note that this is
/// twice the `beta / 2` figure obtained when the width is read off the
/// Lorentzian `beta / (beta^2/2 + s^2/2)` with a different convention.
///
/// When `cosh beta >= 3` the profile never drops to half its peak, and the
/// full half period `π` is returned.
pub fn comb_hwhm(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let x = (0.5 * beta).sinh();
    if x >= 1.0 {
        return Ok(PI);
    }
    Ok(2.0 * x.asin())
}

/// Mean of `T_beta` over one period by the trapezoid rule on `n` intervals.
pub fn period_mean(beta: f64, n: usize) -> Result<f64> {
    check_beta(beta)?;
    if n < 2 {
        return Err(domain("at least two intervals required"));
    }
    let h = 2.0 * PI / n as f64;
    // Periodic trapezoid: the two end points coincide.
    let sum: f64 = (0..n).map(|i| comb_from_beta(i as f64 * h, beta)).sum();
    Ok(sum / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bisect_half_max(beta: f64) -> f64 {
        let target = comb_from_beta(0.0, beta) / 2.0;
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if comb_from_beta(mid, beta) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn closed_form_at_origin_is_coth_half_beta() {
        let v = comb_closed(0.0, 1.0).unwrap();
        assert!((v - 1.0 / (0.5f64).tanh()).abs() < 1e-14);
        assert!((v - 2.163_953_413_738_653).abs() < 1e-12);
    }

    #[test]
    fn closed_form_at_pi_matches_long_series() {
        let oracle = series_unchecked(PI, 1.0, 200);
        let v = comb_closed(PI, 1.0).unwrap();
        assert!((v - oracle).abs() < 1e-13);
        assert!((v - 0.462_117_157_260_009_8).abs() < 1e-12);
    }

    #[test]
    fn series_examples() {
        let a = comb_series(0.0, 1.0, 50).unwrap();
        assert!((a - comb_closed(0.0, 1.0).unwrap()).abs() < 1e-12);
        let b = comb_series(PI / 2.0, 0.5, 200).unwrap();
        assert!((b - comb_closed(PI / 2.0, 0.5).unwrap()).abs() < 1e-12);
        // every exponential weight underflows
        assert_eq!(comb_series(0.3, 800.0, 1).unwrap(), 1.0);
    }

    #[test]
    fn fourier_coefficients() {
        assert_eq!(comb_fourier_coeff(0, 0.7).unwrap(), 1.0);
        assert!((comb_fourier_coeff(2, 0.5).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(
            comb_fourier_coeff(-3, 0.2).unwrap(),
            comb_fourier_coeff(3, 0.2).unwrap()
        );
    }

    #[test]
    fn hwhm_matches_bisection() {
        for &beta in &[0.1, 0.5, 1.0, 1.7] {
            let h = comb_hwhm(beta).unwrap();
            assert!((h - bisect_half_max(beta)).abs() < 1e-12, "beta {beta}");
        }
        assert!((comb_hwhm(0.1).unwrap() - 0.100_083_438).abs() < 1e-9);
        assert!((comb_hwhm(1.0).unwrap() - 1.096_267_52).abs() < 1e-8);
        assert!((comb_hwhm(1e-4).unwrap() / 1e-4 - 1.0).abs() < 1e-8);
        assert_eq!(comb_hwhm(2.0).unwrap(), PI);
    }

    #[test]
    fn rejects_bad_beta() {
        assert!(comb_closed(0.0, 0.0).is_err());
        assert!(comb_closed(0.0, -1.0).is_err());
        assert!(comb_closed(0.0, 1e-7).is_err());
        assert!(comb_series(0.0, 1.0, 0).is_err());
        assert!(CombParams::new(f64::NAN, 3).is_err());
    }

    #[test]
    fn normalization_by_trapezoid() {
        for &beta in &[0.05, 0.5, 2.0] {
            let m = period_mean(beta, 4096).unwrap();
            assert!((m - 1.0).abs() < 1e-8, "beta {beta}: {m}");
        }
    }

    #[test]
    fn parseval() {
        for &beta in &[0.05, 0.5, 2.0] {
            let n = 8192;
            let h = 2.0 * PI / n as f64;
            let mean_sq: f64 = (0..n)
                .map(|i| comb_from_beta(i as f64 * h, beta).powi(2))
                .sum::<f64>()
                / n as f64;
            let k = adaptive_truncation(2.0 * beta, 1e-14).unwrap();
            let coeffs: f64 = 1.0 + 2.0 * (1..=k).map(|k| (-2.0 * k as f64 * beta).exp()).sum::<f64>();
            assert!((mean_sq - coeffs).abs() < 1e-8 * coeffs, "beta {beta}");
        }
    }

    #[test]
    fn adaptive_truncation_meets_bound() {
        for &beta in &[0.01, 0.1, 1.0, 3.0] {
            let k = adaptive_truncation(beta, 1e-12).unwrap();
            assert!(series_tail_bound(beta, k) <= 1e-12);
            if k > 1 {
                assert!(series_tail_bound(beta, k - 1) > 1e-12);
            }
        }
    }

    #[test]
    fn ratio_form_agrees_with_hyperbolic_form() {
        for &beta in &[0.01f64, 0.3, 2.0, 10.0] {
            for i in 0..20 {
                let s = i as f64 * 0.37 - 3.0;
                let direct = beta.sinh() / (beta.cosh() - s.cos());
                let v = comb_closed(s, beta).unwrap();
                assert!((v - direct).abs() < 1e-10 * direct.max(1.0));
            }
        }
        assert_eq!(comb_from_ratio(0.0, 1.3), 1.0);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn periodic(s in -20.0f64..20.0, beta in 0.01f64..5.0) {
                let a = comb_closed(s, beta).unwrap();
                let b = comb_closed(s + 2.0 * PI, beta).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
                prop_assert!(a > 0.0);
            }

            #[test]
            fn series_within_tail_bound(s in -PI..PI, beta in 0.01f64..3.0, k in 1usize..400) {
                let err = (comb_series(s, beta, k).unwrap() - comb_closed(s, beta).unwrap()).abs();
                prop_assert!(err <= series_tail_bound(beta, k) + 1e-12);
            }
        }
    }
}
