use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{domain, Error, Result};

pub const DEFAULT_OVERLAP: f64 = 0.5;

/// One-sided power spectral density.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Bin frequencies in Hz, ascending from 0 to Nyquist.
    pub freqs: Vec<f64>,
    /// Power per Hz.
    pub psd: Vec<f64>,
    /// Bin spacing in Hz.
    pub resolution: f64,
    /// Number of averaged segments.
    pub segments: usize,
}

impl SpectrumResult {
    /// Integral of the density over all bins (rectangle rule).
    pub fn total_power(&self) -> f64 {
        self.psd.iter().sum::<f64>() * self.resolution
    }

    /// Power in bins whose frequency lies within `half_width` Hz of `f`.
    pub fn band_power(&self, f: f64, half_width: f64) -> f64 {
        self.freqs
            .iter()
            .zip(&self.psd)
            .filter(|(fr, _)| (*fr - f).abs() <= half_width)
            .map(|(_, p)| p)
            .sum::<f64>()
            * self.resolution
    }

    /// Index of the largest bin.
    pub fn peak_bin(&self) -> usize {
        self.psd
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, &p)| if p > acc.1 { (i, p) } else { acc })
            .0
    }

    /// Peak frequency refined by a parabola through the peak and its
    /// neighbors in log power.
    pub fn refined_peak(&self, bin: usize) -> f64 {
        if bin == 0 || bin + 1 >= self.psd.len() {
            return self.freqs[bin];
        }
        let (a, b, c) = (
            self.psd[bin - 1].max(f64::MIN_POSITIVE).ln(),
            self.psd[bin].max(f64::MIN_POSITIVE).ln(),
            self.psd[bin + 1].max(f64::MIN_POSITIVE).ln(),
        );
        let denom = a - 2.0 * b + c;
        let shift = if denom.abs() > 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
        self.freqs[bin] + shift.clamp(-0.5, 0.5) * self.resolution
    }
}

fn hann(n: usize) -> Vec<f64> {
    // periodic Hann, the usual choice for spectral analysis
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect()
}

/// Welch estimate: Hann-windowed segments, mean removed per segment,
/// periodograms averaged over overlapping segments.
///
/// The density is one-sided and scaled by the window power so that its
/// integral equals the variance of the signal.
pub fn welch_psd(
    signal: &[f64],
    sample_rate: f64,
    segment_len: usize,
    overlap: f64,
) -> Result<SpectrumResult> {
    if !segment_len.is_power_of_two() || segment_len < 4 {
        return Err(domain(format!(
            "segment length must be a power of two >= 4, got {segment_len}"
        )));
    }
    if !(0.0..1.0).contains(&overlap) {
        return Err(domain(format!("overlap must lie in [0, 1), got {overlap}")));
    }
    if !(sample_rate > 0.0) {
        return Err(domain("sample rate must be positive"));
    }
    if signal.len() < segment_len {
        return Err(Error::InsufficientData(format!(
            "signal of {} samples is shorter than one segment of {segment_len}",
            signal.len()
        )));
    }

    let hop = ((segment_len as f64) * (1.0 - overlap)).round().max(1.0) as usize;
    let window = hann(segment_len);
    let window_power: f64 = window.iter().map(|w| w * w).sum();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(segment_len);

    let n_bins = segment_len / 2 + 1;
    let mut accum = vec![0.0; n_bins];
    let mut buf = vec![Complex64::new(0.0, 0.0); segment_len];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut segments = 0;
    let mut start = 0;
    while start + segment_len <= signal.len() {
        let seg = &signal[start..start + segment_len];
        let mean = seg.iter().sum::<f64>() / segment_len as f64;
        for ((b, &x), &w) in buf.iter_mut().zip(seg).zip(&window) {
            *b = Complex64::new((x - mean) * w, 0.0);
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for (acc, b) in accum.iter_mut().zip(&buf) {
            *acc += b.norm_sqr();
        }
        segments += 1;
        start += hop;
    }

    let scale = 1.0 / (sample_rate * window_power * segments as f64);
    let last = n_bins - 1;
    let psd = accum
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let one_sided = if k == 0 || k == last { 1.0 } else { 2.0 };
            p * scale * one_sided
        })
        .collect();
    let resolution = sample_rate / segment_len as f64;
    Ok(SpectrumResult {
        freqs: (0..n_bins).map(|k| k as f64 * resolution).collect(),
        psd,
        resolution,
        segments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sde_engine::{normal_draws, RngStream};

    #[test]
    fn bin_centered_sine_power() {
        let fs = 1024.0;
        let f0 = 64.0;
        let x: Vec<f64> = (0..16384)
            .map(|i| (2.0 * PI * f0 * i as f64 / fs).sin())
            .collect();
        let s = welch_psd(&x, fs, 256, 0.5).unwrap();
        assert_eq!(s.freqs[s.peak_bin()], f0);
        assert!((s.total_power() - 0.5).abs() < 0.005);
        assert!((s.band_power(f0, 3.0 * s.resolution) - 0.5).abs() < 0.005);
    }

    #[test]
    fn white_noise_is_flat_with_variance_integral() {
        let sigma = 1.7;
        let x: Vec<f64> = normal_draws(&mut RngStream::new(3), 1 << 18)
            .into_iter()
            .map(|v| sigma * v)
            .collect();
        let s = welch_psd(&x, 100.0, 512, 0.5).unwrap();
        let total = s.total_power();
        assert!((total - sigma * sigma).abs() < 0.05 * sigma * sigma, "{total}");
        let level = sigma * sigma / 50.0;
        let mid = &s.psd[10..246];
        let mean = mid.iter().sum::<f64>() / mid.len() as f64;
        assert!((mean - level).abs() < 0.05 * level);
    }

    #[test]
    fn two_tone_power_ratio() {
        let fs = 2048.0;
        let x: Vec<f64> = (0..32768)
            .map(|i| {
                let t = i as f64 / fs;
                3.0 * (2.0 * PI * 128.0 * t).cos() + (2.0 * PI * 384.0 * t).cos()
            })
            .collect();
        let s = welch_psd(&x, fs, 512, 0.5).unwrap();
        let a = s.psd[(128.0 / s.resolution) as usize];
        let b = s.psd[(384.0 / s.resolution) as usize];
        assert!((a / b - 9.0).abs() < 0.45);
    }

    #[test]
    fn input_checks() {
        let x = vec![0.0; 100];
        assert!(matches!(welch_psd(&x, 1.0, 128, 0.5), Err(Error::InsufficientData(_))));
        assert!(welch_psd(&x, 1.0, 48, 0.5).is_err());
        assert!(welch_psd(&x, 1.0, 64, 1.0).is_err());
        assert!(welch_psd(&x, 0.0, 64, 0.5).is_err());
    }
}
