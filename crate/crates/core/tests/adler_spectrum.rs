use std::f64::consts::PI;

use mlock_core::adler_sync::*;

fn calibrated(v_am: f64) -> AdlerParams {
    AdlerParams::from_threshold(2.0 * PI * 371.4e3, 2.0 * PI * 371.3e3, 0.156, v_am).unwrap()
}

#[test]
fn sidebands_at_twice_threshold_bias() {
    let p = calibrated(0.078);
    assert!((normalized_bias(&p).unwrap() - 2.0).abs() < 1e-12);
    let opts = SweepOptions { segment_len: Some(1 << 16), band: Some((370e3, 373e3)), ..Default::default() };
    let map = pd_spectrum_sweep_with(&p, &[0.078], 2.0, (1u64 << 20) as f64, &opts).unwrap();
    assert!(map.warnings.is_empty(), "{:?}", map.warnings);
    let lines = sideband_lines(&map.column(0), &p).unwrap();

    let expect_spacing = p.time_scale() * 3f64.sqrt() / (2.0 * PI);
    assert!((lines.spacing_hz - expect_spacing).abs() <= map.resolution, "{lines:?}");
    let expect_dom = 371.4e3 + expect_spacing;
    assert!((lines.dominant_hz - expect_dom).abs() <= map.resolution, "{lines:?}");
    let q = (-bias_beta(2.0).unwrap()).exp();
    assert!((lines.amplitude_ratio / q - 1.0).abs() < 0.1, "{} vs {q}", lines.amplitude_ratio);
}

#[test]
fn locked_amplitudes_show_a_single_line() {
    let p = calibrated(0.312);
    let opts = SweepOptions { segment_len: Some(1 << 14), band: Some((370e3, 373e3)), ..Default::default() };
    let map = pd_spectrum_sweep_with(&p, &[0.312], 0.5, (1u64 << 20) as f64, &opts).unwrap();
    let spec = map.column(0);
    let peak = spec.refined_peak(spec.peak_bin());
    assert!((peak - 371.4e3).abs() <= spec.resolution);
    assert!(sideband_lines(&spec, &p).is_err());
    let total = spec.total_power();
    assert!(spec.band_power(371.4e3, 3.0 * spec.resolution) > 0.99 * total);
}

#[test]
fn sweep_spans_lock_boundary() {
    let p = calibrated(0.156);
    let grid: Vec<f64> = (0..8).map(|j| 0.156 * (0.25 + 0.25 * j as f64)).collect();
    let map = pd_spectrum_sweep(&p, &grid, 0.25, (1u64 << 20) as f64).unwrap();
    assert_eq!(map.psd.len(), grid.len());
    for (j, &i_b) in map.i_b.iter().enumerate() {
        assert!((i_b - 0.156 / grid[j]).abs() < 1e-12);
    }
    // the slowest beats are flagged
    assert!(!map.warnings.is_empty());
}

#[test]
fn ode_and_closed_form_agree_across_biases() {
    for &i_b in &[1.05, 1.5, 2.0, 4.0, -3.0] {
        let phi0 = 0.3;
        let traj = integrate_adler(i_b, phi0, 60.0, 1e-3).unwrap();
        let shift = unlocked_alignment(i_b, phi0).unwrap();
        let v = traj.velocity(i_b);
        for (k, &tau) in traj.tau.iter().enumerate().step_by(97) {
            let cf = unlocked_closed_form(i_b, tau + shift).unwrap();
            assert!((v[k] - cf).abs() < 1e-3 * cf.abs().max(1.0), "i_b {i_b} tau {tau}: {} vs {cf}", v[k]);
        }
        let slope = traj.mean_slope().unwrap();
        let w = beat_frequency(i_b) * i_b.signum();
        assert!((slope - w).abs() < 1e-3 * w.abs().max(0.1), "i_b {i_b}: {slope} vs {w}");
    }
}
