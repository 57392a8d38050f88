use std::f64::consts::PI;

use mlock_core::thermomech::*;

fn fiber_t_n(omega_m: f64) -> f64 {
    effective_noise(&NoiseChain::fiber_ring(omega_m)).unwrap().t_n
}

fn absorption(k_a1: f64) -> AbsorptionModel {
    AbsorptionModel { a_h0: 1e6, k_a1, k_a2: 0.0 }
}

#[test]
fn instability_regions_follow_detuning_sign() {
    let mech = MechParams::aluminum_device();
    mech.check_aluminum_signs().unwrap();
    let t_n = fiber_t_n(mech.omega_m);
    for k in [1e5, 1e6, 1e7, 1e8] {
        let red = absorption(k);
        let blue = absorption(-k);
        assert!(seo_threshold(&mech, &red).value().is_some());
        assert!(seo_threshold(&mech, &blue).value().is_none());
        assert!(mml_threshold(&mech, &blue, t_n).unwrap().value().is_some());
        assert!(mml_threshold(&mech, &red, t_n).unwrap().value().is_none());
    }
}

#[test]
fn simulated_growth_follows_detuning_sign() {
    let mech = MechParams::aluminum_device();
    let t_n = fiber_t_n(mech.omega_m);
    let opts = GrowthOptions::default();
    let red = absorption(1e7);
    let blue = absorption(-1e7);
    let l_seo = seo_threshold(&mech, &red).value().unwrap();
    let l_mml = mml_threshold(&mech, &blue, t_n).unwrap().value().unwrap();

    assert!(growth_rate(&mech, &red, &IntensityDrive::cw(2.0 * l_seo), &opts).unwrap() > 0.0);
    assert!(growth_rate(&mech, &blue, &IntensityDrive::cw(2.0 * l_seo), &opts).unwrap() < 0.0);
    let lock_blue = IntensityDrive::mechanical_lock(&mech, &blue, 2.0 * l_mml, t_n);
    let lock_red = IntensityDrive::mechanical_lock(&mech, &red, 2.0 * l_mml, t_n);
    assert!(growth_rate(&mech, &blue, &lock_blue, &opts).unwrap() > 0.0);
    assert!(growth_rate(&mech, &red, &lock_red, &opts).unwrap() < 0.0);
}

#[test]
fn locked_pulses_arrive_at_the_absorption_minimum() {
    let mech = MechParams::aluminum_device();
    let t_n = fiber_t_n(mech.omega_m);
    for k in [-1e7, 1e7] {
        let abs = absorption(k);
        let l0 = 0.5 * mml_threshold(&mech, &absorption(-1e7), t_n).unwrap().value().unwrap();
        let drive = IntensityDrive::mechanical_lock(&mech, &abs, l0, t_n);
        let eq = cw_equilibrium(&mech, &abs, l0).unwrap();
        let amp = 1e-4 / k.abs();
        let init = MirrorState { x: eq.x + amp, ..eq };
        let dt = 2.0 * PI / (256.0 * mech.omega_m);
        let traj = simulate(&mech, &abs, &drive, init, 10.0 * 2.0 * PI / mech.omega_m, dt).unwrap();
        let d = &traj.drive;
        let mut peaks = 0;
        for i in 1..d.len() - 1 {
            if d[i] > d[i - 1] && d[i] >= d[i + 1] && d[i] > 2.0 * l0 {
                peaks += 1;
                let a_h = abs.absorption(traj.x[i]);
                let local = (traj.x[i] - eq.x).hypot(traj.v[i] / mech.omega_m);
                let dx = (traj.x[i] - eq.x) / local;
                // the absorption is at its lowest over the cycle
                assert!(a_h < abs.absorption(eq.x), "k {k}: peak at x offset {dx}");
                assert!(dx.abs() > 0.95, "k {k}: peak at x offset {dx}");
            }
        }
        assert!((9..=11).contains(&peaks), "k {k}: {peaks} pulses");
    }
}
