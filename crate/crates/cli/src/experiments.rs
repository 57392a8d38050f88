//! One function per experiment: resolved parameters in, tables and a summary out.

use std::f64::consts::PI;

use mlock_core::adler_sync::{
    bias_beta, beat_frequency, normalized_bias, pd_spectrum_sweep_with, sideband_lines, AdlerParams, SweepOptions,
};
use mlock_core::combmath::{adaptive_truncation, comb_closed, comb_hwhm, comb_series, period_mean, SERIES_TOLERANCE};
use mlock_core::phase_lattice::{
    ensemble_waveform, finite_chain_waveform, gibbs_neighbor_correlation, sample_gibbs_exact, Boundary,
    LangevinLattice, LatticeConfig, ModeAmplitudes, StationaryStats,
};
use mlock_core::pulse_shaping::{continuous_solution, gamma_f_from_band, roundtrip_fixed_points, roundtrip_iterate};
use mlock_core::sde_engine::RngStream;
use mlock_core::thermomech::{
    cw_equilibrium, effective_noise, forced_initial_state, gamma_h0, linear_response_oracle, mml_threshold,
    round_trip_frequency, search_threshold, seo_threshold, simulate_sampled, theta_t, AbsorptionModel,
    GrowthOptions, Halt, IntensityDrive, MechParams, NoiseChain, Threshold,
};
use mlock_core::Result;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::{Experiment, Resolved};
use crate::output::{downsample_indices, Table};

pub struct Outcome {
    pub tables: Vec<Table>,
    pub summary: Value,
}

pub fn execute(experiment: Experiment, p: &Resolved, seed: u64) -> Result<Outcome> {
    match experiment {
        Experiment::Comb => comb(p),
        Experiment::Lattice => lattice(p, seed),
        Experiment::Pulse => pulse(p),
        Experiment::Adler => adler(p),
        Experiment::Seo => seo(p),
        Experiment::Mml => mml(p),
        Experiment::Noise => noise(p),
    }
}

fn period_grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| -PI + 2.0 * PI * i as f64 / points as f64).collect()
}

fn comb(p: &Resolved) -> Result<Outcome> {
    let beta = p.num("beta");
    let points = p.int("points");
    let k = match p.opt_int("truncation_k") {
        Some(k) => k,
        None => adaptive_truncation(beta, SERIES_TOLERANCE)?,
    };
    let mut t = Table::new("comb", &["s", "closed", "series"]);
    for s in period_grid(points) {
        t.push(vec![s.into(), comb_closed(s, beta)?.into(), comb_series(s, beta, k)?.into()]);
    }
    Ok(Outcome {
        tables: vec![t],
        summary: json!({
            "beta": beta,
            "hwhm": comb_hwhm(beta)?,
            "truncation_k": k,
            "period_mean": period_mean(beta, points)?,
        }),
    })
}

fn lattice(p: &Resolved, seed: u64) -> Result<Outcome> {
    let boundary = if p.text("boundary") == "periodic" { Boundary::Periodic } else { Boundary::OpenChain };
    let mu = p.num("mu_m");
    let config = LatticeConfig {
        n_modes: p.int("n_modes"),
        mu_m: mu,
        t_n: p.num("t_n"),
        dt: p.opt_num("dt").unwrap_or(0.01 / mu),
        seed,
        boundary,
    };
    let beta_n = config.beta_n();
    let max_k = p.int("max_k");
    let every = p.int("sample_every");
    let samples = (p.int("steps") / every).max(1);

    let mut sim = LangevinLattice::new(config.clone())?;
    let mut stats = StationaryStats::new(max_k);
    sim.run(config.burn_in_steps(), samples, every, |s| stats.observe(s))?;
    let summary = stats.summary(samples.clamp(2, 50));

    let rho = gibbs_neighbor_correlation(beta_n);
    let mut corr = Table::new("correlations", &["k", "mean", "std_error", "von_mises", "gaussian"]);
    for (k, est) in summary.correlation.iter().enumerate() {
        corr.push(vec![
            k.into(),
            est.mean.into(),
            est.std_error.into(),
            rho.powi(k as i32).into(),
            (-beta_n * k as f64).exp().into(),
        ]);
    }
    let mut tables = vec![corr];

    let gibbs = p.int("gibbs_samples");
    if gibbs >= 2 {
        let mut rng = RngStream::with_stream(seed, 1);
        let states = (0..gibbs)
            .map(|_| sample_gibbs_exact(beta_n, config.n_modes, boundary, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        let grid = period_grid(p.int("waveform_points"));
        let est = ensemble_waveform(&states, &ModeAmplitudes::uniform(config.n_modes), &grid)?;
        let mut w = Table::new("waveform", &["s", "mean", "std_error", "finite_chain", "comb"]);
        for (s, e) in grid.iter().zip(&est) {
            let comb = if beta_n > 0.0 { comb_closed(*s, beta_n)? } else { f64::NAN };
            w.push(vec![
                (*s).into(),
                e.mean.into(),
                e.std_error.into(),
                finite_chain_waveform(rho, config.n_modes, *s).into(),
                comb.into(),
            ]);
        }
        tables.push(w);
    }

    Ok(Outcome {
        tables,
        summary: json!({
            "beta_n": beta_n,
            "dt": config.dt,
            "snapshots": summary.snapshots,
            "mean_square_difference": {
                "mean": summary.mean_square_difference.mean,
                "std_error": summary.mean_square_difference.std_error,
                "gaussian": 2.0 * beta_n,
            },
            "neighbor_correlation_exact": rho,
        }),
    })
}

fn pulse(p: &Resolved) -> Result<Outcome> {
    let g_m = p.num("g_m");
    let n = p.opt_int("round_trips").unwrap_or((5.0 / g_m).ceil() as usize);
    let t_r = 2.0 * PI / round_trip_frequency(p.num("l_r"), p.num("n_eff"));
    let gm = Complex64::new(g_m, 0.0);
    let traj = roundtrip_iterate(Complex64::new(p.num("g0"), 0.0), gm, n)?;
    let mut t = Table::new("pulse", &["round_trip", "time", "g", "tanh", "relative_gap"]);
    let mut worst: f64 = 0.0;
    for (k, g) in traj.iter().enumerate() {
        let exact = if p.num("g0") == 0.0 { continuous_solution(gm, k as f64, 0.0)?.re } else { f64::NAN };
        let gap = if exact != 0.0 { (g.re - exact).abs() / exact.abs() } else { 0.0 };
        if gap.is_finite() {
            worst = worst.max(gap);
        }
        t.push(vec![k.into(), (k as f64 * t_r).into(), g.re.into(), exact.into(), gap.into()]);
    }
    let (stable, _) = roundtrip_fixed_points(gm);
    let sqrt_gamma_f = gamma_f_from_band(p.num("delta_lambda"), p.num("lambda_l"), p.num("n_eff"))?;
    Ok(Outcome {
        tables: vec![t],
        summary: json!({
            "g_m": g_m,
            "round_trips": n,
            "round_trip_time": t_r,
            "fixed_point": stable.re,
            "max_relative_gap": worst,
            "sqrt_gamma_f": sqrt_gamma_f,
            "gamma_t": g_m * g_m * sqrt_gamma_f * sqrt_gamma_f,
        }),
    })
}

fn adler(p: &Resolved) -> Result<Outcome> {
    let omega_r = p.num("omega_r");
    let omega_am = omega_r + p.num("detuning");
    let v0 = p.num("v_am0");
    let base = AdlerParams::from_threshold(omega_am, omega_r, v0, v0)?;
    let n = p.int("v_am_points");
    let (a, b) = (p.num("v_am_start"), p.num("v_am_stop"));
    let grid: Vec<f64> = (0..n)
        .map(|j| v0 * if n == 1 { a } else { a + (b - a) * j as f64 / (n - 1) as f64 })
        .collect();
    let f_am = omega_am / (2.0 * PI);
    let half = 0.5 * p.num("band_width");
    let opts = SweepOptions { segment_len: p.opt_int("segment_len"), band: Some((f_am - half, f_am + half)), ..Default::default() };
    let map = pd_spectrum_sweep_with(&base, &grid, p.num("duration"), p.num("sample_rate"), &opts)?;

    let mut spectrum = Table::new("spectrum_map", &["v_am", "i_b", "frequency", "psd"]);
    let mut lines = Table::new(
        "sidebands",
        &["v_am", "i_b", "locked", "beat_expected", "spacing", "ratio", "ratio_expected"],
    );
    for (j, &v) in grid.iter().enumerate() {
        for (f, d) in map.freqs.iter().zip(&map.psd[j]) {
            spectrum.push(vec![v.into(), map.i_b[j].into(), (*f).into(), (*d).into()]);
        }
        let params = base.with_amplitude(v);
        let i_b = normalized_bias(&params)?;
        let w = beat_frequency(i_b);
        let row = if w > 0.0 {
            let beat = params.time_scale().abs() * w / (2.0 * PI);
            let q = (-bias_beta(i_b)?).exp();
            match sideband_lines(&map.column(j), &params) {
                Ok(l) => vec![v.into(), i_b.into(), 0usize.into(), beat.into(), l.spacing_hz.into(), l.amplitude_ratio.into(), q.into()],
                Err(_) => vec![v.into(), i_b.into(), 0usize.into(), beat.into(), f64::NAN.into(), f64::NAN.into(), q.into()],
            }
        } else {
            vec![v.into(), i_b.into(), 1usize.into(), 0.0.into(), f64::NAN.into(), f64::NAN.into(), f64::NAN.into()]
        };
        lines.push(row);
    }
    Ok(Outcome {
        tables: vec![spectrum, lines],
        summary: json!({
            "zeta_am": base.zeta_am,
            "v_am0": v0,
            "i_b": map.i_b,
            "resolution": map.resolution,
            "segments": map.segments,
            "warnings": map.warnings,
        }),
    })
}

fn device(p: &Resolved) -> (MechParams, AbsorptionModel) {
    let omega_m = p.num("omega_m");
    (
        MechParams {
            m_m: p.num("m_m"),
            omega_m,
            gamma_m: p.num("gamma_m"),
            theta_ph: p.num("theta_ph"),
            theta_fh: p.num("theta_fh"),
            kappa_m: p.num("kappa_ratio") * omega_m,
        },
        AbsorptionModel { a_h0: p.num("a_h0"), k_a1: p.num("k_a1"), k_a2: p.num("k_a2") },
    )
}

fn chain(p: &Resolved) -> NoiseChain {
    let omega_r = p.opt_num("omega_r").unwrap_or_else(|| round_trip_frequency(p.num("l_r"), p.num("n_eff")));
    NoiseChain {
        g_oa: p.num("g_oa"),
        n_pi: p.num("n_pi"),
        gamma_om: p.num("gamma_om_ratio") * omega_r,
        n_p: p.num("n_p"),
        lambda_l: p.num("lambda_l"),
        delta_lambda: p.num("delta_lambda"),
        l_r: p.num("l_r"),
        n_eff: p.num("n_eff"),
        omega_p: 2.0 * PI * mlock_core::SPEED_OF_LIGHT / p.num("lambda_l"),
    }
}

fn threshold_json(t: Threshold) -> Value {
    match t {
        Threshold::Exists(v) => json!(v),
        Threshold::Absent => json!("absent"),
    }
}

/// Formula threshold, simulated bracket and their relative gap.
fn threshold_report<F>(
    mech: &MechParams,
    abs: &AbsorptionModel,
    formula: Threshold,
    drive_at: F,
    p: &Resolved,
) -> Result<Value>
where
    F: Fn(f64) -> IntensityDrive,
{
    let Threshold::Exists(l_star) = formula else {
        return Ok(json!({ "formula": "absent" }));
    };
    if !p.flag("simulate_threshold") {
        return Ok(json!({ "formula": l_star }));
    }
    let opts = GrowthOptions::default();
    let sim = search_threshold(mech, abs, drive_at, 0.5 * l_star, 2.0 * l_star, p.num("rel_tol"), &opts)?;
    Ok(json!({
        "formula": l_star,
        "simulated": sim,
        "relative_gap": (sim - l_star) / l_star,
    }))
}

fn trajectory_table<F>(
    mech: &MechParams,
    abs: &AbsorptionModel,
    l0: f64,
    drive_at: F,
    p: &Resolved,
) -> Result<(Table, Value)>
where
    F: Fn(f64) -> IntensityDrive,
{
    let drive = drive_at(l0);
    let kick = if abs.k_a1 != 0.0 { 1e-3 / abs.k_a1.abs() } else { 1e-12 };
    let init = forced_initial_state(mech, abs, &drive, kick)?;
    let steps_per_period = 64usize;
    let dt = 2.0 * PI / (mech.omega_m * steps_per_period as f64);
    let t_end = p.num("periods") * 2.0 * PI / mech.omega_m;
    let traj = simulate_sampled(mech, abs, &drive, init, t_end, dt, 1)?;
    let mut t = Table::new("trajectory", &["t", "x", "v", "t_r", "drive"]);
    for i in downsample_indices(traj.len(), p.int("max_points")) {
        t.push(vec![traj.time[i].into(), traj.x[i].into(), traj.v[i].into(), traj.t_r_rel[i].into(), traj.drive[i].into()]);
    }
    let halt = match traj.halt {
        Some(Halt::AbsorptionRange { time, x }) => json!({ "absorption_range": { "time": time, "x": x } }),
        None => Value::Null,
    };
    Ok((t, json!({ "l0": l0, "halt": halt })))
}

fn response_table(mech: &MechParams, abs: &AbsorptionModel, l_max: f64) -> Result<Table> {
    let mut t = Table::new("response", &["l0", "gamma_h0", "delta_gamma", "gamma_eff", "omega_eff"]);
    for i in 0..=40 {
        let l0 = l_max * i as f64 / 40.0;
        let r = linear_response_oracle(mech, abs, l0, mech.omega_m)?;
        t.push(vec![
            l0.into(),
            gamma_h0(mech, abs, l0).into(),
            r.delta_gamma.into(),
            r.gamma_eff(mech).into(),
            r.ringdown_frequency(mech).into(),
        ]);
    }
    Ok(t)
}

fn seo(p: &Resolved) -> Result<Outcome> {
    let (mech, abs) = device(p);
    mech.validate()?;
    abs.validate()?;
    let formula = seo_threshold(&mech, &abs);
    let report = threshold_report(&mech, &abs, formula, IntensityDrive::cw, p)?;
    let scale = p.opt_num("l0").or(formula.value().map(|l| 1.5 * l));
    let mut tables = Vec::new();
    let mut run = Value::Null;
    if let Some(l0) = scale {
        tables.push(response_table(&mech, &abs, 2.0 * l0)?);
        let (t, info) = trajectory_table(&mech, &abs, l0, IntensityDrive::cw, p)?;
        tables.push(t);
        run = info;
    }
    let eq = scale.map(|l0| cw_equilibrium(&mech, &abs, l0)).transpose()?;
    Ok(Outcome {
        tables,
        summary: json!({
            "threshold": report,
            "theta_t": theta_t(mech.kappa_m, mech.omega_m)?,
            "gamma_h0_per_watt": gamma_h0(&mech, &abs, 1.0),
            "trajectory": run,
            "equilibrium": eq.map(|e| json!({ "x": e.x, "t_r": e.t_r })),
        }),
    })
}

fn mml(p: &Resolved) -> Result<Outcome> {
    let (mech, abs) = device(p);
    mech.validate()?;
    abs.validate()?;
    let noise = effective_noise(&chain(p))?;
    let t_n = noise.t_n;
    let formula = mml_threshold(&mech, &abs, t_n)?;
    let lock = |l0| IntensityDrive::mechanical_lock(&mech, &abs, l0, t_n);
    let report = threshold_report(&mech, &abs, formula, lock, p)?;
    // the free-running instability needs the opposite detuning
    let mirrored = AbsorptionModel { k_a1: -abs.k_a1, k_a2: abs.k_a2, ..abs };
    let seo_mirrored = seo_threshold(&mech, &mirrored);
    let ratio = match (formula.value(), seo_mirrored.value()) {
        (Some(a), Some(b)) => json!(a / b),
        _ => Value::Null,
    };
    let scale = p.opt_num("l0").or(formula.value().map(|l| 1.5 * l));
    let mut tables = Vec::new();
    let mut run = Value::Null;
    if let Some(l0) = scale {
        let (t, info) = trajectory_table(&mech, &abs, l0, lock, p)?;
        tables.push(t);
        run = info;
    }
    Ok(Outcome {
        tables,
        summary: json!({
            "threshold": report,
            "t_n": t_n,
            "two_omega_over_t_n": 2.0 * mech.omega_m / t_n,
            "seo_threshold_opposite_detuning": threshold_json(seo_mirrored),
            "threshold_ratio": ratio,
            "threshold_ratio_expected": t_n / (2.0 * mech.omega_m),
            "trajectory": run,
        }),
    })
}

fn noise(p: &Resolved) -> Result<Outcome> {
    let c = chain(p);
    let out = effective_noise(&c)?;
    let omega_m = p.num("omega_m");
    let omega_r = c.gamma_om / p.num("gamma_om_ratio");
    let mut t = Table::new("noise", &["quantity", "value"]);
    let rows: [(&str, f64); 7] = [
        ("alpha_nf", out.alpha_nf),
        ("t_n", out.t_n),
        ("n_r", out.n_r),
        ("p_oa", out.p_oa),
        ("omega_r", omega_r),
        ("two_omega_m_over_t_n", 2.0 * omega_m / out.t_n),
        ("threshold_ratio", out.t_n / (2.0 * omega_m)),
    ];
    for (name, v) in rows {
        t.push(vec![name.into(), v.into()]);
    }
    Ok(Outcome {
        tables: vec![t],
        summary: json!({
            "alpha_nf": out.alpha_nf,
            "t_n": out.t_n,
            "n_r": out.n_r,
            "p_oa": out.p_oa,
            "omega_r": omega_r,
            "two_omega_m_over_t_n": 2.0 * omega_m / out.t_n,
        }),
    })
}
