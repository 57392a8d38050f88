use std::f64::consts::PI;

use mlock_core::phase_lattice::*;
use mlock_core::sde_engine::RngStream;

#[test]
fn langevin_chain_relaxes_to_von_mises_bonds() {
    let config = LatticeConfig { n_modes: 16, mu_m: 1.0, t_n: 0.2, dt: 0.01, seed: 31, boundary: Boundary::OpenChain };
    let mut lattice = LangevinLattice::new(config.clone()).unwrap();
    let mut stats = StationaryStats::new(4);
    lattice.run(config.burn_in_steps() * 5, 20_000, 50, |s| stats.observe(s)).unwrap();
    let summary = stats.summary(40);
    let rho = gibbs_neighbor_correlation(config.beta_n());
    for k in 1..=4 {
        let z = summary.correlation[k].z_against(rho.powi(k as i32));
        assert!(z < 4.0, "k {k}: {:?} vs {}", summary.correlation[k], rho.powi(k as i32));
        assert!(summary.correlation_imag[k].z_against(0.0) < 4.0);
    }
}

#[test]
fn exact_sampler_matches_finite_chain_waveform() {
    let beta = 0.1;
    let n = 64;
    let mut rng = RngStream::new(8);
    let states: Vec<LatticeState> = (0..2000)
        .map(|_| sample_gibbs_exact(beta, n, Boundary::OpenChain, &mut rng).unwrap())
        .collect();
    let grid: Vec<f64> = (0..32).map(|i| -PI + 2.0 * PI * i as f64 / 32.0).collect();
    let est = ensemble_waveform(&states, &ModeAmplitudes::uniform(n), &grid).unwrap();
    let rho = gibbs_neighbor_correlation(beta);
    let worst = grid
        .iter()
        .zip(&est)
        .map(|(&s, e)| e.z_against(finite_chain_waveform(rho, n, s)))
        .fold(0.0, f64::max);
    assert!(worst < 4.0, "{worst}");
}

#[test]
fn locked_chain_without_noise_stays_locked() {
    let config = LatticeConfig { n_modes: 12, mu_m: 2.0, t_n: 0.0, dt: 0.01, seed: 1, boundary: Boundary::Periodic };
    let mut lattice = LangevinLattice::new(config).unwrap();
    lattice.advance(1000).unwrap();
    assert!(lattice.state().theta.iter().all(|&t| t == 0.0));
}
