use crate::error::{Error, Result};

/// Scratch buffers for allocation-free RK4 stepping.
#[derive(Debug, Clone)]
pub struct Rk4Workspace {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4Workspace {
    pub fn new(dim: usize) -> Self {
        Self {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            tmp: vec![0.0; dim],
        }
    }
}

/// Classical fourth-order Runge-Kutta step, in place.
///
/// `derivative(t, y, dydt)` writes the right-hand side into `dydt`.
pub fn rk4_step_into<F>(
    state: &mut [f64],
    t: f64,
    dt: f64,
    ws: &mut Rk4Workspace,
    derivative: &mut F,
) -> Result<()>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = state.len();
    let Rk4Workspace { k1, k2, k3, k4, tmp } = ws;
    derivative(t, state, k1);
    for i in 0..n {
        tmp[i] = state[i] + 0.5 * dt * k1[i];
    }
    derivative(t + 0.5 * dt, tmp, k2);
    for i in 0..n {
        tmp[i] = state[i] + 0.5 * dt * k2[i];
    }
    derivative(t + 0.5 * dt, tmp, k3);
    for i in 0..n {
        tmp[i] = state[i] + dt * k3[i];
    }
    derivative(t + dt, tmp, k4);
    for i in 0..n {
        let slope = k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i];
        if !slope.is_finite() {
            return Err(Error::Integration {
                time: t,
                reason: format!("non-finite derivative in component {i}"),
            });
        }
        state[i] += dt / 6.0 * slope;
    }
    Ok(())
}

/// Allocating convenience form of [`rk4_step_into`].
pub fn rk4_step<F>(state: &[f64], mut derivative: F, t: f64, dt: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let mut out = state.to_vec();
    let mut ws = Rk4Workspace::new(state.len());
    rk4_step_into(&mut out, t, dt, &mut ws, &mut derivative)?;
    Ok(out)
}

/// Integrates `steps` fixed steps from `t0` and returns the final state.
pub fn rk4_integrate<F>(
    state: &[f64],
    mut derivative: F,
    t0: f64,
    dt: f64,
    steps: usize,
) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let mut y = state.to_vec();
    let mut ws = Rk4Workspace::new(y.len());
    for i in 0..steps {
        rk4_step_into(&mut y, t0 + i as f64 * dt, dt, &mut ws, &mut derivative)?;
    }
    Ok(y)
}
