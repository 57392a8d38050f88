//! Gaussian pulse propagation through the ring as Moebius maps.
//!
//! A pulse `E(t) = E0 exp(-gamma t^2 + i omega_p t)` is described by the
//! complex parameter `gamma`; its real part sets the width and its imaginary
//! part the chirp. Every lumped element acts on the inverse parameter as
//!
//! `1/gamma_out = (A / gamma_in + B) / (C / gamma_in + D)`.
//!
//! A time-like element (modulator, moving mirror) adds `gamma_T` to `gamma`;
//! a frequency-like element (filter, gain band) adds `1/gamma_F` to
//! `1/gamma`. One round trip is the time-like element followed by the
//! frequency-like one.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::SPEED_OF_LIGHT;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseState {
    pub gamma: Complex64,
    /// Carried unchanged through every element.
    pub e0: Complex64,
    /// Carried unchanged through every element.
    pub omega_p: f64,
}

impl PulseState {
    pub fn new(gamma: Complex64, e0: Complex64, omega_p: f64) -> Result<Self> {
        if !(gamma.re > 0.0) {
            return Err(domain(format!("pulse width requires Re(gamma) > 0, got {gamma}")));
        }
        Ok(Self { gamma, e0, omega_p })
    }

    pub fn transform(&self, element: &MoebiusElement) -> Result<Self> {
        Ok(Self { gamma: apply(element, self.gamma)?, ..*self })
    }
}

/// Coefficients of `1/gamma -> (A/gamma + B) / (C/gamma + D)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusElement {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MoebiusElement {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = Self { a, b, c, d };
        if m.determinant() == ZERO {
            return Err(domain("degenerate Moebius element (AD - BC = 0)"));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self { a: ONE, b: ZERO, c: ZERO, d: ONE }
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Inverse map; the adjugate, which represents the same projective map as
    /// the true matrix inverse.
    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Same map with `D = 1`, when possible.
    pub fn normalized(&self) -> Self {
        if self.d == ZERO {
            return *self;
        }
        Self { a: self.a / self.d, b: self.b / self.d, c: self.c / self.d, d: ONE }
    }
}

/// `gamma_out = gamma_in + gamma_T`: `(A, B, C, D) = (1, 0, gamma_T, 1)`.
pub fn element_time_like(gamma_t: Complex64) -> MoebiusElement {
    MoebiusElement { a: ONE, b: ZERO, c: gamma_t, d: ONE }
}

/// `1/gamma_out = 1/gamma_in + 1/gamma_F`: `(A, B, C, D) = (1, 1/gamma_F, 0, 1)`.
pub fn element_freq_like(gamma_f: Complex64) -> Result<MoebiusElement> {
    if gamma_f == ZERO {
        return Err(domain("frequency-like element needs gamma_F != 0"));
    }
    Ok(MoebiusElement { a: ONE, b: gamma_f.inv(), c: ZERO, d: ONE })
}

/// Element equivalent to applying `first` and then `second`.
pub fn compose(first: &MoebiusElement, second: &MoebiusElement) -> Result<MoebiusElement> {
    let (p, q) = (second, first);
    let m = MoebiusElement {
        a: p.a * q.a + p.b * q.c,
        b: p.a * q.b + p.b * q.d,
        c: p.c * q.a + p.d * q.c,
        d: p.c * q.b + p.d * q.d,
    };
    if m.determinant() == ZERO {
        return Err(domain("composition is degenerate (AD - BC = 0)"));
    }
    Ok(m)
}

/// Transformed pulse parameter.
pub fn apply(element: &MoebiusElement, gamma: Complex64) -> Result<Complex64> {
    if gamma == ZERO {
        return Err(Error::Singularity { gamma });
    }
    let u = gamma.inv();
    let num = element.a * u + element.b;
    let den = element.c * u + element.d;
    if num == ZERO || den == ZERO || !num.is_finite() || !den.is_finite() {
        return Err(Error::Singularity { gamma });
    }
    // gamma_out = den / num
    let out = den / num;
    if !out.is_finite() {
        return Err(Error::Singularity { gamma });
    }
    Ok(out)
}

/// One round trip: modulator (`gamma_T`) followed by the filter (`gamma_F`).
pub fn roundtrip_element(gamma_t: Complex64, gamma_f: Complex64) -> Result<MoebiusElement> {
    compose(&element_time_like(gamma_t), &element_freq_like(gamma_f)?)
}

/// Normalized modulation strength `g_m = (gamma_T / gamma_F)^{1/2}`, on the
/// principal branch.
pub fn normalized_modulation(gamma_t: Complex64, gamma_f: Complex64) -> Result<Complex64> {
    if gamma_f == ZERO {
        return Err(domain("gamma_F must be nonzero"));
    }
    Ok((gamma_t / gamma_f).sqrt())
}

/// Round-trip state in normalized units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedPulse {
    /// `g = gamma / gamma_F`.
    pub g: Complex64,
    pub g_m: Complex64,
    /// Round trips elapsed, `t / t_R`.
    pub tau_r: f64,
    /// Cavity period in seconds.
    pub t_r: f64,
}

impl NormalizedPulse {
    pub fn new(g: Complex64, g_m: Complex64, t_r: f64) -> Result<Self> {
        if !(g_m.norm() < 1.0) {
            return Err(domain(format!("|g_m| = {} is outside the perturbative regime", g_m.norm())));
        }
        if !(t_r > 0.0) {
            return Err(domain("cavity period must be positive"));
        }
        Ok(Self { g, g_m, tau_r: 0.0, t_r })
    }

    pub fn time(&self) -> f64 {
        self.tau_r * self.t_r
    }

    pub fn advance(&mut self) -> Result<()> {
        self.g = roundtrip_map(self.g, self.g_m);
        self.tau_r += 1.0;
        if !(self.g.norm() <= 1.0) {
            return Err(Error::Instability { step: self.tau_r as usize, magnitude: self.g.norm() });
        }
        Ok(())
    }
}

/// Round-trip map in normalized form.
///
/// With `g = gamma/gamma_F` the composite element
/// `(1 + g_m^2, 1/gamma_F, gamma_F g_m^2, 1)` becomes
/// `g -> (g_m^2 + g) / (1 + g_m^2 + g)`, i.e. `g_m^2 - g^2` per round trip to
/// lowest order.
pub fn roundtrip_map(g: Complex64, g_m: Complex64) -> Complex64 {
    let gm2 = g_m * g_m;
    (gm2 + g) / (ONE + gm2 + g)
}

/// Trajectory `g_0, g_1, ..., g_n` of the round-trip map.
pub fn roundtrip_iterate(g0: Complex64, g_m: Complex64, n: usize) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(domain("at least one round trip is required"));
    }
    if !(g_m.norm() < 1.0) {
        return Err(domain(format!("|g_m| = {} is outside the perturbative regime", g_m.norm())));
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut g = g0;
    out.push(g);
    for step in 1..=n {
        g = roundtrip_map(g, g_m);
        if !(g.norm() <= 1.0) {
            return Err(Error::Instability { step, magnitude: g.norm() });
        }
        out.push(g);
    }
    Ok(out)
}

/// `g_m tanh(g_m (tau_R - tau_R0))`, the solution of `dg/dtau_R = g_m^2 - g^2`.
pub fn continuous_solution(g_m: Complex64, tau_r: f64, tau_r0: f64) -> Result<Complex64> {
    let z = g_m * (tau_r - tau_r0);
    // tanh z = sinh z / cosh z has poles where cosh z = 0 (z = i π (k + 1/2))
    let cosh = z.cosh();
    if cosh.norm() < 1e-12 {
        return Err(Error::Singularity { gamma: g_m });
    }
    Ok(g_m * z.sinh() / cosh)
}

/// `|gamma_F|^{1/2} = (2 π c / (lambda_L n_eff)) (delta_lambda / lambda_L)`
/// in rad/s.
pub fn gamma_f_from_band(delta_lambda: f64, lambda_l: f64, n_eff: f64) -> Result<f64> {
    if !(delta_lambda > 0.0 && lambda_l > 0.0 && n_eff > 0.0) {
        return Err(domain("band, wavelength and index must be positive"));
    }
    Ok(2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / (lambda_l * n_eff) * (delta_lambda / lambda_l))
}

/// Derivative of the round-trip map, for fixed-point stability.
pub fn roundtrip_map_derivative(g: Complex64, g_m: Complex64) -> Complex64 {
    let gm2 = g_m * g_m;
    let den = ONE + gm2 + g;
    // d/dg (gm2 + g)/(1 + gm2 + g) = 1 / den^2
    ONE / (den * den)
}

/// Fixed points of the discrete map, `g^2 + g_m^2 g - g_m^2 = 0`, returned as
/// `(near +g_m, near -g_m)`.
pub fn roundtrip_fixed_points(g_m: Complex64) -> (Complex64, Complex64) {
    let gm2 = g_m * g_m;
    let disc = (gm2 * gm2 + 4.0 * gm2).sqrt();
    let a = 0.5 * (-gm2 + disc);
    let b = 0.5 * (-gm2 - disc);
    if (a - g_m).norm() <= (b - g_m).norm() {
        (a, b)
    } else {
        (b, a)
    }
}
