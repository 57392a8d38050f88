//! Shared numerical machinery: seeded normal streams, fixed-step
//! integrators and Welch spectral estimation.

mod rk4;
mod rng;
mod welch;

pub use rk4::{rk4_integrate, rk4_step, rk4_step_into, Rk4Workspace};
pub use rng::{normal_draws, RngStream};
pub use welch::{welch_psd, SpectrumResult, DEFAULT_OVERLAP};
