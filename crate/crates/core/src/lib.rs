//! Numerical models of passive mode locking in a fiber ring cavity that
//! contains a gain medium and a suspended, bolometrically coupled mirror.
//!
//! The crate is split along the physics:
//!
//! * [`combmath`]: the periodic pulse-train ("comb") function and its series.
//! * [`phase_lattice`]: Langevin dynamics of the cavity mode phases and the
//!   Gibbs steady state they relax to.
//! * [`pulse_shaping`]: Moebius-transformation algebra for Gaussian pulse
//!   parameters and the round-trip map.
//! * [`adler_sync`]: injection locking of the pulse train to an external
//!   modulation and the resulting beat spectra.
//! * [`thermomech`]: mirror mechanics with thermal force and displacement
//!   dependent absorption, instability thresholds and the amplifier noise chain.
//! * [`sde_engine`]: seeded random streams, fixed-step integrators and Welch
//!   spectral estimation shared by the models above.

pub mod adler_sync;
pub mod combmath;
pub mod error;
pub mod phase_lattice;
pub mod pulse_shaping;
pub mod sde_engine;
pub mod thermomech;

pub use error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
