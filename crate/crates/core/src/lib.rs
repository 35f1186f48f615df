//! Key-rate modelling for BB84 with chirped Gaussian single photons.
//!
//! A photon with a chirped Gaussian temporal wave function is broadened by
//! group-velocity dispersion in fiber, smeared by the detector's timing
//! jitter, and attenuated by channel loss. Together with detector dark
//! counts this fixes the probability of a raw key bit, the quantum bit error
//! rate and, through the binary-entropy penalty, the secret key rate.
//!
//! The crate is layered bottom-up:
//!
//! * [`numerics`]: error function, binary entropy, adaptive Gauss–Kronrod
//!   quadrature, bisection and golden-section search.
//! * [`twf`]: initial and propagated temporal wave functions, both in closed
//!   form and by direct quadrature of the dispersion propagator.
//! * [`detection`]: jitter convolution and window probabilities.
//! * [`keyrate`]: transmittance, dark counts, raw key probability, QBER and key rate.
//! * [`analysis`]: distance sweeps, maximum secure distance, chirp scans and
//!   the figure scenarios.
//!
//! All physics is carried in SI units (seconds, metres, s²/m). Distances at
//! the `keyrate`/`analysis` surface are in kilometres, matching the dB/km
//! attenuation coefficient.

// `!(x > 0.0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod detection;
pub mod error;
pub mod keyrate;
pub mod numerics;
pub mod twf;

pub use error::{Error, Result};

/// Picoseconds to seconds.
pub const PS: f64 = 1e-12;
/// Kilometres to metres.
pub const KM: f64 = 1e3;
