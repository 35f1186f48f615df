//! Chirped Gaussian temporal wave functions and their dispersive propagation.
//!
//! A single photon's temporal mode is ψ(t) = N·exp(−A t²) with complex `A`.
//! Initially `A = (1 + iC)/(4σ²)`; after a length `L` of medium with GVD
//! parameter β it becomes
//!
//! ```text
//! A_L = (1 + iC) / (4·(σ² − CβL + iβL))
//! ```
//!
//! so the arrival-time density |ψ_L|² stays a zero-mean Gaussian whose
//! variance is `1/(4·Re A_L) = ((σ² − CβL)² + (βL)²)/σ²`.
//!
//! [`propagate_numeric`] evaluates the propagator integral directly and is
//! the oracle the closed form is checked against.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{integrate_partitioned, integrate_real, QuadratureSpec};

/// Initial temporal mode: width σ (seconds) and chirp C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    sigma: f64,
    chirp: f64,
}

impl Pulse {
    pub fn new(sigma: f64, chirp: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "sigma",
                value: sigma,
                constraint: "sigma > 0",
            });
        }
        if !chirp.is_finite() {
            return Err(Error::InvalidParameter {
                field: "chirp",
                value: chirp,
                constraint: "chirp finite",
            });
        }
        Ok(Self { sigma, chirp })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn chirp(&self) -> f64 {
        self.chirp
    }
}

/// Dispersive medium with GVD parameter β in s²/m. β = 0 is dispersion-free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium {
    beta: f64,
}

impl Medium {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::InvalidParameter {
                field: "beta",
                value: beta,
                constraint: "beta finite",
            });
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// ψ(t) = norm·exp(−exponent·t²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    exponent: Complex64,
    norm: Complex64,
}

impl GaussianState {
    pub fn exponent_real(&self) -> f64 {
        self.exponent.re
    }

    pub fn exponent_imag(&self) -> f64 {
        self.exponent.im
    }

    pub fn exponent(&self) -> Complex64 {
        self.exponent
    }

    pub fn norm(&self) -> Complex64 {
        self.norm
    }

    pub fn amplitude(&self, t: f64) -> Complex64 {
        self.norm * (-self.exponent * (t * t)).exp()
    }

    /// Variance of |ψ|², `1/(4·Re A)`.
    pub fn variance(&self) -> f64 {
        0.25 / self.exponent.re
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }
}

/// Norm, mean and variance of an arrival-time density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub norm: f64,
    pub mean: f64,
    pub variance: f64,
}

pub fn initial_state(pulse: &Pulse) -> GaussianState {
    let s2 = pulse.sigma * pulse.sigma;
    GaussianState {
        exponent: Complex64::new(1.0, pulse.chirp) / (4.0 * s2),
        norm: Complex64::new((2.0 * PI).powf(-0.25) / pulse.sigma.sqrt(), 0.0),
    }
}

/// The propagated mode after `length` metres of `medium`.
///
/// The exponent is shared by both signs of β; the prefactor follows the
/// β > 0 or β < 0 branch of the closed-form solution. Zero length or zero
/// dispersion returns the initial mode unchanged.
pub fn propagate_closed_form(pulse: &Pulse, medium: &Medium, length: f64) -> Result<GaussianState> {
    check_length(length)?;
    let beta = medium.beta;
    if length == 0.0 || beta == 0.0 {
        return Ok(initial_state(pulse));
    }
    let (sigma, c) = (pulse.sigma, pulse.chirp);
    let s2 = sigma * sigma;
    let bl = beta * length;
    let one_ic = Complex64::new(1.0, c);
    let i = Complex64::i();

    // (1 + iC) / (4(C − i)βL − 4σ²), with the overall sign folded so that
    // ψ ∝ exp(−A t²).
    let exponent = -one_ic / (4.0 * (Complex64::new(c, -1.0) * bl) - 4.0 * s2);

    let norm = if beta > 0.0 {
        let pre = Complex64::new(1.0, -1.0) / (2f64.powf(0.75) * PI.powf(0.25));
        pre * (Complex64::new(sigma, 0.0) / (one_ic * bl - i * s2)).sqrt()
    } else {
        let pre = Complex64::new(-2.0 * PI, 0.0).powf(-0.25);
        pre * (Complex64::new(sigma, 0.0) / (i * (Complex64::new(-c, 1.0) * bl + s2))).sqrt()
    };

    Ok(GaussianState { exponent, norm })
}

/// ψ_L(t) by direct quadrature of the propagator
/// `D(t, t̃, L) = exp(i(t − t̃)²/(4βL)) / √(4πiβL)` against ψ(t̃).
///
/// The t̃ range is cut at ±`tail_sigmas` amplitude widths (√2σ) and split so
/// that no piece spans more than about one period of the integrand's phase.
pub fn propagate_numeric(
    pulse: &Pulse,
    medium: &Medium,
    length: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::Domain {
            name: "length",
            value: length,
            domain: "(0, ∞) for the propagator integral",
        });
    }
    let beta = medium.beta;
    if beta == 0.0 {
        return Err(Error::Domain {
            name: "beta",
            value: beta,
            domain: "nonzero for the propagator integral",
        });
    }
    let initial = initial_state(pulse);
    let bl = beta * length;
    let a = initial.exponent;
    let b = 1.0 / (4.0 * bl);
    let prefactor = initial.norm / Complex64::new(0.0, 4.0 * PI * bl).sqrt();

    let half = spec.tail_sigmas * 2f64.sqrt() * pulse.sigma;

    // Phase of the integrand is b(t − t̃)² − Im(a)·t̃²; bound its slope.
    let max_slope = 2.0 * b.abs() * (t.abs() + half) + 2.0 * a.im.abs() * half;
    let pieces = ((max_slope * 2.0 * half) / (2.0 * PI))
        .ceil()
        .clamp(1.0, 65536.0) as usize;
    let breakpoints: Vec<f64> = (0..=pieces)
        .map(|k| -half + 2.0 * half * k as f64 / pieces as f64)
        .collect();

    let integrand = |tt: f64| {
        let d = t - tt;
        (Complex64::new(0.0, b * d * d) - a * (tt * tt)).exp()
    };
    let value: Complex64 = integrate_partitioned(integrand, &breakpoints, spec)?;
    Ok(prefactor * value)
}

/// σ_L = √(((σ² − CβL)² + (βL)²)/σ²).
pub fn broadened_sigma(pulse: &Pulse, medium: &Medium, length: f64) -> Result<f64> {
    check_length(length)?;
    let bl = medium.beta * length;
    if bl == 0.0 {
        return Ok(pulse.sigma);
    }
    let s2 = pulse.sigma * pulse.sigma;
    let focus = s2 - pulse.chirp * bl;
    Ok(((focus * focus + bl * bl) / s2).sqrt())
}

/// Arrival-time density |ψ(t)|².
pub fn pdf(state: &GaussianState, t: f64) -> f64 {
    state.norm.norm_sqr() * (-2.0 * state.exponent.re * t * t).exp()
}

/// Norm, mean and variance of `state`'s density by quadrature.
pub fn moments(state: &GaussianState, spec: &QuadratureSpec) -> Result<Moments> {
    density_moments(|t| pdf(state, t), state.std_dev(), spec)
}

/// Moments of an arbitrary density centred near zero with width ~`scale`,
/// integrated over ±`tail_sigmas`·`scale` in the scaled variable u = t/scale.
pub fn density_moments<F: Fn(f64) -> f64>(
    density: F,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<Moments> {
    let (lo, hi) = spec.tail_range(0.0, 1.0);
    let scaled = |u: f64| scale * density(scale * u);
    let norm = integrate_real(scaled, lo, hi, spec)?;
    let first = integrate_real(|u| u * scaled(u), lo, hi, spec)?;
    let second = integrate_real(|u| u * u * scaled(u), lo, hi, spec)?;
    let mean = scale * first;
    Ok(Moments {
        norm,
        mean,
        variance: scale * scale * second - mean * mean,
    })
}

/// Moments of |ψ_L|² with ψ_L from the propagator integral (nested quadrature).
///
/// The outer range is taken from the ballistic bound σ + (1 + |C|)|β|L/σ,
/// which does not rely on the closed-form width.
pub fn numeric_moments(
    pulse: &Pulse,
    medium: &Medium,
    length: f64,
    spec: &QuadratureSpec,
) -> Result<Moments> {
    let sigma = pulse.sigma;
    let scale = sigma + (1.0 + pulse.chirp.abs()) * (medium.beta * length).abs() / sigma;
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let density = |t: f64| match propagate_numeric(pulse, medium, length, t, spec) {
        Ok(psi) => psi.norm_sqr(),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let m = density_moments(density, scale, spec)?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(m),
    }
}

fn check_length(length: f64) -> Result<()> {
    if length >= 0.0 && length.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "length",
            value: length,
            domain: "[0, ∞)",
        })
    }
}
