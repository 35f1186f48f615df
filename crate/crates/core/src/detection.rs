//! Detector timing response and detection-window probabilities.
//!
//! The detector's Gaussian jitter convolves the arrival-time density, so a
//! propagated width σ_L is seen as σ_tot = √(σ_L² + σ_j²). The signal photon
//! lands in the centred window [−v/2, v/2] with probability p_sig; its
//! neighbours, one period 𝔗 away on either side, leak in with q± and
//! produce a single wrong click with probability p_w.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::numerics::{erf, erfc, integrate_real, try_integrate_real, QuadratureSpec};
use crate::twf::{pdf, GaussianState};

/// Gaussian timing jitter σ_j and detection window v, both in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detector {
    jitter: f64,
    window: f64,
}

impl Detector {
    pub fn new(jitter: f64, window: f64) -> Result<Self> {
        if !(jitter >= 0.0 && jitter.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "jitter",
                value: jitter,
                constraint: "jitter >= 0",
            });
        }
        check_positive("window", window)?;
        Ok(Self { jitter, window })
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn window(&self) -> f64 {
        self.window
    }
}

/// Temporal spacing 𝔗 between consecutive photons, in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseTrain {
    period: f64,
}

impl PulseTrain {
    pub fn new(period: f64) -> Result<Self> {
        check_positive("period", period)?;
        Ok(Self { period })
    }

    pub fn period(&self) -> f64 {
        self.period
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowProbabilities {
    pub p_sig: f64,
    /// Window mass of the photon following the signal.
    pub q_plus: f64,
    /// Window mass of the photon preceding the signal.
    pub q_minus: f64,
    pub p_w: f64,
}

fn check_positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field,
            value,
            constraint: "must be > 0",
        })
    }
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: p,
            domain: "[0, 1]",
        })
    }
}

/// Width of the jitter-convolved arrival density.
pub fn detected_sigma(sigma_l: f64, jitter: f64) -> Result<f64> {
    check_positive("sigma_L", sigma_l)?;
    if !(jitter >= 0.0) {
        return Err(Error::InvalidParameter {
            field: "jitter",
            value: jitter,
            constraint: "jitter >= 0",
        });
    }
    Ok(sigma_l.hypot(jitter))
}

/// Gaussian detector response with standard deviation `jitter`.
pub fn jitter_profile(jitter: f64, t: f64) -> f64 {
    (-t * t / (2.0 * jitter * jitter)).exp() / ((2.0 * PI).sqrt() * jitter)
}

/// (p_L ⋆ χ_d)(t) by quadrature. `p_l` is a density concentrated around
/// `center` with width ~`scale`; the integration range is the overlap of the
/// two Gaussians' ±`tail_sigmas` supports.
pub fn convolve_numeric<F: Fn(f64) -> f64>(
    p_l: F,
    center: f64,
    scale: f64,
    jitter: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_positive("jitter", jitter)?;
    check_positive("scale", scale)?;
    let (a1, b1) = spec.tail_range(center, scale);
    let (a2, b2) = spec.tail_range(t, jitter);
    let (a, b) = (a1.max(a2), b1.min(b2));
    if a >= b {
        return Ok(0.0);
    }
    integrate_real(|tau| p_l(tau) * jitter_profile(jitter, t - tau), a, b, spec)
}

/// Mass of a zero-mean Gaussian of width `sigma_tot` inside [−v/2, v/2].
pub fn p_signal(sigma_tot: f64, window: f64) -> Result<f64> {
    check_positive("sigma_tot", sigma_tot)?;
    check_positive("window", window)?;
    Ok(erf(window / (2.0 * SQRT_2 * sigma_tot)))
}

/// Mass inside [−v/2, v/2] of a Gaussian of width `sigma_tot` centred one
/// period away. Both neighbours give the same value.
pub fn shifted_window_mass(sigma_tot: f64, window: f64, period: f64) -> Result<f64> {
    check_positive("sigma_tot", sigma_tot)?;
    check_positive("window", window)?;
    check_positive("period", period)?;
    let scale = SQRT_2 * sigma_tot;
    let upper = (period + 0.5 * window) / scale;
    let lower = (period - 0.5 * window) / scale;
    // Far-tail masses lose everything to cancellation in the erf form.
    let mass = if lower >= 0.0 {
        0.5 * (erfc(lower) - erfc(upper))
    } else {
        0.5 * (erf(upper) - erf(lower))
    };
    Ok(mass.clamp(0.0, 1.0))
}

/// Probability of exactly one neighbour click: q⁺(1−q⁻) + q⁻(1−q⁺).
pub fn p_wrong(q_plus: f64, q_minus: f64) -> Result<f64> {
    check_probability("q_plus", q_plus)?;
    check_probability("q_minus", q_minus)?;
    Ok(q_plus * (1.0 - q_minus) + q_minus * (1.0 - q_plus))
}

/// Closed-form window probabilities for a detected width `sigma_tot`.
pub fn window_probabilities(
    sigma_tot: f64,
    detector: &Detector,
    train: &PulseTrain,
) -> Result<WindowProbabilities> {
    let p_sig = p_signal(sigma_tot, detector.window)?;
    let q = shifted_window_mass(sigma_tot, detector.window, train.period)?;
    Ok(WindowProbabilities {
        p_sig,
        q_plus: q,
        q_minus: q,
        p_w: p_wrong(q, q)?,
    })
}

/// Window probabilities straight from the convolution and window integrals,
/// with both neighbour shifts integrated separately. Slow; used as the
/// oracle for [`window_probabilities`].
pub fn window_probabilities_numeric(
    state: &GaussianState,
    detector: &Detector,
    train: &PulseTrain,
    spec: &QuadratureSpec,
) -> Result<WindowProbabilities> {
    let scale = state.std_dev();
    let half = 0.5 * detector.window;
    let period = train.period;

    let window_mass = |shift: f64| -> Result<f64> {
        let density = |tau: f64| pdf(state, tau + shift);
        let center = -shift;
        if detector.jitter == 0.0 {
            return integrate_real(density, -half, half, spec);
        }
        try_integrate_real(
            |t| convolve_numeric(density, center, scale, detector.jitter, t, spec),
            -half,
            half,
            spec,
        )
    };

    let p_sig = window_mass(0.0)?;
    let q_plus = window_mass(period)?;
    let q_minus = window_mass(-period)?;
    Ok(WindowProbabilities {
        p_sig,
        q_plus,
        q_minus,
        p_w: p_wrong(q_plus.clamp(0.0, 1.0), q_minus.clamp(0.0, 1.0))?,
    })
}
