//! Raw-key probability, QBER and the BB84 secret key rate.
//!
//! Key rates are probabilities of a secret bit per detection window, i.e.
//! per clock period 𝔗. Conversion to bits per second is left to callers.

use std::fmt;
use std::str::FromStr;

use crate::detection::{detected_sigma, window_probabilities, Detector, PulseTrain};
use crate::error::{Error, Result};
use crate::numerics::binary_entropy;
use crate::twf::{broadened_sigma, Medium, Pulse};
use crate::{KM, PS};

/// Root of 1 − 2H(Q) = 0: above this QBER no key can be distilled.
pub const QBER_THRESHOLD: f64 = 0.110_027_864_438_359_55;

/// QBER reported for points where the raw-key probability vanishes.
pub const DEGENERATE_QBER: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransmittanceConvention {
    /// η = 10^(−αL/10), α in dB/km.
    #[default]
    Db,
    /// η = 10^(−αL) with the same α and L, taken literally.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DarkCountModel {
    /// First-order Poisson terms: p₀ = 1 − dv, p₁ = dv(1 − dv).
    #[default]
    PaperLinearized,
    /// p₀ = e^(−dv), p₁ = dv·e^(−dv).
    ExactPoisson,
}

impl FromStr for TransmittanceConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "db" => Ok(Self::Db),
            "literal" => Ok(Self::Literal),
            other => Err(format!("expected `db` or `literal`, got `{other}`")),
        }
    }
}

impl fmt::Display for TransmittanceConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Db => "db",
            Self::Literal => "literal",
        })
    }
}

impl FromStr for DarkCountModel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper_linearized" => Ok(Self::PaperLinearized),
            "exact_poisson" => Ok(Self::ExactPoisson),
            other => Err(format!(
                "expected `paper_linearized` or `exact_poisson`, got `{other}`"
            )),
        }
    }
}

impl fmt::Display for DarkCountModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PaperLinearized => "paper_linearized",
            Self::ExactPoisson => "exact_poisson",
        })
    }
}

/// Fiber channel: attenuation in dB/km and length in km.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    alpha_db_per_km: f64,
    length_km: f64,
}

impl Channel {
    pub fn new(alpha_db_per_km: f64, length_km: f64) -> Result<Self> {
        if !(alpha_db_per_km >= 0.0 && alpha_db_per_km.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "alpha",
                value: alpha_db_per_km,
                constraint: "alpha >= 0",
            });
        }
        if !(length_km >= 0.0 && length_km.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "length",
                value: length_km,
                constraint: "length >= 0",
            });
        }
        Ok(Self {
            alpha_db_per_km,
            length_km,
        })
    }

    pub fn alpha_db_per_km(&self) -> f64 {
        self.alpha_db_per_km
    }

    pub fn length_km(&self) -> f64 {
        self.length_km
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarkCounts {
    pub rate: f64,
    pub model: DarkCountModel,
}

pub fn transmittance(channel: &Channel, convention: TransmittanceConvention) -> f64 {
    let exponent = channel.alpha_db_per_km * channel.length_km;
    match convention {
        TransmittanceConvention::Db => 10f64.powf(-exponent / 10.0),
        TransmittanceConvention::Literal => 10f64.powf(-exponent),
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

/// Probability of a single click from Alice's photons: η[p_sig + p_w(1 − η·p_sig)].
pub fn p_detect(eta: f64, p_sig: f64, p_w: f64) -> Result<f64> {
    check_probability("eta", eta)?;
    check_probability("p_sig", p_sig)?;
    check_probability("p_w", p_w)?;
    Ok(eta * (p_sig + p_w * (1.0 - eta * p_sig)))
}

/// Probabilities of zero and of exactly one dark count within `window` seconds.
pub fn dark_probs(dark: &DarkCounts, window: f64) -> Result<(f64, f64)> {
    if !(dark.rate >= 0.0 && dark.rate.is_finite()) {
        return Err(Error::InvalidParameter {
            field: "dark_rate",
            value: dark.rate,
            constraint: "dark_rate >= 0",
        });
    }
    let mean = dark.rate * window;
    match dark.model {
        DarkCountModel::PaperLinearized => {
            if mean >= 1.0 {
                return Err(Error::Domain {
                    name: "dark_rate * window",
                    value: mean,
                    domain: "[0, 1) for the linearized dark-count model",
                });
            }
            Ok((1.0 - mean, mean * (1.0 - mean)))
        }
        DarkCountModel::ExactPoisson => {
            let p_zero = (-mean).exp();
            Ok((p_zero, mean * p_zero))
        }
    }
}

/// Sifted raw-key probability [p_det·p₀ + (1 − p_det)·p₁]/2.
pub fn p_raw_key(p_det: f64, p_zero: f64, p_one: f64) -> Result<f64> {
    check_probability("p_det", p_det)?;
    check_probability("p_zero", p_zero)?;
    check_probability("p_one", p_one)?;
    Ok(0.5 * (p_det * p_zero + (1.0 - p_det) * p_one))
}

/// QBER: wrong-photon and dark-count clicks, half of which flip the bit,
/// relative to the raw-key probability.
pub fn qber(
    eta: f64,
    p_sig: f64,
    p_w: f64,
    p_det: f64,
    p_zero: f64,
    p_one: f64,
    p_raw: f64,
) -> Result<f64> {
    if p_raw == 0.0 {
        return Err(Error::DegenerateRawKey);
    }
    check_probability("p_raw", p_raw)?;
    let errors = eta * p_w * (1.0 - eta * p_sig) * p_zero + (1.0 - p_det) * p_one;
    Ok(0.25 * errors / p_raw)
}

/// Secret bits per window, max{0, p_raw(1 − 2H(Q))}.
///
/// QBERs above one half carry no key either and also give zero.
pub fn key_rate(p_raw: f64, qber: f64) -> Result<f64> {
    if !(p_raw >= 0.0) {
        return Err(Error::Domain {
            name: "p_raw",
            value: p_raw,
            domain: "[0, ∞)",
        });
    }
    let h = binary_entropy(qber)?;
    if qber >= 0.5 {
        return Ok(0.0);
    }
    Ok((p_raw * (1.0 - 2.0 * h)).max(0.0))
}

/// Every physical input of the key-rate model, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    /// Initial temporal width σ, s.
    pub sigma: f64,
    pub chirp: f64,
    /// GVD parameter β, s²/m.
    pub beta: f64,
    pub alpha_db_per_km: f64,
    /// Dark count rate, Hz.
    pub dark_rate: f64,
    /// Photon spacing 𝔗, s.
    pub period: f64,
    /// Detector jitter σ_j, s.
    pub jitter: f64,
    /// Detection window v, s.
    pub window: f64,
    pub dark_model: DarkCountModel,
    pub transmittance_convention: TransmittanceConvention,
}

impl Default for ScenarioParams {
    /// Standard single-mode fiber at 1550 nm with an off-the-shelf SNSPD:
    /// DCR 1 kHz, σ = 10 ps, β = −1.15e-26 s²/m, α = 0.2 dB/km, 𝔗 = 100 ps,
    /// unchirped, σ_j = 25 ps, v = 50 ps.
    fn default() -> Self {
        Self {
            sigma: 10.0 * PS,
            chirp: 0.0,
            beta: -1.15e-26,
            alpha_db_per_km: 0.2,
            dark_rate: 1000.0,
            period: 100.0 * PS,
            jitter: 25.0 * PS,
            window: 50.0 * PS,
            dark_model: DarkCountModel::PaperLinearized,
            transmittance_convention: TransmittanceConvention::Db,
        }
    }
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<()> {
        Pulse::new(self.sigma, self.chirp)?;
        Medium::new(self.beta)?;
        Detector::new(self.jitter, self.window)?;
        PulseTrain::new(self.period)?;
        Channel::new(self.alpha_db_per_km, 0.0)?;
        if !(self.dark_rate >= 0.0 && self.dark_rate.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "dark_rate",
                value: self.dark_rate,
                constraint: "dark_rate >= 0",
            });
        }
        Ok(())
    }

    pub fn with_chirp(self, chirp: f64) -> Self {
        Self { chirp, ..self }
    }

    pub fn with_jitter(self, jitter: f64) -> Self {
        Self { jitter, ..self }
    }

    pub fn with_window(self, window: f64) -> Self {
        Self { window, ..self }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        Self { beta, ..self }
    }
}

/// Every intermediate of the model at one channel length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolPoint {
    pub eta: f64,
    /// Detected arrival width √(σ_L² + σ_j²), s.
    pub sigma_detected: f64,
    pub p_sig: f64,
    pub p_w: f64,
    pub p_det: f64,
    pub p_zero: f64,
    pub p_one: f64,
    pub p_raw: f64,
    /// [`DEGENERATE_QBER`] when `degenerate` is set.
    pub qber: f64,
    pub key_rate: f64,
    /// The raw-key probability vanished and the QBER is undefined.
    pub degenerate: bool,
}

/// Runs the full chain at `length_km`: broadening, jitter, window
/// probabilities, loss, dark counts, sifting, QBER and key rate.
pub fn evaluate_point(params: &ScenarioParams, length_km: f64) -> Result<ProtocolPoint> {
    params.validate()?;
    let channel = Channel::new(params.alpha_db_per_km, length_km)?;
    let pulse = Pulse::new(params.sigma, params.chirp)?;
    let medium = Medium::new(params.beta)?;
    let detector = Detector::new(params.jitter, params.window)?;
    let train = PulseTrain::new(params.period)?;

    let sigma_l = broadened_sigma(&pulse, &medium, length_km * KM)?;
    let sigma_detected = detected_sigma(sigma_l, detector.jitter())?;
    let windows = window_probabilities(sigma_detected, &detector, &train)?;

    let eta = transmittance(&channel, params.transmittance_convention);
    let p_det = p_detect(eta, windows.p_sig, windows.p_w)?;
    let dark = DarkCounts {
        rate: params.dark_rate,
        model: params.dark_model,
    };
    let (p_zero, p_one) = dark_probs(&dark, detector.window())?;
    let p_raw = p_raw_key(p_det, p_zero, p_one)?;

    let (qber, key_rate, degenerate) =
        match qber(eta, windows.p_sig, windows.p_w, p_det, p_zero, p_one, p_raw) {
            Ok(q) => (q, key_rate(p_raw, q)?, false),
            Err(Error::DegenerateRawKey) => (DEGENERATE_QBER, 0.0, true),
            Err(e) => return Err(e),
        };

    Ok(ProtocolPoint {
        eta,
        sigma_detected,
        p_sig: windows.p_sig,
        p_w: windows.p_w,
        p_det,
        p_zero,
        p_one,
        p_raw,
        qber,
        key_rate,
        degenerate,
    })
}
