//! Flat `key = value` configuration in human units.
//!
//! Precedence, lowest first: built-in defaults, the config file, `--set`
//! overrides. Unknown keys are errors. Conversion to SI happens only in
//! [`Config::params`], by exact multiplication with 1e-12 (ps) and 1e-26
//! (`beta_e26`).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use chirp_qkd::analysis::{stepped_grid, ScenarioOptions};
use chirp_qkd::keyrate::{DarkCountModel, ScenarioParams, TransmittanceConvention};

use crate::error::{CliError, Result};

const PS: f64 = 1e-12;
const BETA_UNIT: f64 = 1e-26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RateUnits {
    #[default]
    PerWindow,
    PerSecond,
}

impl FromStr for RateUnits {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "per_window" => Ok(Self::PerWindow),
            "per_second" => Ok(Self::PerSecond),
            other => Err(format!(
                "expected `per_window` or `per_second`, got `{other}`"
            )),
        }
    }
}

impl RateUnits {
    fn name(self) -> &'static str {
        match self {
            Self::PerWindow => "per_window",
            Self::PerSecond => "per_second",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub sigma_ps: f64,
    pub chirp: f64,
    pub beta_e26: f64,
    pub alpha_db_per_km: f64,
    pub dark_rate_hz: f64,
    pub period_ps: f64,
    pub jitter_ps: f64,
    pub window_ps: f64,
    pub dark_model: DarkCountModel,
    pub transmittance_convention: TransmittanceConvention,

    pub l_min_km: f64,
    /// `None` means auto: 1.2 times the maximum secure distance.
    pub l_max_km: Option<f64>,
    pub l_steps: usize,
    pub c_min: f64,
    pub c_max: f64,
    pub c_step: f64,

    pub out_csv: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
    pub rate_units: RateUnits,

    /// Fourth window of `reproduce fig1`.
    pub fig1_extra_window_ps: f64,
    /// Third jitter of `reproduce fig3a`/`fig3b`.
    pub fig3_extra_jitter_ps: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            sigma_ps: 10.0,
            chirp: 0.0,
            beta_e26: -1.15,
            alpha_db_per_km: 0.2,
            dark_rate_hz: 1000.0,
            period_ps: 100.0,
            jitter_ps: 25.0,
            window_ps: 50.0,
            dark_model: DarkCountModel::PaperLinearized,
            transmittance_convention: TransmittanceConvention::Db,
            l_min_km: 0.0,
            l_max_km: None,
            l_steps: 400,
            c_min: -2.0,
            c_max: 2.0,
            c_step: 0.05,
            out_csv: None,
            out_svg: None,
            rate_units: RateUnits::PerWindow,
            fig1_extra_window_ps: 25.0,
            fig3_extra_jitter_ps: 10.0,
        }
    }
}

pub const KEYS: [&str; 21] = [
    "sigma_ps",
    "chirp",
    "beta_e26",
    "alpha_db_per_km",
    "dark_rate_hz",
    "period_ps",
    "jitter_ps",
    "window_ps",
    "dark_model",
    "transmittance_convention",
    "l_min_km",
    "l_max_km",
    "l_steps",
    "c_min",
    "c_max",
    "c_step",
    "out_csv",
    "out_svg",
    "rate_units",
    "fig1_extra_window_ps",
    "fig3_extra_jitter_ps",
];

fn number(value: &str) -> Result<f64, String> {
    value
        .parse::<f64>()
        .map_err(|_| format!("expected a number, got `{value}`"))
}

fn path(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

impl Config {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "sigma_ps" => self.sigma_ps = number(value)?,
            "chirp" => self.chirp = number(value)?,
            "beta_e26" => self.beta_e26 = number(value)?,
            "alpha_db_per_km" => self.alpha_db_per_km = number(value)?,
            "dark_rate_hz" => self.dark_rate_hz = number(value)?,
            "period_ps" => self.period_ps = number(value)?,
            "jitter_ps" => self.jitter_ps = number(value)?,
            "window_ps" => self.window_ps = number(value)?,
            "dark_model" => self.dark_model = value.parse()?,
            "transmittance_convention" => self.transmittance_convention = value.parse()?,
            "l_min_km" => self.l_min_km = number(value)?,
            "l_max_km" => {
                self.l_max_km = if value == "auto" {
                    None
                } else {
                    Some(number(value)?)
                }
            }
            "l_steps" => {
                self.l_steps = value
                    .parse()
                    .map_err(|_| format!("expected a positive integer, got `{value}`"))?
            }
            "c_min" => self.c_min = number(value)?,
            "c_max" => self.c_max = number(value)?,
            "c_step" => self.c_step = number(value)?,
            "out_csv" => self.out_csv = path(value),
            "out_svg" => self.out_svg = path(value),
            "rate_units" => self.rate_units = value.parse()?,
            "fig1_extra_window_ps" => self.fig1_extra_window_ps = number(value)?,
            "fig3_extra_jitter_ps" => self.fig3_extra_jitter_ps = number(value)?,
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<String> {
        let opt_path = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default()
        };
        Some(match key {
            "sigma_ps" => self.sigma_ps.to_string(),
            "chirp" => self.chirp.to_string(),
            "beta_e26" => self.beta_e26.to_string(),
            "alpha_db_per_km" => self.alpha_db_per_km.to_string(),
            "dark_rate_hz" => self.dark_rate_hz.to_string(),
            "period_ps" => self.period_ps.to_string(),
            "jitter_ps" => self.jitter_ps.to_string(),
            "window_ps" => self.window_ps.to_string(),
            "dark_model" => self.dark_model.to_string(),
            "transmittance_convention" => self.transmittance_convention.to_string(),
            "l_min_km" => self.l_min_km.to_string(),
            "l_max_km" => self
                .l_max_km
                .map_or_else(|| "auto".to_string(), |l| l.to_string()),
            "l_steps" => self.l_steps.to_string(),
            "c_min" => self.c_min.to_string(),
            "c_max" => self.c_max.to_string(),
            "c_step" => self.c_step.to_string(),
            "out_csv" => opt_path(&self.out_csv),
            "out_svg" => opt_path(&self.out_svg),
            "rate_units" => self.rate_units.name().to_string(),
            "fig1_extra_window_ps" => self.fig1_extra_window_ps.to_string(),
            "fig3_extra_jitter_ps" => self.fig3_extra_jitter_ps.to_string(),
            _ => return None,
        })
    }

    /// Applies a config file's lines. `origin` names the file in errors.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(at) => &raw[..at],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::Parse {
                path: origin.to_string(),
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            self.set(key.trim(), value.trim()).map_err(err)?;
        }
        Ok(())
    }

    /// Applies one `--set key=value` argument.
    pub fn apply_override(&mut self, arg: &str) -> Result<()> {
        let err = |message: String| CliError::Override {
            arg: arg.to_string(),
            message,
        };
        let (key, value) = arg
            .split_once('=')
            .ok_or_else(|| err("expected key=value".to_string()))?;
        self.set(key.trim(), value.trim()).map_err(err)
    }

    /// `key = value` for every key, in a form [`Config::apply_text`] reads back.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let _ = writeln!(out, "{key} = {}", self.get(key).expect("listed key"));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("sigma_ps", self.sigma_ps),
            ("period_ps", self.period_ps),
            ("window_ps", self.window_ps),
            ("c_step", self.c_step),
            ("fig1_extra_window_ps", self.fig1_extra_window_ps),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::validation(key, format!("must be > 0, got {v}")));
            }
        }
        let non_negative = [
            ("jitter_ps", self.jitter_ps),
            ("dark_rate_hz", self.dark_rate_hz),
            ("alpha_db_per_km", self.alpha_db_per_km),
            ("l_min_km", self.l_min_km),
            ("fig3_extra_jitter_ps", self.fig3_extra_jitter_ps),
        ];
        for (key, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(CliError::validation(key, format!("must be >= 0, got {v}")));
            }
        }
        for (key, v) in [
            ("chirp", self.chirp),
            ("beta_e26", self.beta_e26),
            ("c_min", self.c_min),
            ("c_max", self.c_max),
        ] {
            if !v.is_finite() {
                return Err(CliError::validation(
                    key,
                    format!("must be finite, got {v}"),
                ));
            }
        }
        if let Some(hi) = self.l_max_km {
            if !(hi > self.l_min_km && hi.is_finite()) {
                return Err(CliError::validation(
                    "l_max_km",
                    format!("must exceed l_min_km = {}, got {hi}", self.l_min_km),
                ));
            }
        }
        if self.l_steps == 0 {
            return Err(CliError::validation("l_steps", "must be >= 1"));
        }
        if self.c_min > self.c_max {
            return Err(CliError::validation(
                "c_max",
                format!("must be >= c_min = {}, got {}", self.c_min, self.c_max),
            ));
        }
        if self.dark_model == DarkCountModel::PaperLinearized
            && self.dark_rate_hz * self.window_ps * PS >= 1.0
        {
            return Err(CliError::validation(
                "dark_rate_hz",
                "dark_rate_hz * window must stay below 1 with dark_model = paper_linearized",
            ));
        }
        Ok(())
    }

    pub fn params(&self) -> ScenarioParams {
        ScenarioParams {
            sigma: self.sigma_ps * PS,
            chirp: self.chirp,
            beta: self.beta_e26 * BETA_UNIT,
            alpha_db_per_km: self.alpha_db_per_km,
            dark_rate: self.dark_rate_hz,
            period: self.period_ps * PS,
            jitter: self.jitter_ps * PS,
            window: self.window_ps * PS,
            dark_model: self.dark_model,
            transmittance_convention: self.transmittance_convention,
        }
    }

    pub fn c_grid(&self) -> Result<Vec<f64>> {
        Ok(stepped_grid(self.c_min, self.c_max, self.c_step)?)
    }

    pub fn scenario_options(&self) -> Result<ScenarioOptions> {
        Ok(ScenarioOptions {
            extra_window: self.fig1_extra_window_ps * PS,
            extra_jitter: self.fig3_extra_jitter_ps * PS,
            l_steps: self.l_steps,
            c_grid: self.c_grid()?,
            ..ScenarioOptions::default()
        })
    }
}
