use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of a function.
    #[error("{name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// A parameter bundle violated one of its invariants.
    #[error("invalid {field} = {value}: must satisfy {constraint}")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("invalid bracket [{lo}, {hi}]: lower bound must be below upper bound")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (error estimate {error_estimate:e}, target {target:e})"
    )]
    NonConvergence {
        subdivisions: usize,
        error_estimate: f64,
        target: f64,
    },

    /// The raw-key probability vanished, leaving the QBER undefined.
    #[error("raw key probability is zero; QBER is undefined")]
    DegenerateRawKey,

    #[error("key rate stays positive out to {searched_km} km; no extinction distance found")]
    NoExtinction { searched_km: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
}

impl Error {
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::NoSignChange { .. } | Error::NoExtinction { .. }
        )
    }
}
