use core::fmt;

/// Errors produced by samplers and numeric routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside its domain (negative rate, non-finite mass, ...).
    Domain(&'static str),
    /// The requested conditioning event has probability zero.
    ImpossibleCondition(&'static str),
    /// Row-indexed impossible conditioning, reported by batch samplers.
    ImpossibleConditionAt { row: usize, reason: &'static str },
    /// The inversion target lies outside the bracketing interval.
    Bracket { target: f64, lo: f64, hi: f64 },
    /// An iterative routine exhausted its iteration budget.
    NonConvergence { iterations: u32 },
    /// The proposal intensity failed to dominate the target intensity at `t`.
    MajorizationViolation {
        t: f64,
        lambda: f64,
        majorizer: f64,
        row: Option<usize>,
    },
    /// Missing or mutually incompatible arguments.
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::ImpossibleCondition(msg) => {
                write!(f, "conditioning on a probability-zero event: {msg}")
            }
            Error::ImpossibleConditionAt { row, reason } => {
                write!(f, "row {row}: conditioning on a probability-zero event: {reason}")
            }
            Error::Bracket { target, lo, hi } => {
                write!(f, "inversion target {target} outside bracket [{lo}, {hi}]")
            }
            Error::NonConvergence { iterations } => {
                write!(f, "no convergence after {iterations} iterations")
            }
            Error::MajorizationViolation { t, lambda, majorizer, row } => {
                if let Some(row) = row {
                    write!(
                        f,
                        "row {row}: intensity {lambda} exceeds majorizer {majorizer} at t = {t}"
                    )
                } else {
                    write!(f, "intensity {lambda} exceeds majorizer {majorizer} at t = {t}")
                }
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
