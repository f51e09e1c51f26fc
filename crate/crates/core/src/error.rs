use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{what} diverges: argument {value} is too close to the asymptote")]
    Overflow { what: &'static str, value: f64 },

    #[error("failed to bracket {what}: {detail}")]
    Bracket { what: &'static str, detail: String },

    #[error("root of {what} is not bracketed on [{lo}, {hi}]")]
    RootNotBracketed {
        what: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("integration step too large: energy drift {drift:e} exceeds {limit:e}")]
    StepTooLarge { drift: f64, limit: f64 },

    #[error("time step {dt} violates the stability bound {bound}")]
    Unstable { dt: f64, bound: f64 },

    #[error("simulation blew up at t = {t}: {detail}")]
    Instability { t: f64, detail: String },

    #[error("no front: road density stays below {threshold} everywhere")]
    NoFront { threshold: f64 },

    #[error("need at least {needed} samples in the fit window, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }

    /// True for errors caused by a bad configuration rather than a numerical failure.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::InvalidParameter { .. } | Error::Config { .. })
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::Overflow { .. } => "overflow",
            Error::Bracket { .. } => "bracket",
            Error::RootNotBracketed { .. } => "root-not-bracketed",
            Error::StepTooLarge { .. } => "step-too-large",
            Error::Unstable { .. } => "unstable",
            Error::Instability { .. } => "instability",
            Error::NoFront { .. } => "no-front",
            Error::InsufficientSamples { .. } => "insufficient-samples",
            Error::Config { .. } => "config",
            Error::Io(_) => "io",
        }
    }
}
