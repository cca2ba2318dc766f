use std::path::PathBuf;

/// Errors raised by the library and the command-line front-end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("n must be even (got {0})")]
    OddN(u64),

    #[error("n = {n} is too large for dense enumeration (limit {limit})")]
    TooLarge { n: u64, limit: u64 },

    #[error("pole proximity at level {level}: denominator {denominator:e} below floor {floor:e} (z = {z})")]
    PoleProximity {
        level: usize,
        denominator: f64,
        floor: f64,
        z: f64,
    },

    #[error("flow invalid at z = {z}: geometric-series ratio {ratio} >= 1 at level {level}")]
    FlowInvalid { z: f64, level: usize, ratio: f64 },

    #[error("no sign change of f in [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
