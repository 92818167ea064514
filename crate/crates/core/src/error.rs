use std::path::PathBuf;

use thiserror::Error;

use crate::model::DayType;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing factor(s): {}", .0.join(", "))]
    MissingFactor(Vec<String>),

    #[error("negative or non-finite factor: {0}")]
    NegativeFactor(String),

    #[error("invalid site inventory: {0}")]
    InvalidInventory(String),

    #[error("invalid quality rules: {0}")]
    InvalidRules(String),

    #[error("unknown effect category: {0:?}")]
    UnknownCategory(String),

    #[error("diary file header: {0}")]
    Header(String),

    #[error("no usable profile for day type {0} (zero days)")]
    MissingProfile(DayType),

    #[error("allocation divisor is zero: {0}")]
    DivisionDomain(&'static str),

    #[error("invalid scenario override: {0}")]
    InvalidOverride(String),

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("no sign change of net energy over [{lo}, {hi}]: net({lo}) = {net_lo}, net({hi}) = {net_hi}")]
    NoRoot {
        lo: f64,
        hi: f64,
        net_lo: f64,
        net_hi: f64,
    },

    #[error("net energy is not finite at {parameter} = {value}")]
    NonFinite { parameter: String, value: f64 },

    #[error("sweep point {parameter} = {value}: {source}")]
    SweepPoint {
        parameter: String,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }
}
