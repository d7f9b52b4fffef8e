use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid array configuration: {0}")]
    InvalidConfig(String),

    #[error("element index ({module}, {antenna}) is not valid for a {num_modules}x{antennas_per_module} array")]
    InvalidIndex {
        module: f64,
        antenna: f64,
        num_modules: usize,
        antennas_per_module: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular geometry: {0}")]
    SingularGeometry(String),

    #[error("steering vector is not factorizable (singular value ratio {ratio:.3e})")]
    NotFactorizable { ratio: f64 },

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("usage: {0}")]
    Usage(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_) | Error::Usage(_) => 1,
            Error::InvalidIndex { .. }
            | Error::Domain(_)
            | Error::SingularGeometry(_)
            | Error::NotFactorizable { .. }
            | Error::InsufficientData { .. } => 2,
            Error::Io { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
