use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("angle out of range: {0}")]
    AngleOutOfRange(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("unphysical Bloch vector: norm {0} exceeds 1")]
    UnphysicalBloch(f64),

    #[error("numerical failure at t = {time}: {what}")]
    Numerical { time: f64, what: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("structural error: {0}")]
    Structure(String),

    #[error("sampling too coarse: {0}")]
    Resolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
