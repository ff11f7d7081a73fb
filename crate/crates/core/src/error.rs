use thiserror::Error;

/// Errors surfaced by the planning pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("distance must be positive, got {0} m")]
    NonPositiveDistance(f64),

    #[error("scattering model requires visibility below 6 km, got {0} km")]
    VisibilityOutOfRange(f64),

    #[error("traffic-field demand mode requires a traffic field")]
    MissingTrafficField,

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("config validation failed:\n{0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
