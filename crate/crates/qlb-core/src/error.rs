use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown lattice name `{0}`; expected one of: d1q3, d2q9")]
    UnknownLattice(String),

    #[error("relaxation parameter tau = {0} violates the stability bound tau >= 0.5")]
    UnstableTau(f64),

    #[error("viscosity must be positive, got {0}")]
    NonpositiveViscosity(f64),

    #[error("nonpositive density {rho} at site {site}")]
    NonpositiveDensity { rho: f64, site: usize },

    #[error("direction index {index} out of range for {n_e} directions")]
    DirectionOutOfRange { index: usize, n_e: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("state has zero norm; cannot renormalize")]
    ZeroNorm,

    #[error("block layout error: {0}")]
    Layout(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("vacuum or nonpositive density in Riemann setup: {0}")]
    Vacuum(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
