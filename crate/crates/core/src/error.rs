use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("potential certificate failed: {0}")]
    Certificate(String),

    #[error("near-singular system at lambda = {lambda}: condition estimate {condest:.3e}")]
    NearSingular { lambda: Complex64, condest: f64 },

    #[error("eigenvalue computation failed: {0}")]
    Eigen(String),

    #[error("lambda = {0} is flagged as exceptional")]
    Flagged(Complex64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NearSingular { .. } | Error::Eigen(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(what: &str, z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite, got {z}")))
    }
}
