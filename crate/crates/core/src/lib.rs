//! Direct scattering transform for the two-dimensional Schrödinger operator
//! at zero energy, with regularized Faddeev Green's function, modified
//! Fredholm determinant and scattering data, plus numerical checks of the
//! identities they satisfy.

pub mod discretization;
pub mod error;
pub mod green_kernel;
pub mod integral_solver;
pub mod scattering;
pub mod special_functions;
pub mod theorem_algebra;
pub mod verification;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex scalars (`z`, `λ`, `ζ`, velocities) are plain `Complex64` values;
/// every public operation rejects non-finite components.
pub type ComplexPoint = Complex64;
