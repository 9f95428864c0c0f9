//! Executable checks for a geometric reading of the Dirac equation.
//!
//! * [`clifford`]: gamma matrices and 4x4 complex algebra.
//! * [`planewave`]: free plane-wave bispinors, residuals, inverse wavelengths.
//! * [`sliding`]: translation, reflection and sliding-symmetry operators.
//! * [`manifold`]: the one-dimensional closed-manifold analogy.
//! * [`weyl`]: grid fields for planar Weyl geometry and gauge covariance.
//! * [`hydrogen`]: Dirac-Coulomb bound states by two-sided shooting.

use std::sync::OnceLock;

pub mod clifford;
pub mod convergence;
pub mod error;
pub mod hydrogen;
pub mod manifold;
pub mod planewave;
pub mod sampling;
pub mod sliding;
pub mod weyl;

pub use clifford::{anticommutator, apply, build_gamma_set, Axis, Bispinor, ComplexMatrix4, GammaSet};
pub use error::{Error, Result};

/// Shared gamma matrices.
pub fn gammas() -> &'static GammaSet {
    static GAMMAS: OnceLock<GammaSet> = OnceLock::new();
    GAMMAS.get_or_init(build_gamma_set)
}
