use thiserror::Error;

use crate::clifford::Axis;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mass must be non-negative, got {0}")]
    NegativeMass(f64),
    #[error("a massless wave needs non-zero spatial momentum")]
    NullMomentum,
    #[error("expected a 2-dimensional amplitude space, found dimension {0} (momentum off shell?)")]
    NullSpaceDimension(usize),
    #[error("amplitude does not solve the momentum-space equation (relative residual {0:e})")]
    NotASolution(f64),
    #[error("translation length must be finite and non-zero, got {0}")]
    InvalidLength(f64),
    #[error("momentum component along {0} is zero; its wavelength is infinite")]
    ZeroMomentumComponent(Axis),
    #[error("the sliding-symmetry form needs m > 0")]
    Massless,
    #[error("semi-axis {a} outside [0, {a_max}]")]
    SemiAxisOutOfRange { a: f64, a_max: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("grid extents {0:?} do not match {1:?}")]
    GridMismatch([usize; 4], [usize; 4]),
    #[error("scale factor must be positive, found {value} at node {node}")]
    NonPositiveScale { node: usize, value: f64 },
    #[error("field format: {0}")]
    Format(String),
    #[error("Z*alpha = {0} reaches the critical coupling |kappa| = {1}")]
    SupercriticalCoupling(f64, i32),
    #[error("inadmissible quantum numbers n = {n}, kappa = {kappa}")]
    InvalidQuantumNumbers { n: u32, kappa: i32 },
    #[error("state not found in bracket [{lo:e}, {hi:e}]")]
    StateNotFound { lo: f64, hi: f64 },
    #[error("grid too coarse near origin")]
    GridTooCoarse,
}

pub type Result<T> = std::result::Result<T, Error>;
