//! Pauli and Dirac gamma matrices in the off-diagonal (chiral) block form,
//! plus the handful of 4x4 complex operations the rest of the crate needs.
//!
//! Axes are named `t, x, y, z`; the time-axis matrix has identity blocks off
//! the diagonal and the spatial matrices are `(0, -σ_k; σ_k, 0)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Coordinate axis of the pseudo-euclidean 4-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    T,
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::T, Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Axis> {
        Self::ALL.get(i).copied()
    }

    /// Diagonal metric entry for signature (+1, -1, -1, -1).
    pub fn metric(self) -> f64 {
        match self {
            Axis::T => 1.0,
            _ => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::T => "t",
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Dense 4x4 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix4(pub [[Complex64; 4]; 4]);

impl ComplexMatrix4 {
    pub fn zero() -> Self {
        Self([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = ONE;
        }
        m
    }

    /// Assemble from 2x2 blocks `(top_left, top_right; bottom_left, bottom_right)`.
    pub fn from_blocks(blocks: [[[[Complex64; 2]; 2]; 2]; 2]) -> Self {
        let mut m = Self::zero();
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, block) in row.iter().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        m.0[2 * bi + i][2 * bj + j] = block[i][j];
                    }
                }
            }
        }
        m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for v in row.iter_mut() {
                *v *= c;
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn to_nalgebra(&self) -> nalgebra::Matrix4<Complex64> {
        nalgebra::Matrix4::from_fn(|i, j| self.0[i][j])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|c| *c == ZERO)
    }
}

impl Add for ComplexMatrix4 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for ComplexMatrix4 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ComplexMatrix4 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul for ComplexMatrix4 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        out
    }
}

impl Mul<Bispinor> for ComplexMatrix4 {
    type Output = Bispinor;
    fn mul(self, rhs: Bispinor) -> Bispinor {
        apply(&self, &rhs)
    }
}

/// Four complex amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Bispinor(pub [Complex64; 4]);

impl Bispinor {
    pub fn zero() -> Self {
        Self([ZERO; 4])
    }

    pub fn new(c: [Complex64; 4]) -> Self {
        Self(c)
    }

    pub fn from_real(c: [f64; 4]) -> Self {
        Self(c.map(|v| Complex64::new(v, 0.0)))
    }

    /// Unit vector along component `i`.
    pub fn basis(i: usize) -> Self {
        let mut b = Self::zero();
        b.0[i] = ONE;
        b
    }

    /// Sum of squared moduli.
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(self.0.map(|v| v * c))
    }

    /// Hermitian inner product `<self, other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Bispinor) -> Complex64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

impl Add for Bispinor {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (a, b) in out.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        out
    }
}

impl Sub for Bispinor {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for (a, b) in out.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        out
    }
}

impl Neg for Bispinor {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul<Bispinor> for Complex64 {
    type Output = Bispinor;
    fn mul(self, rhs: Bispinor) -> Bispinor {
        rhs.scale(self)
    }
}

/// The four gamma matrices with their metric signature.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    gamma: [ComplexMatrix4; 4],
    signature: [i8; 4],
}

impl GammaSet {
    pub fn gamma(&self, axis: Axis) -> &ComplexMatrix4 {
        &self.gamma[axis.index()]
    }

    pub fn matrices(&self) -> &[ComplexMatrix4; 4] {
        &self.gamma
    }

    pub fn signature(&self) -> [i8; 4] {
        self.signature
    }

    /// `γ^t p_t − γ^x p_x − γ^y p_y − γ^z p_z` for contravariant components `p`.
    pub fn slash(&self, p: [f64; 4]) -> ComplexMatrix4 {
        Axis::ALL.iter().fold(ComplexMatrix4::zero(), |acc, &ax| {
            acc + self
                .gamma(ax)
                .scale(Complex64::new(ax.metric() * p[ax.index()], 0.0))
        })
    }
}

/// Standard Pauli matrices `σ_x, σ_y, σ_z`.
pub fn pauli() -> [[[Complex64; 2]; 2]; 3] {
    [
        [[ZERO, ONE], [ONE, ZERO]],
        [[ZERO, -I], [I, ZERO]],
        [[ONE, ZERO], [ZERO, -ONE]],
    ]
}

pub fn build_gamma_set() -> GammaSet {
    let zero2 = [[ZERO; 2]; 2];
    let id2 = [[ONE, ZERO], [ZERO, ONE]];
    let time = ComplexMatrix4::from_blocks([[zero2, id2], [id2, zero2]]);
    let [sx, sy, sz] = pauli().map(|s| {
        let neg = s.map(|row| row.map(|c| -c));
        ComplexMatrix4::from_blocks([[zero2, neg], [s, zero2]])
    });
    GammaSet {
        gamma: [time, sx, sy, sz],
        signature: [1, -1, -1, -1],
    }
}

pub fn anticommutator(a: &ComplexMatrix4, b: &ComplexMatrix4) -> ComplexMatrix4 {
    *a * *b + *b * *a
}

pub fn apply(m: &ComplexMatrix4, s: &Bispinor) -> Bispinor {
    let mut out = Bispinor::zero();
    for (i, row) in m.0.iter().enumerate() {
        out.0[i] = row.iter().zip(s.0.iter()).map(|(a, b)| a * b).sum();
    }
    out
}
