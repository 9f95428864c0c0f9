//! One-dimensional analogy: a closed curve of fixed perimeter `l0`.
//!
//! The curve is represented on its covering line by `φ(x) = exp(−2πi x/l0)`,
//! which solves `i dφ/dx = m0 φ` with `m0 = 2π/l0`. Its elliptical
//! deformations obey the approximate perimeter relation
//! `l0 = π[1.5(a + b) − √(ab)]`, and in the pseudo-euclidean plane each
//! ellipse becomes the hyperbola `X²/a² − T²/b² = 1`, whose `X ≥ a` branch
//! gives the position `X(a, T) = a√(1 + T²/b²)`.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PERIMETER_TOLERANCE: f64 = 1e-10;

/// Default number of semi-axis samples in a region sweep.
pub const DEFAULT_GRID: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleManifold {
    l0: f64,
    m0: f64,
}

impl CircleManifold {
    pub fn new(l0: f64) -> Result<Self> {
        check_perimeter(l0)?;
        Ok(Self { l0, m0: TAU / l0 })
    }

    pub fn perimeter(&self) -> f64 {
        self.l0
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    /// `exp(−2πi·frequency·x/l0)`; `frequency = 1` is the representation function.
    pub fn phi(&self, x: f64, frequency: f64) -> Complex64 {
        Complex64::from_polar(1.0, -TAU * frequency * x / self.l0)
    }

    /// Analytic `dφ/dx`.
    pub fn phi_derivative(&self, x: f64, frequency: f64) -> Complex64 {
        Complex64::new(0.0, -TAU * frequency / self.l0) * self.phi(x, frequency)
    }

    /// `T_x φ = i(2π)⁻¹ l0 dφ/dx`.
    pub fn translate(&self, x: f64, frequency: f64) -> Complex64 {
        Complex64::new(0.0, self.l0 / TAU) * self.phi_derivative(x, frequency)
    }
}

fn check_perimeter(l0: f64) -> Result<()> {
    if l0.is_finite() && l0 > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "perimeter must be positive and finite, got {l0}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepresentationResidual {
    /// `|i dφ/dx − m0 φ|`.
    pub equation: f64,
    /// `|T_x φ(x + l0) − φ(x)|`.
    pub translation: f64,
    /// `|φ(x + l0) − φ(x)|`.
    pub periodicity: f64,
}

pub fn representation_residual(man: &CircleManifold, x: f64) -> RepresentationResidual {
    representation_residual_at_frequency(man, x, 1.0)
}

/// As [`representation_residual`] for the trial function
/// `exp(−2πi·frequency·x/l0)`.
pub fn representation_residual_at_frequency(
    man: &CircleManifold,
    x: f64,
    frequency: f64,
) -> RepresentationResidual {
    let i = Complex64::new(0.0, 1.0);
    let here = man.phi(x, frequency);
    let next = x + man.perimeter();
    RepresentationResidual {
        equation: (i * man.phi_derivative(x, frequency) - man.m0() * here).norm(),
        translation: (man.translate(next, frequency) - here).norm(),
        periodicity: (man.phi(next, frequency) - here).norm(),
    }
}

/// Largest semi-axis allowed by the perimeter relation, reached when the
/// other semi-axis is zero: `l0 / 1.5π`.
pub fn a_max(l0: f64) -> f64 {
    l0 / (1.5 * PI)
}

/// `π[1.5(a + b) − √(ab)]`.
pub fn approximate_perimeter(a: f64, b: f64) -> f64 {
    PI * (1.5 * (a + b) - (a * b).sqrt())
}

/// Exact ellipse perimeter by the arithmetic-geometric mean; a diagnostic
/// against [`approximate_perimeter`].
pub fn exact_perimeter(a: f64, b: f64) -> f64 {
    let (mut hi, mut lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == 0.0 {
        return 4.0 * hi;
    }
    let mut sum = 0.5 * (hi * hi - lo * lo);
    let mut weight = 0.5;
    for _ in 0..64 {
        let c = 0.5 * (hi - lo);
        let next_hi = 0.5 * (hi + lo);
        lo = (hi * lo).sqrt();
        hi = next_hi;
        weight *= 2.0;
        sum += weight * c * c;
        if c <= f64::EPSILON * hi {
            break;
        }
    }
    // hi now holds agm(a, b)
    let a2 = a.max(b).powi(2);
    2.0 * PI * (a2 - sum) / hi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EllipseBranch {
    /// Larger root in `√b`; passes through the circle `a = b = l0/2π` and
    /// is continuous on `[0, a_max]`.
    Upper,
    /// Smaller root in `√b`; non-negative only for `a ≥ a_max`, where it
    /// starts from the degenerate ellipse `b = 0`.
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseShape {
    pub a: f64,
    pub b: f64,
}

impl EllipseShape {
    pub fn perimeter(&self) -> f64 {
        approximate_perimeter(self.a, self.b)
    }

    /// `X²/a² + Y²/b²`.
    pub fn implicit(&self, x: f64, y: f64) -> f64 {
        (x / self.a).powi(2) + (y / self.b).powi(2)
    }

    /// `X²/a² − T²/b²`.
    pub fn hyperbolic_implicit(&self, x: f64, t: f64) -> f64 {
        (x / self.a).powi(2) - (t / self.b).powi(2)
    }

    /// Position on the `X ≥ a` branch at time `t`; `None` for the degenerate
    /// `b = 0` member away from `t = 0`.
    pub fn position_at(&self, t: f64) -> Option<f64> {
        if self.b > 0.0 {
            Some(self.a * (1.0 + (t / self.b).powi(2)).sqrt())
        } else if t == 0.0 {
            Some(self.a)
        } else {
            None
        }
    }
}

/// `b(a)` on the upper branch.
pub fn solve_ellipse_b(l0: f64, a: f64) -> Result<EllipseShape> {
    solve_ellipse_b_on(l0, a, EllipseBranch::Upper)
}

/// Solves `1.5u² − √a·u + (1.5a − l0/π) = 0` for `u = √b`.
pub fn solve_ellipse_b_on(l0: f64, a: f64, branch: EllipseBranch) -> Result<EllipseShape> {
    check_perimeter(l0)?;
    let a_max = a_max(l0);
    // the discriminant stays non-negative up to a = 3 l0 / 4π
    let a_turn = 0.75 * l0 / PI;
    let (lo, hi) = match branch {
        EllipseBranch::Upper => (0.0, a_max),
        EllipseBranch::Lower => (a_max, a_turn),
    };
    if !(a >= lo && a <= hi) {
        return Err(Error::SemiAxisOutOfRange { a, a_max: hi });
    }
    let v = a.sqrt();
    let disc = (6.0 * l0 / PI - 8.0 * a).max(0.0);
    let upper = (v + disc.sqrt()) / 3.0;
    let u = match branch {
        EllipseBranch::Upper => upper,
        // Vieta: u_lower · u_upper = (1.5a − l0/π) / 1.5
        EllipseBranch::Lower => ((a - l0 / (1.5 * PI)) / upper).max(0.0),
    };
    let shape = EllipseShape { a, b: u * u };
    let rel = (shape.perimeter() - l0).abs() / l0;
    if rel > PERIMETER_TOLERANCE {
        return Err(Error::InvalidParameter(format!(
            "perimeter relation violated by {rel:e} at a = {a}"
        )));
    }
    Ok(shape)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSnapshot {
    pub t: f64,
    pub x_min: f64,
    pub x_max: f64,
}

/// Extent of the region swept by the ellipse family at time `t`, sampling
/// `a_i = a_max·i/grid` for `i = 1..=grid`.
pub fn region_at(l0: f64, t: f64, grid: usize) -> Result<RegionSnapshot> {
    check_perimeter(l0)?;
    if grid < 2 {
        return Err(Error::InvalidParameter(format!("grid must be >= 2, got {grid}")));
    }
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time must be finite, got {t}")));
    }
    let top = a_max(l0);
    let mut x_max = 0.0_f64;
    for i in 1..=grid {
        let a = if i == grid { top } else { top * i as f64 / grid as f64 };
        let shape = solve_ellipse_b(l0, a)?;
        if let Some(x) = shape.position_at(t) {
            x_max = x_max.max(x);
        }
    }
    Ok(RegionSnapshot {
        t,
        x_min: -x_max,
        x_max,
    })
}

/// `steps` snapshots uniformly spaced on `[t_start, t_end]`, both ends included.
pub fn propagate(
    l0: f64,
    t_start: f64,
    t_end: f64,
    steps: usize,
    grid: usize,
) -> Result<Vec<RegionSnapshot>> {
    if !(t_start < t_end) {
        return Err(Error::InvalidParameter(format!(
            "need t_start < t_end, got {t_start} and {t_end}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidParameter(format!("steps must be >= 2, got {steps}")));
    }
    let dt = (t_end - t_start) / (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            let t = if i == steps - 1 { t_end } else { t_start + dt * i as f64 };
            region_at(l0, t, grid)
        })
        .collect()
}

/// CSV with header `T,x_min,x_max`.
pub fn series_to_csv(series: &[RegionSnapshot]) -> String {
    let mut out = String::from("T,x_min,x_max\n");
    for s in series {
        let _ = writeln!(out, "{:?},{:?},{:?}", s.t, s.x_min, s.x_max);
    }
    out
}
