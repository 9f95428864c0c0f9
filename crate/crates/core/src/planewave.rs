//! Plane-wave solutions `ψ(x) = ψ_p exp(−i p·x)` of the free Dirac equation
//! `iγ^μ∂_μψ = mψ` and the inverse-wavelength form of the mass shell.

use std::f64::consts::TAU;

use nalgebra::Vector4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{apply, Axis, Bispinor, ComplexMatrix4};
use crate::error::{Error, Result};
use crate::gammas;

/// Contravariant energy-momentum `(p_t, p_x, p_y, p_z)` together with the mass
/// it is meant to sit on the shell of.
///
/// Construction is unchecked so that off-shell input can be fed to
/// [`solve_amplitude`]; use [`make_on_shell`] for the positive-energy branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourMomentum {
    components: [f64; 4],
    mass: f64,
}

impl FourMomentum {
    pub fn new(components: [f64; 4], mass: f64) -> Self {
        Self { components, mass }
    }

    pub fn components(&self) -> [f64; 4] {
        self.components
    }

    pub fn component(&self, axis: Axis) -> f64 {
        self.components[axis.index()]
    }

    pub fn energy(&self) -> f64 {
        self.components[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.components[1], self.components[2], self.components[3]]
    }

    pub fn spatial_norm(&self) -> f64 {
        self.spatial().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `p_t² − |p|²`.
    pub fn invariant_square(&self) -> f64 {
        let [t, x, y, z] = self.components;
        t * t - x * x - y * y - z * z
    }

    /// `(p² − m²) / p_t²`, zero on shell.
    pub fn shell_defect(&self) -> f64 {
        let e2 = self.energy().powi(2).max(f64::MIN_POSITIVE);
        (self.invariant_square() - self.mass * self.mass) / e2
    }

    pub fn is_on_shell(&self, rel_tol: f64) -> bool {
        self.shell_defect().abs() <= rel_tol
    }
}

/// Positive-energy on-shell momentum for the given spatial part.
pub fn make_on_shell(spatial: [f64; 3], m: f64) -> Result<FourMomentum> {
    if !(m >= 0.0) {
        return Err(Error::NegativeMass(m));
    }
    let [x, y, z] = spatial;
    if m == 0.0 && spatial.iter().all(|v| *v == 0.0) {
        return Err(Error::NullMomentum);
    }
    let energy = (m * m + x * x + y * y + z * z).sqrt();
    Ok(FourMomentum::new([energy, x, y, z], m))
}

/// Inverse lengths `1/l_μ = p_μ/2π` and `1/l_m = m/2π`.
///
/// Inverse lengths are stored because `l_μ` itself diverges whenever the
/// matching momentum component vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavelengthSet {
    pub inv_l: [f64; 4],
    pub inv_l_m: f64,
}

impl WavelengthSet {
    /// Signed lengths `l_μ = 2π/p_μ`, `None` where the component is zero.
    pub fn lengths(&self) -> [Option<f64>; 4] {
        self.inv_l.map(|v| (v != 0.0).then(|| 1.0 / v))
    }

    pub fn length(&self, axis: Axis) -> Option<f64> {
        self.lengths()[axis.index()]
    }

    pub fn mass_length(&self) -> Option<f64> {
        (self.inv_l_m != 0.0).then(|| 1.0 / self.inv_l_m)
    }

    /// `(l_t⁻² − l_x⁻² − l_y⁻² − l_z⁻² − l_m⁻²) / l_t⁻²`.
    pub fn shell_defect(&self) -> f64 {
        let [t, x, y, z] = self.inv_l;
        let lhs = t * t - x * x - y * y - z * z;
        (lhs - self.inv_l_m * self.inv_l_m) / (t * t).max(f64::MIN_POSITIVE)
    }
}

pub fn wavelengths(p: &FourMomentum) -> WavelengthSet {
    WavelengthSet {
        inv_l: p.components().map(|v| v / TAU),
        inv_l_m: p.mass() / TAU,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    pub fn from_coords(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    pub fn coord(&self, axis: Axis) -> f64 {
        self.coords()[axis.index()]
    }

    /// Copy with one coordinate moved by `d`.
    pub fn shifted(&self, axis: Axis, d: f64) -> Self {
        let mut c = self.coords();
        c[axis.index()] += d;
        Self::from_coords(c)
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|v| v.is_finite())
    }
}

/// A bispinor-valued function of spacetime with a known gradient.
pub trait SpinorField {
    fn value(&self, pt: &SpacetimePoint) -> Bispinor;

    /// `∂ψ/∂x^μ` for `μ = t, x, y, z`.
    fn gradient(&self, pt: &SpacetimePoint) -> [Bispinor; 4];

    /// Second-order central differences of [`SpinorField::value`].
    fn gradient_central(&self, pt: &SpacetimePoint, h: f64) -> [Bispinor; 4] {
        Axis::ALL.map(|ax| {
            let fwd = self.value(&pt.shifted(ax, h));
            let bwd = self.value(&pt.shifted(ax, -h));
            (fwd - bwd).scale(Complex64::new(0.5 / h, 0.0))
        })
    }
}

impl<F: SpinorField + ?Sized> SpinorField for &F {
    fn value(&self, pt: &SpacetimePoint) -> Bispinor {
        (**self).value(pt)
    }
    fn gradient(&self, pt: &SpacetimePoint) -> [Bispinor; 4] {
        (**self).gradient(pt)
    }
}

/// A plane wave `ψ_p exp(−i p·x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BispinorWave {
    pub momentum: FourMomentum,
    pub amplitude: Bispinor,
}

/// Relative residual allowed when [`BispinorWave::new`] validates an amplitude.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-12;

impl BispinorWave {
    /// Checked constructor: the amplitude must be a nonzero solution of
    /// `(γ·p − m)ψ_p = 0`.
    pub fn new(momentum: FourMomentum, amplitude: Bispinor) -> Result<Self> {
        let wave = Self::from_parts(momentum, amplitude);
        let norm = amplitude.norm();
        let rel = if norm > 0.0 {
            wave.momentum_residual() / norm
        } else {
            f64::INFINITY
        };
        if rel < AMPLITUDE_TOLERANCE {
            Ok(wave)
        } else {
            Err(Error::NotASolution(rel))
        }
    }

    /// Unchecked constructor, for deliberately perturbed or off-shell waves.
    pub fn from_parts(momentum: FourMomentum, amplitude: Bispinor) -> Self {
        Self {
            momentum,
            amplitude,
        }
    }

    /// First basis amplitude of [`solve_amplitude`].
    pub fn on_shell(spatial: [f64; 3], m: f64) -> Result<Self> {
        let p = make_on_shell(spatial, m)?;
        let [first, _] = solve_amplitude(&p)?;
        Ok(Self::from_parts(p, first))
    }

    pub fn mass(&self) -> f64 {
        self.momentum.mass()
    }

    /// `‖(γ·p − m)ψ_p‖`.
    pub fn momentum_residual(&self) -> f64 {
        apply(&momentum_operator(&self.momentum), &self.amplitude).norm()
    }

    pub fn phase(&self, pt: &SpacetimePoint) -> f64 {
        let p = self.momentum.components();
        Axis::ALL
            .iter()
            .map(|&ax| ax.metric() * p[ax.index()] * pt.coord(ax))
            .sum()
    }

    pub fn evaluate(&self, pt: &SpacetimePoint) -> Bispinor {
        let phase = self.phase(pt);
        self.amplitude.scale(Complex64::from_polar(1.0, -phase))
    }

    /// `ψ_p exp(−2πi t/l_t + 2πi x/l_x + 2πi y/l_y + 2πi z/l_z)`.
    /// Axes with infinite wavelength contribute nothing to the exponent.
    pub fn evaluate_wavelength_form(&self, pt: &SpacetimePoint) -> Bispinor {
        let lengths = wavelengths(&self.momentum).lengths();
        let exponent: f64 = Axis::ALL
            .iter()
            .filter_map(|&ax| lengths[ax.index()].map(|l| -ax.metric() * TAU * pt.coord(ax) / l))
            .sum();
        self.amplitude.scale(Complex64::from_polar(1.0, exponent))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::from_parts(self.momentum, self.amplitude.scale(c))
    }

    pub fn dirac_residual(&self, pt: &SpacetimePoint, mode: Derivative) -> f64 {
        dirac_residual(self, self.mass(), pt, mode)
    }
}

impl SpinorField for BispinorWave {
    fn value(&self, pt: &SpacetimePoint) -> Bispinor {
        self.evaluate(pt)
    }

    fn gradient(&self, pt: &SpacetimePoint) -> [Bispinor; 4] {
        let psi = self.evaluate(pt);
        let p = self.momentum.components();
        Axis::ALL.map(|ax| psi.scale(Complex64::new(0.0, -ax.metric() * p[ax.index()])))
    }
}

/// How `∂_μ` is evaluated by [`dirac_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Derivative {
    Analytic,
    Central { h: f64 },
}

/// `iγ^μ∂_μψ − mψ` at a point.
pub fn dirac_operator<F: SpinorField>(
    field: &F,
    m: f64,
    pt: &SpacetimePoint,
    mode: Derivative,
) -> Bispinor {
    let g = gammas();
    let grad = match mode {
        Derivative::Analytic => field.gradient(pt),
        Derivative::Central { h } => field.gradient_central(pt, h),
    };
    let i = Complex64::new(0.0, 1.0);
    let kinetic = Axis::ALL.iter().fold(Bispinor::zero(), |acc, &ax| {
        acc + apply(g.gamma(ax), &grad[ax.index()]).scale(i)
    });
    kinetic - field.value(pt).scale(Complex64::new(m, 0.0))
}

/// `‖(iγ^μ∂_μ − m)ψ‖` at a point.
pub fn dirac_residual<F: SpinorField>(
    field: &F,
    m: f64,
    pt: &SpacetimePoint,
    mode: Derivative,
) -> f64 {
    dirac_operator(field, m, pt, mode).norm()
}

/// `γ·p − m·I`.
pub fn momentum_operator(p: &FourMomentum) -> ComplexMatrix4 {
    gammas().slash(p.components())
        - ComplexMatrix4::identity().scale(Complex64::new(p.mass(), 0.0))
}

/// Orthonormal basis of the null space of `γ·p − m`.
///
/// The null space is found from the singular values; the basis is then made
/// canonical by projecting the standard unit vectors onto it (largest
/// projection first, Gram-Schmidt for the second) and rotating each vector so
/// its first non-negligible component is real and positive.
pub fn solve_amplitude(p: &FourMomentum) -> Result<[Bispinor; 2]> {
    let op = momentum_operator(p).to_nalgebra();
    let scale = p
        .components()
        .iter()
        .map(|v| v.abs())
        .fold(p.mass().abs(), f64::max)
        .max(f64::MIN_POSITIVE);
    let svd = op.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let null: Vec<Vector4<Complex64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= 1e-8 * scale)
        .map(|(k, _)| v_t.row(k).transpose().map(|c| c.conj()))
        .collect();
    if null.len() != 2 {
        return Err(Error::NullSpaceDimension(null.len()));
    }

    // projector onto the null space applied to each unit vector
    let projected: Vec<Vector4<Complex64>> = (0..4)
        .map(|j| {
            null.iter()
                .fold(Vector4::zeros(), |acc, v| acc + v * v[j].conj())
        })
        .collect();
    let first_idx = argmax_norm(&projected);
    let e1 = projected[first_idx].normalize();
    let orthogonalized: Vec<Vector4<Complex64>> = projected
        .iter()
        .map(|v| v - e1 * e1.dotc(v))
        .collect();
    let e2 = orthogonalized[argmax_norm(&orthogonalized)].normalize();

    Ok([to_bispinor(&e1), to_bispinor(&e2)].map(fix_phase))
}

fn argmax_norm(vs: &[Vector4<Complex64>]) -> usize {
    let mut best = 0;
    for (i, v) in vs.iter().enumerate() {
        if v.norm() > vs[best].norm() * (1.0 + 1e-9) {
            best = i;
        }
    }
    best
}

fn to_bispinor(v: &Vector4<Complex64>) -> Bispinor {
    Bispinor::new([v[0], v[1], v[2], v[3]])
}

fn fix_phase(b: Bispinor) -> Bispinor {
    let norm = b.norm();
    match b.0.iter().find(|c| c.norm() > 1e-12 * norm) {
        Some(c) => b.scale(c.conj() / c.norm()),
        None => b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn make_on_shell_examples() {
        assert_eq!(make_on_shell([0.0, 0.0, 0.0], 1.0).unwrap().energy(), 1.0);
        assert_eq!(make_on_shell([3.0, 0.0, 0.0], 4.0).unwrap().energy(), 5.0);
        assert_eq!(make_on_shell([1.0, 2.0, 2.0], 0.0).unwrap().energy(), 3.0);
    }

    #[test]
    fn make_on_shell_rejects_bad_input() {
        assert_eq!(
            make_on_shell([1.0, 0.0, 0.0], -1.0),
            Err(Error::NegativeMass(-1.0))
        );
        assert_eq!(make_on_shell([0.0; 3], 0.0), Err(Error::NullMomentum));
        assert!(make_on_shell([1.0, 0.0, 0.0], f64::NAN).is_err());
    }

    #[test]
    fn rest_frame_amplitudes_are_eigenvectors_of_gamma_t() {
        let p = make_on_shell([0.0; 3], 1.0).unwrap();
        let basis = solve_amplitude(&p).unwrap();
        let gt = *gammas().gamma(Axis::T);
        for b in basis {
            assert_close(b.norm(), 1.0, 1e-14);
            let diff = apply(&gt, &b) - b;
            assert!(diff.norm() < 1e-14);
        }
        assert!(basis[0].inner(&basis[1]).norm() < 1e-14);
    }

    #[test]
    fn boosted_amplitudes_solve_the_momentum_equation() {
        let p = FourMomentum::new([5.0, 3.0, 0.0, 0.0], 4.0);
        let basis = solve_amplitude(&p).unwrap();
        for b in basis {
            let wave = BispinorWave::new(p, b).unwrap();
            assert!(wave.momentum_residual() < 1e-12);
            // phase convention
            let first = b.0.iter().find(|c| c.norm() > 1e-12).unwrap();
            assert!(first.im == 0.0 && first.re > 0.0);
        }
        assert!(basis[0].inner(&basis[1]).norm() < 1e-13);
    }

    #[test]
    fn off_shell_momentum_has_no_amplitude() {
        let p = FourMomentum::new([1.0, 1.0, 0.0, 0.0], 1.0);
        assert!(matches!(
            solve_amplitude(&p),
            Err(Error::NullSpaceDimension(0))
        ));
    }

    #[test]
    fn checked_constructor_rejects_non_solutions() {
        let p = make_on_shell([0.0; 3], 1.0).unwrap();
        assert!(matches!(
            BispinorWave::new(p, Bispinor::basis(0)),
            Err(Error::NotASolution(_))
        ));
        assert!(BispinorWave::new(p, Bispinor::zero()).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let wave = BispinorWave::on_shell([3.0, 0.0, 0.0], 4.0).unwrap();
        assert_eq!(wave.evaluate(&SpacetimePoint::default()), wave.amplitude);

        let rest = BispinorWave::on_shell([0.0; 3], 2.0).unwrap();
        let pt = SpacetimePoint::new(2.0 * PI / 2.0, 0.0, 0.0, 0.0);
        assert!((rest.evaluate(&pt) - rest.amplitude).norm() < 1e-12);

        // p·x = 5·0.1 − 3·0.2 = −0.1, so ψ = exp(0.1 i) ψ_p
        let pt = SpacetimePoint::new(0.1, 0.2, 0.0, 0.0);
        let expected = wave.amplitude.scale(Complex64::from_polar(1.0, 0.1));
        assert!((wave.evaluate(&pt) - expected).norm() < 1e-12);
    }

    #[test]
    fn wavelength_form_skips_infinite_lengths() {
        let wave = BispinorWave::on_shell([3.0, 0.0, 0.0], 4.0).unwrap();
        let pt = SpacetimePoint::new(0.3, -1.2, 7.0, 2.0);
        let a = wave.evaluate(&pt);
        let b = wave.evaluate_wavelength_form(&pt);
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn wavelengths_examples() {
        let rest = make_on_shell([0.0; 3], TAU).unwrap();
        let w = wavelengths(&rest);
        assert_eq!(w.inv_l, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(w.inv_l_m, 1.0);
        assert_eq!(w.lengths(), [Some(1.0), None, None, None]);

        let w = wavelengths(&FourMomentum::new([5.0, 3.0, 0.0, 0.0], 4.0));
        assert_eq!(w.inv_l, [5.0 / TAU, 3.0 / TAU, 0.0, 0.0]);
        assert!(w.shell_defect().abs() < 1e-12);

        let w = wavelengths(&FourMomentum::new([1.0, 1.0, 0.0, 0.0], 0.0));
        assert_eq!(w.inv_l_m, 0.0);
        assert_eq!(w.mass_length(), None);
        assert_eq!(w.shell_defect(), 0.0);
    }

    #[test]
    fn residual_vanishes_for_exact_waves() {
        let wave = BispinorWave::on_shell([1.0, -2.0, 0.5], 1.0).unwrap();
        let pt = SpacetimePoint::new(1.0, 2.0, -3.0, 4.0);
        assert!(wave.dirac_residual(&pt, Derivative::Analytic) < 1e-12);
    }

    #[test]
    fn perturbed_amplitude_residual_is_linear_in_the_perturbation() {
        let wave = BispinorWave::on_shell([1.0, 2.0, -1.0], 0.5).unwrap();
        let delta = Bispinor::new([
            Complex64::new(0.3, -0.2),
            Complex64::new(-0.7, 0.1),
            Complex64::new(0.2, 0.9),
            Complex64::new(-0.4, -0.5),
        ])
        .scale(Complex64::new(1e-3, 0.0));
        let perturbed = BispinorWave::from_parts(wave.momentum, wave.amplitude + delta);
        // (γ·p − m)δ by explicit loops
        let g = gammas();
        let p = wave.momentum.components();
        let mut expected = [Complex64::new(0.0, 0.0); 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut entry = Complex64::new(0.0, 0.0);
                for ax in Axis::ALL {
                    entry += g.gamma(ax).0[i][j] * ax.metric() * p[ax.index()];
                }
                if i == j {
                    entry -= 0.5;
                }
                expected[i] += entry * delta.0[j];
            }
        }
        let expected = Bispinor::new(expected).norm();
        let pt = SpacetimePoint::new(0.2, -0.4, 1.5, 3.0);
        let got = perturbed.dirac_residual(&pt, Derivative::Analytic);
        assert!((got - expected).abs() < 1e-13, "{got} vs {expected}");
        let scale = wave.momentum.energy() + wave.momentum.spatial_norm() + 0.5;
        assert!(got > 1e-5 * scale && got < 1e-2 * scale);
    }

    #[test]
    fn central_difference_residual_has_ratio_four() {
        let wave = BispinorWave::on_shell([2.0, 1.0, -1.0], 1.0).unwrap();
        let pt = SpacetimePoint::new(0.4, 0.1, -0.3, 0.8);
        let coarse = wave.dirac_residual(&pt, Derivative::Central { h: 1e-2 });
        let fine = wave.dirac_residual(&pt, Derivative::Central { h: 5e-3 });
        assert_close(coarse / fine, 4.0, 0.05);
    }
}
