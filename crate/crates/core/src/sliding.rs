//! Translation operators `T_μ = i(2π)⁻¹ l_μ ∂/∂x_μ`, coordinate reflections
//! paired with `γ^μ`, and the sliding-symmetry operators `P^μ = γ^μ T_μ`.
//!
//! Derivatives in `T_μ` are taken with respect to the lowered coordinate
//! `x_μ = g_μμ x^μ`. With that reading a plane wave of momentum `p` satisfies
//! `T_μψ = (l_μ p_μ / 2π) ψ` on every axis, so `l_μ = 2π/p_μ` makes `T_μ` act
//! as the identity, and the weighted sum
//! `l_t⁻¹P^t − l_x⁻¹P^x − l_y⁻¹P^y − l_z⁻¹P^z` reproduces `iγ^μ∂_μ / 2π`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::clifford::{apply, Axis, Bispinor, ComplexMatrix4};
use crate::error::{Error, Result};
use crate::gammas;
use crate::planewave::{
    dirac_operator, wavelengths, BispinorWave, Derivative, SpacetimePoint, SpinorField,
};
use crate::sampling;

pub const TRANSLATION_TOLERANCE: f64 = 1e-10;
pub const SLIDING_TOLERANCE: f64 = 1e-10;
pub const REFLECTION_TOLERANCE: f64 = 1e-10;

/// Half-width of the cube random sample points are drawn from.
pub const SAMPLE_EXTENT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationOperator {
    axis: Axis,
    length: f64,
}

impl TranslationOperator {
    /// `length` may be negative (translation against the axis direction) but
    /// must be finite and non-zero.
    pub fn new(axis: Axis, length: f64) -> Result<Self> {
        if !length.is_finite() || length == 0.0 {
            return Err(Error::InvalidLength(length));
        }
        Ok(Self { axis, length })
    }

    /// Translation by the wave's own wavelength `l_μ = 2π/p_μ`.
    pub fn wavelength_of(wave: &BispinorWave, axis: Axis) -> Result<Self> {
        let l = wavelengths(&wave.momentum)
            .length(axis)
            .ok_or(Error::ZeroMomentumComponent(axis))?;
        Self::new(axis, l)
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

/// `T_μψ` at `pt`.
pub fn apply_translation<F: SpinorField>(
    op: &TranslationOperator,
    field: &F,
    pt: &SpacetimePoint,
) -> Bispinor {
    let grad = field.gradient(pt)[op.axis.index()];
    // ∂/∂x_μ = g^μμ ∂/∂x^μ
    let factor = Complex64::new(0.0, op.length * op.axis.metric() / TAU);
    grad.scale(factor)
}

/// `P^μ = γ^μ T_μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlidingOperator {
    pub translation: TranslationOperator,
    pub gamma: ComplexMatrix4,
}

impl SlidingOperator {
    pub fn new(translation: TranslationOperator) -> Self {
        Self {
            translation,
            gamma: *gammas().gamma(translation.axis()),
        }
    }

    pub fn axis(&self) -> Axis {
        self.translation.axis()
    }

    pub fn apply<F: SpinorField>(&self, field: &F, pt: &SpacetimePoint) -> Bispinor {
        apply(&self.gamma, &apply_translation(&self.translation, field, pt))
    }
}

/// Negates the three coordinates other than `axis`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReflectionMap {
    pub axis: Axis,
}

impl ReflectionMap {
    pub fn new(axis: Axis) -> Self {
        Self { axis }
    }

    fn sign(&self, other: Axis) -> f64 {
        if other == self.axis {
            1.0
        } else {
            -1.0
        }
    }

    pub fn map_point(&self, pt: &SpacetimePoint) -> SpacetimePoint {
        let mut c = pt.coords();
        for ax in Axis::ALL {
            c[ax.index()] *= self.sign(ax);
        }
        SpacetimePoint::from_coords(c)
    }
}

/// `φ(x) = γ^μ ψ(R_μ x)`.
#[derive(Debug, Clone, Copy)]
pub struct Reflected<F> {
    pub map: ReflectionMap,
    pub inner: F,
}

impl<F: SpinorField> SpinorField for Reflected<F> {
    fn value(&self, pt: &SpacetimePoint) -> Bispinor {
        let gamma = gammas().gamma(self.map.axis);
        apply(gamma, &self.inner.value(&self.map.map_point(pt)))
    }

    fn gradient(&self, pt: &SpacetimePoint) -> [Bispinor; 4] {
        let gamma = gammas().gamma(self.map.axis);
        let inner = self.inner.gradient(&self.map.map_point(pt));
        Axis::ALL.map(|ax| {
            let chain = Complex64::new(self.map.sign(ax), 0.0);
            apply(gamma, &inner[ax.index()]).scale(chain)
        })
    }
}

pub fn reflect_solution<F: SpinorField>(map: ReflectionMap, field: F) -> Reflected<F> {
    Reflected { map, inner: field }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisCheck {
    pub max_residual: f64,
    pub samples: usize,
    pub pass: bool,
}

/// Per-axis results, serialized as `{axis: {max_residual, samples, pass}}`.
pub type AxisReport = BTreeMap<Axis, AxisCheck>;

pub fn report_passes(report: &AxisReport) -> bool {
    report.values().all(|c| c.pass)
}

/// Worst deviation of the translation relation for one axis, stepping by
/// `fraction · l_μ`: the larger of `‖T_μψ(x + s) − ψ(x)‖` and
/// `‖ψ(x + s) − ψ(x)‖`, relative to `‖ψ_p‖`.
pub fn translation_deviation(
    wave: &BispinorWave,
    axis: Axis,
    fraction: f64,
    points: &[SpacetimePoint],
) -> Result<f64> {
    let full = TranslationOperator::wavelength_of(wave, axis)?;
    let op = TranslationOperator::new(axis, full.length() * fraction)?;
    let norm = wave.amplitude.norm();
    let mut worst = 0.0_f64;
    for pt in points {
        let here = wave.evaluate(pt);
        let moved = pt.shifted(axis, op.length());
        let relation = (apply_translation(&op, wave, &moved) - here).norm();
        let periodic = (wave.evaluate(&moved) - here).norm();
        worst = worst.max(relation.max(periodic) / norm);
    }
    Ok(worst)
}

/// Translation relation `T_μψ(x + l_μ) = ψ(x)` and periodicity on all four axes.
pub fn verify_translation_relation<R: RngCore + ?Sized>(
    wave: &BispinorWave,
    samples: usize,
    rng: &mut R,
) -> Result<AxisReport> {
    if let Some(ax) = Axis::ALL
        .into_iter()
        .find(|ax| wave.momentum.component(*ax) == 0.0)
    {
        return Err(Error::ZeroMomentumComponent(ax));
    }
    let points: Vec<_> = (0..samples)
        .map(|_| sampling::point(rng, SAMPLE_EXTENT))
        .collect();
    let mut report = AxisReport::new();
    for ax in Axis::ALL {
        let dev = translation_deviation(wave, ax, 1.0, &points)?;
        report.insert(
            ax,
            AxisCheck {
                max_residual: dev,
                samples,
                pass: dev < TRANSLATION_TOLERANCE,
            },
        );
    }
    Ok(report)
}

/// `l_t⁻¹P^tψ − l_x⁻¹P^xψ − l_y⁻¹P^yψ − l_z⁻¹P^zψ − l_m⁻¹ψ` with each
/// `l_μ⁻¹T_μ` cancelled to `i(2π)⁻¹ ∂/∂x_μ`, so vanishing momentum
/// components are harmless.
pub fn sliding_form_operator<F: SpinorField>(
    field: &F,
    m: f64,
    pt: &SpacetimePoint,
) -> Bispinor {
    let g = gammas();
    let grad = field.gradient(pt);
    let mut out = Bispinor::zero();
    for ax in Axis::ALL {
        let eq4_sign = ax.metric();
        let lowered = ax.metric();
        let weighted = grad[ax.index()].scale(Complex64::new(0.0, lowered / TAU));
        out = out + apply(g.gamma(ax), &weighted).scale(eq4_sign.into());
    }
    out - field.value(pt).scale((m / TAU).into())
}

/// Same operator built from the uncancelled `T_μ` with finite `l_μ`; needs
/// every momentum component non-zero and `m > 0`.
pub fn sliding_form_uncancelled(wave: &BispinorWave, pt: &SpacetimePoint) -> Result<Bispinor> {
    let wl = wavelengths(&wave.momentum);
    if wave.mass() <= 0.0 {
        return Err(Error::Massless);
    }
    let mut out = Bispinor::zero();
    for ax in Axis::ALL {
        let op = SlidingOperator::new(TranslationOperator::wavelength_of(wave, ax)?);
        let term = op.apply(wave, pt).scale(wl.inv_l[ax.index()].into());
        out = out + term.scale(ax.metric().into());
    }
    Ok(out - wave.evaluate(pt).scale(wl.inv_l_m.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlidingFormReport {
    /// Largest `‖residual‖ / ‖ψ‖`.
    pub max_residual: f64,
    /// Largest `|2π‖sliding residual‖ − ‖Dirac residual‖| / ‖ψ‖`.
    pub max_factor_deviation: f64,
    pub samples: usize,
    pub pass: bool,
}

pub fn verify_sliding_form<R: RngCore + ?Sized>(
    wave: &BispinorWave,
    samples: usize,
    rng: &mut R,
) -> Result<SlidingFormReport> {
    let m = wave.mass();
    if !(m > 0.0) {
        return Err(Error::Massless);
    }
    let norm = wave.amplitude.norm();
    let mut max_residual = 0.0_f64;
    let mut max_factor = 0.0_f64;
    for _ in 0..samples {
        let pt = sampling::point(rng, SAMPLE_EXTENT);
        let sliding = sliding_form_operator(wave, m, &pt).norm();
        let dirac = dirac_operator(wave, m, &pt, Derivative::Analytic).norm();
        max_residual = max_residual.max(sliding / norm);
        max_factor = max_factor.max((TAU * sliding - dirac).abs() / norm);
    }
    Ok(SlidingFormReport {
        max_residual,
        max_factor_deviation: max_factor,
        samples,
        pass: max_residual < SLIDING_TOLERANCE && max_factor < SLIDING_TOLERANCE,
    })
}

/// Solution-map property: `γ^μ ψ(R_μ x)` solves the free equation on every axis.
pub fn verify_reflection<R: RngCore + ?Sized>(
    wave: &BispinorWave,
    samples: usize,
    rng: &mut R,
) -> AxisReport {
    let points: Vec<_> = (0..samples)
        .map(|_| sampling::point(rng, SAMPLE_EXTENT))
        .collect();
    let norm = wave.amplitude.norm();
    Axis::ALL
        .into_iter()
        .map(|ax| {
            let field = reflect_solution(ReflectionMap::new(ax), wave);
            let worst = points
                .iter()
                .map(|pt| dirac_operator(&field, wave.mass(), pt, Derivative::Analytic).norm() / norm)
                .fold(0.0, f64::max);
            (
                ax,
                AxisCheck {
                    max_residual: worst,
                    samples,
                    pass: worst < REFLECTION_TOLERANCE,
                },
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planewave::{make_on_shell, solve_amplitude, FourMomentum};
    use rand::SeedableRng;
    use rand_xoshiro::SplitMix64;
    use std::f64::consts::PI;

    fn rng(seed: u64) -> SplitMix64 {
        SplitMix64::seed_from_u64(seed)
    }

    fn wave_along(spatial: [f64; 3], m: f64) -> BispinorWave {
        BispinorWave::on_shell(spatial, m).unwrap()
    }

    #[test]
    fn full_period_time_translation_is_identity() {
        let wave = wave_along([0.0; 3], 1.5);
        let op = TranslationOperator::new(Axis::T, TAU / 1.5).unwrap();
        let pt = SpacetimePoint::new(0.7, 1.0, -2.0, 0.3);
        let diff = apply_translation(&op, &wave, &pt) - wave.evaluate(&pt);
        assert!(diff.norm() < 1e-14);
    }

    #[test]
    fn half_period_gives_half_the_field() {
        let wave = wave_along([0.0; 3], 2.0);
        let op = TranslationOperator::new(Axis::T, PI / 2.0).unwrap();
        let pt = SpacetimePoint::new(0.2, 0.0, 0.0, 0.0);
        let expected = wave.evaluate(&pt).scale(0.5.into());
        assert!((apply_translation(&op, &wave, &pt) - expected).norm() < 1e-14);
    }

    #[test]
    fn translation_along_zero_momentum_axis_vanishes() {
        let wave = wave_along([0.0, 1.0, 0.0], 1.0);
        let op = TranslationOperator::new(Axis::X, 3.7).unwrap();
        let out = apply_translation(&op, &wave, &SpacetimePoint::new(1.0, 2.0, 3.0, 4.0));
        assert_eq!(out.norm(), 0.0);
        assert_eq!(
            TranslationOperator::wavelength_of(&wave, Axis::X),
            Err(Error::ZeroMomentumComponent(Axis::X))
        );
    }

    #[test]
    fn spatial_wavelength_translation_is_identity() {
        let wave = wave_along([3.0, -2.0, 1.0], 1.0);
        let pt = SpacetimePoint::new(0.1, 0.2, 0.3, 0.4);
        for ax in [Axis::X, Axis::Y, Axis::Z] {
            let op = TranslationOperator::wavelength_of(&wave, ax).unwrap();
            let diff = apply_translation(&op, &wave, &pt) - wave.evaluate(&pt);
            assert!(diff.norm() < 1e-13, "{ax}");
        }
    }

    #[test]
    fn invalid_lengths_are_rejected() {
        for l in [0.0, f64::INFINITY, f64::NAN] {
            assert!(TranslationOperator::new(Axis::T, l).is_err());
        }
        assert!(TranslationOperator::new(Axis::X, -1.0).is_ok());
    }

    #[test]
    fn translation_relation_holds_for_generic_direction() {
        let dir = [3.0, 2.0, 1.0];
        let n = (9.0_f64 + 4.0 + 1.0).sqrt();
        // spatial momentum along (3,2,1), energy 5 at m = 2
        let k = (25.0_f64 - 4.0).sqrt() / n;
        let wave = wave_along(dir.map(|d| d * k), 2.0);
        let report = verify_translation_relation(&wave, 25, &mut rng(1)).unwrap();
        assert_eq!(report.len(), 4);
        for (ax, check) in &report {
            assert!(check.pass, "{ax}: {}", check.max_residual);
        }
    }

    #[test]
    fn zero_component_is_a_precondition_error() {
        let wave = wave_along([1.0, 0.0, 2.0], 1.0);
        assert_eq!(
            verify_translation_relation(&wave, 5, &mut rng(2)),
            Err(Error::ZeroMomentumComponent(Axis::Y))
        );
    }

    #[test]
    fn half_step_is_detected() {
        let wave = wave_along([1.0, 2.0, 3.0], 1.0);
        let pts: Vec<_> = (0..10).map(|_| sampling::point(&mut rng(3), 5.0)).collect();
        let dev = translation_deviation(&wave, Axis::X, 0.5, &pts).unwrap();
        // exp(iπ) = −1, so ψ(x + l/2) misses ψ(x) by 2‖ψ‖
        assert!(dev > 1.0, "{dev}");
    }

    #[test]
    fn sliding_form_vanishes_and_matches_dirac_up_to_two_pi() {
        let wave = wave_along([1.0, -0.5, 2.0], 3.0);
        let report = verify_sliding_form(&wave, 20, &mut rng(4)).unwrap();
        assert!(report.pass, "{report:?}");

        // off-solution, the 2π relation is still pointwise exact
        let bad = BispinorWave::from_parts(wave.momentum, Bispinor::basis(1));
        let pt = SpacetimePoint::new(0.3, 0.1, -0.2, 0.9);
        let s = sliding_form_operator(&bad, 3.0, &pt);
        let d = dirac_operator(&bad, 3.0, &pt, Derivative::Analytic);
        assert!((s.scale(TAU.into()) - d).norm() < 1e-12 * d.norm());
    }

    #[test]
    fn cancelled_and_uncancelled_forms_agree() {
        let p = make_on_shell([1.0, 2.0, -1.5], 0.7).unwrap();
        let bad = BispinorWave::from_parts(p, Bispinor::from_real([1.0, -2.0, 0.5, 0.0]));
        let pt = SpacetimePoint::new(-1.0, 0.5, 2.0, 0.25);
        let a = sliding_form_operator(&bad, 0.7, &pt);
        let b = sliding_form_uncancelled(&bad, &pt).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn sliding_residual_scales_with_amplitude() {
        let wave = wave_along([0.4, 0.0, 0.0], 1.0);
        let bad = BispinorWave::from_parts(wave.momentum, Bispinor::basis(0));
        let c = Complex64::new(-2.0, 1.5);
        let pt = SpacetimePoint::new(1.0, 1.0, 1.0, 1.0);
        let base = sliding_form_operator(&bad, 1.0, &pt).norm();
        let scaled = sliding_form_operator(&bad.scaled(c), 1.0, &pt).norm();
        assert!((scaled - c.norm() * base).abs() < 1e-13 * scaled);
    }

    #[test]
    fn non_solutions_show_the_spectral_gap() {
        // The nonzero singular values of γ·p − m are at least 2m, so an
        // amplitude orthogonal to the solution space leaves at least 2m/2π.
        let p = make_on_shell([1.0, -2.0, 0.5], 1.3).unwrap();
        let [a, b] = solve_amplitude(&p).unwrap();
        let mut u = Bispinor::from_real([0.3, -1.0, 0.2, 0.8]);
        u = u - a.scale(a.inner(&u)) - b.scale(b.inner(&u));
        let wave = BispinorWave::from_parts(p, u);
        let svd = crate::planewave::momentum_operator(&p).to_nalgebra().svd(false, false);
        let gap = svd
            .singular_values
            .iter()
            .copied()
            .filter(|s| *s > 1e-8)
            .fold(f64::INFINITY, f64::min);
        assert!(gap >= 2.0 * 1.3 - 1e-12);
        let pt = SpacetimePoint::new(0.0, 0.5, 0.5, 0.5);
        let r = sliding_form_operator(&wave, 1.3, &pt).norm();
        assert!(r >= 0.1 * 1.3 * u.norm(), "{r}");
    }

    #[test]
    fn massless_waves_are_rejected() {
        let wave = wave_along([1.0, 0.0, 0.0], 0.0);
        assert_eq!(
            verify_sliding_form(&wave, 3, &mut rng(5)),
            Err(Error::Massless)
        );
    }

    #[test]
    fn time_reflection_of_rest_wave() {
        let wave = wave_along([0.0; 3], 2.0);
        let field = reflect_solution(ReflectionMap::new(Axis::T), wave);
        let pt = SpacetimePoint::new(0.4, 1.0, -3.0, 2.0);
        let gt = gammas().gamma(Axis::T);
        let expected = apply(gt, &wave.amplitude).scale(Complex64::from_polar(1.0, -2.0 * 0.4));
        assert!((field.value(&pt) - expected).norm() < 1e-14);
        assert!(dirac_operator(&field, 2.0, &pt, Derivative::Analytic).norm() < 1e-13);
    }

    #[test]
    fn double_reflection_returns_signed_field_exactly() {
        let wave = wave_along([1.0, 2.0, -0.5], 0.8);
        let pt = SpacetimePoint::new(0.3, -0.7, 1.1, 2.5);
        for ax in Axis::ALL {
            let map = ReflectionMap::new(ax);
            assert_eq!(map.map_point(&map.map_point(&pt)), pt);
            let twice = reflect_solution(map, reflect_solution(map, wave));
            let expected = wave.evaluate(&pt).scale(ax.metric().into());
            assert_eq!(twice.value(&pt), expected, "{ax}");
        }
    }

    #[test]
    fn x_reflection_flips_energy_sign_in_the_exponent() {
        let p = FourMomentum::new([5.0, 3.0, 0.0, 0.0], 4.0);
        let wave = BispinorWave::new(p, solve_amplitude(&p).unwrap()[0]).unwrap();
        let field = reflect_solution(ReflectionMap::new(Axis::X), wave);
        let reflected_momentum = FourMomentum::new([-5.0, 3.0, 0.0, 0.0], 4.0);
        let gx = gammas().gamma(Axis::X);
        let pattern = BispinorWave::from_parts(reflected_momentum, apply(gx, &wave.amplitude));
        let pt = SpacetimePoint::new(0.9, -0.3, 2.0, 1.0);
        assert!((field.value(&pt) - pattern.evaluate(&pt)).norm() < 1e-13);
    }

    #[test]
    fn reflections_map_solutions_to_solutions() {
        let mut rng = rng(6);
        let wave = sampling::wave(&mut rng, 1.0, 10.0).unwrap();
        let report = verify_reflection(&wave, 20, &mut rng);
        assert!(report_passes(&report), "{report:?}");
    }
}
