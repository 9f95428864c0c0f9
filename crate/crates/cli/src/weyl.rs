use std::f64::consts::PI;
use std::path::PathBuf;

use clap::Args;
use dirac_core::clifford::{Axis, Bispinor};
use dirac_core::convergence::order_deviation;
use dirac_core::sampling::uniform;
use dirac_core::weyl::{
    bianchi_residual, chi_from_scale, covariance_deviation, curvature_gauge_invariance, gauge_transform,
    scale_curvature, to_bytes, to_csv, Grid4, GridSpinor, PotentialField, WeylField,
};
use num_complex::Complex64;
use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::report::{Check, Outcome, Report};
use crate::{Common, Failure};

#[derive(Debug, Clone, Args, Serialize)]
pub struct WeylArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Nodes per side of the coarsest (t, x) grid on [0, 1]².
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Number of step halvings after the coarsest grid.
    #[arg(long, default_value_t = 2)]
    pub refinements: u32,
    /// Fourier modes per random smooth field.
    #[arg(long, default_value_t = 3)]
    pub modes: usize,
    /// Charge `e` in `φ = ieA`.
    #[arg(long, default_value_t = 0.5)]
    pub charge: f64,
    #[arg(long, default_value_t = 0.2)]
    pub order_tolerance: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Also write the coarsest Weyl field; `.bin` selects the binary layout, anything else CSV.
    #[arg(long)]
    #[serde(skip)]
    pub export: Option<PathBuf>,
}

/// `Σ a_j sin(π(k_t t + k_x x) + θ_j)` with its analytic gradient.
#[derive(Debug, Clone)]
pub struct Modes(Vec<(f64, f64, f64, f64)>);

impl Modes {
    pub fn random<R: RngCore>(rng: &mut R, count: usize, amplitude: f64) -> Self {
        Modes(
            (0..count)
                .map(|_| {
                    (
                        uniform(rng, -amplitude, amplitude),
                        uniform(rng, 0.5, 2.0),
                        uniform(rng, 0.5, 2.0),
                        uniform(rng, 0.0, 2.0 * PI),
                    )
                })
                .collect(),
        )
    }

    pub fn value(&self, c: [f64; 4]) -> f64 {
        self.0
            .iter()
            .map(|(a, kt, kx, th)| a * (PI * (kt * c[0] + kx * c[1]) + th).sin())
            .sum()
    }

    pub fn gradient(&self, c: [f64; 4]) -> [f64; 4] {
        let mut g = [0.0; 4];
        for (a, kt, kx, th) in &self.0 {
            let d = a * PI * (PI * (kt * c[0] + kx * c[1]) + th).cos();
            g[0] += d * kt;
            g[1] += d * kx;
        }
        g
    }
}

struct Setup {
    log_lambda: Modes,
    log_scale: Modes,
    phi: [Modes; 3],
    chi: Modes,
    psi: [Modes; 4],
}

impl Setup {
    fn new(seed: u64, modes: usize) -> Self {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let mut draw = |amp| Modes::random(&mut rng, modes, amp);
        Setup {
            log_lambda: draw(0.5),
            log_scale: draw(0.5),
            phi: [draw(1.0), draw(1.0), draw(1.0)],
            chi: draw(1.0),
            psi: [draw(1.0), draw(1.0), draw(1.0), draw(1.0)],
        }
    }

    fn field(&self, grid: Grid4) -> Result<WeylField, Failure> {
        Ok(WeylField::from_fn(
            grid,
            |c| self.log_lambda.value(c).exp(),
            |c| [self.phi[0].value(c), self.phi[1].value(c), self.phi[2].value(c), 0.0],
        )?)
    }

    fn scale(&self, grid: &Grid4) -> Vec<f64> {
        grid.sample(|c| self.log_scale.value(c).exp())
    }

    fn spinor(&self, grid: Grid4) -> GridSpinor {
        GridSpinor::from_fn(grid, |c| {
            Bispinor::new(std::array::from_fn(|k| {
                Complex64::from_polar(1.0 + 0.5 * self.psi[k].value(c).tanh(), self.psi[(k + 1) % 4].value(c))
            }))
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LevelErrors {
    pub n: usize,
    pub h: f64,
    pub gauge_invariance: f64,
    pub curl_of_gradient: f64,
    pub bianchi: f64,
    pub em_covariance: f64,
}

fn level(setup: &Setup, n: usize, charge: f64) -> Result<LevelErrors, Failure> {
    let grid = Grid4::plane(n, 0.0, 1.0)?;
    let f = setup.field(grid)?;
    let s = setup.scale(&grid);
    let gauge_invariance = curvature_gauge_invariance(&f, &s)?;

    let pure = WeylField::from_fn(grid, |_| 1.0, |c| setup.chi.gradient(c))?;
    let curl_of_gradient = scale_curvature(&pure).max_interior();

    let bianchi = bianchi_residual(&scale_curvature(&f))?;

    let p = PotentialField::from_connectivity(&f, charge)?;
    let psi = setup.spinor(grid);
    let chi = chi_from_scale(&s, charge)?;
    let mut em_covariance = 0.0_f64;
    for axis in [Axis::T, Axis::X] {
        em_covariance = em_covariance.max(covariance_deviation(&p, &psi, &chi, axis)?);
    }
    Ok(LevelErrors {
        n,
        h: grid.spacing()[0],
        gauge_invariance,
        curl_of_gradient,
        bianchi,
        em_covariance,
    })
}

/// Errors on the coarsest grid and `refinements` halvings of its step.
pub fn refinement_study(seed: u64, n: usize, refinements: u32, modes: usize, charge: f64) -> Result<Vec<LevelErrors>, Failure> {
    let setup = Setup::new(seed, modes);
    (0..=refinements)
        .map(|k| level(&setup, (n - 1) * (1 << k) + 1, charge))
        .collect()
}

fn group_deviation(setup: &Setup, n: usize) -> Result<f64, Failure> {
    let grid = Grid4::plane(n, 0.0, 1.0)?;
    let f = setup.field(grid)?;
    let s1 = setup.scale(&grid);
    let s2 = grid.sample(|c| setup.chi.value(c).exp());
    let both: Vec<f64> = s1.iter().zip(&s2).map(|(a, b)| a * b).collect();
    let twice = gauge_transform(&gauge_transform(&f, &s1)?, &s2)?;
    let once = gauge_transform(&f, &both)?;
    let mut worst = 0.0_f64;
    for i in grid.interior() {
        worst = worst.max((twice.lambda()[i] - once.lambda()[i]).abs());
        for k in 0..4 {
            worst = worst.max((twice.phi()[i][k] - once.phi()[i][k]).abs());
        }
    }
    Ok(worst)
}

pub fn run(a: &WeylArgs) -> Result<Outcome, Failure> {
    if a.n < 4 {
        return Err(Failure::Usage("--n must be at least 4".into()));
    }
    if a.refinements == 0 || a.refinements > 6 {
        return Err(Failure::Usage("--refinements must be between 1 and 6".into()));
    }
    let levels = refinement_study(a.common.seed, a.n, a.refinements, a.modes, a.charge)?;
    let setup = Setup::new(a.common.seed, a.modes);
    let group = group_deviation(&setup, a.n)?;

    if let Some(path) = &a.export {
        let f = setup.field(Grid4::plane(a.n, 0.0, 1.0)?)?;
        let bytes = if path.extension().is_some_and(|e| e == "bin") {
            to_bytes(&f)
        } else {
            to_csv(&f).into_bytes()
        };
        std::fs::write(path, bytes).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }

    let steps: Vec<f64> = levels.iter().map(|l| l.h).collect();
    let order = |pick: fn(&LevelErrors) -> f64| {
        let errors: Vec<f64> = levels.iter().map(pick).collect();
        order_deviation(&steps, &errors, 2.0)
    };
    let checks = vec![
        Check::within("gauge_group_property", group, a.tolerance),
        Check::within("curvature_gauge_invariance_order", order(|l| l.gauge_invariance), a.order_tolerance),
        Check::within("curl_of_gradient_order", order(|l| l.curl_of_gradient), a.order_tolerance),
        Check::within("bianchi_order", order(|l| l.bianchi), a.order_tolerance),
        Check::within("em_covariance_order", order(|l| l.em_covariance), a.order_tolerance),
    ];
    let mut csv = String::from("n,h,gauge_invariance,curl_of_gradient,bianchi,em_covariance\n");
    for l in &levels {
        csv.push_str(&format!(
            "{},{:?},{:?},{:?},{:?},{:?}\n",
            l.n, l.h, l.gauge_invariance, l.curl_of_gradient, l.bianchi, l.em_covariance
        ));
    }
    Ok(Outcome {
        report: Report::new("weyl-check", a, checks),
        csv: Some(csv),
    })
}
