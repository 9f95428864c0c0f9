use std::path::PathBuf;

use clap::Args;
use dirac_core::hydrogen::{
    solve_bound_state, solve_bound_state_shifted, sommerfeld_binding, spectrum_to_csv, CoulombProblem,
    QuantumNumbers, RadialGrid, SpectrumRow, DEFAULT_ALPHA, GAUGE_TOLERANCE, ORACLE_TOLERANCE,
};
use serde::Serialize;

use crate::report::{Check, Outcome, Report};
use crate::{Common, Failure};

#[derive(Debug, Clone, Args, Serialize)]
pub struct HydrogenArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Nuclear charge.
    #[arg(long = "Z", visible_alias = "z", default_value_t = 1)]
    pub z: u32,
    #[arg(long, default_value_t = 3)]
    pub n_max: u32,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    /// Radial grid nodes.
    #[arg(long, default_value_t = RadialGrid::default().nodes)]
    pub nodes: usize,
    /// Inner grid radius in units of 1/(m·α·Z).
    #[arg(long, default_value_t = RadialGrid::default().r_min)]
    pub r_min: f64,
    /// Outer grid radius in units of 1/(m·α·Z).
    #[arg(long, default_value_t = RadialGrid::default().r_max)]
    pub r_max: f64,
    /// Constant added to the potential energy for the gauge-shift check, in units of m.
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub shift: f64,
    /// Relative tolerance against the closed form and for the ±κ degeneracy.
    #[arg(long, default_value_t = ORACLE_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, default_value_t = GAUGE_TOLERANCE)]
    pub gauge_tolerance: f64,
    /// Tolerance on the energy change under halving the radial step, in units of m.
    #[arg(long, default_value_t = 1e-8)]
    pub refinement_tolerance: f64,
    /// Relative tolerance of the ground-state binding against −(Zα)²m/2.
    #[arg(long, default_value_t = 1e-3)]
    pub nonrelativistic_tolerance: f64,
    /// Directory for per-state `r,f,g` CSV dumps.
    #[arg(long)]
    #[serde(skip)]
    pub radial_dir: Option<PathBuf>,
}

pub fn run(a: &HydrogenArgs) -> Result<Outcome, Failure> {
    if a.n_max == 0 {
        return Err(Failure::Usage("--n-max must be at least 1".into()));
    }
    let p = CoulombProblem::new(a.z, a.alpha, a.mass)?;
    let grid = RadialGrid {
        r_min: a.r_min,
        r_max: a.r_max,
        nodes: a.nodes,
    };
    let states = QuantumNumbers::up_to(a.n_max);

    let mut rows = Vec::with_capacity(states.len());
    let mut solutions = Vec::with_capacity(states.len());
    let (mut norm_dev, mut decay, mut refine, mut gauge) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for &q in &states {
        let sol = solve_bound_state(&p, q, &grid)?;
        let oracle = sommerfeld_binding(&p, q)?;
        let fine = solve_bound_state(&p, q, &grid.refined())?;
        let shifted = solve_bound_state_shifted(&p, q, &grid, a.shift * p.m)?;
        norm_dev = norm_dev.max((sol.norm() - 1.0).abs());
        decay = decay.max(sol.boundary_decay());
        refine = refine.max((fine.binding - sol.binding).abs() / p.m);
        gauge = gauge.max((shifted.binding - sol.binding - a.shift * p.m).abs() / p.m);
        rows.push(SpectrumRow {
            z: p.z,
            quantum_numbers: q,
            numeric: sol.energy,
            oracle: p.m + oracle,
            rel_err: (sol.binding - oracle).abs() / p.m,
        });
        if let Some(dir) = &a.radial_dir {
            std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
            let path = dir.join(format!("radial_Z{}_n{}_kappa{}.csv", p.z, q.n(), q.kappa()));
            std::fs::write(&path, sol.to_csv()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        }
        solutions.push(sol);
    }

    let oracle_err = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    let binding_of = |n: u32, kappa: i32| {
        states
            .iter()
            .position(|q| q.n() == n && q.kappa() == kappa)
            .map(|i| solutions[i].binding)
    };
    let mut degeneracy = 0.0_f64;
    for q in states.iter().filter(|q| q.kappa() > 0) {
        if let (Some(plus), Some(minus)) = (binding_of(q.n(), q.kappa()), binding_of(q.n(), -q.kappa())) {
            degeneracy = degeneracy.max((plus - minus).abs() / p.m);
        }
    }
    let mut violations = 0.0;
    for n in 1..a.n_max {
        let (lo, hi) = (binding_of(n, -1), binding_of(n + 1, -1));
        if let (Some(lo), Some(hi)) = (lo, hi) {
            if !(lo < hi && hi < 0.0) {
                violations += 1.0;
            }
        }
    }
    let za = p.coupling();
    let nonrel_target = -za * za * p.m / 2.0;
    let ground = binding_of(1, -1).expect("n = 1 is always solved");
    let nonrel = ((ground - nonrel_target) / nonrel_target).abs();

    let checks = vec![
        Check::within("oracle_agreement", oracle_err, a.tolerance),
        Check::within("kappa_degeneracy", degeneracy, a.tolerance),
        Check::within("grid_refinement", refine, a.refinement_tolerance),
        Check::within("normalization", norm_dev, 1e-8),
        Check::within("boundary_decay", decay, 1e-8),
        Check::within("monotonic_levels_violations", violations, 0.0),
        Check::within("nonrelativistic_limit", nonrel, a.nonrelativistic_tolerance),
        Check::within("gauge_shift", gauge, a.gauge_tolerance),
    ];
    Ok(Outcome {
        report: Report::new("hydrogen-spectrum", a, checks),
        csv: Some(spectrum_to_csv(&rows)),
    })
}
