use std::f64::consts::TAU;

use clap::Args;
use dirac_core::manifold::{
    a_max, approximate_perimeter, propagate, region_at, representation_residual, series_to_csv,
    solve_ellipse_b, solve_ellipse_b_on, CircleManifold, EllipseBranch, PERIMETER_TOLERANCE,
};
use serde::Serialize;

use crate::report::{Check, Outcome, Report};
use crate::{Common, Failure};

#[derive(Debug, Clone, Args, Serialize)]
pub struct ManifoldArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Perimeter of the closed curve.
    #[arg(long, default_value_t = TAU, allow_negative_numbers = true)]
    pub l0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t_start: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub t_end: f64,
    /// Number of rows in the series.
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// Semi-axis samples per snapshot.
    #[arg(long, default_value_t = dirac_core::manifold::DEFAULT_GRID)]
    pub grid: usize,
    /// Factor for the scaling-covariance check.
    #[arg(long, default_value_t = 2.0)]
    pub scale: f64,
    #[arg(long, default_value_t = PERIMETER_TOLERANCE)]
    pub tolerance: f64,
}

pub fn run(a: &ManifoldArgs) -> Result<Outcome, Failure> {
    if !(a.scale.is_finite() && a.scale > 0.0) {
        return Err(Failure::Usage(format!("--scale must be positive, got {}", a.scale)));
    }
    let series = propagate(a.l0, a.t_start, a.t_end, a.steps, a.grid)?;

    let top = a_max(a.l0);
    let mut round_trip = 0.0_f64;
    for i in 0..=a.grid {
        let s = solve_ellipse_b(a.l0, top * i as f64 / a.grid as f64)?;
        round_trip = round_trip.max((approximate_perimeter(s.a, s.b) - a.l0).abs() / a.l0);
    }

    let r = a.l0 / TAU;
    let circle = solve_ellipse_b(a.l0, r)?;
    let man = CircleManifold::new(a.l0)?;
    let rep = representation_residual(&man, 0.25 * a.l0);
    let circle_dev = ((approximate_perimeter(r, r) - a.l0).abs() / a.l0)
        .max((circle.b - r).abs() / r)
        .max(rep.equation.max(rep.translation).max(rep.periodicity));

    let endpoint = solve_ellipse_b_on(a.l0, top, EllipseBranch::Lower)?;
    let at_zero = region_at(a.l0, 0.0, a.grid)?;
    let endpoint_dev = (endpoint.b / top).max((at_zero.x_max - top).abs() / top);

    let mut violations = 0.0;
    let mut symmetry = 0.0_f64;
    let mut scaling = 0.0_f64;
    for (i, s) in series.iter().enumerate() {
        if let Some(next) = series.get(i + 1) {
            if s.t >= 0.0 && next.x_max <= s.x_max {
                violations += 1.0;
            }
        }
        let mirrored = region_at(a.l0, -s.t, a.grid)?;
        symmetry = symmetry.max((mirrored.x_max - s.x_max).abs());
        let scaled = region_at(a.scale * a.l0, a.scale * s.t, a.grid)?;
        scaling = scaling.max((scaled.x_max - a.scale * s.x_max).abs() / (a.scale * s.x_max));
    }

    let checks = vec![
        Check::within("perimeter_round_trip", round_trip, a.tolerance),
        Check::within("circle_exact", circle_dev, a.tolerance),
        Check::within("a_max_endpoint", endpoint_dev, a.tolerance),
        Check::within("x_max_strictly_increasing_violations", violations, 0.0),
        Check::within("time_symmetry", symmetry, 0.0),
        Check::within("scaling_covariance", scaling, a.tolerance),
    ];
    Ok(Outcome {
        report: Report::new("manifold-sim", a, checks),
        csv: Some(series_to_csv(&series)),
    })
}
