use clap::Args;
use dirac_core::clifford::Axis;
use dirac_core::convergence::order_deviation;
use dirac_core::planewave::{wavelengths, BispinorWave, Derivative};
use dirac_core::sampling;
use dirac_core::sliding::{
    sliding_form_operator, sliding_form_uncancelled, verify_reflection, verify_sliding_form,
    verify_translation_relation, SAMPLE_EXTENT,
};
use rand_xoshiro::rand_core::SeedableRng;
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::report::{Check, Outcome, Report};
use crate::{Common, Failure};

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlanewaveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 100)]
    pub waves: usize,
    /// Sample points per wave.
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    /// Masses, used round-robin over the waves.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 1.0, 10.0])]
    pub masses: Vec<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub max_momentum: f64,
    /// Relative tolerance for the analytic residual, mass shell and wave forms.
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
    /// Finite-difference steps for the order measurement.
    #[arg(long, value_delimiter = ',', default_values_t = [1e-2, 5e-3, 2.5e-3])]
    pub steps: Vec<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub order_tolerance: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SlidingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 100)]
    pub waves: usize,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Positive masses, used round-robin over the waves.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 10.0])]
    pub masses: Vec<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub max_momentum: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReflectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 20)]
    pub waves: usize,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 1.0, 10.0])]
    pub masses: Vec<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub max_momentum: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
}

fn check_masses(masses: &[f64], positive: bool) -> Result<(), Failure> {
    if masses.is_empty() {
        return Err(Failure::Usage("need at least one mass".into()));
    }
    for &m in masses {
        if !(m.is_finite() && m >= 0.0) || (positive && m == 0.0) {
            return Err(Failure::Usage(format!("invalid mass {m}")));
        }
    }
    Ok(())
}

fn check_count(name: &str, n: usize) -> Result<(), Failure> {
    if n == 0 {
        Err(Failure::Usage(format!("--{name} must be positive")))
    } else {
        Ok(())
    }
}

fn momentum_columns(w: &BispinorWave) -> String {
    let p = w.momentum.components();
    format!("{:?},{:?},{:?},{:?},{:?}", w.mass(), p[0], p[1], p[2], p[3])
}

pub fn planewave(a: &PlanewaveArgs) -> Result<Outcome, Failure> {
    check_masses(&a.masses, false)?;
    check_count("waves", a.waves)?;
    check_count("points", a.points)?;
    if a.steps.len() < 2 || a.steps.iter().any(|h| !(*h > 0.0)) {
        return Err(Failure::Usage("--steps needs at least two positive values".into()));
    }
    let mut rng = SplitMix64::seed_from_u64(a.common.seed);
    let mut csv = String::from("wave,m,p_t,p_x,p_y,p_z,analytic_residual,shell_defect,wavelength_defect,form_deviation,fd_order_deviation\n");
    let (mut analytic, mut shell, mut forms, mut order) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for i in 0..a.waves {
        let m = a.masses[i % a.masses.len()];
        let w = sampling::wave(&mut rng, m, a.max_momentum)?;
        let pts: Vec<_> = (0..a.points).map(|_| sampling::point(&mut rng, SAMPLE_EXTENT)).collect();
        let norm = w.amplitude.norm();
        let res = pts
            .iter()
            .map(|pt| w.dirac_residual(pt, Derivative::Analytic) / norm)
            .fold(0.0, f64::max);
        let shell_defect = w.momentum.shell_defect().abs();
        let wl_defect = wavelengths(&w.momentum).shell_defect().abs();
        let form = pts
            .iter()
            .map(|pt| (w.evaluate(pt) - w.evaluate_wavelength_form(pt)).norm() / norm)
            .fold(0.0, f64::max);
        let errors: Vec<f64> = a
            .steps
            .iter()
            .map(|&h| {
                pts.iter()
                    .map(|pt| w.dirac_residual(pt, Derivative::Central { h }) / norm)
                    .fold(0.0, f64::max)
            })
            .collect();
        let dev = order_deviation(&a.steps, &errors, 2.0);
        analytic = analytic.max(res);
        shell = shell.max(shell_defect.max(wl_defect));
        forms = forms.max(form);
        order = order.max(dev);
        csv.push_str(&format!(
            "{i},{},{res:?},{shell_defect:?},{wl_defect:?},{form:?},{dev:?}\n",
            momentum_columns(&w)
        ));
    }
    let checks = vec![
        Check::within("analytic_residual", analytic, a.tolerance),
        Check::within("mass_shell_wavelength_form", shell, a.tolerance),
        Check::within("exponential_wavelength_forms_agree", forms, a.tolerance),
        Check::within("central_difference_order", order, a.order_tolerance),
    ];
    Ok(Outcome {
        report: Report::new("planewave-verify", a, checks),
        csv: Some(csv),
    })
}

pub fn sliding(a: &SlidingArgs) -> Result<Outcome, Failure> {
    check_masses(&a.masses, true)?;
    check_count("waves", a.waves)?;
    check_count("samples", a.samples)?;
    let mut rng = SplitMix64::seed_from_u64(a.common.seed);
    let mut csv = String::from(
        "wave,m,p_t,p_x,p_y,p_z,translation_t,translation_x,translation_y,translation_z,sliding_residual,factor_deviation,uncancelled_deviation\n",
    );
    let mut translation = [0.0_f64; 4];
    let (mut residual, mut factor, mut uncancelled) = (0.0_f64, 0.0_f64, 0.0_f64);
    for i in 0..a.waves {
        let m = a.masses[i % a.masses.len()];
        let w = sampling::wave(&mut rng, m, a.max_momentum)?;
        let tr = verify_translation_relation(&w, a.samples, &mut rng)?;
        let sf = verify_sliding_form(&w, a.samples, &mut rng)?;
        let norm = w.amplitude.norm();
        let mut unc = 0.0_f64;
        for _ in 0..a.samples {
            let pt = sampling::point(&mut rng, SAMPLE_EXTENT);
            let d = sliding_form_uncancelled(&w, &pt)? - sliding_form_operator(&w, m, &pt);
            unc = unc.max(d.norm() / norm);
        }
        let row: Vec<f64> = Axis::ALL.iter().map(|ax| tr[ax].max_residual).collect();
        for (slot, v) in translation.iter_mut().zip(&row) {
            *slot = slot.max(*v);
        }
        residual = residual.max(sf.max_residual);
        factor = factor.max(sf.max_factor_deviation);
        uncancelled = uncancelled.max(unc);
        csv.push_str(&format!(
            "{i},{},{:?},{:?},{:?},{:?},{:?},{:?},{unc:?}\n",
            momentum_columns(&w),
            row[0],
            row[1],
            row[2],
            row[3],
            sf.max_residual,
            sf.max_factor_deviation
        ));
    }
    let mut checks: Vec<Check> = Axis::ALL
        .iter()
        .map(|ax| Check::within(format!("translation_{ax}"), translation[ax.index()], a.tolerance))
        .collect();
    checks.push(Check::within("sliding_form_residual", residual, a.tolerance));
    checks.push(Check::within("sliding_form_two_pi_factor", factor, a.tolerance));
    checks.push(Check::within("sliding_form_uncancelled", uncancelled, a.tolerance));
    Ok(Outcome {
        report: Report::new("sliding-verify", a, checks),
        csv: Some(csv),
    })
}

pub fn reflect(a: &ReflectArgs) -> Result<Outcome, Failure> {
    check_masses(&a.masses, false)?;
    check_count("waves", a.waves)?;
    check_count("samples", a.samples)?;
    let mut rng = SplitMix64::seed_from_u64(a.common.seed);
    let mut csv = String::from("wave,m,p_t,p_x,p_y,p_z,reflection_t,reflection_x,reflection_y,reflection_z\n");
    let mut worst = [0.0_f64; 4];
    for i in 0..a.waves {
        let m = a.masses[i % a.masses.len()];
        let w = sampling::wave(&mut rng, m, a.max_momentum)?;
        let report = verify_reflection(&w, a.samples, &mut rng);
        let row: Vec<f64> = Axis::ALL.iter().map(|ax| report[ax].max_residual).collect();
        for (slot, v) in worst.iter_mut().zip(&row) {
            *slot = slot.max(*v);
        }
        csv.push_str(&format!(
            "{i},{},{:?},{:?},{:?},{:?}\n",
            momentum_columns(&w),
            row[0],
            row[1],
            row[2],
            row[3]
        ));
    }
    let checks = Axis::ALL
        .iter()
        .map(|ax| Check::within(format!("reflection_{ax}"), worst[ax.index()], a.tolerance))
        .collect();
    Ok(Outcome {
        report: Report::new("reflect-verify", a, checks),
        csv: Some(csv),
    })
}
