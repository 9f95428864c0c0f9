//! Dirac-Coulomb bound states.
//!
//! For a central potential energy `V(r)` the bispinor separates into two
//! radial amplitudes `f` (large) and `g` (small) labelled by the angular
//! quantum number `κ`:
//!
//! ```text
//! f' = −(κ/r) f + (E + m − V) g
//! g' =  (κ/r) g − (E − m − V) f
//! ```
//!
//! with `V = −Zα/r + c`. The constant `c` is a pure-gauge shift of the
//! scalar potential. The system is integrated in `x = ln r` with classical
//! RK4 on a fixed logarithmic grid, outward from `r_min` (regular `r^γ`
//! start) and inward from `r_max` (decaying start), and the eigenvalue is
//! found by bracketing the normalized Wronskian at the classical turning
//! point. All internal arithmetic uses the binding energy `ε = E − m`, since
//! `E` itself differs from `m` only in the fifth digit.

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 1.0 / 137.035999;
/// Relative agreement with the closed-form spectrum.
pub const ORACLE_TOLERANCE: f64 = 1e-6;
/// Relative agreement of a gauge-shifted spectrum.
pub const GAUGE_TOLERANCE: f64 = 1e-8;
/// Target for the matching defect.
pub const MATCH_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombProblem {
    pub z: u32,
    pub alpha: f64,
    pub m: f64,
}

impl CoulombProblem {
    pub fn new(z: u32, alpha: f64, m: f64) -> Result<Self> {
        if z == 0 {
            return Err(Error::InvalidParameter("Z must be at least 1".into()));
        }
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {m}")));
        }
        if z as f64 * alpha >= 1.0 {
            return Err(Error::SupercriticalCoupling(z as f64 * alpha, 1));
        }
        Ok(Self { z, alpha, m })
    }

    pub fn hydrogen_like(z: u32) -> Result<Self> {
        Self::new(z, DEFAULT_ALPHA, 1.0)
    }

    pub fn coupling(&self) -> f64 {
        self.z as f64 * self.alpha
    }

    /// `1/(mαZ)`, the length unit of [`RadialGrid`].
    pub fn length_unit(&self) -> f64 {
        1.0 / (self.m * self.coupling())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuantumNumbers {
    n: u32,
    kappa: i32,
}

impl QuantumNumbers {
    /// Admissible pairs have `n ≥ 1` and `−n ≤ κ ≤ n − 1`, `κ ≠ 0`.
    pub fn new(n: u32, kappa: i32) -> Result<Self> {
        let ok = n >= 1 && kappa != 0 && kappa >= -(n as i32) && kappa < n as i32;
        if ok {
            Ok(Self { n, kappa })
        } else {
            Err(Error::InvalidQuantumNumbers { n, kappa })
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    /// Radial node count of the large component.
    pub fn radial_nodes(&self) -> u32 {
        if self.kappa < 0 {
            self.n - self.kappa.unsigned_abs()
        } else {
            self.n - self.kappa as u32 - 1
        }
    }

    /// Every admissible `κ` for principal number `n`, ascending.
    pub fn for_shell(n: u32) -> Vec<Self> {
        (-(n as i32)..n as i32)
            .filter(|&k| k != 0)
            .map(|kappa| Self { n, kappa })
            .collect()
    }

    /// All admissible pairs with `n ≤ n_max`.
    pub fn up_to(n_max: u32) -> Vec<Self> {
        (1..=n_max).flat_map(Self::for_shell).collect()
    }
}

/// Closed-form bound-state energy.
pub fn sommerfeld_energy(p: &CoulombProblem, q: QuantumNumbers) -> Result<f64> {
    Ok(p.m + sommerfeld_binding(p, q)?)
}

/// `E − m` from the closed form, evaluated without cancellation.
pub fn sommerfeld_binding(p: &CoulombProblem, q: QuantumNumbers) -> Result<f64> {
    let za = p.coupling();
    let k = q.kappa.unsigned_abs() as f64;
    if za >= k {
        return Err(Error::SupercriticalCoupling(za, q.kappa));
    }
    let gamma = (k * k - za * za).sqrt();
    let ratio = za / (q.n as f64 - k + gamma);
    let s = ratio * ratio;
    // m((1 + s)^(-1/2) − 1) = −m·s / ((1 + s) + sqrt(1 + s))
    Ok(-p.m * s / ((1.0 + s) + (1.0 + s).sqrt()))
}

/// Logarithmic radial grid, bounds in units of `1/(mαZ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub nodes: usize,
}

impl Default for RadialGrid {
    fn default() -> Self {
        Self {
            r_min: 1e-6,
            r_max: 300.0,
            nodes: 20_000,
        }
    }
}

impl RadialGrid {
    /// Same span, half the step.
    pub fn refined(&self) -> Self {
        Self {
            nodes: 2 * self.nodes - 1,
            ..*self
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.r_min.is_finite()
            && self.r_max.is_finite()
            && self.r_min > 0.0
            && self.r_max > self.r_min
            && self.nodes >= 16;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("bad radial grid {self:?}")))
        }
    }

    fn radii(&self, unit: f64) -> (Vec<f64>, f64) {
        let x0 = (self.r_min * unit).ln();
        let h = (self.r_max / self.r_min).ln() / (self.nodes - 1) as f64;
        let r = (0..self.nodes).map(|i| (x0 + h * i as f64).exp()).collect();
        (r, h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub quantum_numbers: QuantumNumbers,
    pub energy: f64,
    /// `E − m`, carried separately to full precision.
    pub binding: f64,
    pub r: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    /// Normalized Wronskian at the matching node.
    pub defect: f64,
}

impl RadialSolution {
    /// Trapezoidal `∫(f² + g²) dr`.
    pub fn norm(&self) -> f64 {
        trapezoid(&self.r, |i| self.f[i] * self.f[i] + self.g[i] * self.g[i])
    }

    /// `max(|f(r_max)|/max|f|, |g(r_max)|/max|g|)`.
    pub fn boundary_decay(&self) -> f64 {
        let ratio = |v: &[f64]| {
            let peak = v.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
            v.last().map_or(0.0, |x| x.abs() / peak)
        };
        ratio(&self.f).max(ratio(&self.g))
    }

    /// Sign changes of `f`, ignoring the numerically zero tail.
    pub fn nodes_of_f(&self) -> usize {
        let peak = self.f.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        let significant: Vec<f64> = self
            .f
            .iter()
            .copied()
            .filter(|v| v.abs() > 1e-9 * peak)
            .collect();
        significant.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,f,g\n");
        for i in 0..self.r.len() {
            let _ = writeln!(out, "{:?},{:?},{:?}", self.r[i], self.f[i], self.g[i]);
        }
        out
    }
}

fn trapezoid(r: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    (1..r.len())
        .map(|i| 0.5 * (r[i] - r[i - 1]) * (f(i) + f(i - 1)))
        .sum()
}

/// Integration context for one `(problem, κ, grid, shift)`.
struct Shooter {
    kappa: f64,
    za: f64,
    m: f64,
    shift: f64,
    gamma: f64,
    r: Vec<f64>,
    h: f64,
}

struct Sweep {
    f: Vec<f64>,
    g: Vec<f64>,
}

impl Shooter {
    fn new(p: &CoulombProblem, q: QuantumNumbers, grid: &RadialGrid, shift: f64) -> Result<Self> {
        grid.validate()?;
        let za = p.coupling();
        let kappa = q.kappa as f64;
        if za >= kappa.abs() {
            return Err(Error::SupercriticalCoupling(za, q.kappa));
        }
        if za == 0.0 {
            return Err(Error::InvalidParameter("no bound states without coupling".into()));
        }
        let (r, h) = grid.radii(p.length_unit());
        // the r^γ start is only accurate deep inside the nucleus-scale region,
        // and RK4 needs |κ|h and the tail decay rate per step well below its
        // stability limit
        let tail_rate = grid.r_max / q.n as f64;
        if grid.r_min > 1e-2 || h * kappa.abs() > 0.5 || h * tail_rate > 1.5 {
            return Err(Error::GridTooCoarse);
        }
        Ok(Self {
            kappa,
            za,
            m: p.m,
            shift,
            gamma: (kappa * kappa - za * za).sqrt(),
            r,
            h,
        })
    }

    /// `d(f, g)/dx` at radius `r` for binding energy `eps`.
    fn rhs(&self, eps: f64, r: f64, f: f64, g: f64) -> (f64, f64) {
        // r·(E − m − V) = rε + Zα − rc
        let rw = r * (eps - self.shift) + self.za;
        (
            -self.kappa * f + (rw + 2.0 * self.m * r) * g,
            self.kappa * g - rw * f,
        )
    }

    fn step(&self, eps: f64, x: f64, dx: f64, f: f64, g: f64) -> (f64, f64) {
        let r0 = x.exp();
        let rh = (x + 0.5 * dx).exp();
        let r1 = (x + dx).exp();
        let (k1f, k1g) = self.rhs(eps, r0, f, g);
        let (k2f, k2g) = self.rhs(eps, rh, f + 0.5 * dx * k1f, g + 0.5 * dx * k1g);
        let (k3f, k3g) = self.rhs(eps, rh, f + 0.5 * dx * k2f, g + 0.5 * dx * k2g);
        let (k4f, k4g) = self.rhs(eps, r1, f + dx * k3f, g + dx * k3g);
        (
            f + dx / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f),
            g + dx / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g),
        )
    }

    fn match_index(&self, eps: f64) -> usize {
        let last = self.r.len() - 2;
        let binding = self.shift - eps;
        if binding <= 0.0 {
            return last;
        }
        let r_tp = self.za / binding;
        let i = self.r.partition_point(|&r| r < r_tp);
        i.clamp(1, last)
    }

    fn outward(&self, eps: f64, upto: usize) -> Sweep {
        let mut f = vec![0.0; upto + 1];
        let mut g = vec![0.0; upto + 1];
        let r0 = self.r[0];
        let scale = r0.powf(self.gamma);
        f[0] = self.za * scale;
        g[0] = (self.gamma + self.kappa) * scale;
        for i in 0..upto {
            let (nf, ng) = self.step(eps, self.r[i].ln(), self.h, f[i], g[i]);
            f[i + 1] = nf;
            g[i + 1] = ng;
            let big = nf.abs().max(ng.abs());
            if big > 1e150 {
                for v in f.iter_mut().chain(g.iter_mut()) {
                    *v /= big;
                }
            }
        }
        Sweep { f, g }
    }

    /// Values stored at indices `from..len`; earlier entries are unused.
    fn inward(&self, eps: f64, from: usize) -> Result<Sweep> {
        let n = self.r.len();
        let w = eps - self.shift;
        if w >= 0.0 {
            return Err(Error::StateNotFound { lo: eps, hi: eps });
        }
        let mut f = vec![0.0; n];
        let mut g = vec![0.0; n];
        f[n - 1] = 1.0;
        g[n - 1] = -(-w / (2.0 * self.m + w)).sqrt();
        for i in (from + 1..n).rev() {
            let (nf, ng) = self.step(eps, self.r[i].ln(), -self.h, f[i], g[i]);
            f[i - 1] = nf;
            g[i - 1] = ng;
            let big = nf.abs().max(ng.abs());
            if big > 1e150 {
                for v in f[i - 1..].iter_mut().chain(g[i - 1..].iter_mut()) {
                    *v /= big;
                }
            }
        }
        Ok(Sweep { f, g })
    }

    fn defect(&self, eps: f64) -> Result<f64> {
        let j = self.match_index(eps);
        let out = self.outward(eps, j);
        let inn = self.inward(eps, j)?;
        let (fo, go, fi, gi) = (out.f[j], out.g[j], inn.f[j], inn.g[j]);
        Ok((fo * gi - go * fi) / (fo.hypot(go) * fi.hypot(gi)))
    }

    fn solution(&self, eps: f64) -> Result<(Vec<f64>, Vec<f64>, f64)> {
        let j = self.match_index(eps);
        let out = self.outward(eps, j);
        let inn = self.inward(eps, j)?;
        let (fo, go, fi, gi) = (out.f[j], out.g[j], inn.f[j], inn.g[j]);
        let defect = (fo * gi - go * fi) / (fo.hypot(go) * fi.hypot(gi));
        let s = (fo * fi + go * gi) / (fi * fi + gi * gi);
        let mut f = out.f;
        let mut g = out.g;
        f.extend(inn.f[j + 1..].iter().map(|v| v * s));
        g.extend(inn.g[j + 1..].iter().map(|v| v * s));
        let norm = trapezoid(&self.r, |i| f[i] * f[i] + g[i] * g[i]).sqrt();
        // fix the overall sign so f is positive near the origin
        let sign = if f[0] < 0.0 { -1.0 } else { 1.0 };
        for v in f.iter_mut().chain(g.iter_mut()) {
            *v *= sign / norm;
        }
        Ok((f, g, defect))
    }
}

/// Finds the root of `d` in `[lo, hi]` (given `d(lo)`, `d(hi)` of opposite
/// sign) with the Illinois variant of regula falsi.
fn illinois(
    mut d: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    mut dlo: f64,
    mut dhi: f64,
) -> Result<f64> {
    let mut side = 0;
    let mut best = if dlo.abs() < dhi.abs() { lo } else { hi };
    for _ in 0..200 {
        let mid = (lo * dhi - hi * dlo) / (dhi - dlo);
        let mid = if mid > lo.min(hi) && mid < lo.max(hi) {
            mid
        } else {
            0.5 * (lo + hi)
        };
        let dm = d(mid)?;
        best = mid;
        if dm.abs() < MATCH_TOLERANCE * 1e-3 || (hi - lo).abs() <= 4.0 * f64::EPSILON * mid.abs() {
            break;
        }
        if (dm < 0.0) == (dlo < 0.0) {
            lo = mid;
            dlo = dm;
            if side == -1 {
                dhi *= 0.5;
            }
            side = -1;
        } else {
            hi = mid;
            dhi = dm;
            if side == 1 {
                dlo *= 0.5;
            }
            side = 1;
        }
    }
    Ok(best)
}

/// Solves for the bound state `q`, with `shift` added to the potential
/// energy (0 for the plain Coulomb problem).
pub fn solve_bound_state_shifted(
    p: &CoulombProblem,
    q: QuantumNumbers,
    grid: &RadialGrid,
    shift: f64,
) -> Result<RadialSolution> {
    let shooter = Shooter::new(p, q, grid, shift)?;
    let guess = sommerfeld_binding(p, q)?;
    // the bracket never reaches the continuum nor the neighbouring levels
    // with the same κ, whose binding energies differ by a factor > 1.2
    let mut width = 1e-3;
    let (lo, hi, dlo, dhi) = loop {
        let lo = shift + guess * (1.0 + width);
        let hi = shift + guess * (1.0 - width);
        let dlo = shooter.defect(lo)?;
        let dhi = shooter.defect(hi)?;
        if dlo * dhi <= 0.0 {
            break (lo, hi, dlo, dhi);
        }
        if width >= 0.08 {
            return Err(Error::StateNotFound { lo: lo + p.m, hi: hi + p.m });
        }
        width *= 2.0;
    };
    let eps = if dlo == 0.0 {
        lo
    } else if dhi == 0.0 {
        hi
    } else {
        illinois(|e| shooter.defect(e), lo, hi, dlo, dhi)?
    };
    let (f, g, defect) = shooter.solution(eps)?;
    Ok(RadialSolution {
        quantum_numbers: q,
        energy: p.m + eps,
        binding: eps,
        r: shooter.r,
        f,
        g,
        defect,
    })
}

pub fn solve_bound_state(p: &CoulombProblem, q: QuantumNumbers, grid: &RadialGrid) -> Result<RadialSolution> {
    solve_bound_state_shifted(p, q, grid, 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub z: u32,
    pub quantum_numbers: QuantumNumbers,
    pub numeric: f64,
    pub oracle: f64,
    /// `|E_numeric − E_oracle| / m`.
    pub rel_err: f64,
}

/// Solves every state in `states` and compares with the closed form.
pub fn spectrum(p: &CoulombProblem, states: &[QuantumNumbers], grid: &RadialGrid) -> Result<Vec<SpectrumRow>> {
    states
        .iter()
        .map(|&q| {
            let sol = solve_bound_state(p, q, grid)?;
            let oracle = sommerfeld_binding(p, q)?;
            Ok(SpectrumRow {
                z: p.z,
                quantum_numbers: q,
                numeric: p.m + sol.binding,
                oracle: p.m + oracle,
                rel_err: (sol.binding - oracle).abs() / p.m,
            })
        })
        .collect()
}

pub fn spectrum_to_csv(rows: &[SpectrumRow]) -> String {
    let mut out = String::from("Z,n,kappa,E_numeric,E_oracle,rel_err\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:?},{:?},{:?}",
            row.z,
            row.quantum_numbers.n,
            row.quantum_numbers.kappa,
            row.numeric,
            row.oracle,
            row.rel_err
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeShiftReport {
    pub shift: f64,
    /// `(state, E(0), E(c))` per solved state.
    pub levels: Vec<(QuantumNumbers, f64, f64)>,
    /// `max |E(c) − E(0) − c| / m`.
    pub max_deviation: f64,
    pub pass: bool,
}

/// Re-solves `states` with a constant `shift` added to the potential energy
/// and checks that every level moves by exactly `shift`.
pub fn gauge_shift_check(
    p: &CoulombProblem,
    states: &[QuantumNumbers],
    grid: &RadialGrid,
    shift: f64,
) -> Result<GaugeShiftReport> {
    let mut levels = Vec::with_capacity(states.len());
    let mut max_deviation = 0.0_f64;
    for &q in states {
        let base = solve_bound_state_shifted(p, q, grid, 0.0)?;
        let moved = solve_bound_state_shifted(p, q, grid, shift)?;
        max_deviation = max_deviation.max((moved.binding - base.binding - shift).abs() / p.m);
        levels.push((q, base.energy, moved.energy));
    }
    Ok(GaugeShiftReport {
        shift,
        levels,
        max_deviation,
        pass: max_deviation < GAUGE_TOLERANCE,
    })
}
