//! Planar Weyl space sampled on a regular grid.
//!
//! A [`WeylField`] carries the conformal factor `λ(x) > 0` of
//! `ds² = λ(dt² − dx² − dy² − dz²)` and the connectivity `φ_μ` of
//! `dφ = φ_μ dx^μ`. Gauge transformations rescale `λ` and shift `φ` by
//! `−∂ ln s`; the scale curvature `F_ik = ∂_k φ_i − ∂_i φ_k` is invariant
//! and obeys the cyclic identity `∂_i F_kl + ∂_k F_li + ∂_l F_ik = 0`.
//! [`PotentialField`] holds `A_μ` with `φ_μ = ieA_μ` and the long derivative
//! `(∂_μ − ieA_μ)ψ`.
//!
//! Derivatives are second-order central differences in the interior and
//! first-order one-sided on the boundary. Axes of extent 1 are collapsed and
//! have zero derivative, so a `(t, x)` plane is a grid with extents
//! `[nt, nx, 1, 1]`. Norms are taken over interior nodes only.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::clifford::{Axis, Bispinor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid4 {
    extents: [usize; 4],
    spacing: [f64; 4],
    origin: [f64; 4],
}

impl Grid4 {
    pub fn new(extents: [usize; 4], spacing: [f64; 4], origin: [f64; 4]) -> Result<Self> {
        if extents.contains(&0) {
            return Err(Error::InvalidParameter(format!("empty grid axis in {extents:?}")));
        }
        if extents.iter().all(|&e| e < 2) {
            return Err(Error::InvalidParameter("grid needs an axis with >= 2 nodes".into()));
        }
        if spacing.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::InvalidParameter(format!("bad spacing {spacing:?}")));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidParameter(format!("bad origin {origin:?}")));
        }
        Ok(Self {
            extents,
            spacing,
            origin,
        })
    }

    /// `(t, x)` plane of `n × n` nodes covering `[lo, hi]²`.
    pub fn plane(n: usize, lo: f64, hi: f64) -> Result<Self> {
        let h = (hi - lo) / (n.max(2) - 1) as f64;
        Self::new([n, n, 1, 1], [h, h, 1.0, 1.0], [lo, lo, 0.0, 0.0])
    }

    pub fn extents(&self) -> [usize; 4] {
        self.extents
    }

    pub fn spacing(&self) -> [f64; 4] {
        self.spacing
    }

    pub fn origin(&self) -> [f64; 4] {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_active(&self, axis: usize) -> bool {
        self.extents[axis] > 1
    }

    fn strides(&self) -> [usize; 4] {
        let e = self.extents;
        [e[1] * e[2] * e[3], e[2] * e[3], e[3], 1]
    }

    pub fn index(&self, idx: [usize; 4]) -> usize {
        let s = self.strides();
        (0..4).map(|k| idx[k] * s[k]).sum()
    }

    pub fn multi_index(&self, mut n: usize) -> [usize; 4] {
        let s = self.strides();
        let mut out = [0; 4];
        for k in 0..4 {
            out[k] = n / s[k];
            n %= s[k];
        }
        out
    }

    pub fn coords(&self, n: usize) -> [f64; 4] {
        let idx = self.multi_index(n);
        std::array::from_fn(|k| self.origin[k] + self.spacing[k] * idx[k] as f64)
    }

    /// Not on the boundary of any active axis.
    pub fn is_interior(&self, n: usize) -> bool {
        let idx = self.multi_index(n);
        (0..4).all(|k| !self.is_active(k) || (idx[k] > 0 && idx[k] + 1 < self.extents[k]))
    }

    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&n| self.is_interior(n))
    }

    /// Samples `f(coords)` at every node.
    pub fn sample<T>(&self, f: impl Fn([f64; 4]) -> T) -> Vec<T> {
        (0..self.len()).map(|n| f(self.coords(n))).collect()
    }

    /// Finite-difference `∂/∂x^axis` of a nodal field.
    pub fn partial<T>(&self, values: &[T], axis: usize) -> Vec<T>
    where
        T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
    {
        assert_eq!(values.len(), self.len(), "field does not match grid");
        let extent = self.extents[axis];
        let stride = self.strides()[axis];
        let h = self.spacing[axis];
        (0..self.len())
            .map(|n| {
                let i = self.multi_index(n)[axis];
                if extent == 1 {
                    values[n] * 0.0
                } else if i == 0 {
                    (values[n + stride] - values[n]) * (1.0 / h)
                } else if i + 1 == extent {
                    (values[n] - values[n - stride]) * (1.0 / h)
                } else {
                    (values[n + stride] - values[n - stride]) * (0.5 / h)
                }
            })
            .collect()
    }

    /// Largest `norm(values[n])` over interior nodes.
    pub fn max_interior<T>(&self, values: &[T], norm: impl Fn(&T) -> f64) -> f64 {
        self.interior().map(|n| norm(&values[n])).fold(0.0, f64::max)
    }

    fn check_same(&self, other: &Grid4) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(self.extents, other.extents))
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.len() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "field has {len} nodes, grid has {}",
                self.len()
            )))
        }
    }
}

impl Mul<f64> for Bispinor {
    type Output = Bispinor;
    fn mul(self, rhs: f64) -> Bispinor {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylField {
    grid: Grid4,
    lambda: Vec<f64>,
    phi: Vec<[f64; 4]>,
}

impl WeylField {
    pub fn new(grid: Grid4, lambda: Vec<f64>, phi: Vec<[f64; 4]>) -> Result<Self> {
        grid.check_len(lambda.len())?;
        grid.check_len(phi.len())?;
        check_positive(&lambda)?;
        Ok(Self { grid, lambda, phi })
    }

    pub fn from_fn(
        grid: Grid4,
        lambda: impl Fn([f64; 4]) -> f64,
        phi: impl Fn([f64; 4]) -> [f64; 4],
    ) -> Result<Self> {
        let l = grid.sample(lambda);
        let p = grid.sample(phi);
        Self::new(grid, l, p)
    }

    pub fn grid(&self) -> &Grid4 {
        &self.grid
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn phi(&self) -> &[[f64; 4]] {
        &self.phi
    }

    fn phi_component(&self, mu: usize) -> Vec<f64> {
        self.phi.iter().map(|p| p[mu]).collect()
    }

    /// Metric `g_ik = λ·diag(1, −1, −1, −1)` at node `n`.
    pub fn metric(&self, n: usize) -> [f64; 4] {
        Axis::ALL.map(|ax| self.lambda[n] * ax.metric())
    }

    /// Interval `ds² = g_ik dx^i dx^k` at node `n`.
    pub fn interval(&self, n: usize, dx: [f64; 4]) -> f64 {
        self.metric(n).iter().zip(dx).map(|(g, d)| g * d * d).sum()
    }

    /// Linear form `dφ = φ_μ dx^μ` at node `n`.
    pub fn connection_form(&self, n: usize, dx: [f64; 4]) -> f64 {
        self.phi[n].iter().zip(dx).map(|(p, d)| p * d).sum()
    }
}

fn check_positive(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        Some(node) => Err(Error::NonPositiveScale {
            node,
            value: values[node],
        }),
        None => Ok(()),
    }
}

/// `λ′ = sλ`, `φ′_μ = φ_μ − ∂_μ ln s`.
pub fn gauge_transform(f: &WeylField, scale: &[f64]) -> Result<WeylField> {
    f.grid.check_len(scale.len())?;
    check_positive(scale)?;
    let ln_s: Vec<f64> = scale.iter().map(|s| s.ln()).collect();
    let grads: Vec<Vec<f64>> = (0..4).map(|k| f.grid.partial(&ln_s, k)).collect();
    let lambda = f.lambda.iter().zip(scale).map(|(l, s)| l * s).collect();
    let phi = f
        .phi
        .iter()
        .enumerate()
        .map(|(n, p)| std::array::from_fn(|k| p[k] - grads[k][n]))
        .collect();
    Ok(WeylField {
        grid: f.grid,
        lambda,
        phi,
    })
}

/// Index pairs `(i, k)`, `i < k`, of the stored curvature components.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pair_slot(i: usize, k: usize) -> Option<(usize, f64)> {
    if i == k {
        return None;
    }
    let (lo, hi, sign) = if i < k { (i, k, 1.0) } else { (k, i, -1.0) };
    PAIRS
        .iter()
        .position(|&p| p == (lo, hi))
        .map(|slot| (slot, sign))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureField {
    grid: Grid4,
    components: Vec<[f64; 6]>,
}

impl CurvatureField {
    pub fn new(grid: Grid4, components: Vec<[f64; 6]>) -> Result<Self> {
        grid.check_len(components.len())?;
        Ok(Self { grid, components })
    }

    pub fn from_fn(grid: Grid4, f: impl Fn([f64; 4]) -> [f64; 6]) -> Self {
        let components = grid.sample(f);
        Self { grid, components }
    }

    pub fn grid(&self) -> &Grid4 {
        &self.grid
    }

    /// `F_ik` at node `n`; antisymmetric by construction.
    pub fn get(&self, n: usize, i: usize, k: usize) -> f64 {
        match pair_slot(i, k) {
            Some((slot, sign)) => sign * self.components[n][slot],
            None => 0.0,
        }
    }

    pub fn components(&self) -> &[[f64; 6]] {
        &self.components
    }

    fn component(&self, i: usize, k: usize) -> Vec<f64> {
        (0..self.grid.len()).map(|n| self.get(n, i, k)).collect()
    }

    /// Largest interior `|F_ik|`.
    pub fn max_interior(&self) -> f64 {
        self.grid
            .max_interior(&self.components, |c| c.iter().map(|v| v.abs()).fold(0.0, f64::max))
    }
}

/// `F_ik = ∂φ_i/∂x^k − ∂φ_k/∂x^i`.
pub fn scale_curvature(f: &WeylField) -> CurvatureField {
    let grid = f.grid;
    // d[i][k] = ∂_k φ_i
    let d: Vec<Vec<Vec<f64>>> = (0..4)
        .map(|i| {
            let comp = f.phi_component(i);
            (0..4).map(|k| grid.partial(&comp, k)).collect()
        })
        .collect();
    let components = (0..grid.len())
        .map(|n| PAIRS.map(|(i, k)| d[i][k][n] - d[k][i][n]))
        .collect();
    CurvatureField { grid, components }
}

/// Largest interior `|∂_i F_kl + ∂_k F_li + ∂_l F_ik|` over all triples.
pub fn bianchi_residual(c: &CurvatureField) -> Result<f64> {
    let grid = c.grid;
    if grid.interior().next().is_none() {
        return Err(Error::InvalidParameter("grid has no interior nodes".into()));
    }
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for k in (i + 1)..4 {
            for l in (k + 1)..4 {
                let a = grid.partial(&c.component(k, l), i);
                let b = grid.partial(&c.component(l, i), k);
                let d = grid.partial(&c.component(i, k), l);
                let sum: Vec<f64> = (0..grid.len()).map(|n| a[n] + b[n] + d[n]).collect();
                worst = worst.max(grid.max_interior(&sum, |v| v.abs()));
            }
        }
    }
    Ok(worst)
}

/// Largest interior change of `F` under [`gauge_transform`].
pub fn curvature_gauge_invariance(f: &WeylField, scale: &[f64]) -> Result<f64> {
    let before = scale_curvature(f);
    let after = scale_curvature(&gauge_transform(f, scale)?);
    let diff: Vec<f64> = before
        .components
        .iter()
        .zip(&after.components)
        .map(|(x, y)| x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        .collect();
    Ok(f.grid.max_interior(&diff, |v| *v))
}

/// Bispinor values on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpinor {
    pub grid: Grid4,
    pub values: Vec<Bispinor>,
}

impl GridSpinor {
    pub fn new(grid: Grid4, values: Vec<Bispinor>) -> Result<Self> {
        grid.check_len(values.len())?;
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid4, f: impl Fn([f64; 4]) -> Bispinor) -> Self {
        let values = grid.sample(f);
        Self { grid, values }
    }
}

/// Electromagnetic potential `A_μ`, complex so that `φ_μ = ieA_μ` can be
/// represented for real `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialField {
    pub grid: Grid4,
    pub a: Vec<[Complex64; 4]>,
    pub charge: f64,
}

impl PotentialField {
    pub fn new(grid: Grid4, a: Vec<[Complex64; 4]>, charge: f64) -> Result<Self> {
        grid.check_len(a.len())?;
        if !(charge.is_finite() && charge != 0.0) {
            return Err(Error::InvalidParameter(format!("charge must be non-zero, got {charge}")));
        }
        Ok(Self { grid, a, charge })
    }

    /// `A_μ = φ_μ / (ie)`.
    pub fn from_connectivity(f: &WeylField, charge: f64) -> Result<Self> {
        let ie = Complex64::new(0.0, charge);
        let a = f.phi.iter().map(|p| p.map(|v| Complex64::new(v, 0.0) / ie)).collect();
        Self::new(f.grid, a, charge)
    }

    /// `ieA_μ`, the connectivity this potential stands for.
    pub fn connectivity(&self) -> Vec<[Complex64; 4]> {
        let ie = Complex64::new(0.0, self.charge);
        self.a.iter().map(|a| a.map(|v| ie * v)).collect()
    }
}

/// `∂_axis ψ − ieA_axis ψ` at every node.
pub fn long_derivative(p: &PotentialField, psi: &GridSpinor, axis: Axis) -> Result<Vec<Bispinor>> {
    p.grid.check_same(&psi.grid)?;
    let mu = axis.index();
    let d = p.grid.partial(&psi.values, mu);
    let ie = Complex64::new(0.0, p.charge);
    Ok(d.iter()
        .zip(&psi.values)
        .zip(&p.a)
        .map(|((dpsi, v), a)| *dpsi - v.scale(ie * a[mu]))
        .collect())
}

/// `A′ = A − ∂χ`, `ψ′ = exp(−ieχ)ψ`.
pub fn electromagnetic_gauge(
    p: &PotentialField,
    psi: &GridSpinor,
    chi: &[Complex64],
) -> Result<(PotentialField, GridSpinor)> {
    p.grid.check_same(&psi.grid)?;
    p.grid.check_len(chi.len())?;
    let grads: Vec<Vec<Complex64>> = (0..4).map(|k| p.grid.partial(chi, k)).collect();
    let a = p
        .a
        .iter()
        .enumerate()
        .map(|(n, a)| std::array::from_fn(|k| a[k] - grads[k][n]))
        .collect();
    let ie = Complex64::new(0.0, p.charge);
    let values = psi
        .values
        .iter()
        .zip(chi)
        .map(|(v, c)| v.scale((-ie * c).exp()))
        .collect();
    Ok((
        PotentialField {
            grid: p.grid,
            a,
            charge: p.charge,
        },
        GridSpinor {
            grid: psi.grid,
            values,
        },
    ))
}

/// Largest interior `‖D′ψ′ − exp(−ieχ)Dψ‖` along `axis`, with `D` the long
/// derivative before and `D′` after [`electromagnetic_gauge`].
pub fn covariance_deviation(
    p: &PotentialField,
    psi: &GridSpinor,
    chi: &[Complex64],
    axis: Axis,
) -> Result<f64> {
    let (p2, psi2) = electromagnetic_gauge(p, psi, chi)?;
    let before = long_derivative(p, psi, axis)?;
    let after = long_derivative(&p2, &psi2, axis)?;
    let ie = Complex64::new(0.0, p.charge);
    let diff: Vec<f64> = (0..p.grid.len())
        .map(|n| (after[n] - before[n].scale((-ie * chi[n]).exp())).norm())
        .collect();
    Ok(p.grid.max_interior(&diff, |v| *v))
}

/// `χ = ie ln λ`, the gauge function as written next to `φ_μ = ieA_μ`.
pub fn chi_from_scale(scale: &[f64], charge: f64) -> Result<Vec<Complex64>> {
    check_positive(scale)?;
    let ie = Complex64::new(0.0, charge);
    Ok(scale.iter().map(|s| ie * s.ln()).collect())
}

/// `χ = ln λ / (ie)`: the gauge function under which `A′ = A − ∂χ` reproduces
/// `φ′ = φ − ∂ ln λ` exactly when `φ = ieA`.
pub fn chi_matching_connectivity(scale: &[f64], charge: f64) -> Result<Vec<Complex64>> {
    check_positive(scale)?;
    let ie = Complex64::new(0.0, charge);
    Ok(scale.iter().map(|s| Complex64::new(s.ln(), 0.0) / ie).collect())
}

const CSV_HEADER: &str = "index,t,x,y,z,lambda,phi_t,phi_x,phi_y,phi_z";

/// CSV export: a `# extents=..;spacing=..;origin=..` line, the column header,
/// then one row per node in row-major order.
pub fn to_csv(f: &WeylField) -> String {
    let g = f.grid;
    let mut out = String::new();
    let join = |v: &[String]| v.join(" ");
    let _ = writeln!(
        out,
        "# extents={};spacing={};origin={}",
        join(&g.extents.map(|e| e.to_string())),
        join(&g.spacing.map(|e| format!("{e:?}"))),
        join(&g.origin.map(|e| format!("{e:?}"))),
    );
    out.push_str(CSV_HEADER);
    out.push('\n');
    for n in 0..g.len() {
        let c = g.coords(n);
        let p = f.phi[n];
        let _ = writeln!(
            out,
            "{n},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
            c[0], c[1], c[2], c[3], f.lambda[n], p[0], p[1], p[2], p[3]
        );
    }
    out
}

pub fn from_csv(text: &str) -> Result<WeylField> {
    let mut lines = text.lines();
    let meta = lines
        .next()
        .and_then(|l| l.strip_prefix("# "))
        .ok_or_else(|| Error::Format("missing grid metadata line".into()))?;
    let mut extents = None;
    let mut spacing = None;
    let mut origin = None;
    for part in meta.split(';') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("bad metadata entry {part:?}")))?;
        match key {
            "extents" => extents = Some(parse4::<usize>(value)?),
            "spacing" => spacing = Some(parse4::<f64>(value)?),
            "origin" => origin = Some(parse4::<f64>(value)?),
            other => return Err(Error::Format(format!("unknown metadata key {other:?}"))),
        }
    }
    let missing = || Error::Format("incomplete grid metadata".into());
    let grid = Grid4::new(
        extents.ok_or_else(missing)?,
        spacing.ok_or_else(missing)?,
        origin.ok_or_else(missing)?,
    )?;
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Format("unexpected column header".into()));
    }
    let mut lambda = Vec::with_capacity(grid.len());
    let mut phi = Vec::with_capacity(grid.len());
    for (row, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 10 {
            return Err(Error::Format(format!("row {row}: expected 10 columns")));
        }
        let index: usize = parse(cols[0])?;
        if index != row {
            return Err(Error::Format(format!("row {row}: node index {index} out of order")));
        }
        let vals: Vec<f64> = cols[5..].iter().map(|c| parse(c)).collect::<Result<_>>()?;
        lambda.push(vals[0]);
        phi.push([vals[1], vals[2], vals[3], vals[4]]);
    }
    WeylField::new(grid, lambda, phi)
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Format(format!("cannot parse {s:?}")))
}

fn parse4<T: std::str::FromStr + Copy + Default>(s: &str) -> Result<[T; 4]> {
    let vals: Vec<T> = s.split_whitespace().map(parse).collect::<Result<_>>()?;
    vals.try_into()
        .map_err(|_| Error::Format(format!("expected 4 values in {s:?}")))
}

/// Binary layout, all little-endian: extents as 4 × u64, spacing as 4 × f64,
/// origin as 4 × f64, then per node in row-major order
/// `λ, φ_t, φ_x, φ_y, φ_z` as f64.
pub fn to_bytes(f: &WeylField) -> Vec<u8> {
    let g = f.grid;
    let mut out = Vec::with_capacity(96 + 40 * g.len());
    for e in g.extents {
        out.extend_from_slice(&(e as u64).to_le_bytes());
    }
    for v in g.spacing.iter().chain(&g.origin) {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for (l, p) in f.lambda.iter().zip(&f.phi) {
        out.extend_from_slice(&l.to_le_bytes());
        for v in p {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<WeylField> {
    let mut chunks = bytes.chunks_exact(8);
    if !bytes.len().is_multiple_of(8) || bytes.len() < 96 {
        return Err(Error::Format(format!("truncated field ({} bytes)", bytes.len())));
    }
    let mut word = || -> [u8; 8] { chunks.next().expect("length checked").try_into().expect("8 bytes") };
    let extents: [usize; 4] = std::array::from_fn(|_| u64::from_le_bytes(word()) as usize);
    let spacing: [f64; 4] = std::array::from_fn(|_| f64::from_le_bytes(word()));
    let origin: [f64; 4] = std::array::from_fn(|_| f64::from_le_bytes(word()));
    let grid = Grid4::new(extents, spacing, origin)?;
    let expected = 96 + 40 * grid.len();
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "expected {expected} bytes for extents {extents:?}, got {}",
            bytes.len()
        )));
    }
    let mut lambda = Vec::with_capacity(grid.len());
    let mut phi = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        lambda.push(f64::from_le_bytes(word()));
        phi.push(std::array::from_fn(|_| f64::from_le_bytes(word())));
    }
    WeylField::new(grid, lambda, phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(n: usize) -> Grid4 {
        Grid4::plane(n, 0.0, 1.0).unwrap()
    }

    #[test]
    fn grid_indexing_round_trips() {
        let g = Grid4::new([3, 4, 2, 5], [0.1, 0.2, 0.3, 0.4], [1.0, 0.0, -1.0, 2.0]).unwrap();
        for n in 0..g.len() {
            assert_eq!(g.index(g.multi_index(n)), n);
        }
        assert_eq!(g.coords(g.index([2, 3, 1, 4])), [1.2, 0.6000000000000001, -0.7, 3.6]);
        assert!(Grid4::new([0, 4, 1, 1], [1.0; 4], [0.0; 4]).is_err());
        assert!(Grid4::new([1, 1, 1, 1], [1.0; 4], [0.0; 4]).is_err());
        assert!(Grid4::new([4, 4, 1, 1], [1.0, -1.0, 1.0, 1.0], [0.0; 4]).is_err());
    }

    #[test]
    fn rejects_non_positive_lambda() {
        let g = plane(4);
        let mut lambda = vec![1.0; g.len()];
        lambda[5] = 0.0;
        assert_eq!(
            WeylField::new(g, lambda, vec![[0.0; 4]; g.len()]),
            Err(Error::NonPositiveScale { node: 5, value: 0.0 })
        );
    }

    #[test]
    fn metric_and_forms() {
        let g = plane(3);
        let f = WeylField::from_fn(g, |_| 2.0, |_| [1.0, 2.0, 0.0, 0.0]).unwrap();
        assert_eq!(f.metric(0), [2.0, -2.0, -2.0, -2.0]);
        assert_eq!(f.interval(0, [1.0, 1.0, 0.0, 0.0]), 0.0);
        assert_eq!(f.connection_form(0, [0.5, 0.25, 0.0, 0.0]), 1.0);
    }

    #[test]
    fn unit_scale_is_identity() {
        let g = plane(8);
        let f = WeylField::from_fn(g, |c| 1.0 + c[0] * c[1], |c| [c[1], c[0].sin(), 0.0, 0.0]).unwrap();
        let ones = vec![1.0; g.len()];
        assert_eq!(gauge_transform(&f, &ones).unwrap(), f);
        assert_eq!(curvature_gauge_invariance(&f, &ones).unwrap(), 0.0);
    }

    #[test]
    fn exponential_scale_shifts_phi_x_by_c() {
        let g = plane(16);
        let c = 0.7;
        let f = WeylField::from_fn(g, |_| 1.0, |x| [0.0, x[0], 0.0, 0.0]).unwrap();
        let scale = g.sample(|x| (c * x[1]).exp());
        let f2 = gauge_transform(&f, &scale).unwrap();
        for n in g.interior() {
            assert!((f2.phi()[n][1] - (f.phi()[n][1] - c)).abs() < 1e-12);
            assert!((f2.phi()[n][0] - f.phi()[n][0]).abs() < 1e-12);
        }
    }

    #[test]
    fn gauge_transforms_compose() {
        let g = plane(20);
        let f = WeylField::from_fn(g, |c| 1.0 + c[0], |c| [c[1].cos(), c[0], 0.0, 0.0]).unwrap();
        let s1 = g.sample(|c| (0.3 * (3.0 * c[0]).sin() + c[1]).exp());
        let s2 = g.sample(|c| 2.0 + (c[0] * c[1]).cos());
        let both: Vec<f64> = s1.iter().zip(&s2).map(|(a, b)| a * b).collect();
        let twice = gauge_transform(&gauge_transform(&f, &s1).unwrap(), &s2).unwrap();
        let once = gauge_transform(&f, &both).unwrap();
        for n in g.interior() {
            assert!((twice.lambda()[n] - once.lambda()[n]).abs() < 1e-10);
            for k in 0..4 {
                assert!((twice.phi()[n][k] - once.phi()[n][k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn gauge_rejects_bad_scale() {
        let g = plane(4);
        let f = WeylField::from_fn(g, |_| 1.0, |_| [0.0; 4]).unwrap();
        let mut s = vec![1.0; g.len()];
        s[3] = -1.0;
        assert!(matches!(gauge_transform(&f, &s), Err(Error::NonPositiveScale { node: 3, .. })));
        assert!(gauge_transform(&f, &[1.0]).is_err());
    }

    #[test]
    fn constant_phi_has_no_curvature() {
        let g = plane(6);
        let f = WeylField::from_fn(g, |_| 1.0, |_| [1.0, -2.0, 0.5, 3.0]).unwrap();
        assert_eq!(scale_curvature(&f).max_interior(), 0.0);
    }

    #[test]
    fn linear_phi_t_gives_constant_f_tx() {
        let g = plane(9);
        let k = 1.75;
        let f = WeylField::from_fn(g, |_| 1.0, |c| [k * c[1], 0.0, 0.0, 0.0]).unwrap();
        let curv = scale_curvature(&f);
        for n in g.interior() {
            // F_tx = ∂φ_t/∂x − ∂φ_x/∂t
            assert!((curv.get(n, 0, 1) - k).abs() < 1e-12);
            assert!((curv.get(n, 1, 0) + k).abs() < 1e-12);
            for (i, j) in PAIRS.iter().skip(1) {
                assert_eq!(curv.get(n, *i, *j), 0.0);
            }
        }
    }

    #[test]
    fn pure_gauge_curvature_is_second_order() {
        // φ = ∇s for s = sin(πt) cos(2πx), sampled analytically
        use std::f64::consts::PI;
        let err = |n: usize| {
            let g = plane(n);
            let f = WeylField::from_fn(
                g,
                |_| 1.0,
                |c| {
                    [
                        PI * (PI * c[0]).cos() * (2.0 * PI * c[1]).cos(),
                        -2.0 * PI * (PI * c[0]).sin() * (2.0 * PI * c[1]).sin(),
                        0.0,
                        0.0,
                    ]
                },
            )
            .unwrap();
            scale_curvature(&f).max_interior()
        };
        let (e1, e2) = (err(33), err(65));
        assert!(((e1 / e2).log2() - 2.0).abs() < 0.2, "{e1} {e2}");
    }

    #[test]
    fn bianchi_on_constant_and_non_curl_fields() {
        let g = Grid4::new([6, 6, 6, 1], [0.2; 4], [0.0; 4]).unwrap();
        let constant = CurvatureField::from_fn(g, |_| [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert!(bianchi_residual(&constant).unwrap() < 1e-13);

        // F_xy = x·y only: cyclic sum on (t, x, y) is ∂_t F_xy = 0, on (x, y, z) 0;
        // use F_xy = t·x·y so ∂_t F_xy = x·y is picked up
        let non_curl = CurvatureField::from_fn(g, |c| [0.0, 0.0, 0.0, c[0] * c[1] * c[2], 0.0, 0.0]);
        let r = bianchi_residual(&non_curl).unwrap();
        let expected = g.interior().map(|n| {
            let c = g.coords(n);
            (c[1] * c[2]).abs()
        }).fold(0.0, f64::max);
        assert!((r - expected).abs() < 1e-12, "{r} vs {expected}");
    }

    #[test]
    fn bianchi_needs_interior() {
        let g = Grid4::new([2, 2, 1, 1], [1.0; 4], [0.0; 4]).unwrap();
        let c = CurvatureField::from_fn(g, |_| [0.0; 6]);
        assert!(bianchi_residual(&c).is_err());
    }

    #[test]
    fn linear_log_scale_is_exactly_invariant() {
        let g = plane(12);
        let f = WeylField::from_fn(g, |_| 1.0, |c| [c[1] * c[1], c[0].sin(), 0.0, 0.0]).unwrap();
        let s = g.sample(|c| (0.4 * c[0] - 1.3 * c[1] + 0.2).exp());
        assert!(curvature_gauge_invariance(&f, &s).unwrap() < 1e-12);
    }

    fn sample_spinor(g: Grid4) -> GridSpinor {
        GridSpinor::from_fn(g, |c| {
            Bispinor::new([
                Complex64::from_polar(1.0, 2.0 * c[0] - c[1]),
                Complex64::new(c[0] * c[1], 0.5),
                Complex64::new((3.0 * c[1]).cos(), c[0]),
                Complex64::new(0.0, 0.0),
            ])
        })
    }

    #[test]
    fn long_derivative_examples() {
        let g = plane(10);
        let psi = sample_spinor(g);
        let zero = PotentialField::new(g, vec![[Complex64::new(0.0, 0.0); 4]; g.len()], 1.0).unwrap();
        let plain = g.partial(&psi.values, 1);
        assert_eq!(long_derivative(&zero, &psi, Axis::X).unwrap(), plain);

        let a = Complex64::new(0.3, 0.0);
        let e = 2.0;
        let constant = PotentialField::new(g, vec![[a; 4]; g.len()], e).unwrap();
        let s = Bispinor::from_real([1.0, 2.0, 3.0, 4.0]);
        let flat = GridSpinor::new(g, vec![s; g.len()]).unwrap();
        let out = long_derivative(&constant, &flat, Axis::T).unwrap();
        let expected = s.scale(Complex64::new(0.0, -e) * a);
        assert!(out.iter().all(|v| (*v - expected).norm() < 1e-15));
    }

    #[test]
    fn long_derivative_rejects_mismatched_grids() {
        let p = PotentialField::new(plane(4), vec![[Complex64::new(0.0, 0.0); 4]; 16], 1.0).unwrap();
        let psi = GridSpinor::new(plane(5), vec![Bispinor::zero(); 25]).unwrap();
        assert!(matches!(long_derivative(&p, &psi, Axis::T), Err(Error::GridMismatch(..))));
    }

    #[test]
    fn covariance_is_second_order() {
        let dev = |n: usize| {
            let g = plane(n);
            let p = PotentialField::new(
                g,
                g.sample(|c| [Complex64::new(c[1].sin(), 0.0), Complex64::new(c[0] * c[1], 0.0), 0.0.into(), 0.0.into()]),
                0.5,
            )
            .unwrap();
            let chi: Vec<Complex64> = g.sample(|c| Complex64::new((2.0 * c[0] + c[1]).sin(), 0.0));
            let psi = sample_spinor(g);
            covariance_deviation(&p, &psi, &chi, Axis::T)
                .unwrap()
                .max(covariance_deviation(&p, &psi, &chi, Axis::X).unwrap())
        };
        let (d1, d2) = (dev(33), dev(65));
        assert!(((d1 / d2).log2() - 2.0).abs() < 0.2, "{d1} {d2}");
    }

    #[test]
    fn matching_chi_reproduces_weyl_transform() {
        let g = plane(12);
        let f = WeylField::from_fn(g, |_| 1.0, |c| [c[1], -c[0], 0.0, 0.0]).unwrap();
        let s = g.sample(|c| 1.5 + (c[0] - c[1]).sin());
        let e = 0.8;
        let p = PotentialField::from_connectivity(&f, e).unwrap();
        let psi = GridSpinor::new(g, vec![Bispinor::zero(); g.len()]).unwrap();
        let chi = chi_matching_connectivity(&s, e).unwrap();
        let (p2, _) = electromagnetic_gauge(&p, &psi, &chi).unwrap();
        let f2 = gauge_transform(&f, &s).unwrap();
        for (n, conn) in p2.connectivity().iter().enumerate() {
            for k in 0..4 {
                assert!((conn[k] - Complex64::new(f2.phi()[n][k], 0.0)).norm() < 1e-12);
            }
        }
        // the literal χ = ie ln λ differs from it by the factor (ie)² = −e²
        let literal = chi_from_scale(&s, e).unwrap();
        for (a, b) in literal.iter().zip(&chi) {
            assert!((a - b * (-e * e)).norm() < 1e-12);
        }
    }

    #[test]
    fn csv_and_binary_round_trip() {
        let g = Grid4::new([3, 4, 1, 2], [0.1, 0.25, 1.0, 0.5], [-1.0, 0.0, 0.0, 2.0]).unwrap();
        let f = WeylField::from_fn(g, |c| 1.0 + c[0] * c[0], |c| [c[1] / 3.0, c[0], 1e-300, -c[3]]).unwrap();
        assert_eq!(from_csv(&to_csv(&f)).unwrap(), f);
        let bytes = to_bytes(&f);
        assert_eq!(bytes.len(), 96 + 40 * g.len());
        assert_eq!(&bytes[0..8], &3u64.to_le_bytes());
        assert_eq!(from_bytes(&bytes).unwrap(), f);
        assert!(from_bytes(&bytes[..bytes.len() - 8]).is_err());
        assert!(from_csv("index,t\n").is_err());
    }
}
