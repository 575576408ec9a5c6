use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::packet::{CentreProfile, WavePacket};
use crate::coefficients::CoefficientTable;
use crate::error::{Error, Result};
use crate::propagator::{mehler_complex, Propagator, TimeFactors, ZeroCouplingKernel};
use crate::quadrature::{ordered_sum, CompositeRule};
use crate::wavefunction::{Configuration, ModelParams};

/// Upper bound on quadrature nodes per evaluation.
pub const MAX_GRID_POINTS: usize = 10_000_000;

/// Kernel phase advance allowed per cell when grids are sized automatically.
pub const PHASE_PER_CELL: f64 = FRAC_PI_4;

/// Nodes within this fraction of the largest `|w psi_0|` are dropped.
const PRUNE: f64 = 1e-17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureRule {
    Midpoint,
    /// Composite Gauss-Legendre with the given nodes per cell.
    GaussLegendre(usize),
}

impl QuadratureRule {
    /// Convergence order in the cell width.
    pub fn order(&self) -> i32 {
        match *self {
            QuadratureRule::Midpoint => 2,
            QuadratureRule::GaussLegendre(q) => 2 * q as i32,
        }
    }

    fn nodes_per_cell(&self) -> usize {
        match *self {
            QuadratureRule::Midpoint => 1,
            QuadratureRule::GaussLegendre(q) => q,
        }
    }

    fn build(&self, lo: f64, hi: f64, cells: usize) -> CompositeRule {
        match *self {
            QuadratureRule::Midpoint => CompositeRule::midpoint(lo, hi, cells),
            QuadratureRule::GaussLegendre(q) => CompositeRule::new(lo, hi, cells, q),
        }
    }
}

/// Frame in which the grid axes are laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coordinates {
    /// One axis per particle; full tensor-product quadrature.
    Cartesian,
    /// Two-body only: axis 0 is `R = (y1 + y2)/sqrt 2`, axis 1 is `r = (y1 - y2)/sqrt 2`,
    /// integrated separately.
    CentreOfMass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub cells: usize,
}

impl Axis {
    pub fn cell_width(&self) -> f64 {
        (self.hi - self.lo) / self.cells as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub axes: Vec<Axis>,
    pub rule: QuadratureRule,
    pub coordinates: Coordinates,
}

impl QuadratureGrid {
    pub fn new(axes: Vec<Axis>, rule: QuadratureRule, coordinates: Coordinates) -> Result<Self> {
        for a in &axes {
            if !(a.lo.is_finite() && a.hi.is_finite() && a.lo < a.hi && a.cells > 0) {
                return Err(Error::Domain(format!("invalid grid axis {a:?}")));
            }
        }
        if let QuadratureRule::GaussLegendre(0) = rule {
            return Err(Error::Domain("Gauss-Legendre rule needs at least one node".into()));
        }
        if coordinates == Coordinates::CentreOfMass && axes.len() != 2 {
            return Err(Error::Domain("centre-of-mass grids have exactly two axes".into()));
        }
        let grid = Self { axes, rule, coordinates };
        let points = grid.points();
        if points > MAX_GRID_POINTS {
            return Err(Error::SizeLimit(format!("grid needs {points} nodes, budget is {MAX_GRID_POINTS}")));
        }
        Ok(grid)
    }

    /// Kernel evaluations per output point.
    pub fn points(&self) -> usize {
        let per_axis = self.axes.iter().map(|a| a.cells.saturating_mul(self.rule.nodes_per_cell()));
        match self.coordinates {
            Coordinates::Cartesian => per_axis.fold(1usize, |acc, n| acc.saturating_mul(n)),
            Coordinates::CentreOfMass => per_axis.sum(),
        }
    }

    /// The same grid with `factor` times as many cells per axis.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        let axes = self.axes.iter().map(|a| Axis { cells: a.cells * factor, ..*a }).collect();
        Self::new(axes, self.rule, self.coordinates)
    }

    fn coarse(&self) -> Self {
        let axes = self.axes.iter().map(|a| Axis { cells: a.cells.div_ceil(2), ..*a }).collect();
        Self { axes, rule: self.rule, coordinates: self.coordinates }
    }

    /// Grid around the packet support with the kernel phase advancing at most
    /// [`PHASE_PER_CELL`] per cell. Separable two-body packets get a centre-of-mass grid.
    pub fn auto(
        packet: &WavePacket,
        t: f64,
        params: &ModelParams,
        outputs: &[Configuration],
    ) -> Result<Self> {
        match packet.centre_profile() {
            Some(profile) if params.n == 2 => Self::auto_centre_of_mass(packet, &profile, t, params, outputs),
            _ => Self::auto_cartesian(packet, t, params, outputs),
        }
    }

    /// Tensor-product grid with identical windows on every axis.
    pub fn auto_cartesian(
        packet: &WavePacket,
        t: f64,
        params: &ModelParams,
        outputs: &[Configuration],
    ) -> Result<Self> {
        let f = TimeFactors::new(t, params.omega)?;
        let (lo, hi) = packet.support();
        let xmax = outputs.iter().flat_map(|x| x.as_slice().iter()).fold(0.0f64, |m, v| m.max(v.abs()));
        let envelope = packet.max_momentum() + 6.0 / packet.min_width();
        let axis = sized_axis(lo, hi, xmax, envelope, f);
        Self::new(vec![axis; packet.particles()], QuadratureRule::GaussLegendre(4), Coordinates::Cartesian)
    }

    fn auto_centre_of_mass(
        packet: &WavePacket,
        profile: &CentreProfile,
        t: f64,
        params: &ModelParams,
        outputs: &[Configuration],
    ) -> Result<Self> {
        let f = TimeFactors::new(t, params.omega)?;
        let xmax = outputs
            .iter()
            .flat_map(|x| {
                let (a, b) = rotate(x.as_slice());
                [a.abs(), b.abs()]
            })
            .fold(0.0f64, f64::max);
        let envelope = std::f64::consts::SQRT_2 * packet.max_momentum() + 6.0 / packet.min_width();
        let reach = if profile.linear { 7.0 } else { 6.0 } * profile.width;
        let big = sized_axis(profile.centre - reach, profile.centre + reach, xmax, envelope, f);
        let ext = profile.relative_extent;
        let small = sized_axis(-ext, ext, xmax, envelope, f);
        Self::new(vec![big, small], QuadratureRule::GaussLegendre(4), Coordinates::CentreOfMass)
    }
}

/// Cells on `[lo, hi]` so that the kernel phase, bounded by `(|C| |y| + |x|)/|S|`
/// plus the packet's own wavenumber, advances at most [`PHASE_PER_CELL`] per cell.
fn sized_axis(lo: f64, hi: f64, xmax: f64, envelope: f64, f: TimeFactors) -> Axis {
    let ymax = lo.abs().max(hi.abs());
    let freq = (f.c.abs() * ymax + xmax) / f.s.abs() + envelope;
    let cells = ((hi - lo) * freq / PHASE_PER_CELL).ceil().max(8.0) as usize;
    Axis { lo, hi, cells }
}

fn rotate(x: &[f64]) -> (f64, f64) {
    ((x[0] + x[1]) * FRAC_1_SQRT_2, (x[0] - x[1]) * FRAC_1_SQRT_2)
}

/// Which kernel implementation the quadrature integrates against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelRoute {
    /// [`Propagator`], through the eigenfunction.
    #[default]
    General,
    /// Antisymmetrized Mehler product; `l = 0` only.
    ZeroCoupling,
}

#[derive(Debug, Clone)]
pub struct EvolveOptions {
    pub kernel: KernelRoute,
    /// Relative error above which a [`ConvergenceWarning`] is attached.
    pub tolerance: f64,
    /// Compare against a half-resolution grid to estimate the error.
    pub estimate_error: bool,
    /// Coefficient table; resolved automatically when absent.
    pub table: Option<CoefficientTable>,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { kernel: KernelRoute::General, tolerance: 1e-3, estimate_error: true, table: None }
    }
}

/// Richardson error estimate exceeding the requested tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceWarning {
    pub estimate: f64,
    pub tolerance: f64,
}

impl fmt::Display for ConvergenceWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "quadrature not converged: estimated relative error {:.3e} exceeds {:.3e}; refine the grid",
            self.estimate, self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub values: Vec<Complex64>,
    /// Relative Richardson estimate `max |I_h - I_2h| / (2^p - 1) / max |I_h|`.
    pub error_estimate: Option<f64>,
    pub warning: Option<ConvergenceWarning>,
    /// Kernel evaluations per output point.
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub initial: f64,
    pub evolved: f64,
    /// `|evolved / initial - 1|`.
    pub drift: f64,
    pub error_estimate: Option<f64>,
}

enum Kernel {
    General(Box<Propagator>),
    Zero(ZeroCouplingKernel),
}

impl Kernel {
    fn new(params: &ModelParams, opts: &EvolveOptions) -> Result<Self> {
        match opts.kernel {
            KernelRoute::General => {
                let prop = match &opts.table {
                    Some(table) => Propagator::new(*params, table.clone())?,
                    None => Propagator::for_params(*params)?,
                };
                Ok(Kernel::General(Box::new(prop)))
            }
            KernelRoute::ZeroCoupling => {
                if params.ell != 0 {
                    return Err(Error::Domain("the zero-coupling kernel needs l = 0".into()));
                }
                Ok(Kernel::Zero(ZeroCouplingKernel::new(params.n)?))
            }
        }
    }

    #[inline]
    fn eval(&self, x: &[f64], y: &[f64], f: TimeFactors) -> Complex64 {
        match self {
            Kernel::General(p) => p.eval_at(x, y, f),
            Kernel::Zero(k) => k.eval_at(x, y, f),
        }
    }
}

/// Nodes with `w psi_0` after pruning the negligible tail.
fn pruned<T: Send>(items: Vec<(T, Complex64)>) -> Vec<(T, Complex64)> {
    let max = items.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    items.into_iter().filter(|(_, c)| c.norm() > PRUNE * max).collect()
}

struct Engine<'a> {
    packet: &'a WavePacket,
    kernel: Kernel,
    f: TimeFactors,
}

/// Separable evaluation: `psi(x, t) = A_t(X) B_t(x_r)`.
struct Factorized<'a> {
    engine: &'a Engine<'a>,
    big: Vec<(f64, Complex64)>,
    small: Vec<(f64, Complex64)>,
    norm: Complex64,
}

impl Factorized<'_> {
    fn centre(&self, big: f64) -> Complex64 {
        let f = self.engine.f;
        ordered_sum(self.big.len(), |k| {
            let (r, c) = self.big[k];
            mehler_complex(big.into(), r.into(), f) * c
        })
    }

    fn relative(&self, small: f64) -> Complex64 {
        let e = self.engine;
        let x = [small * FRAC_1_SQRT_2, -small * FRAC_1_SQRT_2];
        let sum = ordered_sum(self.small.len(), |k| {
            let (r, c) = self.small[k];
            e.kernel.eval(&x, &[r * FRAC_1_SQRT_2, -r * FRAC_1_SQRT_2], e.f) * c
        });
        sum * self.norm
    }
}

impl<'a> Engine<'a> {
    fn factorized(&'a self, grid: &QuadratureGrid) -> Result<Factorized<'a>> {
        let profile = self
            .packet
            .centre_profile()
            .ok_or_else(|| Error::Domain("centre-of-mass grids need a separable two-body packet".into()))?;
        let big_rule = grid.rule.build(grid.axes[0].lo, grid.axes[0].hi, grid.axes[0].cells);
        let small_rule = grid.rule.build(grid.axes[1].lo, grid.axes[1].hi, grid.axes[1].cells);
        let big = pruned(
            big_rule.nodes.iter().zip(&big_rule.weights).map(|(&r, &w)| (r, w * profile.value(r))).collect(),
        );
        let small = pruned(
            small_rule
                .nodes
                .iter()
                .zip(&small_rule.weights)
                .map(|(&r, &w)| (r, w * self.packet.relative_value(&profile, r)))
                .collect(),
        );
        // the two-body kernel factorizes as K_1(X, R) k(x_r, r); k = K_2 / K_1(0, 0)
        let norm = mehler_complex(0.0.into(), 0.0.into(), self.f).inv();
        Ok(Factorized { engine: self, big, small, norm })
    }

    fn cartesian_nodes(&self, grid: &QuadratureGrid) -> Vec<(Vec<f64>, Complex64)> {
        let n = grid.axes.len();
        // axis j is shifted by j/n of a cell so that nodes avoid y_i = y_j
        let rules: Vec<CompositeRule> = grid
            .axes
            .iter()
            .enumerate()
            .map(|(j, a)| {
                let shift = j as f64 * a.cell_width() / n as f64;
                grid.rule.build(a.lo + shift, a.hi + shift, a.cells)
            })
            .collect();
        let nodes = tensor_nodes(&rules)
            .into_iter()
            .map(|(y, w)| {
                let c = w * self.packet.value(&y);
                (y, c)
            })
            .collect();
        pruned(nodes)
    }

    fn evaluate(&self, grid: &QuadratureGrid, outputs: &[Configuration]) -> Result<Vec<Complex64>> {
        match grid.coordinates {
            Coordinates::CentreOfMass => {
                let fac = self.factorized(grid)?;
                Ok(outputs
                    .iter()
                    .map(|x| {
                        let (big, small) = rotate(x.as_slice());
                        fac.centre(big) * fac.relative(small)
                    })
                    .collect())
            }
            Coordinates::Cartesian => {
                let nodes = self.cartesian_nodes(grid);
                Ok(outputs
                    .iter()
                    .map(|x| {
                        ordered_sum(nodes.len(), |k| {
                            let (y, c) = &nodes[k];
                            self.kernel.eval(x.as_slice(), y, self.f) * c
                        })
                    })
                    .collect())
            }
        }
    }
}

/// Tensor product of one-dimensional rules.
fn tensor_nodes(rules: &[CompositeRule]) -> Vec<(Vec<f64>, f64)> {
    let n = rules.len();
    let mut out = Vec::with_capacity(rules.iter().map(CompositeRule::len).product());
    let mut idx = vec![0usize; n];
    'odometer: loop {
        out.push((
            (0..n).map(|j| rules[j].nodes[idx[j]]).collect(),
            (0..n).map(|j| rules[j].weights[idx[j]]).product(),
        ));
        for j in 0..n {
            idx[j] += 1;
            if idx[j] < rules[j].len() {
                continue 'odometer;
            }
            idx[j] = 0;
        }
        break;
    }
    out
}

fn check_inputs(packet: &WavePacket, params: &ModelParams, grid: &QuadratureGrid) -> Result<()> {
    if params.n > 3 {
        return Err(Error::SizeLimit(format!("evolution supports N <= 3, got N={}", params.n)));
    }
    if packet.particles() != params.n {
        return Err(Error::Domain(format!(
            "packet has {} particles, model has N={}",
            packet.particles(),
            params.n
        )));
    }
    match grid.coordinates {
        Coordinates::Cartesian if grid.axes.len() != params.n => {
            Err(Error::Domain(format!("grid has {} axes, N={}", grid.axes.len(), params.n)))
        }
        Coordinates::CentreOfMass if params.n != 2 => {
            Err(Error::Domain("centre-of-mass grids need N = 2".into()))
        }
        _ => Ok(()),
    }
}

fn richardson(fine: &[Complex64], coarse: &[Complex64], order: i32) -> f64 {
    let scale = fine.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let diff = fine.iter().zip(coarse).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return if diff == 0.0 { 0.0 } else { f64::INFINITY };
    }
    diff / (2f64.powi(order) - 1.0) / scale
}

/// `psi(x, t) = int K_N(x, y; t) psi_0(y) d^N y` at each output configuration.
pub fn evolve(
    packet: &WavePacket,
    t: f64,
    params: &ModelParams,
    grid: &QuadratureGrid,
    outputs: &[Configuration],
) -> Result<Evolution> {
    evolve_with(packet, t, params, grid, outputs, &EvolveOptions::default())
}

pub fn evolve_with(
    packet: &WavePacket,
    t: f64,
    params: &ModelParams,
    grid: &QuadratureGrid,
    outputs: &[Configuration],
    opts: &EvolveOptions,
) -> Result<Evolution> {
    check_inputs(packet, params, grid)?;
    for x in outputs {
        if x.len() != params.n {
            return Err(Error::Domain(format!("output point has {} entries, N={}", x.len(), params.n)));
        }
    }
    let engine = Engine { packet, kernel: Kernel::new(params, opts)?, f: TimeFactors::new(t, params.omega)? };
    let values = engine.evaluate(grid, outputs)?;
    let error_estimate = if opts.estimate_error {
        let coarse = engine.evaluate(&grid.coarse(), outputs)?;
        Some(richardson(&values, &coarse, grid.rule.order()))
    } else {
        None
    };
    let warning = error_estimate
        .filter(|&e| !(e <= opts.tolerance))
        .map(|estimate| ConvergenceWarning { estimate, tolerance: opts.tolerance });
    Ok(Evolution { values, error_estimate, warning, points: grid.points() })
}

/// Output window for the norm integral: the input window widened by the distance
/// the packet's momentum content can travel in time `t`.
fn output_axis(axis: &Axis, speed: f64, t: f64) -> Axis {
    let grow = speed * t.abs();
    let (lo, hi) = (axis.lo - grow, axis.hi + grow);
    let cells = ((hi - lo) * speed / PHASE_PER_CELL).ceil().max(16.0) as usize;
    Axis { lo, hi, cells }
}

/// `int |psi(x, t)|^2 dx` against `int |psi_0|^2 dx`, both on the same output grid.
pub fn norm_drift(
    packet: &WavePacket,
    t: f64,
    params: &ModelParams,
    grid: &QuadratureGrid,
    opts: &EvolveOptions,
) -> Result<NormReport> {
    check_inputs(packet, params, grid)?;
    let engine = Engine { packet, kernel: Kernel::new(params, opts)?, f: TimeFactors::new(t, params.omega)? };
    let speed = std::f64::consts::SQRT_2 * packet.max_momentum() + 6.0 / packet.min_width();
    let out_rule = QuadratureRule::GaussLegendre(8);
    let axes: Vec<Axis> = grid.axes.iter().map(|a| output_axis(a, speed, t)).collect();
    let rules: Vec<CompositeRule> = axes.iter().map(|a| out_rule.build(a.lo, a.hi, a.cells)).collect();
    let weighted = |rule: &CompositeRule, f: &dyn Fn(f64) -> Complex64| -> f64 {
        rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| w * f(x).norm_sqr()).sum()
    };
    let (initial, evolved, error_estimate) = match grid.coordinates {
        Coordinates::CentreOfMass => {
            let profile = packet.centre_profile().ok_or_else(|| {
                Error::Domain("centre-of-mass grids need a separable two-body packet".into())
            })?;
            let initial = weighted(&rules[0], &|r| profile.value(r))
                * weighted(&rules[1], &|r| packet.relative_value(&profile, r));
            let fine = engine.factorized(grid)?;
            let evolved =
                weighted(&rules[0], &|r| fine.centre(r)) * weighted(&rules[1], &|r| fine.relative(r));
            let error = if opts.estimate_error {
                let coarse_grid = grid.coarse();
                let coarse = engine.factorized(&coarse_grid)?;
                let coarse_norm =
                    weighted(&rules[0], &|r| coarse.centre(r)) * weighted(&rules[1], &|r| coarse.relative(r));
                Some((evolved - coarse_norm).abs() / (2f64.powi(grid.rule.order()) - 1.0) / evolved)
            } else {
                None
            };
            (initial, evolved, error)
        }
        Coordinates::Cartesian => {
            let nodes = tensor_nodes(&rules);
            let outputs: Vec<Configuration> =
                nodes.iter().map(|(y, _)| Configuration::new(y.clone())).collect::<Result<_>>()?;
            let ev = evolve_with(packet, t, params, grid, &outputs, opts)?;
            let initial = nodes.iter().map(|(y, w)| w * packet.value(y).norm_sqr()).sum();
            let evolved = nodes.iter().zip(&ev.values).map(|((_, w), v)| w * v.norm_sqr()).sum();
            (initial, evolved, ev.error_estimate)
        }
    };
    Ok(NormReport { initial, evolved, drift: (evolved / initial - 1.0).abs(), error_estimate })
}
