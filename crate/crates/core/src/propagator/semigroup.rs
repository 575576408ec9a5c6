//! Composition `int K(x, z; t1) K(z, y; t2) dz` evaluated on a rotated contour.
//!
//! On the real axis the integrand oscillates without decay. Every coordinate is
//! instead moved to `z = z0 + r e^{i theta}` around the stationary point `z0` of the
//! Gaussian part, where the integrand decays like `exp(-a sin(2 theta) r^2)`. The
//! kernels are entire in `z`, so the deformation does not change the value.

use num_complex::Complex64;
use num_traits::Zero;

use super::kernel::mehler_complex;
use super::{Propagator, TimeFactors};
use crate::error::{Error, Result};
use crate::quadrature::{ordered_sum, CompositeRule};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourRule {
    /// Rotation angle of each integration axis.
    pub theta: f64,
    /// Gauss-Legendre panels per axis.
    pub panels: usize,
    /// Nodes per panel.
    pub order: usize,
    /// Target decay exponent `a sin(2 theta) R^2` at the contour ends.
    pub decay: f64,
}

impl Default for ContourRule {
    fn default() -> Self {
        Self { theta: std::f64::consts::FRAC_PI_4, panels: 24, order: 10, decay: 60.0 }
    }
}

struct Contour {
    centre: Vec<f64>,
    rule: CompositeRule,
    dir: Complex64,
}

fn contour(x: &[f64], y: &[f64], f1: TimeFactors, f2: TimeFactors, rule: &ContourRule) -> Result<Contour> {
    let curvature = f1.c / f1.s + f2.c / f2.s;
    if curvature <= 0.0 {
        return Err(Error::Domain("composition needs t1 + t2 inside the first caustic window".into()));
    }
    let a = 0.5 * curvature;
    let centre: Vec<f64> = x.iter().zip(y).map(|(xi, yi)| (xi / f1.s + yi / f2.s) / curvature).collect();
    // exchanged pairings shift the peak by up to |b| / 2a along the contour
    let mut spread = 0.0f64;
    for i in 0..x.len() {
        for j in 0..x.len() {
            spread = spread.max((x[i] - x[j]).abs() / f1.s.abs() + (y[i] - y[j]).abs() / f2.s.abs());
        }
    }
    let s2 = (2.0 * rule.theta).sin();
    let half = (rule.decay / (a * s2)).sqrt() + spread / (2.0 * a);
    Ok(Contour {
        centre,
        rule: CompositeRule::new(-half, half, rule.panels, rule.order),
        dir: Complex64::from_polar(1.0, rule.theta),
    })
}

fn integrate<F>(c: &Contour, n: usize, f: F) -> Complex64
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    let m = c.rule.len();
    let total = m.pow(n as u32);
    let jac = c.dir.powu(n as u32);
    let sum = ordered_sum(total, |mut idx| {
        let mut z = Vec::with_capacity(n);
        let mut w = 1.0;
        for axis in (0..n).rev() {
            let k = idx % m;
            idx /= m;
            w *= c.rule.weights[k];
            z.push(c.centre[axis] + c.rule.nodes[k] * c.dir);
        }
        z.reverse();
        w * f(&z)
    });
    sum * jac
}

/// `int K_1(x, z; t1) K_1(z, y; t2) dz` for the single harmonic oscillator.
pub fn compose_mehler(x: f64, y: f64, t1: f64, t2: f64, omega: f64, rule: &ContourRule) -> Result<Complex64> {
    let (f1, f2) = (TimeFactors::new(t1, omega)?, TimeFactors::new(t2, omega)?);
    let c = contour(&[x], &[y], f1, f2, rule)?;
    Ok(integrate(&c, 1, |z| mehler_complex(x.into(), z[0], f1) * mehler_complex(z[0], y.into(), f2)))
}

/// `int K_N(x, z; t1) K_N(z, y; t2) d^N z` for the interacting kernel.
pub fn compose_kernel(
    prop: &Propagator,
    x: &[f64],
    y: &[f64],
    t1: f64,
    t2: f64,
    rule: &ContourRule,
) -> Result<Complex64> {
    let params = prop.params();
    let n = params.n;
    if x.len() != n || y.len() != n {
        return Err(Error::Domain(format!("expected {n} positions in x and y")));
    }
    if n > 3 {
        return Err(Error::SizeLimit("contour composition supports N <= 3".into()));
    }
    let (f1, f2) = (TimeFactors::new(t1, params.omega)?, TimeFactors::new(t2, params.omega)?);
    let c = contour(x, y, f1, f2, rule)?;
    let xc: Vec<Complex64> = x.iter().map(|&v| v.into()).collect();
    let yc: Vec<Complex64> = y.iter().map(|&v| v.into()).collect();
    Ok(integrate(&c, n, |z| {
        let a = prop.eval_complex(&xc, z, f1);
        if a.is_zero() {
            return a;
        }
        a * prop.eval_complex(z, &yc, f2)
    }))
}
