use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{kernel_l0, KernelPoint, Propagator, TimeFactors};
use crate::error::{Error, Result};

/// Square `u-v` grid for the three-body kernel on the plane `x_1 + x_2 + x_3 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    /// Nodes per axis, endpoints included.
    pub res: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { lo: -4.0, hi: 4.0, res: 256 }
    }
}

impl GridSpec {
    pub fn node(&self, k: usize) -> f64 {
        if self.res == 1 {
            return 0.5 * (self.lo + self.hi);
        }
        self.lo + (self.hi - self.lo) * k as f64 / (self.res - 1) as f64
    }
}

/// Positions with `u = (x_1 - x_2)/sqrt 2`, `v = (x_1 + x_2 - 2 x_3)/sqrt 6` and zero centre of mass.
pub fn uv_to_x(u: f64, v: f64) -> [f64; 3] {
    let s6 = 6f64.sqrt();
    [u / SQRT_2 + v / s6, -u / SQRT_2 + v / s6, -2.0 * v / s6]
}

/// Kernel values over a [`GridSpec`]; row `j` holds `v = node(j)`, column `i` holds `u = node(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureGrid {
    pub spec: GridSpec,
    pub values: Vec<Complex64>,
}

impl FigureGrid {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.spec.res + i]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Index of the node closest to `value`.
    pub fn nearest(&self, value: f64) -> usize {
        let s = &self.spec;
        if s.res == 1 {
            return 0;
        }
        let k = ((value - s.lo) / (s.hi - s.lo) * (s.res - 1) as f64).round();
        k.clamp(0.0, (s.res - 1) as f64) as usize
    }
}

/// Evaluates `K_3(x(u, v), y; t)` over the grid, in parallel over rows.
///
/// `prop = None` selects the zero-coupling antisymmetrized Mehler product.
pub fn figure_grid(
    prop: Option<&Propagator>,
    y: &[f64],
    t: f64,
    omega: f64,
    spec: GridSpec,
) -> Result<FigureGrid> {
    if y.len() != 3 {
        return Err(Error::Domain("the u-v grid needs N = 3".into()));
    }
    if let Some(p) = prop {
        if p.params().n != 3 {
            return Err(Error::Domain("the u-v grid needs N = 3".into()));
        }
    }
    if spec.res == 0 || !(spec.lo < spec.hi) {
        return Err(Error::Domain(format!("invalid grid bounds {spec:?}")));
    }
    let f = TimeFactors::new(t, omega)?;
    let res = spec.res;
    let rows: Vec<Vec<Complex64>> = (0..res)
        .into_par_iter()
        .map(|j| {
            let v = spec.node(j);
            (0..res)
                .map(|i| {
                    let x = uv_to_x(spec.node(i), v);
                    match prop {
                        Some(p) => Ok(p.eval_at(&x, y, f)),
                        None => kernel_l0(&KernelPoint::new(x.to_vec(), y.to_vec(), t)?, 3, omega),
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(FigureGrid { spec, values: rows.into_iter().flatten().collect() })
}
