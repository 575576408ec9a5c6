use num_complex::Complex64;

use super::{Propagator, TimeFactors};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative residual of `(i d/dt - H) K_N(x, y; t)` by five-point central differences.
///
/// `ht` is the time step, `hx` the spatial step of the Laplacian in `x`. The result is
/// `|i K_t - H K| / max(|i K_t|, |H K|)`.
pub fn schrodinger_residual(
    prop: &Propagator,
    x: &[f64],
    y: &[f64],
    t: f64,
    ht: f64,
    hx: f64,
) -> Result<f64> {
    let params = prop.params();
    let n = params.n;
    if x.len() != n || y.len() != n {
        return Err(Error::Domain(format!("expected {n} positions in x and y")));
    }
    let omega = params.omega;
    let k =
        |xs: &[f64], tt: f64| -> Result<Complex64> { Ok(prop.eval_at(xs, y, TimeFactors::new(tt, omega)?)) };
    let k0 = k(x, t)?;
    let dt =
        (8.0 * (k(x, t + ht)? - k(x, t - ht)?) - (k(x, t + 2.0 * ht)? - k(x, t - 2.0 * ht)?)) / (12.0 * ht);
    let mut lap = Complex64::new(0.0, 0.0);
    let mut xs = x.to_vec();
    for i in 0..n {
        let mut at = |offset: f64| -> Result<Complex64> {
            xs[i] = x[i] + offset;
            let v = k(&xs, t);
            xs[i] = x[i];
            v
        };
        let near = at(hx)? + at(-hx)?;
        let far = at(2.0 * hx)? + at(-2.0 * hx)?;
        lap += (16.0 * near - far - 30.0 * k0) / (12.0 * hx * hx);
    }
    let mut potential = 0.5 * omega * omega * x.iter().map(|v| v * v).sum::<f64>();
    let g = params.ell as f64 * (params.ell as f64 + 1.0);
    for i in 0..n {
        for j in i + 1..n {
            potential += g / (x[i] - x[j]).powi(2);
        }
    }
    let h_k = -0.5 * lap + potential * k0;
    let lhs = I * dt;
    Ok((lhs - h_k).norm() / lhs.norm().max(h_k.norm()))
}
