//! The two-body Laurent polynomials `F_k(X) = sum_{a=k}^{l} (l+a)!/((l-a)!(a-k)!) X^{-a}`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::foundation::{factorial, factorial_ratio_u};

/// Exact coefficient of `X^{-a}` in `F_k` for coupling `ell`; zero when `a < k` or `a > ell`.
pub fn fk_coefficient(ell: u32, k: u32, a: u32) -> BigRational {
    if a < k || a > ell {
        return BigRational::zero();
    }
    factorial_ratio_u(ell + a, ell - a) / BigRational::from_integer(factorial(a - k).into())
}

/// Exact Laurent coefficients of `F_k`, indexed by the power `a` in `0..=ell`.
pub fn fk_coefficients(ell: u32, k: u32) -> Vec<BigRational> {
    (0..=ell).map(|a| fk_coefficient(ell, k, a)).collect()
}

/// Eagerly built table of every `F_k` for one coupling, exact and in `f64`.
#[derive(Debug, Clone)]
pub struct FkCache {
    ell: u32,
    exact: Vec<Vec<BigRational>>,
    float: Vec<Vec<f64>>,
}

impl FkCache {
    pub fn new(ell: u32) -> Self {
        let exact: Vec<Vec<BigRational>> = (0..=ell).map(|k| fk_coefficients(ell, k)).collect();
        let float =
            exact.iter().map(|row| row.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()).collect();
        Self { ell, exact, float }
    }

    #[inline]
    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Exact coefficient of `X^{-a}` in `F_k`.
    #[inline]
    pub fn exact(&self, k: u32, a: u32) -> &BigRational {
        &self.exact[k as usize][a as usize]
    }

    #[inline]
    pub fn float(&self, k: u32, a: u32) -> f64 {
        self.float[k as usize][a as usize]
    }

    /// `F_k` at `X` given the precomputed `w = 1/X`, by Horner in `w`.
    #[inline]
    pub fn eval_inverse(&self, k: u32, w: Complex64) -> Complex64 {
        let row = &self.float[k as usize];
        let mut acc = Complex64::zero();
        for a in (k..=self.ell).rev() {
            acc = acc * w + row[a as usize];
        }
        acc * w.powu(k)
    }
}

fn check(k: u32, x: Complex64, ell: u32) -> Result<()> {
    if k > ell {
        return Err(Error::Domain(format!("F_{k} undefined for l={ell}")));
    }
    if x.is_zero() {
        return Err(Error::Singularity("F_k evaluated at X = 0".into()));
    }
    Ok(())
}

/// Evaluates `F_k(X)` for coupling `ell`.
pub fn f_poly(k: u32, x: Complex64, ell: u32) -> Result<Complex64> {
    check(k, x, ell)?;
    let w = x.inv();
    let mut acc = Complex64::zero();
    for a in (k..=ell).rev() {
        acc = acc * w + fk_coefficient(ell, k, a).to_f64().unwrap_or(f64::NAN);
    }
    Ok(acc * w.powu(k))
}

/// Evaluates `d^k/ds^k F_0(X/s)` at `s = 1` by differentiating each monomial `s^a X^{-a}`.
///
/// Independent of [`f_poly`]; used to cross-check it.
pub fn f_descendant_check(k: u32, x: Complex64, ell: u32) -> Result<Complex64> {
    check(k, x, ell)?;
    let w = x.inv();
    let mut acc = Complex64::zero();
    for a in 0..=ell {
        if a < k {
            continue;
        }
        // d^k/ds^k s^a at s = 1 is the falling factorial a!/(a-k)!
        let coeff = fk_coefficient(ell, 0, a) * factorial_ratio_u(a, a - k);
        acc += w.powu(a) * coeff.to_f64().unwrap_or(f64::NAN);
    }
    Ok(acc)
}
