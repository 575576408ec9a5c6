use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundation::MAX_PERMUTATION_N;

/// Particle number, integer coupling `l` and trap frequency `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub ell: u32,
    pub omega: f64,
}

impl ModelParams {
    pub fn new(n: usize, ell: u32, omega: f64) -> Result<Self> {
        if n == 0 || n > MAX_PERMUTATION_N {
            return Err(Error::SizeLimit(format!("N must lie in 1..={MAX_PERMUTATION_N}, got {n}")));
        }
        if !omega.is_finite() || omega < 0.0 {
            return Err(Error::Domain(format!("omega must be finite and >= 0, got {omega}")));
        }
        Ok(Self { n, ell, omega })
    }

    /// Same model without the trap.
    pub fn trap_free(&self) -> Self {
        Self { omega: 0.0, ..*self }
    }

    /// `(-1)^{l+1}`: the exchange sign of the eigenfunctions.
    pub fn exchange_sign(&self) -> f64 {
        if self.ell.is_multiple_of(2) {
            -1.0
        } else {
            1.0
        }
    }
}

macro_rules! real_vector {
    ($name:ident, $what:literal) => {
        #[doc = concat!("A point of ", $what, ", one finite real per particle.")]
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(Vec<f64>);

        impl $name {
            pub fn new(values: Vec<f64>) -> Result<Self> {
                if let Some(v) = values.iter().find(|v| !v.is_finite()) {
                    return Err(Error::Domain(format!(concat!($what, " entry {} is not finite"), v)));
                }
                Ok(Self(values))
            }

            #[inline]
            pub fn as_slice(&self) -> &[f64] {
                &self.0
            }

            #[inline]
            pub fn len(&self) -> usize {
                self.0.len()
            }

            #[inline]
            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn into_inner(self) -> Vec<f64> {
                self.0
            }

            pub fn scaled(&self, s: f64) -> Self {
                Self(self.0.iter().map(|v| v * s).collect())
            }

            /// Smallest `|v_i - v_j|` over pairs, infinite for fewer than two entries.
            pub fn min_separation(&self) -> f64 {
                let mut best = f64::INFINITY;
                for i in 0..self.0.len() {
                    for j in i + 1..self.0.len() {
                        best = best.min((self.0[i] - self.0[j]).abs());
                    }
                }
                best
            }
        }

        impl std::ops::Index<usize> for $name {
            type Output = f64;
            fn index(&self, i: usize) -> &f64 {
                &self.0[i]
            }
        }

        impl AsRef<[f64]> for $name {
            fn as_ref(&self) -> &[f64] {
                &self.0
            }
        }
    };
}

real_vector!(Configuration, "configuration space");
real_vector!(Momentum, "momentum space");

impl Configuration {
    /// Shifts every particle by `a`.
    pub fn translated(&self, a: f64) -> Self {
        Self(self.0.iter().map(|v| v + a).collect())
    }
}

/// `n` points with consecutive gaps in `[gap, gap + 1.5)`, starting in `[-2, 0)`, in a
/// randomly rotated order.
///
/// Used for "well separated" samples: the Laurent terms of the correlation factor grow
/// like `(l+a)!/|X|^a`, so cancellation is only harmless when every `|x_i - x_j||p_k - p_l|`
/// is comfortably above the coupling.
pub fn separated_points<R: rand::Rng + ?Sized>(rng: &mut R, n: usize, gap: f64) -> Vec<f64> {
    let mut v = Vec::with_capacity(n);
    let mut acc = rng.random_range(-2.0..0.0);
    for _ in 0..n {
        v.push(acc);
        acc += gap + rng.random_range(0.0..1.5);
    }
    if n > 0 {
        let r = rng.random_range(0..n);
        v.rotate_left(r);
    }
    v
}

/// Gap for [`separated_points`] such that pair products exceed `2(l+1)`.
pub fn separation_gap(ell: u32) -> f64 {
    (2.0 * (ell as f64 + 1.0) + 2.0).sqrt().max(1.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ModelParams::new(0, 1, 1.0).is_err());
        assert!(ModelParams::new(9, 1, 1.0).is_err());
        assert!(ModelParams::new(3, 2, -1.0).is_err());
        assert!(ModelParams::new(3, 2, f64::NAN).is_err());
        assert!(Configuration::new(vec![1.0, f64::INFINITY]).is_err());
        let c = Configuration::new(vec![3.0, 1.0, 1.5]).unwrap();
        assert_eq!(c.min_separation(), 0.5);
        assert_eq!(c.translated(1.0).as_slice(), &[4.0, 2.0, 2.5]);
    }

    #[test]
    fn exchange_sign() {
        assert_eq!(ModelParams::new(2, 0, 0.0).unwrap().exchange_sign(), -1.0);
        assert_eq!(ModelParams::new(2, 1, 0.0).unwrap().exchange_sign(), 1.0);
    }
}
