use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundation::permutations;

/// Exchange symmetry imposed on the orbital product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exchange {
    /// Plain product, no permutation sum.
    Product,
    Symmetric,
    Antisymmetric,
}

impl Exchange {
    /// Symmetry sector of the model with coupling `ell`: exchange sign `(-1)^(l+1)`.
    pub fn for_ell(ell: u32) -> Self {
        if ell % 2 == 1 {
            Exchange::Symmetric
        } else {
            Exchange::Antisymmetric
        }
    }
}

/// One-particle factor of a packet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Orbital {
    /// `(pi w^2)^(-1/4) exp(-(y - c)^2 / 2w^2 + i k y)`.
    Gaussian { centre: f64, width: f64, momentum: f64 },
    /// Normalized harmonic oscillator eigenfunction of frequency `omega`.
    Oscillator { level: u32, omega: f64 },
}

impl Orbital {
    pub fn value(&self, y: f64) -> Complex64 {
        match *self {
            Orbital::Gaussian { centre, width, momentum } => {
                let norm = (PI * width * width).powf(-0.25);
                let d = (y - centre) / width;
                Complex64::from_polar(norm * (-0.5 * d * d).exp(), momentum * y)
            }
            Orbital::Oscillator { level, omega } => {
                Complex64::new(omega.powf(0.25) * hermite_function(level, omega.sqrt() * y), 0.0)
            }
        }
    }

    /// Interval holding all but a Gaussian tail of `exp(-18)` of the orbital.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Orbital::Gaussian { centre, width, .. } => (centre - 6.0 * width, centre + 6.0 * width),
            Orbital::Oscillator { level, omega } => {
                let r = ((2 * level + 1) as f64).sqrt() + 6.0;
                (-r / omega.sqrt(), r / omega.sqrt())
            }
        }
    }

    /// Length scale over which the envelope changes.
    pub fn width(&self) -> f64 {
        match *self {
            Orbital::Gaussian { width, .. } => width,
            Orbital::Oscillator { level, omega } => 1.0 / (omega * (2 * level + 1) as f64).sqrt(),
        }
    }

    pub fn momentum(&self) -> f64 {
        match *self {
            Orbital::Gaussian { momentum, .. } => momentum,
            Orbital::Oscillator { level, omega } => (omega * (2 * level + 1) as f64).sqrt(),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Orbital::Gaussian { centre, width, momentum } => {
                centre.is_finite() && momentum.is_finite() && width.is_finite() && width > 0.0
            }
            Orbital::Oscillator { omega, level } => omega.is_finite() && omega > 0.0 && level <= 64,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid orbital {self:?}")))
        }
    }
}

/// Hermite function `H_n(xi) exp(-xi^2/2) / sqrt(2^n n! sqrt(pi))`.
fn hermite_function(n: u32, xi: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    for k in 0..n {
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * xi * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Centre-of-mass factor `A(R)` of a two-body packet that factorizes in
/// `R = (y1 + y2)/sqrt 2`, `r = (y1 - y2)/sqrt 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CentreProfile {
    pub centre: f64,
    pub width: f64,
    pub momentum: f64,
    /// Extra factor `R`.
    pub linear: bool,
    /// Bound on `|r|` outside which the relative factor is negligible.
    pub relative_extent: f64,
}

impl CentreProfile {
    pub fn value(&self, r: f64) -> Complex64 {
        let d = (r - self.centre) / self.width;
        let v = Complex64::from_polar((-0.5 * d * d).exp(), self.momentum * r);
        if self.linear {
            v * r
        } else {
            v
        }
    }

    /// A point where the profile does not vanish.
    pub fn anchor(&self) -> f64 {
        self.centre + self.width
    }
}

/// Initial state `psi_0` built from one orbital per particle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavePacket {
    orbitals: Vec<Orbital>,
    exchange: Exchange,
}

impl WavePacket {
    pub fn new(orbitals: Vec<Orbital>, exchange: Exchange) -> Result<Self> {
        if orbitals.is_empty() || orbitals.len() > 8 {
            return Err(Error::Domain(format!("packets need 1..=8 orbitals, got {}", orbitals.len())));
        }
        for o in &orbitals {
            o.validate()?;
        }
        Ok(Self { orbitals, exchange })
    }

    /// Product of Gaussians, one per particle.
    pub fn gaussian(centres: &[f64], widths: &[f64], momenta: &[f64], exchange: Exchange) -> Result<Self> {
        let n = centres.len();
        if widths.len() != n || momenta.len() != n {
            return Err(Error::Domain("centres, widths and momenta differ in length".into()));
        }
        let orbitals = (0..n)
            .map(|i| Orbital::Gaussian { centre: centres[i], width: widths[i], momentum: momenta[i] })
            .collect();
        Self::new(orbitals, exchange)
    }

    /// Harmonic oscillator states of the given levels.
    pub fn oscillator(levels: &[u32], omega: f64, exchange: Exchange) -> Result<Self> {
        Self::new(levels.iter().map(|&level| Orbital::Oscillator { level, omega }).collect(), exchange)
    }

    pub fn particles(&self) -> usize {
        self.orbitals.len()
    }

    pub fn orbitals(&self) -> &[Orbital] {
        &self.orbitals
    }

    pub fn exchange(&self) -> Exchange {
        self.exchange
    }

    /// `psi_0(y)`: the orbital product, summed over permutations with the exchange sign.
    pub fn value(&self, y: &[f64]) -> Complex64 {
        let n = self.orbitals.len();
        debug_assert_eq!(y.len(), n);
        if self.exchange == Exchange::Product || n == 1 {
            return self.orbitals.iter().zip(y).map(|(o, &v)| o.value(v)).product();
        }
        // table of orbital values, then the signed or plain permutation sum
        let table: Vec<Vec<Complex64>> =
            self.orbitals.iter().map(|o| y.iter().map(|&v| o.value(v)).collect()).collect();
        let perms = permutations(n).expect("orbital count already bounded");
        let mut total = Complex64::zero();
        for sigma in &perms {
            let mut prod = Complex64::new(1.0, 0.0);
            for (i, row) in table.iter().enumerate() {
                prod *= row[sigma.apply(i)];
            }
            total += if self.exchange == Exchange::Antisymmetric { prod * sigma.sign() as f64 } else { prod };
        }
        total
    }

    /// Common interval covering every orbital's support.
    pub fn support(&self) -> (f64, f64) {
        self.orbitals
            .iter()
            .map(Orbital::support)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |acc, s| (acc.0.min(s.0), acc.1.max(s.1)))
    }

    pub(crate) fn min_width(&self) -> f64 {
        self.orbitals.iter().map(Orbital::width).fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn max_momentum(&self) -> f64 {
        self.orbitals.iter().map(|o| o.momentum().abs()).fold(0.0, f64::max)
    }

    /// Centre-of-mass factor when the two-body packet is a product `A(R) B(r)`.
    pub(crate) fn centre_profile(&self) -> Option<CentreProfile> {
        if self.orbitals.len() != 2 {
            return None;
        }
        match (self.orbitals[0], self.orbitals[1]) {
            (
                Orbital::Gaussian { centre: c1, width: w1, momentum: k1 },
                Orbital::Gaussian { centre: c2, width: w2, momentum: k2 },
            ) if w1 == w2 => Some(CentreProfile {
                centre: (c1 + c2) * FRAC_1_SQRT_2,
                width: w1,
                momentum: (k1 + k2) * FRAC_1_SQRT_2,
                linear: false,
                relative_extent: (c1 - c2).abs() * FRAC_1_SQRT_2 + 6.0 * w1,
            }),
            (Orbital::Oscillator { level: n1, omega: o1 }, Orbital::Oscillator { level: n2, omega: o2 })
                if o1 == o2 =>
            {
                let linear = match (n1.min(n2), n1.max(n2), self.exchange) {
                    (0, 0, _) => false,
                    (0, 1, Exchange::Symmetric) => true,
                    (0, 1, Exchange::Antisymmetric) => false,
                    _ => return None,
                };
                Some(CentreProfile {
                    centre: 0.0,
                    width: 1.0 / o1.sqrt(),
                    momentum: 0.0,
                    linear,
                    relative_extent: (3.0f64.sqrt() + 6.0) / o1.sqrt(),
                })
            }
            _ => None,
        }
    }

    /// Relative factor `B(r) = psi_0(y(R*, r)) / A(R*)` matching [`Self::centre_profile`].
    pub(crate) fn relative_value(&self, profile: &CentreProfile, r: f64) -> Complex64 {
        let anchor = profile.anchor();
        let y = [(anchor + r) * FRAC_1_SQRT_2, (anchor - r) * FRAC_1_SQRT_2];
        self.value(&y) / profile.value(anchor)
    }
}

/// `psi_0(x)` for a packet.
pub fn packet_value(packet: &WavePacket, x: &[f64]) -> Result<Complex64> {
    if x.len() != packet.particles() {
        return Err(Error::Domain(format!(
            "packet has {} particles, point has {}",
            packet.particles(),
            x.len()
        )));
    }
    Ok(packet.value(x))
}
