use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::bessel::riccati_bessel;
use super::{Configuration, FkCache, ModelParams, Momentum};

use crate::coefficients::{to_representation, CoefficientTable, Representation};
use crate::error::{Error, Result};
use crate::foundation::{pairs, permutations, DoubleDouble, PairIndex, Permutation};

/// `|dx| |dp|` below which a pair evaluation is flagged as cancellation-prone.
pub const MIN_SEPARATION_PRODUCT: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Laurent exponents, coefficient, and the exponent sum mod 4.
type AccurateTerm = (Vec<u8>, DoubleDouble, usize);

/// `X_ij = -i (p_i - p_j)(x_i - x_j)`.
pub fn pair_variable(x: &[f64], p: &[f64], pair: PairIndex) -> Complex64 {
    let (i, j) = (pair.first(), pair.second());
    Complex64::new(0.0, -(p[i] - p[j]) * (x[i] - x[j]))
}

/// `prod_{i<j} (x_i - x_j)`.
pub fn vandermonde(x: &[f64]) -> f64 {
    let mut v = 1.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            v *= x[i] - x[j];
        }
    }
    v
}

/// Near-coincidence report attached to an otherwise valid value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyWarning {
    /// `min |x_i - x_j| * min |p_i - p_j|`.
    pub separation: f64,
}

impl fmt::Display for AccuracyWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pair separation product {:e} below {:e}; Laurent terms cancel catastrophically",
            self.separation, MIN_SEPARATION_PRODUCT
        )
    }
}

/// A value together with any accuracy warnings raised while computing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub warning: Option<AccuracyWarning>,
}

/// Scattering eigenfunction `Psi_N(x; p)` of the trap-free Hamiltonian for one coefficient table.
///
/// Construction flattens the table into `(multi-index, f64)` pairs and caches the
/// exact `F_k` coefficients; evaluation is then allocation-light and thread-safe.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    params: ModelParams,
    table: CoefficientTable,
    terms: Vec<(Vec<u8>, f64)>,
    fk: FkCache,
    perms: Vec<Permutation>,
    pairs: Vec<PairIndex>,
    exchange: Vec<f64>,
    /// Laurent coefficients in double-double with `sum(m) mod 4`, built on first use.
    accurate: OnceLock<Option<Vec<AccurateTerm>>>,
}

impl Eigenfunction {
    pub fn new(params: ModelParams, table: CoefficientTable) -> Result<Self> {
        if table.particles() != params.n || table.ell() != params.ell {
            return Err(Error::InvalidTable(format!(
                "table is for (N={}, l={}), model is (N={}, l={})",
                table.particles(),
                table.ell(),
                params.n,
                params.ell
            )));
        }
        let terms =
            table.terms().map(|(m, v)| (m.entries().to_vec(), v.to_f64().unwrap_or(f64::NAN))).collect();
        let perms = permutations(params.n)?;
        let exchange = perms.iter().map(|s| s.sign_pow(params.ell + 1)).collect();
        Ok(Self {
            params,
            fk: FkCache::new(params.ell),
            pairs: pairs(params.n),
            terms,
            table,
            perms,
            exchange,
            accurate: OnceLock::new(),
        })
    }

    /// Uses the best available table for `params` (closed form, conjecture, then oracle).
    pub fn for_params(params: ModelParams) -> Result<Self> {
        let table = crate::oracle::resolve_table(params.n, params.ell, crate::oracle::TableSource::Auto)?;
        Self::new(params, table)
    }

    #[inline]
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    #[inline]
    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }

    fn check_len(&self, x: usize, p: usize) -> Result<()> {
        if x != self.params.n || p != self.params.n {
            return Err(Error::Domain(format!(
                "expected {} coordinates and momenta, got {x} and {p}",
                self.params.n
            )));
        }
        Ok(())
    }

    /// Correlation factor from the pair variables `X_ij`, all nonzero.
    fn correlation_from_pairs(&self, xs: &[Complex64], scratch: &mut Vec<Complex64>) -> Complex64 {
        if self.params.ell == 0 {
            return self.terms.first().map_or(Complex64::zero(), |t| t.1.into());
        }
        let width = self.params.ell as usize + 1;
        scratch.clear();
        for &x in xs {
            let w = x.inv();
            match self.table.representation() {
                Representation::LaurentMonomial => {
                    let mut pw = Complex64::new(1.0, 0.0);
                    for _ in 0..width {
                        scratch.push(pw);
                        pw *= w;
                    }
                }
                Representation::ProductOfF => {
                    for k in 0..width {
                        scratch.push(self.fk.eval_inverse(k as u32, w));
                    }
                }
            }
        }
        let mut sum = Complex64::zero();
        for (entries, c) in &self.terms {
            let mut prod = Complex64::new(*c, 0.0);
            for (slot, &e) in entries.iter().enumerate() {
                prod *= scratch[slot * width + e as usize];
            }
            sum += prod;
        }
        sum
    }

    /// `F_N(x; p)` for complex arguments.
    pub fn script_f_complex(&self, x: &[Complex64], p: &[Complex64]) -> Result<Complex64> {
        self.check_len(x.len(), p.len())?;
        let mut xs = Vec::with_capacity(self.pairs.len());
        for pair in &self.pairs {
            let (i, j) = (pair.first(), pair.second());
            let v = -I * (p[i] - p[j]) * (x[i] - x[j]);
            if v.is_zero() {
                return Err(Error::Singularity(format!("X{pair} = 0")));
            }
            xs.push(v);
        }
        Ok(self.correlation_from_pairs(&xs, &mut Vec::new()))
    }

    /// `F_N(x; p)`, the correlation factor multiplying the plane wave.
    pub fn script_f(&self, x: &[f64], p: &[f64]) -> Result<Complex64> {
        let xc: Vec<Complex64> = x.iter().map(|&v| v.into()).collect();
        let pc: Vec<Complex64> = p.iter().map(|&v| v.into()).collect();
        self.script_f_complex(&xc, &pc)
    }

    /// `Psi_N(x; p)` for complex arguments; exactly zero when two positions or two momenta coincide.
    pub fn psi_complex(&self, x: &[Complex64], p: &[Complex64]) -> Complex64 {
        let n = self.params.n;
        debug_assert!(x.len() == n && p.len() == n);
        for pair in &self.pairs {
            let (i, j) = (pair.first(), pair.second());
            if x[i] == x[j] || p[i] == p[j] {
                return Complex64::zero();
            }
        }
        let mut xs = vec![Complex64::zero(); self.pairs.len()];
        let mut scratch = Vec::with_capacity(self.pairs.len() * (self.params.ell as usize + 1));
        let mut total = Complex64::zero();
        for (sigma, &eps) in self.perms.iter().zip(&self.exchange) {
            let map = sigma.as_slice();
            for (slot, pair) in self.pairs.iter().enumerate() {
                let (i, j) = (pair.first(), pair.second());
                xs[slot] = -I * (p[i] - p[j]) * (x[map[i]] - x[map[j]]);
            }
            let mut phase = Complex64::zero();
            for i in 0..n {
                phase += p[i] * x[map[i]];
            }
            total += eps * self.correlation_from_pairs(&xs, &mut scratch) * (I * phase).exp();
        }
        total / self.perms.len() as f64
    }

    /// `Psi_N(x; p)` for real arguments.
    pub fn psi(&self, x: &[f64], p: &[f64]) -> Complex64 {
        let xc: Vec<Complex64> = x.iter().map(|&v| v.into()).collect();
        let pc: Vec<Complex64> = p.iter().map(|&v| v.into()).collect();
        self.psi_complex(&xc, &pc)
    }

    fn accurate_terms(&self) -> Result<&[AccurateTerm]> {
        let terms = self.accurate.get_or_init(|| {
            let laurent = to_representation(&self.table, Representation::LaurentMonomial).ok()?;
            laurent
                .terms()
                .map(|(m, v)| {
                    let e = m.entries().to_vec();
                    let quarter = e.iter().map(|&k| k as usize).sum::<usize>() % 4;
                    Some((e, DoubleDouble::from_rational(v)?, quarter))
                })
                .collect()
        });
        terms
            .as_deref()
            .ok_or_else(|| Error::InvalidTable("coefficients do not fit double-double range".into()))
    }

    /// `Psi_N(x; p)` in double-double arithmetic, rounded once at the end.
    ///
    /// The permutation sum cancels down to `|Psi|` from terms of size `|F_N|`, so plain
    /// evaluation carries an absolute error near `eps |F_N|`. Here the error is near
    /// `eps |Psi|`, which finite differences of small steps need close to nodes.
    pub fn psi_accurate(&self, x: &[f64], p: &[f64]) -> Result<Complex64> {
        self.check_len(x.len(), p.len())?;
        let n = self.params.n;
        for pair in &self.pairs {
            let (i, j) = (pair.first(), pair.second());
            if x[i] == x[j] || p[i] == p[j] {
                return Ok(Complex64::zero());
            }
        }
        let terms = self.accurate_terms()?;
        let width = self.params.ell as usize + 1;
        let mut powers = vec![DoubleDouble::ONE; self.pairs.len() * width];
        let (mut re, mut im) = (DoubleDouble::ZERO, DoubleDouble::ZERO);
        for (sigma, &eps) in self.perms.iter().zip(&self.exchange) {
            let map = sigma.as_slice();
            // X = -i v with v = (p_i - p_j)(x_a - x_b), so X^{-k} = i^k v^{-k}
            for (slot, pair) in self.pairs.iter().enumerate() {
                let (i, j) = (pair.first(), pair.second());
                let v = DoubleDouble::sum(p[i], -p[j]) * DoubleDouble::sum(x[map[i]], -x[map[j]]);
                let w = v.recip();
                for k in 1..width {
                    powers[slot * width + k] = powers[slot * width + k - 1] * w;
                }
            }
            let mut quarters = [DoubleDouble::ZERO; 4];
            for (entries, c, q) in terms {
                let mut prod = *c;
                for (slot, &e) in entries.iter().enumerate() {
                    prod = prod * powers[slot * width + e as usize];
                }
                quarters[*q] = quarters[*q] + prod;
            }
            let (f_re, f_im) = (quarters[0] - quarters[2], quarters[1] - quarters[3]);
            let phase =
                (0..n).fold(DoubleDouble::ZERO, |acc, i| acc + DoubleDouble::product(p[i], x[map[i]]));
            let (sin, cos) = phase.sin_cos();
            re = re + (f_re * cos - f_im * sin).scale(eps);
            im = im + (f_re * sin + f_im * cos).scale(eps);
        }
        let count = DoubleDouble::new(self.perms.len() as f64);
        Ok(Complex64::new((re / count).to_f64(), (im / count).to_f64()))
    }

    /// [`Eigenfunction::psi`] with argument validation and the near-coincidence check.
    pub fn evaluate(&self, x: &Configuration, p: &Momentum) -> Result<Evaluation> {
        self.check_len(x.len(), p.len())?;
        let separation = x.min_separation() * p.min_separation();
        let warning = (self.params.n >= 2 && separation < MIN_SEPARATION_PRODUCT)
            .then_some(AccuracyWarning { separation });
        Ok(Evaluation { value: self.psi(x.as_slice(), p.as_slice()), warning })
    }
}

/// Relative residual `|H Psi - (p^2/2) Psi| / max(|H Psi|, |(p^2/2) Psi|)` of the
/// trap-free eigen-equation, with the Laplacian by central differences of step `h`.
///
/// Values come from [`Eigenfunction::psi_accurate`] and the steps actually taken after
/// rounding `x_i +- h` are used, so round-off stays far below the `h^2` truncation.
pub fn eigen_residual(eigen: &Eigenfunction, x: &[f64], p: &[f64], h: f64) -> Result<f64> {
    let n = x.len();
    let centre = eigen.psi_accurate(x, p)?;
    let mut xs = x.to_vec();
    let mut lap = Complex64::zero();
    for i in 0..n {
        xs[i] = x[i] + h;
        let (up, h_up) = (eigen.psi_accurate(&xs, p)?, xs[i] - x[i]);
        xs[i] = x[i] - h;
        let (down, h_down) = (eigen.psi_accurate(&xs, p)?, x[i] - xs[i]);
        xs[i] = x[i];
        lap += 2.0 * ((up - centre) / h_up - (centre - down) / h_down) / (h_up + h_down);
    }
    let ell = eigen.params().ell as f64;
    let mut potential = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            potential += ell * (ell + 1.0) / (x[i] - x[j]).powi(2);
        }
    }
    let h_psi = -0.5 * lap + potential * centre;
    let e_psi = 0.5 * p.iter().map(|v| v * v).sum::<f64>() * centre;
    Ok((h_psi - e_psi).norm() / h_psi.norm().max(e_psi.norm()))
}

/// `F_N(x; p)` with an explicit table.
pub fn script_f(
    x: &Configuration,
    p: &Momentum,
    params: &ModelParams,
    table: &CoefficientTable,
) -> Result<Complex64> {
    Eigenfunction::new(*params, table.clone())?.script_f(x.as_slice(), p.as_slice())
}

/// `Psi_N(x; p)` using the best available coefficient table.
pub fn psi(x: &Configuration, p: &Momentum, params: &ModelParams) -> Result<Evaluation> {
    Eigenfunction::for_params(*params)?.evaluate(x, p)
}

/// Two-body closed form `e^{i P X_c} i^{l+1} z j_l(z)` with `z = (p_1-p_2)(x_1-x_2)/2`,
/// `P = p_1+p_2`, `X_c = (x_1+x_2)/2`.
///
/// The phase `i^{l+1}` is the one that makes the function tend to the
/// exchange-symmetrized plane wave `(e^{ip.x} + (-1)^{l+1} e^{ip.x_swap})/2`.
pub fn psi2_bessel(x: &[f64], p: &[f64], ell: u32) -> Result<Complex64> {
    if x.len() != 2 || p.len() != 2 {
        return Err(Error::Domain("psi2_bessel needs N = 2".into()));
    }
    let z = 0.5 * (p[0] - p[1]) * (x[0] - x[1]);
    let centre = 0.5 * (p[0] + p[1]) * (x[0] + x[1]);
    let phase = I.powu(ell + 1) * Complex64::from_polar(1.0, centre);
    Ok(phase * riccati_bessel(ell, z))
}
