use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use super::TimeFactors;
use crate::coefficients::{to_representation, CoefficientTable, Representation};
use crate::error::{Error, Result};
use crate::foundation::{pairs, permutations, Permutation};
use crate::wavefunction::{Configuration, Eigenfunction, ModelParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Positions, source positions and time of one kernel evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelPoint {
    pub x: Configuration,
    pub y: Configuration,
    pub t: f64,
}

impl KernelPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>, t: f64) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Domain(format!("x has {} entries, y has {}", x.len(), y.len())));
        }
        Ok(Self { x: Configuration::new(x)?, y: Configuration::new(y)?, t })
    }
}

/// `1 / sqrt(2 pi i S)` on the principal branch.
fn mehler_prefactor(s: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * s).sqrt().inv()
}

/// Single-particle harmonic kernel, analytic in `x` and `y`.
pub fn mehler_complex(x: Complex64, y: Complex64, f: TimeFactors) -> Complex64 {
    let phase = ((x * x + y * y) * f.c - 2.0 * x * y) / (2.0 * f.s);
    mehler_prefactor(f.s) * (I * phase).exp()
}

/// Harmonic oscillator kernel `K_1(x, y; t)`.
pub fn mehler(x: f64, y: f64, t: f64, omega: f64) -> Result<Complex64> {
    Ok(mehler_complex(x.into(), y.into(), TimeFactors::new(t, omega)?))
}

/// Antisymmetrized product of Mehler kernels (the free-fermion kernel in the trap).
pub fn kernel_l0(point: &KernelPoint, n: usize, omega: f64) -> Result<Complex64> {
    if point.x.len() != n {
        return Err(Error::Domain(format!("point has {} particles, N={n}", point.x.len())));
    }
    let f = TimeFactors::new(point.t, omega)?;
    Ok(ZeroCouplingKernel::new(n)?.eval_at(point.x.as_slice(), point.y.as_slice(), f))
}

/// [`kernel_l0`] with the permutation list built once.
#[derive(Debug, Clone)]
pub struct ZeroCouplingKernel {
    perms: Vec<Permutation>,
}

impl ZeroCouplingKernel {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self { perms: permutations(n)? })
    }

    pub fn eval_at(&self, x: &[f64], y: &[f64], f: TimeFactors) -> Complex64 {
        let mut total = Complex64::zero();
        for sigma in &self.perms {
            let mut prod = Complex64::new(sigma.sign() as f64, 0.0);
            for (i, &yi) in y.iter().enumerate() {
                prod *= mehler_complex(x[sigma.apply(i)].into(), yi.into(), f);
            }
            total += prod;
        }
        total / self.perms.len() as f64
    }
}

/// Trap-free reference kernel `(1/N!) sum_s eps_s^{l+1} e^{i (x_s - y)^2 / 2t} / (2 pi i t)^{N/2}`.
pub fn free_kernel(point: &KernelPoint, params: &ModelParams) -> Result<Complex64> {
    let n = params.n;
    if point.x.len() != n {
        return Err(Error::Domain(format!("point has {} particles, N={n}", point.x.len())));
    }
    if point.t == 0.0 || !point.t.is_finite() {
        return Err(Error::Domain(format!("free kernel needs finite t != 0, got {}", point.t)));
    }
    let t = point.t;
    let perms = permutations(n)?;
    let (x, y) = (point.x.as_slice(), point.y.as_slice());
    let mut total = Complex64::zero();
    for sigma in &perms {
        let mut sq = 0.0;
        for i in 0..n {
            let d = x[sigma.apply(i)] - y[i];
            sq += d * d;
        }
        total += sigma.sign_pow(params.ell + 1) * Complex64::from_polar(1.0, sq / (2.0 * t));
    }
    Ok(total * mehler_prefactor(t).powu(n as u32) / perms.len() as f64)
}

/// Propagator `K_N(x, y; t)` of the trapped model, through the eigenfunction at the
/// effective momentum `p = -y / S`.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigen: Eigenfunction,
    omega: f64,
}

impl Propagator {
    pub fn new(params: ModelParams, table: CoefficientTable) -> Result<Self> {
        Ok(Self { omega: params.omega, eigen: Eigenfunction::new(params, table)? })
    }

    pub fn for_params(params: ModelParams) -> Result<Self> {
        Ok(Self { omega: params.omega, eigen: Eigenfunction::for_params(params)? })
    }

    pub fn from_eigenfunction(eigen: Eigenfunction, omega: f64) -> Self {
        Self { eigen, omega }
    }

    #[inline]
    pub fn params(&self) -> ModelParams {
        ModelParams { omega: self.omega, ..*self.eigen.params() }
    }

    #[inline]
    pub fn eigenfunction(&self) -> &Eigenfunction {
        &self.eigen
    }

    /// Kernel for complex positions (used on deformed integration contours).
    pub fn eval_complex(&self, x: &[Complex64], y: &[Complex64], f: TimeFactors) -> Complex64 {
        let n = x.len();
        let mut sq = Complex64::zero();
        for i in 0..n {
            sq += x[i] * x[i] + y[i] * y[i];
        }
        let p: Vec<Complex64> = y.iter().map(|v| -v / f.s).collect();
        let pre = mehler_prefactor(f.s).powu(n as u32) * (I * f.c * sq / (2.0 * f.s)).exp();
        pre * self.eigen.psi_complex(x, &p)
    }

    /// Kernel at precomputed time factors, real arguments.
    pub fn eval_at(&self, x: &[f64], y: &[f64], f: TimeFactors) -> Complex64 {
        let n = x.len();
        let sq: f64 = x.iter().chain(y).map(|v| v * v).sum();
        let p: Vec<f64> = y.iter().map(|v| -v / f.s).collect();
        let pre = mehler_prefactor(f.s).powu(n as u32) * Complex64::from_polar(1.0, f.c * sq / (2.0 * f.s));
        pre * self.eigen.psi(x, &p)
    }

    pub fn eval(&self, x: &[f64], y: &[f64], t: f64) -> Result<Complex64> {
        let n = self.eigen.params().n;
        if x.len() != n || y.len() != n {
            return Err(Error::Domain(format!("expected {n} positions in x and y")));
        }
        Ok(self.eval_at(x, y, TimeFactors::new(t, self.omega)?))
    }

    pub fn kernel(&self, point: &KernelPoint) -> Result<Complex64> {
        self.eval(point.x.as_slice(), point.y.as_slice(), point.t)
    }
}

/// `K_N(x, y; t)` using the best available coefficient table.
pub fn kernel(point: &KernelPoint, params: &ModelParams) -> Result<Complex64> {
    Propagator::for_params(*params)?.kernel(point)
}

/// Fully explicit double sum over permutations and Laurent multi-indices.
///
/// Shares no code with [`Propagator`] beyond the Mehler kernel, so the two routes
/// cross-check each other.
pub fn kernel_explicit(
    point: &KernelPoint,
    params: &ModelParams,
    table: &CoefficientTable,
) -> Result<Complex64> {
    let n = params.n;
    if point.x.len() != n || table.particles() != n || table.ell() != params.ell {
        return Err(Error::Domain("point, model and table sizes disagree".into()));
    }
    let table = to_representation(table, Representation::LaurentMonomial)?;
    let f = TimeFactors::new(point.t, params.omega)?;
    let (x, y) = (point.x.as_slice(), point.y.as_slice());
    let pair_list = pairs(n);
    let terms: Vec<(Vec<u8>, f64)> = table
        .terms()
        .map(|(m, v)| (m.entries().to_vec(), num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::NAN)))
        .collect();
    let perms: Vec<Permutation> = permutations(n)?;
    let mut total = Complex64::zero();
    let mut base = vec![Complex64::zero(); pair_list.len()];
    for sigma in &perms {
        let mut mehlers = Complex64::new(sigma.sign_pow(params.ell + 1), 0.0);
        for i in 0..n {
            mehlers *= mehler_complex(x[sigma.apply(i)].into(), y[i].into(), f);
        }
        if mehlers.is_zero() {
            continue;
        }
        for (slot, pair) in pair_list.iter().enumerate() {
            let (i, j) = (pair.first(), pair.second());
            let dx = x[sigma.apply(i)] - x[sigma.apply(j)];
            let dy = y[i] - y[j];
            base[slot] = Complex64::new(0.0, -f.s / (dx * dy));
        }
        let mut laurent = Complex64::zero();
        for (entries, c) in &terms {
            let mut prod = Complex64::new(*c, 0.0);
            for (slot, &e) in entries.iter().enumerate() {
                if e > 0 {
                    prod *= base[slot].powu(e as u32);
                }
            }
            laurent += prod;
        }
        total += mehlers * laurent;
    }
    Ok(total / perms.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{c3_laurent_table, closed_form_table};
    use approx::assert_relative_eq;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm())
    }

    fn prop(n: usize, ell: u32, omega: f64) -> Propagator {
        let params = ModelParams::new(n, ell, omega).unwrap();
        Propagator::new(params, closed_form_table(n, ell, Representation::ProductOfF).unwrap()).unwrap()
    }

    #[test]
    fn mehler_properties() {
        let a = mehler(0.3, -1.1, 0.7, 1.3).unwrap();
        let b = mehler(-1.1, 0.3, 0.7, 1.3).unwrap();
        assert_eq!(a, b);
        // small omega approaches the free kernel
        let t = 0.4;
        let free = Complex64::from_polar(1.0, (0.3f64 + 1.1).powi(2) / (2.0 * t)) * mehler_prefactor(t);
        assert!(rel(mehler(0.3, -1.1, t, 1e-7).unwrap(), free) < 1e-12);
        assert_eq!(mehler(0.3, -1.1, t, 0.0).unwrap(), free);
        assert!(matches!(mehler(0.0, 1.0, PI, 1.0), Err(Error::Caustic { .. })));
    }

    #[test]
    fn single_particle_reduction() {
        for ell in 0..3 {
            let p = prop(1, ell, 0.8);
            let k = p.eval(&[0.4], &[-0.9], 0.6).unwrap();
            assert!(rel(k, mehler(0.4, -0.9, 0.6, 0.8).unwrap()) < 1e-14);
        }
        let pt = KernelPoint::new(vec![0.4], vec![-0.9], 0.6).unwrap();
        assert!(rel(kernel_l0(&pt, 1, 0.8).unwrap(), mehler(0.4, -0.9, 0.6, 0.8).unwrap()) < 1e-15);
    }

    #[test]
    fn zero_coupling_is_free_fermion_product() {
        let pt = KernelPoint::new(vec![0.2, -0.7, 1.3], vec![1.0, 0.1, -0.5], 0.45).unwrap();
        let p = prop(3, 0, 1.0);
        assert!(rel(p.kernel(&pt).unwrap(), kernel_l0(&pt, 3, 1.0).unwrap()) < 1e-12);
        let same = KernelPoint::new(vec![0.2, 0.2, 1.3], vec![1.0, 0.1, -0.5], 0.45).unwrap();
        assert!(kernel_l0(&same, 3, 1.0).unwrap().norm() < 1e-15);
    }

    #[test]
    fn explicit_route_agrees() {
        let pt = KernelPoint::new(vec![0.2, -1.7, 1.3], vec![1.0, -0.1, -1.5], 0.45).unwrap();
        for ell in 0..=3 {
            let params = ModelParams::new(3, ell, 1.0).unwrap();
            let a = prop(3, ell, 1.0).kernel(&pt).unwrap();
            let b = kernel_explicit(&pt, &params, &c3_laurent_table(ell)).unwrap();
            assert!(rel(a, b) < 1e-10, "l={ell}: {a} vs {b}");
        }
    }

    #[test]
    fn free_kernel_parity() {
        let params0 = ModelParams::new(2, 0, 1.0).unwrap();
        let params1 = ModelParams::new(2, 1, 1.0).unwrap();
        let a = KernelPoint::new(vec![0.3, 1.2], vec![-0.5, 0.8], 0.2).unwrap();
        let b = KernelPoint::new(vec![0.3, 1.2], vec![0.8, -0.5], 0.2).unwrap();
        assert_relative_eq!(
            free_kernel(&a, &params0).unwrap().re,
            -free_kernel(&b, &params0).unwrap().re,
            epsilon = 1e-14
        );
        assert!(rel(free_kernel(&a, &params1).unwrap(), free_kernel(&b, &params1).unwrap()) < 1e-14);
        let one = ModelParams::new(1, 2, 0.0).unwrap();
        let pt = KernelPoint::new(vec![0.3], vec![-0.5], 0.2).unwrap();
        assert!(rel(free_kernel(&pt, &one).unwrap(), mehler(0.3, -0.5, 0.2, 0.0).unwrap()) < 1e-15);
        let zero_t = KernelPoint { t: 0.0, ..pt };
        assert!(free_kernel(&zero_t, &one).is_err());
    }

    #[test]
    fn free_limit_deviation_is_order_t() {
        let (x, y) = (vec![-1.0, 1.0], vec![-0.95, 1.05]);
        for ell in 0..3 {
            let params = ModelParams::new(2, ell, 1.0).unwrap();
            for t in [4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4, 1.25e-4] {
                let pt = KernelPoint::new(x.clone(), y.clone(), t).unwrap();
                // every permutation term has modulus |prefactor|^2 while the free kernel
                // itself can nearly cancel, so scale by the former
                let d = (kernel(&pt, &params).unwrap() - free_kernel(&pt, &params).unwrap()).norm()
                    / mehler_prefactor(t).norm_sqr();
                assert!(d < 8.0 * t, "l={ell} t={t}: {d}");
            }
        }
    }

    #[test]
    fn four_body_routes_agree() {
        use crate::coefficients::ell1_conjecture_table;
        let table = ell1_conjecture_table(4).unwrap();
        let params = ModelParams::new(4, 1, 0.7).unwrap();
        let pt = KernelPoint::new(vec![-3.0, -1.1, 0.8, 2.9], vec![-2.6, -0.7, 1.2, 3.1], 0.5).unwrap();
        let a = Propagator::new(params, table.clone()).unwrap().kernel(&pt).unwrap();
        let b = kernel_explicit(&pt, &params, &table).unwrap();
        assert!(rel(a, b) < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn time_reversal_and_exchange() {
        let p = prop(3, 2, 1.0);
        let (x, y) = ([0.2, -1.7, 1.3], [1.0, -0.1, -1.5]);
        let k = p.eval(&x, &y, 0.7).unwrap();
        assert!(rel(p.eval(&x, &y, -0.7).unwrap(), k.conj()) < 1e-12);
        assert!(rel(p.eval(&y, &x, 0.7).unwrap(), k) < 1e-12);
    }
}
