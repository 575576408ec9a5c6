use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bareiss::{bareiss_solve, integer_row};
use super::field::{crt_combine, gaussian_magnitude, gaussian_primes, rational_reconstruction, Fp, Gaussian};
use super::modular::ModularEchelon;
use super::residual::{draw_sample, residual_sample, ResidualSample, SampleContext};
use crate::coefficients::{
    closed_form_table, ell1_conjecture_table, CoefficientTable, MultiIndex, Representation, Status,
    MAX_CONJECTURE_TABLE_N,
};
use crate::error::{Error, Result};
use crate::foundation::pair_count;
use crate::wavefunction::ModelParams;

/// Largest unknown count `(l+1)^{N(N-1)/2}` the oracle accepts.
pub const MAX_UNKNOWNS: usize = 4096;

/// Unknown counts up to this go through exact Bareiss elimination; above, through
/// multi-modular elimination with exact held-out verification.
pub const BAREISS_MAX_UNKNOWNS: usize = 64;

const HELD_OUT_SAMPLES: usize = 2;
const MAX_PRIMES: usize = 64;
const CONSISTENCY_ROWS: usize = 8;

/// Fixed default seed so repeated solves are reproducible.
pub const DEFAULT_SEED: u64 = 0x5eed_ca10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Auto,
    Bareiss,
    Modular,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub basis: Representation,
    /// Sample points; each contributes a real and an imaginary row. Defaults to 125% of the unknowns.
    pub sample_count: Option<usize>,
    pub seed: u64,
    pub method: SolveMethod,
    /// Fresh sample sets tried before a rank deficiency is reported.
    pub attempts: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            basis: Representation::ProductOfF,
            sample_count: None,
            seed: DEFAULT_SEED,
            method: SolveMethod::Auto,
            attempts: 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub table: CoefficientTable,
    pub unknowns: usize,
    pub samples: usize,
    pub method: SolveMethod,
    pub primes_used: usize,
    pub held_out_rows: usize,
    pub elapsed: Duration,
}

/// Exact linear system for the table coefficients; unknown 0 is normalized to one.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub unknowns: Vec<MultiIndex>,
    pub rows: Vec<ResidualSample>,
    pub basis: Representation,
}

impl LinearSystem {
    pub fn assemble(
        n: usize,
        ell: u32,
        basis: Representation,
        samples: &[(Vec<BigRational>, Vec<BigRational>)],
    ) -> Result<Self> {
        let unknowns = unknowns_for(n, ell)?;
        let rows = samples
            .par_iter()
            .map(|(x, p)| residual_sample(x, p, ell, &unknowns, basis))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { unknowns, rows, basis })
    }

    /// Integer augmented rows `[a_1 .. a_{U-1} | -a_0]`.
    fn augmented(&self) -> Vec<Vec<BigInt>> {
        let mut out = Vec::with_capacity(2 * self.rows.len());
        for s in &self.rows {
            for part in [&s.real, &s.imag] {
                let mut row: Vec<BigRational> = part[1..].to_vec();
                row.push(-part[0].clone());
                out.push(integer_row(&row));
            }
        }
        out
    }
}

/// Every multi-index of the hypercube, capped at [`MAX_UNKNOWNS`].
pub fn unknowns_for(n: usize, ell: u32) -> Result<Vec<MultiIndex>> {
    let slots = pair_count(n) as u32;
    let count = (ell as u128 + 1).checked_pow(slots).unwrap_or(u128::MAX);
    if count > MAX_UNKNOWNS as u128 {
        return Err(Error::SizeLimit(format!(
            "(l+1)^(N(N-1)/2) = {count} unknowns exceeds the oracle cap {MAX_UNKNOWNS}"
        )));
    }
    Ok(MultiIndex::hypercube(n, ell).collect())
}

fn draw_samples(
    rng: &mut ChaCha8Rng,
    count: usize,
    n: usize,
    ell: u32,
    basis: Representation,
) -> Vec<(Vec<BigRational>, Vec<BigRational>)> {
    (0..count).map(|_| draw_sample(rng, n, ell, basis)).collect()
}

/// Checks the candidate on fresh samples in exact arithmetic.
fn held_out_check(
    coeffs: &[BigRational],
    unknowns: &[MultiIndex],
    ell: u32,
    basis: Representation,
    samples: &[(Vec<BigRational>, Vec<BigRational>)],
) -> Result<()> {
    for (x, p) in samples {
        let sc = SampleContext::<BigRational>::new((), x, p, ell, basis)?;
        let mut total = Gaussian::zero(());
        for (m, c) in unknowns.iter().zip(coeffs) {
            if !c.is_zero() {
                total = total + sc.residual(m.entries()).scale(c);
            }
        }
        if !total.is_zero() {
            return Err(Error::NoSolution(format!(
                "held-out residual {} at x={x:?} p={p:?}",
                gaussian_magnitude(&total)
            )));
        }
    }
    Ok(())
}

fn solve_bareiss(
    n: usize,
    ell: u32,
    basis: Representation,
    samples: &[(Vec<BigRational>, Vec<BigRational>)],
) -> Result<(Vec<MultiIndex>, Vec<BigRational>)> {
    let system = LinearSystem::assemble(n, ell, basis, samples)?;
    let u = system.unknowns.len();
    let rest = bareiss_solve(system.augmented(), u - 1)?;
    let mut coeffs = Vec::with_capacity(u);
    coeffs.push(BigRational::one());
    coeffs.extend(rest);
    Ok((system.unknowns, coeffs))
}

/// Residues of the solution modulo `p`, or the rank reached if not full.
fn modular_image(
    p: u64,
    unknowns: &[MultiIndex],
    ell: u32,
    basis: Representation,
    samples: &[(Vec<BigRational>, Vec<BigRational>)],
) -> Result<Vec<u64>> {
    let u = unknowns.len();
    let mut ech = ModularEchelon::new(p, u - 1);
    let mut extra = 0usize;
    let chunk = rayon::current_num_threads().max(1) * 4;
    'outer: for batch in samples.chunks(chunk) {
        let rows: Vec<Option<[Vec<u64>; 2]>> = batch
            .par_iter()
            .map(|(x, pt)| {
                let sc = SampleContext::<Fp>::new(p, x, pt, ell, basis).ok()?;
                let (mut re, mut im) = (Vec::with_capacity(u), Vec::with_capacity(u));
                for m in unknowns {
                    let g = sc.residual(m.entries());
                    re.push(g.re.value());
                    im.push(g.im.value());
                }
                let augment = |mut v: Vec<u64>| {
                    let head = v.remove(0);
                    v.push((p - head) % p);
                    v
                };
                Some([augment(re), augment(im)])
            })
            .collect();
        for pair in rows.into_iter().flatten() {
            for row in pair {
                if ech.is_full() {
                    ech.push(row);
                    extra += 1;
                    if ech.is_inconsistent() {
                        return Err(Error::NoSolution(
                            "residual rows are inconsistent with the ansatz".into(),
                        ));
                    }
                    if extra >= CONSISTENCY_ROWS {
                        break 'outer;
                    }
                } else {
                    ech.push(row);
                    if ech.is_inconsistent() {
                        return Err(Error::NoSolution(
                            "residual rows are inconsistent with the ansatz".into(),
                        ));
                    }
                }
            }
        }
    }
    ech.solve().ok_or(Error::DegenerateSampling { rank: ech.rank(), unknowns: u - 1 })
}

fn solve_modular(
    unknowns: &[MultiIndex],
    ell: u32,
    basis: Representation,
    samples: &[(Vec<BigRational>, Vec<BigRational>)],
    held_out: &[(Vec<BigRational>, Vec<BigRational>)],
) -> Result<(Vec<BigRational>, usize)> {
    let primes = gaussian_primes(MAX_PRIMES);
    let mut modulus = BigInt::one();
    let mut residues: Vec<BigInt> = vec![BigInt::zero(); unknowns.len() - 1];
    let mut previous: Option<Vec<BigRational>> = None;
    for (used, &p) in primes.iter().enumerate() {
        let image = modular_image(p, unknowns, ell, basis, samples)?;
        for (r, &v) in residues.iter_mut().zip(&image) {
            *r = crt_combine(r, &modulus, v, p);
        }
        modulus *= BigInt::from(p);
        let candidate: Option<Vec<BigRational>> =
            residues.iter().map(|r| rational_reconstruction(r, &modulus)).collect();
        if let Some(c) = candidate {
            if previous.as_ref() == Some(&c) {
                let mut coeffs = Vec::with_capacity(unknowns.len());
                coeffs.push(BigRational::one());
                coeffs.extend(c);
                held_out_check(&coeffs, unknowns, ell, basis, held_out)?;
                return Ok((coeffs, used + 1));
            }
            previous = Some(c);
        } else {
            previous = None;
        }
    }
    Err(Error::NoSolution(format!("rational reconstruction did not stabilize after {MAX_PRIMES} primes")))
}

/// Recovers the coefficient table of `F_N` for `(n, ell)` from the eigen-equation alone.
pub fn solve(n: usize, ell: u32, options: &SolveOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let basis = options.basis;
    if ell == 0 || n <= 1 {
        let table = CoefficientTable::unit(n, ell, basis, Status::Oracle);
        let report = verify_table(&table, &ModelParams::new(n, ell, 0.0)?, 3, options.seed)?;
        if !report.is_exact_zero() {
            return Err(Error::NoSolution("plane wave failed its own residual check".into()));
        }
        return Ok(SolveReport {
            table,
            unknowns: 1,
            samples: 0,
            method: SolveMethod::Bareiss,
            primes_used: 0,
            held_out_rows: 2 * report.trials,
            elapsed: start.elapsed(),
        });
    }
    let unknowns = unknowns_for(n, ell)?;
    let u = unknowns.len();
    let samples = options.sample_count.unwrap_or_else(|| (u * 5).div_ceil(4)).max(u.div_ceil(2));
    let method = match options.method {
        SolveMethod::Auto if u <= BAREISS_MAX_UNKNOWNS => SolveMethod::Bareiss,
        SolveMethod::Auto => SolveMethod::Modular,
        m => m,
    };
    let mut last_err = None;
    for attempt in 0..options.attempts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed.wrapping_add(attempt as u64));
        let set = draw_samples(&mut rng, samples, n, ell, basis);
        let held = draw_samples(&mut rng, HELD_OUT_SAMPLES, n, ell, basis);
        let outcome = match method {
            SolveMethod::Bareiss => solve_bareiss(n, ell, basis, &set).and_then(|(unk, c)| {
                held_out_check(&c, &unk, ell, basis, &held)?;
                Ok((c, 0))
            }),
            _ => solve_modular(&unknowns, ell, basis, &set, &held),
        };
        match outcome {
            Ok((coeffs, primes_used)) => {
                let table = CoefficientTable::new(
                    n,
                    ell,
                    basis,
                    Status::Oracle,
                    unknowns.iter().cloned().zip(coeffs),
                )?;
                return Ok(SolveReport {
                    table,
                    unknowns: u,
                    samples,
                    method,
                    primes_used,
                    held_out_rows: 2 * HELD_OUT_SAMPLES,
                    elapsed: start.elapsed(),
                });
            }
            Err(e @ Error::DegenerateSampling { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// Oracle table in the product-of-`F_k` basis from `sample_count` random samples.
pub fn solve_coefficients(params: &ModelParams, sample_count: usize) -> Result<CoefficientTable> {
    let options = SolveOptions { sample_count: Some(sample_count), ..SolveOptions::default() };
    Ok(solve(params.n, params.ell, &options)?.table)
}

/// Outcome of checking a table against the exact residual.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub trials: usize,
    /// Largest `|Re|` or `|Im|` of the residual over all trials.
    pub max_residual: BigRational,
    pub nonzero_trials: usize,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn is_exact_zero(&self) -> bool {
        self.max_residual.is_zero()
    }
}

/// Evaluates the exact residual of a whole table at `trials` random rational samples.
pub fn verify_table(
    table: &CoefficientTable,
    params: &ModelParams,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let n = params.n;
    if table.particles() != n || table.ell() != params.ell {
        return Err(Error::InvalidTable(format!(
            "table is for (N={}, l={}), asked to verify (N={n}, l={})",
            table.particles(),
            table.ell(),
            params.ell
        )));
    }
    let start = Instant::now();
    let ell = table.ell();
    let basis = table.representation();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = draw_samples(&mut rng, trials, n, ell, basis);
    let terms: Vec<(&MultiIndex, &BigRational)> = table.terms().collect();
    let residuals: Vec<BigRational> = samples
        .par_iter()
        .map(|(x, p)| -> Result<BigRational> {
            let sc = SampleContext::<BigRational>::new((), x, p, ell, basis)?;
            let mut total = Gaussian::zero(());
            for (m, c) in &terms {
                total = total + sc.residual(m.entries()).scale(c);
            }
            Ok(gaussian_magnitude(&total))
        })
        .collect::<Result<_>>()?;
    let nonzero_trials = residuals.iter().filter(|r| !r.is_zero()).count();
    let max_residual = residuals.into_iter().max().unwrap_or_else(BigRational::zero);
    Ok(VerificationReport { trials, max_residual, nonzero_trials, elapsed: start.elapsed() })
}

/// Where a coefficient table comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableSource {
    /// Closed form if one exists, else the `l = 1` conjecture, else the oracle.
    Auto,
    ClosedForm,
    Conjecture,
    Oracle,
    File(PathBuf),
}

fn oracle_cache() -> &'static Mutex<HashMap<(usize, u32), CoefficientTable>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), CoefficientTable>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Oracle table in the Laurent basis, solved once per process.
fn cached_oracle(n: usize, ell: u32) -> Result<CoefficientTable> {
    if let Some(t) = oracle_cache().lock().expect("cache lock").get(&(n, ell)) {
        return Ok(t.clone());
    }
    let options = SolveOptions { basis: Representation::LaurentMonomial, ..SolveOptions::default() };
    let table = solve(n, ell, &options)?.table;
    oracle_cache().lock().expect("cache lock").insert((n, ell), table.clone());
    Ok(table)
}

/// Produces a coefficient table for `(n, ell)` from the requested source.
pub fn resolve_table(n: usize, ell: u32, source: TableSource) -> Result<CoefficientTable> {
    let closed = || {
        closed_form_table(n, ell, Representation::ProductOfF)
            .ok_or_else(|| Error::Domain(format!("no closed-form table for N={n}, l={ell}")))
    };
    let conjecture = || {
        if ell != 1 {
            return Err(Error::Domain(format!("the clique conjecture covers l=1, got l={ell}")));
        }
        ell1_conjecture_table(n)
    };
    match source {
        TableSource::ClosedForm => closed(),
        TableSource::Conjecture => conjecture(),
        TableSource::Oracle => cached_oracle(n, ell),
        TableSource::File(path) => {
            let t = CoefficientTable::read(&path)?;
            if t.particles() != n || t.ell() != ell {
                return Err(Error::InvalidTable(format!(
                    "{} holds (N={}, l={}), expected (N={n}, l={ell})",
                    path.display(),
                    t.particles(),
                    t.ell()
                )));
            }
            Ok(t)
        }
        TableSource::Auto => closed()
            .or_else(|_| {
                if ell == 1 && n <= MAX_CONJECTURE_TABLE_N {
                    conjecture()
                } else {
                    Err(Error::Domain(String::new()))
                }
            })
            .or_else(|_| cached_oracle(n, ell)),
    }
}
