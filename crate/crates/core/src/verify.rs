//! Named numerical and exact verification suites with a machine-readable report.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coefficients::{ell1_conjecture_table, to_representation, CoefficientTable, Representation};
use crate::error::{Error, Result};
use crate::foundation::log_log_slope;
use crate::oracle::{resolve_table, solve, verify_table, SolveOptions, TableSource, DEFAULT_SEED};
use crate::propagator::{
    compose_kernel, free_kernel, kernel_explicit, kernel_l0, ContourRule, KernelPoint, Propagator,
};
use crate::wavefunction::{
    eigen_residual, psi2_bessel, separated_points, separation_gap, Eigenfunction, ModelParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    EigenResidual,
    Scaling,
    Cluster,
    Coincidence,
    Bispectral,
    BesselMatch,
    L0Match,
    ExplicitVsK,
    FreeLimit,
    Semigroup,
    OracleRoundtrip,
    ConjectureCheck,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::EigenResidual,
        Suite::Scaling,
        Suite::Cluster,
        Suite::Coincidence,
        Suite::Bispectral,
        Suite::BesselMatch,
        Suite::L0Match,
        Suite::ExplicitVsK,
        Suite::FreeLimit,
        Suite::Semigroup,
        Suite::OracleRoundtrip,
        Suite::ConjectureCheck,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::EigenResidual => "eigen-residual",
            Suite::Scaling => "scaling",
            Suite::Cluster => "cluster",
            Suite::Coincidence => "coincidence",
            Suite::Bispectral => "bispectral",
            Suite::BesselMatch => "bessel-match",
            Suite::L0Match => "l0-match",
            Suite::ExplicitVsK => "explicit-vs-K",
            Suite::FreeLimit => "free-limit",
            Suite::Semigroup => "semigroup",
            Suite::OracleRoundtrip => "oracle-roundtrip",
            Suite::ConjectureCheck => "conjecture-check",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(Suite::name).collect();
            Error::Parse(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

/// Inputs shared by all suites. Unset `n` / `ell` select each suite's default cases.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub n: Option<usize>,
    pub ell: Option<u32>,
    pub omega: f64,
    pub seed: u64,
    /// Random points per case for the sampled suites.
    pub samples: usize,
    pub table: TableSource,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { n: None, ell: None, omega: 1.0, seed: DEFAULT_SEED, samples: 20, table: TableSource::Auto }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub case: String,
    pub metric: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub seed: u64,
    pub elapsed_seconds: f64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Check that passes when `value <= threshold`.
fn at_most(case: String, metric: &str, value: f64, threshold: f64) -> Check {
    Check { case, metric: metric.into(), value, threshold, passed: value <= threshold }
}

/// Check that passes when `|value - target| <= tolerance`.
fn near(case: String, metric: &str, value: f64, target: f64, tolerance: f64) -> Check {
    Check {
        case,
        metric: format!("{metric} (target {target})"),
        value,
        threshold: tolerance,
        passed: (value - target).abs() <= tolerance,
    }
}

fn case(n: usize, ell: u32) -> String {
    format!("N={n} l={ell}")
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

struct Runner<'a> {
    cfg: &'a VerifyConfig,
    rng: ChaCha8Rng,
}

impl Runner<'_> {
    fn cases(&self, defaults: &[(usize, u32)]) -> Vec<(usize, u32)> {
        match (self.cfg.n, self.cfg.ell) {
            (Some(n), Some(l)) => vec![(n, l)],
            (Some(n), None) => {
                let mut ls: Vec<u32> = defaults.iter().map(|c| c.1).collect();
                ls.sort_unstable();
                ls.dedup();
                ls.into_iter().map(|l| (n, l)).collect()
            }
            (None, Some(l)) => {
                let mut ns: Vec<usize> = defaults.iter().map(|c| c.0).collect();
                ns.sort_unstable();
                ns.dedup();
                ns.into_iter().map(|n| (n, l)).collect()
            }
            (None, None) => defaults.to_vec(),
        }
    }

    fn eigen(&self, n: usize, ell: u32) -> Result<Eigenfunction> {
        let params = ModelParams::new(n, ell, 0.0)?;
        Eigenfunction::new(params, resolve_table(n, ell, self.cfg.table.clone())?)
    }

    fn propagator(&self, n: usize, ell: u32) -> Result<Propagator> {
        let params = ModelParams::new(n, ell, self.cfg.omega)?;
        Propagator::new(params, resolve_table(n, ell, self.cfg.table.clone())?)
    }

    fn spread(&mut self, n: usize, ell: u32) -> Vec<f64> {
        separated_points(&mut self.rng, n, separation_gap(ell))
    }

    fn eigen_residual(&mut self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for (n, ell) in self.cases(&[(2, 1), (2, 3), (3, 1), (3, 2), (3, 3)]) {
            let e = self.eigen(n, ell)?;
            let mut worst: f64 = 0.0;
            for _ in 0..self.cfg.samples {
                let (x, p) = (self.spread(n, ell), self.spread(n, ell));
                worst = worst.max(eigen_residual(&e, &x, &p, 1e-4)?);
            }
            out.push(at_most(case(n, ell), "max relative residual", worst, 1e-6));
        }
        Ok(out)
    }

    fn scaling(&mut self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for (n, ell) in self.cases(&[(2, 2), (3, 1), (3, 2), (3, 3)]) {
            let e = self.eigen(n, ell)?;
            let mut worst: f64 = 0.0;
            for _ in 0..self.cfg.samples {
                let (x, p) = (self.spread(n, ell), self.spread(n, ell));
                let base = e.psi(&x, &p).norm();
                for s in [0.5, 2.0, 3.7] {
                    let sx: Vec<f64> = x.iter().map(|v| v * s).collect();
                    let sp: Vec<f64> = p.iter().map(|v| v * s).collect();
                    worst = worst.max((e.psi(&sx, &p) - e.psi(&x, &sp)).norm() / base);
                }
            }
            out.push(at_most(case(n, ell), "max |psi(sx;p) - psi(x;sp)| / |psi|", worst, 1e-10));
        }
        Ok(out)
    }

    fn bispectral(&mut self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for (n, ell) in self.cases(&[(2, 3), (3, 1), (3, 2), (3, 3)]) {
            let e = self.eigen(n, ell)?;
            let mut worst: f64 = 0.0;
            for _ in 0..self.cfg.samples {
                let (x, p) = (self.spread(n, ell), self.spread(n, ell));
                worst = worst.max(rel(e.psi(&x, &p), e.psi(&p, &x)));
            }
            out.push(at_most(case(n, ell), "max relative |psi(x;p) - psi(p;x)|", worst, 1e-12));
        }
        Ok(out)
    }

    fn cluster(&mut self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for (n, ell) in self.cases(&[(3, 1), (3, 2), (3, 3)]) {
            if n < 2 {
                return Err(Error::Domain("the cluster suite needs N >= 2".into()));
            }
            let whole = self.eigen(n, ell)?;
            // particles 0..n-1 stay, the last one moves away
            let part = self.eigen(n - 1, ell)?;
            let (x, p) = (self.spread(n, ell), self.spread(n, ell));
            let inner =
                if n == 2 { Complex64::new(1.0, 0.0) } else { part.script_f(&x[..n - 1], &p[..n - 1])? };
            let mut pts = Vec::new();
            for r in [1e3, 2e3, 4e3, 8e3, 1.6e4] {
                let mut xs = x.clone();
                xs[n - 1] += r;
                pts.push((r, (whole.script_f(&xs, &p)? - inner).norm()));
            }
            let c = case(n, ell);
            if pts.iter().all(|&(_, d)| d == 0.0) {
                out.push(at_most(c, "cluster difference (identically zero)", 0.0, 0.0));
            } else {
                out.push(near(c, "slope of log|F_N - F_cluster| vs log R", log_log_slope(&pts), -1.0, 0.1));
            }
        }
        Ok(out)
    }

    fn coincidence(&mut self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for (n, ell) in self.cases(&[(2, 1), (2, 3), (3, 1), (3, 2), (3, 3)]) {
            let e = self.eigen(n, ell)?;
            // a large momentum difference for the approaching pair and spectators far
            // from it keep the Laurent cancellation moderate at s = 1e-2
            let gap = separation_gap(ell);
            let mut p: Vec<f64> = (0..n).map(|k| 1.3 + gap * (k as f64 - 2.0)).collect();
            p[0] = 5.0;
            p[1] = -5.0;
            let mut x: Vec<f64> = (0..n).map(|k| 0.3 + 2.0 * gap * (k as f64 - 1.0)).collect();
            let centre = 0.3 + self.rng.random_range(-0.5..0.5);
            let pts: Vec<(f64, f64)> = (0..9)
                .map(|k| {
                    let s = 1e-2 * 10f64.powf(k as f64 / 8.0);
                    x[0] = centre + 0.5 * s;
                    x[1] = centre - 0.5 * s;
                    (s, e.psi(&x, &p).norm())
                })
                .collect();
            out.push(near(
                case(n, ell),
                "slope of log|psi| vs log s",
                log_log_slope(&pts),
                ell as f64 + 1.0,
                0.05,
            ));
        }
        Ok(out)
    }

    fn bessel_match(&mut self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        let defaults: Vec<(usize, u32)> = (0..=6).map(|l| (2, l)).collect();
        for (n, ell) in self.cases(&defaults) {
            if n != 2 {
                return Err(Error::Domain("bessel-match compares two-body forms; use N=2".into()));
            }
            let e = self.eigen(2, ell)?;
            let mut worst: f64 = 0.0;
            for _ in 0..self.cfg.samples.max(200) {
                let (x, p) = (self.spread(2, ell), self.spread(2, ell));
                worst = worst.max(rel(e.psi(&x, &p), psi2_bessel(&x, &p, ell)?));
            }
            out.push(at_most(case(n, ell), "max relative difference", worst, 1e-10));
        }
        Ok(out)
    }

    fn kernel_point(&mut self, n: usize, ell: u32) -> Result<KernelPoint> {
        let x = self.spread(n, ell);
        let y = self.spread(n, ell);
        let t = self.rng.random_range(0.2..1.2);
        KernelPoint::new(x, y, t)
    }

    fn l0_match(&mut self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for (n, ell) in self.cases(&[(2, 0), (3, 0), (4, 0)]) {
            if ell != 0 {
                return Err(Error::Domain("l0-match compares at l = 0".into()));
            }
            let prop = self.propagator(n, 0)?;
            let mut worst: f64 = 0.0;
            for _ in 0..self.cfg.samples {
                let pt = self.kernel_point(n, 0)?;
                worst = worst.max(rel(prop.kernel(&pt)?, kernel_l0(&pt, n, self.cfg.omega)?));
            }
            out.push(at_most(case(n, ell), "max relative difference", worst, 1e-10));
        }
        Ok(out)
    }

    fn explicit_vs_k(&mut self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for (n, ell) in self.cases(&[(2, 1), (2, 2), (3, 1), (3, 2)]) {
            let prop = self.propagator(n, ell)?;
            let table = prop.eigenfunction().table().clone();
            let params = prop.params();
            let mut worst: f64 = 0.0;
            for _ in 0..self.cfg.samples {
                let pt = self.kernel_point(n, ell)?;
                worst = worst.max(rel(prop.kernel(&pt)?, kernel_explicit(&pt, &params, &table)?));
            }
            out.push(at_most(case(n, ell), "max relative difference", worst, 1e-10));
        }
        Ok(out)
    }

    fn free_limit(&mut self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for (n, ell) in self.cases(&[(2, 0), (2, 1), (2, 2)]) {
            let prop = self.propagator(n, ell)?;
            let params = prop.params();
            let d = free_limit_spacing(ell);
            let x: Vec<f64> = (0..n).map(|i| d * (i as f64 - 0.5 * (n - 1) as f64)).collect();
            let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v + 0.02 * (i as f64 + 1.0)).collect();
            let pt = KernelPoint::new(x, y, 1e-3)?;
            let dev = rel(prop.kernel(&pt)?, free_kernel(&pt, &params)?);
            out.push(at_most(case(n, ell), "relative |K - K_free| at t=1e-3", dev, 1e-4));
        }
        Ok(out)
    }

    fn semigroup(&mut self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for (n, ell) in self.cases(&[(2, 1)]) {
            let prop = self.propagator(n, ell)?;
            let mut worst: f64 = 0.0;
            for _ in 0..self.cfg.samples.min(5) {
                // modest displacements: exchanged pairings grow like exp(|x - y|^2 / t)
                // along the contour
                let x: Vec<f64> =
                    (0..n).map(|i| i as f64 * 1.1 - 0.5 + self.rng.random_range(-0.2..0.2)).collect();
                let y: Vec<f64> = x.iter().map(|v| v + self.rng.random_range(-0.4..0.4)).collect();
                let got = compose_kernel(&prop, &x, &y, 0.1, 0.1, &ContourRule::default())?;
                worst = worst.max(rel(got, prop.eval(&x, &y, 0.2)?));
            }
            out.push(at_most(case(n, ell), "max relative |K*K - K|", worst, 1e-4));
        }
        Ok(out)
    }

    fn oracle_roundtrip(&mut self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for (n, ell) in self.cases(&[(3, 2)]) {
            let opts = SolveOptions { seed: self.cfg.seed, ..SolveOptions::default() };
            let report = solve(n, ell, &opts)?;
            let params = ModelParams::new(n, ell, 0.0)?;
            let check = verify_table(&report.table, &params, 4, self.cfg.seed ^ 0xa5a5)?;
            let residual = if check.is_exact_zero() { 0.0 } else { f64::INFINITY };
            out.push(at_most(case(n, ell), "exact residual on fresh samples", residual, 0.0));
            if let Ok(reference) = resolve_table(n, ell, TableSource::ClosedForm) {
                let solved = to_representation(&report.table, Representation::ProductOfF)?;
                let differing = table_distance(&solved, &reference);
                out.push(at_most(
                    case(n, ell),
                    "terms differing from the closed form",
                    differing as f64,
                    0.0,
                ));
            }
        }
        Ok(out)
    }

    fn conjecture_check(&mut self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for (n, ell) in self.cases(&[(2, 1), (3, 1), (4, 1)]) {
            if ell != 1 {
                return Err(Error::Domain("the clique conjecture covers l = 1".into()));
            }
            let conj = ell1_conjecture_table(n)?;
            let opts = SolveOptions {
                basis: Representation::LaurentMonomial,
                seed: self.cfg.seed,
                ..SolveOptions::default()
            };
            let solved = solve(n, ell, &opts)?.table;
            let differing = table_distance(&solved, &conj);
            out.push(at_most(case(n, ell), "terms differing from the conjecture", differing as f64, 0.0));
        }
        Ok(out)
    }
}

/// Particle spacing used by the free-limit suite. Balances the harmonic phase error,
/// growing like `t d^2`, against the interaction correction `l(l+1) t / d^2`.
pub fn free_limit_spacing(ell: u32) -> f64 {
    let g = (ell * (ell + 1)) as f64;
    (4.0 * g).powf(0.25).max(0.4)
}

/// Multi-indices whose coefficients differ between two tables of equal shape.
fn table_distance(a: &CoefficientTable, b: &CoefficientTable) -> usize {
    let mut keys: Vec<_> =
        a.terms().map(|(m, _)| m.clone()).chain(b.terms().map(|(m, _)| m.clone())).collect();
    keys.sort();
    keys.dedup();
    keys.iter().filter(|m| a.get(m) != b.get(m)).count()
}

/// Runs one suite.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut runner = Runner { cfg, rng: ChaCha8Rng::seed_from_u64(cfg.seed) };
    let checks = match suite {
        Suite::EigenResidual => runner.eigen_residual(),
        Suite::Scaling => runner.scaling(),
        Suite::Cluster => runner.cluster(),
        Suite::Coincidence => runner.coincidence(),
        Suite::Bispectral => runner.bispectral(),
        Suite::BesselMatch => runner.bessel_match(),
        Suite::L0Match => runner.l0_match(),
        Suite::ExplicitVsK => runner.explicit_vs_k(),
        Suite::FreeLimit => runner.free_limit(),
        Suite::Semigroup => runner.semigroup(),
        Suite::OracleRoundtrip => runner.oracle_roundtrip(),
        Suite::ConjectureCheck => runner.conjecture_check(),
    }?;
    Ok(SuiteReport {
        suite: suite.name().into(),
        passed: checks.iter().all(|c| c.passed),
        seed: cfg.seed,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        checks,
    })
}
