//! Subcommand implementations. Each validates its whole configuration before
//! doing any numerical work.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use calogero_core::evolution::{evolve_with, norm_drift, Coordinates, EvolveOptions, KernelRoute};
use calogero_core::io::{format_float, write_csv, write_figure};
use calogero_core::oracle::{resolve_table, solve, SolveOptions};
use calogero_core::propagator::{figure_grid, GridSpec, TimeFactors};
use calogero_core::verify::run_suite;
use calogero_core::{
    Configuration, Eigenfunction, Error, Exchange, ModelParams, Momentum, Propagator, QuadratureGrid,
    Representation, Result, Suite, SuiteReport, TableSource, VerifyConfig, WavePacket,
};

use crate::args::{
    Basis, EvolveArgs, ExchangeArg, GridArgs, KernelArgs, PacketKind, PsiArgs, Route, SolveArgs, VerifyArgs,
};

/// Largest `grid --res`; 4096^2 kernel evaluations is already minutes of work.
const MAX_GRID_RES: usize = 4096;
/// Largest default output grid for `evolve`.
const MAX_EVOLVE_RES: usize = 1000;

/// Process exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ChecksFailed,
}

fn expect_len(name: &str, values: &[f64], n: usize) -> Result<()> {
    if values.len() != n {
        return Err(Error::Domain(format!("--{name} has {} entries, N={n}", values.len())));
    }
    Ok(())
}

/// Writes to `path`, or to standard output when it is absent.
fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn write_value(path: Option<&Path>, z: calogero_core::Complex64) -> Result<()> {
    with_output(path, |w| write_csv(w, &["re", "im", "abs"], [vec![z.re, z.im, z.norm()]]))
}

fn propagator(params: ModelParams, source: TableSource) -> Result<Propagator> {
    Propagator::new(params, resolve_table(params.n, params.ell, source)?)
}

pub fn grid(args: GridArgs) -> Result<Outcome> {
    if args.n != 3 {
        return Err(Error::Domain(format!("the u-v grid is defined for N=3, got N={}", args.n)));
    }
    let params = ModelParams::new(args.n, args.ell, args.omega)?;
    expect_len("y", &args.y.0, 3)?;
    if args.res == 0 || args.res > MAX_GRID_RES {
        return Err(Error::SizeLimit(format!("--res must be in 1..={MAX_GRID_RES}, got {}", args.res)));
    }
    if args.stem.is_empty() || args.stem.contains(['/', '\\']) {
        return Err(Error::Domain(format!("invalid file stem {:?}", args.stem)));
    }
    TimeFactors::new(args.t, args.omega)?;
    let spec = GridSpec { lo: args.bounds.lo, hi: args.bounds.hi, res: args.res };
    let prop = match args.ell {
        0 => None,
        _ => Some(propagator(params, args.table)?),
    };
    let field = figure_grid(prop.as_ref(), &args.y.0, args.t, args.omega, spec)?;
    let files = write_figure(&field, &args.out, &args.stem)?;
    println!("{}", files.csv.display());
    for image in &files.images {
        println!("{}", image.display());
    }
    println!("{}", files.sidecar.display());
    Ok(Outcome::Success)
}

pub fn verify(args: VerifyArgs) -> Result<Outcome> {
    let suites: Vec<Suite> = match args.suite.as_str() {
        "all" => Suite::ALL.to_vec(),
        name => vec![name.parse()?],
    };
    if let Some(n) = args.n {
        ModelParams::new(n, args.ell.unwrap_or(0), args.omega)?;
    }
    if !args.omega.is_finite() || args.omega < 0.0 {
        return Err(Error::Domain(format!("omega must be finite and non-negative, got {}", args.omega)));
    }
    if args.samples == 0 {
        return Err(Error::Domain("--samples must be positive".into()));
    }
    let cfg = VerifyConfig {
        n: args.n,
        ell: args.ell,
        omega: args.omega,
        seed: args.seed,
        samples: args.samples,
        table: args.table,
    };
    let mut reports: Vec<SuiteReport> = Vec::with_capacity(suites.len());
    for suite in suites {
        let report = run_suite(suite, &cfg)?;
        let status = if report.passed { "pass" } else { "FAIL" };
        eprintln!("{}: {status} ({:.2} s)", report.suite, report.elapsed_seconds);
        for c in report.checks.iter().filter(|c| !c.passed) {
            eprintln!("  {} {} = {:e} (threshold {:e})", c.case, c.metric, c.value, c.threshold);
        }
        reports.push(report);
    }
    let json = match &reports[..] {
        [one] => serde_json::to_string_pretty(one)?,
        many => serde_json::to_string_pretty(many)?,
    };
    with_output(args.out.as_deref(), |w| {
        w.write_all(json.as_bytes())?;
        w.write_all(b"\n")?;
        Ok(())
    })?;
    Ok(if reports.iter().all(|r| r.passed) { Outcome::Success } else { Outcome::ChecksFailed })
}

pub fn solve_cmd(args: SolveArgs) -> Result<Outcome> {
    let params = ModelParams::new(args.model.n, args.model.ell, 0.0)?;
    let options = SolveOptions {
        basis: match args.basis {
            Basis::Product => Representation::ProductOfF,
            Basis::Laurent => Representation::LaurentMonomial,
        },
        sample_count: args.samples,
        seed: args.seed,
        ..SolveOptions::default()
    };
    let report = match solve(params.n, params.ell, &options) {
        Ok(r) => r,
        Err(Error::DegenerateSampling { rank, unknowns }) => {
            // the rank report is the result; it goes to the output before the error line
            if let Some(path) = &args.out {
                let body = serde_json::json!({
                    "N": params.n,
                    "ell": params.ell,
                    "status": "rank-deficient",
                    "rank": rank,
                    "unknowns": unknowns,
                    "seed": args.seed,
                });
                std::fs::write(path, format!("{}\n", serde_json::to_string_pretty(&body)?))?;
            }
            return Err(Error::DegenerateSampling { rank, unknowns });
        }
        Err(e) => return Err(e),
    };
    eprintln!(
        "N={} l={}: {} nonzero terms of {} unknowns from {} samples in {:.2} s",
        params.n,
        params.ell,
        report.table.len(),
        report.unknowns,
        report.samples,
        report.elapsed.as_secs_f64()
    );
    let json = report.table.to_json()?;
    with_output(args.out.as_deref(), |w| {
        w.write_all(json.as_bytes())?;
        w.write_all(b"\n")?;
        Ok(())
    })?;
    Ok(Outcome::Success)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

fn build_packet(args: &EvolveArgs) -> Result<(WavePacket, Vec<f64>)> {
    let n = args.n;
    let exchange = match args.exchange {
        ExchangeArg::Auto => Exchange::for_ell(args.ell),
        ExchangeArg::Symmetric => Exchange::Symmetric,
        ExchangeArg::Antisymmetric => Exchange::Antisymmetric,
        ExchangeArg::Product => Exchange::Product,
    };
    match args.packet {
        PacketKind::Gaussian => {
            if args.levels.is_some() {
                return Err(Error::Domain("--levels applies to --packet oscillator".into()));
            }
            let centres = args.centres.as_ref().map_or_else(|| linspace(-3.0, 3.0, n), |c| c.0.clone());
            let widths = args.widths.as_ref().map_or_else(|| vec![1.0; n], |w| w.0.clone());
            let momenta = args.momenta.as_ref().map_or_else(|| vec![0.0; n], |m| m.0.clone());
            expect_len("centres", &centres, n)?;
            expect_len("widths", &widths, n)?;
            expect_len("momenta", &momenta, n)?;
            Ok((WavePacket::gaussian(&centres, &widths, &momenta, exchange)?, centres))
        }
        PacketKind::Oscillator => {
            if args.centres.is_some() || args.widths.is_some() || args.momenta.is_some() {
                return Err(Error::Domain(
                    "--centres, --widths and --momenta apply to --packet gaussian".into(),
                ));
            }
            let levels: Vec<u32> = match &args.levels {
                Some(l) => {
                    expect_len("levels", &l.0, n)?;
                    l.0.iter()
                        .map(|&v| {
                            if v >= 0.0 && v.fract() == 0.0 && v <= 64.0 {
                                Ok(v as u32)
                            } else {
                                Err(Error::Domain(format!(
                                    "oscillator level {v} is not an integer in 0..=64"
                                )))
                            }
                        })
                        .collect::<Result<_>>()?
                }
                None => (0..n as u32).collect(),
            };
            Ok((WavePacket::oscillator(&levels, args.omega, exchange)?, linspace(-1.0, 1.0, n)))
        }
    }
}

pub fn evolve(args: EvolveArgs) -> Result<Outcome> {
    let params = ModelParams::new(args.n, args.ell, args.omega)?;
    TimeFactors::new(args.t, args.omega)?;
    if args.n > 3 {
        return Err(Error::SizeLimit(format!("evolution supports N <= 3, got N={}", args.n)));
    }
    if args.refine == 0 {
        return Err(Error::Domain("--refine must be positive".into()));
    }
    if !(args.tolerance > 0.0) {
        return Err(Error::Domain("--tolerance must be positive".into()));
    }
    let kernel = match args.route {
        Route::General => KernelRoute::General,
        Route::L0 if args.ell == 0 => KernelRoute::ZeroCoupling,
        Route::L0 => return Err(Error::Domain(format!("--route l0 needs l=0, got l={}", args.ell))),
    };
    let (packet, anchor) = build_packet(&args)?;
    let outputs: Vec<Configuration> = match (&args.x, args.n) {
        (Some(points), _) => points
            .0
            .iter()
            .map(|p| {
                expect_len("x", p, args.n)?;
                Configuration::new(p.clone())
            })
            .collect::<Result<_>>()?,
        (None, 2) => {
            if args.res == 0 || args.res > MAX_EVOLVE_RES {
                return Err(Error::SizeLimit(format!(
                    "--res must be in 1..={MAX_EVOLVE_RES}, got {}",
                    args.res
                )));
            }
            let axis = linspace(args.bounds.lo, args.bounds.hi, args.res);
            axis.iter()
                .flat_map(|&x1| axis.iter().map(move |&x2| vec![x1, x2]))
                .map(Configuration::new)
                .collect::<Result<_>>()?
        }
        (None, _) => vec![Configuration::new(anchor)?],
    };
    let table = match kernel {
        KernelRoute::General => Some(resolve_table(params.n, params.ell, args.table.clone())?),
        KernelRoute::ZeroCoupling => None,
    };
    let grid = QuadratureGrid::auto(&packet, args.t, &params, &outputs)?.refined(args.refine)?;
    let opts = EvolveOptions { kernel, tolerance: args.tolerance, estimate_error: true, table };

    let evolution = evolve_with(&packet, args.t, &params, &grid, &outputs, &opts)?;
    if let Some(w) = &evolution.warning {
        eprintln!("warning: {w}");
    }
    let mut header: Vec<String> = (1..=args.n).map(|i| format!("x{i}")).collect();
    header.extend(["re", "im", "abs", "re0", "im0", "abs0"].map(String::from));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = outputs.iter().zip(&evolution.values).map(|(x, z)| {
        let z0 = packet.value(x.as_slice());
        let mut row = x.as_slice().to_vec();
        row.extend([z.re, z.im, z.norm(), z0.re, z0.im, z0.norm()]);
        row
    });
    write_csv(BufWriter::new(File::create(&args.out)?), &header_refs, rows)?;
    println!("{}", args.out.display());
    let estimate = evolution.error_estimate.map_or_else(|| "none".into(), format_float);
    println!("points={} quadrature_nodes={} error_estimate={estimate}", outputs.len(), evolution.points);

    if args.skip_norm {
        println!("norm: skipped");
    } else if grid.coordinates == Coordinates::CentreOfMass {
        let norm = norm_drift(&packet, args.t, &params, &grid, &opts)?;
        println!(
            "norm: initial={} evolved={} drift={} error_estimate={}",
            format_float(norm.initial),
            format_float(norm.evolved),
            format_float(norm.drift),
            norm.error_estimate.map_or_else(|| "none".into(), format_float)
        );
    } else {
        println!("norm: skipped (needs a separable two-body packet)");
    }
    Ok(Outcome::Success)
}

pub fn psi(args: PsiArgs) -> Result<Outcome> {
    let params = ModelParams::new(args.model.n, args.model.ell, 0.0)?;
    expect_len("x", &args.x.0, params.n)?;
    expect_len("p", &args.p.0, params.n)?;
    let x = Configuration::new(args.x.0)?;
    let p = Momentum::new(args.p.0)?;
    let eigen = Eigenfunction::new(params, resolve_table(params.n, params.ell, args.table)?)?;
    let eval = eigen.evaluate(&x, &p)?;
    if let Some(w) = eval.warning {
        eprintln!("warning: {w}");
    }
    write_value(args.out.as_deref(), eval.value)?;
    Ok(Outcome::Success)
}

pub fn kernel(args: KernelArgs) -> Result<Outcome> {
    let params = ModelParams::new(args.model.n, args.model.ell, args.omega)?;
    expect_len("x", &args.x.0, params.n)?;
    expect_len("y", &args.y.0, params.n)?;
    let f = TimeFactors::new(args.t, args.omega)?;
    let value = match args.route {
        Route::L0 if params.ell != 0 => {
            return Err(Error::Domain(format!("--route l0 needs l=0, got l={}", params.ell)));
        }
        Route::L0 => {
            calogero_core::propagator::ZeroCouplingKernel::new(params.n)?.eval_at(&args.x.0, &args.y.0, f)
        }
        Route::General => propagator(params, args.table)?.eval_at(&args.x.0, &args.y.0, f),
    };
    write_value(args.out.as_deref(), value)?;
    Ok(Outcome::Success)
}
