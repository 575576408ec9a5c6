//! Exact residual of the trap-free eigen-equation on single basis functions.
//!
//! With `Phi = B(x; p) e^{ip.x}`, the equation `H Phi = (p^2/2) Phi` reduces to
//! `-1/2 Lap B - i p.grad B + sum_{i<j} l(l+1)/(x_i-x_j)^2 B = 0`. For
//! `B = prod_a g_a(w_a)` with `w_a = 1/X_a = i/(d_a e_a)`, `d_a = p_i - p_j` and
//! `e_a = x_i - x_j`, every derivative reduces to the Euler operator `D = w d/dw`:
//! with `r1 = Dg/g`, `r2 = (Dg + D^2 g)/g` and `L_i = -sum_{a ni i} s_{i,a} r1_a / e_a`,
//!
//! `residual / B = -1/2 sum_i L_i^2 - sum_a (r2_a - r1_a^2)/e_a^2
//!                 + i sum_a (d_a/e_a) r1_a + l(l+1) sum_a 1/e_a^2`.

use num_rational::BigRational;
use rand::Rng;

use super::field::{Field, Gaussian};
use crate::coefficients::{MultiIndex, Representation};
use crate::error::{Error, Result};
use crate::foundation::{pairs, PairIndex};
use crate::wavefunction::fk_coefficient;

/// A rational sample point together with its two exact rational rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSample {
    pub x: Vec<BigRational>,
    pub p: Vec<BigRational>,
    /// Real part of the residual of each unknown's basis function.
    pub real: Vec<BigRational>,
    /// Imaginary part of the same.
    pub imag: Vec<BigRational>,
}

/// Per-pair data for one sample: `g`, pair-local residual terms and `L` weights for every
/// basis index `0..=l`.
struct PairTable<K: Field> {
    g: Vec<Gaussian<K>>,
    local: Vec<Gaussian<K>>,
    /// `-r1 / e`; enters `L_i` with the orientation sign of `i` in the pair.
    slope: Vec<Gaussian<K>>,
}

/// Precomputed per-sample state for evaluating many basis functions at one point.
pub struct SampleContext<K: Field> {
    ctx: K::Ctx,
    n: usize,
    width: usize,
    pairs: Vec<PairIndex>,
    tables: Vec<PairTable<K>>,
    potential: Gaussian<K>,
    half: K,
}

impl<K: Field> SampleContext<K> {
    /// Builds the context; fails with a singularity if two coordinates or two momenta
    /// coincide, or if some basis factor vanishes at the sample.
    pub fn new(
        ctx: K::Ctx,
        x: &[BigRational],
        p: &[BigRational],
        ell: u32,
        basis: Representation,
    ) -> Result<Self> {
        let n = x.len();
        let lift = |q: &BigRational| {
            K::from_rational(ctx, q)
                .ok_or_else(|| Error::Singularity("sample denominator vanishes in field".into()))
        };
        let xs: Vec<K> = x.iter().map(lift).collect::<Result<_>>()?;
        let ps: Vec<K> = p.iter().map(lift).collect::<Result<_>>()?;
        let width = ell as usize + 1;
        let ll1 = K::from_int(ctx, ell as i64 * (ell as i64 + 1));
        let half = K::from_int(ctx, 2).try_inv().expect("odd characteristic");
        let pair_list = pairs(n);
        let mut tables = Vec::with_capacity(pair_list.len());
        let mut potential = K::from_int(ctx, 0);
        for pair in &pair_list {
            let (i, j) = (pair.first(), pair.second());
            let d = ps[i].clone() - ps[j].clone();
            let e = xs[i].clone() - xs[j].clone();
            let inv_e =
                e.try_inv().ok_or_else(|| Error::Singularity(format!("x coincide on pair {pair}")))?;
            let t = (d.clone() * e.clone())
                .try_inv()
                .ok_or_else(|| Error::Singularity(format!("p coincide on pair {pair}")))?;
            let inv_e2 = inv_e.clone() * inv_e.clone();
            potential = potential + inv_e2.clone();
            let w = Gaussian::imag(t, ctx);
            let mut powers = vec![Gaussian::one(ctx)];
            for _ in 0..ell {
                let last = powers.last().cloned().expect("nonempty");
                powers.push(last * w.clone());
            }
            let d_over_e = d * inv_e.clone();
            let mut table = PairTable {
                g: Vec::with_capacity(width),
                local: Vec::with_capacity(width),
                slope: Vec::with_capacity(width),
            };
            for v in 0..width as u32 {
                let (g, r1, r2) = match basis {
                    Representation::LaurentMonomial => {
                        let r1 = K::from_int(ctx, v as i64);
                        let r2 = K::from_int(ctx, (v + v * v) as i64);
                        (powers[v as usize].clone(), Gaussian::real(r1, ctx), Gaussian::real(r2, ctx))
                    }
                    Representation::ProductOfF => {
                        let mut g = Gaussian::zero(ctx);
                        let mut dg = Gaussian::zero(ctx);
                        let mut ddg = Gaussian::zero(ctx);
                        for a in v..=ell {
                            let c = K::from_rational(ctx, &fk_coefficient(ell, v, a)).ok_or_else(|| {
                                Error::Singularity("F_k coefficient vanishes in field".into())
                            })?;
                            let term = powers[a as usize].scale(&c);
                            let a_k = K::from_int(ctx, a as i64);
                            let once = term.scale(&a_k);
                            g = g + term;
                            ddg = ddg + once.scale(&a_k);
                            dg = dg + once;
                        }
                        let inv_g = g.inv().ok_or_else(|| {
                            Error::Singularity(format!("F_{v} vanishes at the sample on pair {pair}"))
                        })?;
                        let r1 = dg.clone() * inv_g.clone();
                        let r2 = (dg + ddg) * inv_g;
                        (g, r1, r2)
                    }
                };
                let curvature = (r2 - r1.clone() * r1.clone()).scale(&inv_e2);
                let drift = r1.scale(&d_over_e).times_i();
                table.local.push(drift - curvature);
                table.slope.push(-r1.scale(&inv_e));
                table.g.push(g);
            }
            tables.push(table);
        }
        let potential = Gaussian::real(ll1 * potential, ctx);
        Ok(Self { ctx, n, width, pairs: pair_list, tables, potential, half })
    }

    /// Residual of the basis function selected by `m` (entries index the per-pair factor).
    pub fn residual(&self, m: &[u8]) -> Gaussian<K> {
        let ctx = self.ctx;
        let mut b = Gaussian::one(ctx);
        let mut bracket = self.potential.clone();
        let mut l = vec![Gaussian::zero(ctx); self.n];
        for (slot, pair) in self.pairs.iter().enumerate() {
            let v = m[slot] as usize;
            debug_assert!(v < self.width);
            let t = &self.tables[slot];
            b = b * t.g[v].clone();
            bracket = bracket + t.local[v].clone();
            let s = &t.slope[v];
            l[pair.first()] = l[pair.first()].clone() + s.clone();
            l[pair.second()] = l[pair.second()].clone() - s.clone();
        }
        let mut sq = Gaussian::zero(ctx);
        for li in l {
            sq = sq + li.clone() * li;
        }
        bracket = bracket - sq.scale(&self.half);
        b * bracket
    }
}

/// Exact residual row: one Gaussian rational per unknown basis function.
pub fn residual_row(
    x: &[BigRational],
    p: &[BigRational],
    ell: u32,
    unknowns: &[MultiIndex],
    basis: Representation,
) -> Result<Vec<Gaussian<BigRational>>> {
    let sc = SampleContext::<BigRational>::new((), x, p, ell, basis)?;
    Ok(unknowns.iter().map(|m| sc.residual(m.entries())).collect())
}

/// [`residual_row`] split into its real and imaginary rational rows.
pub fn residual_sample(
    x: &[BigRational],
    p: &[BigRational],
    ell: u32,
    unknowns: &[MultiIndex],
    basis: Representation,
) -> Result<ResidualSample> {
    let row = residual_row(x, p, ell, unknowns, basis)?;
    let (real, imag) = row.into_iter().map(|g| (g.re, g.im)).unzip();
    Ok(ResidualSample { x: x.to_vec(), p: p.to_vec(), real, imag })
}

/// `n` pairwise-distinct rationals `a/q`, `a` in `[-9, 9]`, `q` in `{1, 2, 3}`.
pub fn draw_distinct<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(n);
    while out.len() < n {
        let a: i64 = rng.random_range(-9..=9);
        let q: i64 = rng.random_range(1..=3);
        let v = BigRational::new(a.into(), q.into());
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// A random admissible sample `(x, p)` with nonvanishing basis factors for `basis`.
pub fn draw_sample<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    ell: u32,
    basis: Representation,
) -> (Vec<BigRational>, Vec<BigRational>) {
    loop {
        let x = draw_distinct(rng, n);
        let p = draw_distinct(rng, n);
        if SampleContext::<BigRational>::new((), &x, &p, ell, basis).is_ok() {
            return (x, p);
        }
    }
}
