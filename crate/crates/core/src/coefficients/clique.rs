use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Pow};

use super::{CoefficientTable, MultiIndex, Representation, Status};
use crate::error::{Error, Result};
use crate::foundation::{factorial, pairs, PairIndex};

/// Largest `N` for which the full `l = 1` table is materialized (`2^15` entries).
pub const MAX_CONJECTURE_TABLE_N: usize = 6;

/// Largest `N` accepted by the per-index conjecture formula.
pub const MAX_CONJECTURE_N: usize = 8;

/// Multigraph on `N` nodes, one edge multiplicity per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairGraph {
    n: usize,
    adjacency: Vec<u16>,
    multiplicity: Vec<u8>,
}

impl PairGraph {
    pub fn from_multi_index(m: &MultiIndex) -> Self {
        let n = m.particles();
        let mut adjacency = vec![0u16; n];
        for (pair, &mult) in pairs(n).iter().zip(m.entries()) {
            if mult > 0 {
                adjacency[pair.first()] |= 1 << pair.second();
                adjacency[pair.second()] |= 1 << pair.first();
            }
        }
        Self { n, adjacency, multiplicity: m.entries().to_vec() }
    }

    pub fn complete(n: usize) -> Self {
        Self::from_multi_index(&MultiIndex::filled(n, 1))
    }

    pub fn empty(n: usize) -> Self {
        Self::from_multi_index(&MultiIndex::zeros(n))
    }

    #[inline]
    pub fn nodes(&self) -> usize {
        self.n
    }

    pub fn multiplicity(&self, pair: PairIndex) -> u8 {
        self.multiplicity[crate::foundation::pair_position(self.n, pair)]
    }

    pub fn is_simple(&self) -> bool {
        self.multiplicity.iter().all(|&m| m <= 1)
    }

    /// Whether the node set encoded by `mask` is fully connected.
    fn is_clique(&self, mask: u32) -> bool {
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let others = mask & !(1 << i);
            if (self.adjacency[i] as u32) & others != others {
                return false;
            }
        }
        true
    }

    /// `q_n` for every `n` in `0..=N`.
    fn clique_profile(&self) -> Vec<u64> {
        let mut q = vec![0u64; self.n + 1];
        for mask in 1u32..(1 << self.n) {
            if self.is_clique(mask) {
                q[mask.count_ones() as usize] += 1;
            }
        }
        q
    }
}

/// Number of fully connected `size`-subsets of the nodes of a simple graph.
pub fn clique_count(g: &PairGraph, size: usize) -> Result<u64> {
    if !g.is_simple() {
        return Err(Error::Domain("clique counting needs a simple graph".into()));
    }
    if size > g.n {
        return Ok(0);
    }
    Ok(g.clique_profile()[size])
}

fn f_cache() -> &'static Vec<BigRational> {
    static CACHE: OnceLock<Vec<BigRational>> = OnceLock::new();
    CACHE.get_or_init(|| {
        // f[0], f[1] unused placeholders
        let mut f = vec![BigRational::one(), BigRational::one()];
        for big_n in 2..=MAX_CONJECTURE_N.max(12) as u64 {
            let mut value = BigRational::one();
            for k in 2..=big_n {
                value *= BigRational::from_integer(factorial(k as u32).into());
            }
            for (k, fk) in f.iter().enumerate().take(big_n as usize).skip(2) {
                let exp: BigInt = binomial(BigInt::from(big_n), BigInt::from(k as u64));
                let exp = u32::try_from(exp).expect("small binomial");
                value /= Pow::pow(fk, exp);
            }
            f.push(value);
        }
        f
    })
}

/// The `l = 1` clique weights `f_n`, fixed by `prod_{n=2}^{N} f_n^{binom(N,n)} = prod_{n=2}^{N} n!`.
pub fn f_sequence(n: usize) -> Result<BigRational> {
    let cache = f_cache();
    if n < 2 {
        return Err(Error::Domain(format!("f_n defined for n >= 2, got {n}")));
    }
    cache.get(n).cloned().ok_or_else(|| Error::SizeLimit(format!("f_{n} beyond precomputed range")))
}

/// Conjectured `C_N(m) = prod_n f_n^{q_n(m)}` for a simple graph `m`.
pub fn ell1_conjecture_coefficient(m: &MultiIndex) -> Result<BigRational> {
    let n = m.particles();
    if !(2..=MAX_CONJECTURE_N).contains(&n) {
        return Err(Error::SizeLimit(format!(
            "conjecture formula supports 2 <= N <= {MAX_CONJECTURE_N}, got {n}"
        )));
    }
    let g = PairGraph::from_multi_index(m);
    if !g.is_simple() {
        return Err(Error::Domain(format!("{m} is not an l=1 multi-index")));
    }
    let f = f_cache();
    let mut value = BigRational::one();
    for (size, &q) in g.clique_profile().iter().enumerate().skip(2) {
        if q > 0 {
            value *= Pow::pow(&f[size], q as u32);
        }
    }
    Ok(value)
}

/// Full `l = 1` Laurent table from the clique conjecture.
///
/// Every value is checked to be a positive integer; a failure is reported, not repaired.
pub fn ell1_conjecture_table(n: usize) -> Result<CoefficientTable> {
    if !(2..=MAX_CONJECTURE_TABLE_N).contains(&n) {
        return Err(Error::SizeLimit(format!(
            "conjecture table materialized for 2 <= N <= {MAX_CONJECTURE_TABLE_N}, got {n}"
        )));
    }
    let mut terms = Vec::new();
    for m in MultiIndex::hypercube(n, 1) {
        let v = ell1_conjecture_coefficient(&m)?;
        if !v.is_integer() {
            return Err(Error::ConjectureViolation(format!("C_{n}{m} = {v} is not an integer")));
        }
        terms.push((m, v));
    }
    CoefficientTable::new(n, 1, Representation::LaurentMonomial, Status::Conjecture, terms)
}
