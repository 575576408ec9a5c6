use std::fmt;

use crate::error::{Error, Result};
use crate::foundation::{pair_count, pair_position, pairs, PairIndex, Permutation};

/// Pair-exponent vector `(m_{1,2}, m_{1,3}, ..., m_{N-1,N})` in canonical pair order.
///
/// Used both for the `k`-vectors of the product-of-`F_k` expansion and the
/// `m`-vectors of the Laurent-monomial expansion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    n: usize,
    entries: Vec<u8>,
}

impl MultiIndex {
    pub fn new(n: usize, entries: Vec<u8>) -> Result<Self> {
        if entries.len() != pair_count(n) {
            return Err(Error::Domain(format!(
                "multi-index for N={n} needs {} entries, got {}",
                pair_count(n),
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![0; pair_count(n)] }
    }

    pub fn filled(n: usize, value: u8) -> Self {
        Self { n, entries: vec![value; pair_count(n)] }
    }

    #[inline]
    pub fn particles(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn get(&self, pair: PairIndex) -> u8 {
        self.entries[pair_position(self.n, pair)]
    }

    pub fn max_entry(&self) -> u8 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// Mixed-radix position of this index in the `{0..=ell}^P` hypercube.
    pub fn rank(&self, ell: u32) -> usize {
        let base = ell as usize + 1;
        self.entries.iter().fold(0usize, |acc, &e| acc * base + e as usize)
    }

    /// Renames particles: node `i` of the result carries what node `sigma(i)` carried.
    pub fn relabel(&self, sigma: &Permutation) -> MultiIndex {
        let mut entries = vec![0; self.entries.len()];
        for (pos, pair) in pairs(self.n).into_iter().enumerate() {
            let (a, b) = (sigma.apply(pair.first()), sigma.apply(pair.second()));
            let src = PairIndex::new(a.min(b), a.max(b)).expect("distinct images");
            entries[pos] = self.entries[pair_position(self.n, src)];
        }
        MultiIndex { n: self.n, entries }
    }

    /// Every multi-index of the `{0..=ell}^P` hypercube in lexicographic order.
    pub fn hypercube(n: usize, ell: u32) -> impl Iterator<Item = MultiIndex> {
        let slots = pair_count(n);
        let base = ell as usize + 1;
        let total = base.pow(slots as u32);
        (0..total).map(move |mut r| {
            let mut entries = vec![0u8; slots];
            for slot in (0..slots).rev() {
                entries[slot] = (r % base) as u8;
                r /= base;
            }
            MultiIndex { n, entries }
        })
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}
