use std::fmt;

/// An unordered particle pair stored as `(i, j)` with `i < j`, zero-based.
///
/// Display is one-based to match the usual `(1,2), (1,3), ...` labelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairIndex {
    i: usize,
    j: usize,
}

impl PairIndex {
    pub fn new(i: usize, j: usize) -> Option<Self> {
        (i < j).then_some(Self { i, j })
    }

    #[inline]
    pub fn first(&self) -> usize {
        self.i
    }

    #[inline]
    pub fn second(&self) -> usize {
        self.j
    }

    /// `+1` if `particle` is the first member, `-1` if the second, `0` otherwise.
    #[inline]
    pub fn orientation(&self, particle: usize) -> i32 {
        if particle == self.i {
            1
        } else if particle == self.j {
            -1
        } else {
            0
        }
    }

    #[inline]
    pub fn contains(&self, particle: usize) -> bool {
        particle == self.i || particle == self.j
    }
}

impl fmt::Display for PairIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i + 1, self.j + 1)
    }
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// All pairs of `n` particles in canonical order `(1,2), (1,3), ..., (n-1,n)`.
pub fn pairs(n: usize) -> Vec<PairIndex> {
    let mut out = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i + 1..n {
            out.push(PairIndex { i, j });
        }
    }
    out
}

/// Position of `pair` in the canonical ordering of [`pairs`].
pub fn pair_position(n: usize, pair: PairIndex) -> usize {
    // rows 0..i contribute (n-1) + (n-2) + ... + (n-i) entries
    let i = pair.i;
    i * (2 * n - i - 1) / 2 + (pair.j - i - 1)
}
