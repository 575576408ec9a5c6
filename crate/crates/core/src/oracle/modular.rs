//! Incremental row echelon form over `Z/pZ`.

use super::field::inv_mod;

/// Accumulates augmented rows `[a_1 .. a_n | b]` modulo a prime, keeping pivots reduced
/// against earlier pivots so a single forward pass reduces new rows.
#[derive(Debug, Clone)]
pub struct ModularEchelon {
    p: u64,
    n: usize,
    pivots: Vec<(usize, Vec<u64>)>,
    inconsistent: bool,
}

impl ModularEchelon {
    pub fn new(p: u64, n: usize) -> Self {
        Self { p, n, pivots: Vec::new(), inconsistent: false }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.n
    }

    #[inline]
    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Reduces and inserts a row; returns true if it raised the rank.
    pub fn push(&mut self, mut row: Vec<u64>) -> bool {
        debug_assert_eq!(row.len(), self.n + 1);
        let p = self.p;
        for (col, prow) in &self.pivots {
            let f = row[*col];
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for (r, &v) in row.iter_mut().zip(prow.iter()).skip(*col) {
                if v != 0 {
                    *r = (*r + nf * v) % p;
                }
            }
        }
        match row[..self.n].iter().position(|&v| v != 0) {
            Some(col) => {
                let inv = inv_mod(row[col], p);
                for v in row.iter_mut().skip(col) {
                    *v = *v * inv % p;
                }
                self.pivots.push((col, row));
                true
            }
            None => {
                if row[self.n] != 0 {
                    self.inconsistent = true;
                }
                false
            }
        }
    }

    /// The unique solution once the rank is full.
    pub fn solve(&self) -> Option<Vec<u64>> {
        if !self.is_full() || self.inconsistent {
            return None;
        }
        let p = self.p;
        let mut x = vec![0u64; self.n];
        for (col, row) in self.pivots.iter().rev() {
            let mut acc = row[self.n];
            for j in col + 1..self.n {
                if row[j] != 0 {
                    acc = (acc + (p - row[j]) * x[j]) % p;
                }
            }
            x[*col] = acc;
        }
        Some(x)
    }
}
