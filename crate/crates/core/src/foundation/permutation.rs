use crate::error::{Error, Result};

/// Largest particle number for which full permutation sums are evaluated.
/// 8! = 40320 terms per evaluation point.
pub const MAX_PERMUTATION_N: usize = 8;

/// A permutation of `{0, ..., n-1}` together with its parity sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
    sign: i8,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect(), sign: 1 }
    }

    /// Builds a permutation from its image vector; `None` if `map` is not a bijection.
    pub fn from_map(map: Vec<usize>) -> Option<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &m in &map {
            if m >= n || seen[m] {
                return None;
            }
            seen[m] = true;
        }
        let sign = parity_sign(&map);
        Some(Self { map, sign })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// `sign^power`, i.e. the exchange factor `eps^(l+1)` for `power = l + 1`.
    #[inline]
    pub fn sign_pow(&self, power: u32) -> f64 {
        if self.sign > 0 || power.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "permutation sizes differ");
        let map = other.map.iter().map(|&k| self.map[k]).collect();
        Permutation { map, sign: self.sign * other.sign }
    }

    pub fn inverse(&self) -> Permutation {
        let mut map = vec![0; self.len()];
        for (i, &m) in self.map.iter().enumerate() {
            map[m] = i;
        }
        Permutation { map, sign: self.sign }
    }

    /// Reorders `values` as `(v[σ(0)], ..., v[σ(n-1)])`.
    pub fn permute<T: Clone>(&self, values: &[T]) -> Vec<T> {
        self.map.iter().map(|&k| values[k].clone()).collect()
    }
}

fn parity_sign(map: &[usize]) -> i8 {
    let mut visited = vec![false; map.len()];
    let mut transpositions = 0usize;
    for start in 0..map.len() {
        if visited[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !visited[k] {
            visited[k] = true;
            k = map[k];
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All `n!` permutations in lexicographic order of their image vectors.
pub fn permutations(n: usize) -> Result<Vec<Permutation>> {
    if n == 0 || n > MAX_PERMUTATION_N {
        return Err(Error::SizeLimit(format!(
            "permutation sums need 1 <= N <= {MAX_PERMUTATION_N}, got N={n}"
        )));
    }
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        out.push(Permutation { sign: parity_sign(&current), map: current.clone() });
        if !next_lexicographic(&mut current) {
            break;
        }
    }
    Ok(out)
}

fn next_lexicographic(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inversion_sign(map: &[usize]) -> i8 {
        let mut inv = 0;
        for a in 0..map.len() {
            for b in a + 1..map.len() {
                if map[a] > map[b] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn small_cases() {
        let p1 = permutations(1).unwrap();
        assert_eq!(p1, vec![Permutation::identity(1)]);

        let p2 = permutations(2).unwrap();
        assert_eq!(p2.len(), 2);
        assert_eq!(p2[0].as_slice(), &[0, 1]);
        assert_eq!(p2[0].sign(), 1);
        assert_eq!(p2[1].as_slice(), &[1, 0]);
        assert_eq!(p2[1].sign(), -1);
    }

    #[test]
    fn three_particles_by_enumeration() {
        let ps = permutations(3).unwrap();
        assert_eq!(ps.len(), 6);
        for p in &ps {
            assert_eq!(p.sign(), inversion_sign(p.as_slice()));
        }
        let odd = ps.iter().filter(|p| p.sign() < 0).count();
        assert_eq!(odd, 3);
        // lexicographic
        let maps: Vec<_> = ps.iter().map(|p| p.as_slice().to_vec()).collect();
        let mut sorted = maps.clone();
        sorted.sort();
        assert_eq!(maps, sorted);
    }

    #[test]
    fn balanced_signs_and_guard() {
        for n in 2..=MAX_PERMUTATION_N {
            let ps = permutations(n).unwrap();
            let total: usize = (1..=n).product();
            assert_eq!(ps.len(), total);
            assert_eq!(ps.iter().filter(|p| p.sign() > 0).count(), total / 2);
        }
        assert!(matches!(permutations(0), Err(Error::SizeLimit(_))));
        assert!(matches!(permutations(9), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn from_map_validates() {
        assert!(Permutation::from_map(vec![0, 0, 1]).is_none());
        assert!(Permutation::from_map(vec![0, 3]).is_none());
        assert_eq!(Permutation::from_map(vec![2, 0, 1]).unwrap().sign(), 1);
    }

    proptest! {
        #[test]
        fn sign_is_multiplicative(a in 0usize..120, b in 0usize..120) {
            let ps = permutations(5).unwrap();
            let (s, t) = (&ps[a], &ps[b]);
            let c = s.compose(t);
            prop_assert_eq!(c.sign(), s.sign() * t.sign());
            prop_assert_eq!(c.sign(), inversion_sign(c.as_slice()));
            prop_assert_eq!(s.compose(&s.inverse()), Permutation::identity(5));
        }
    }
}
