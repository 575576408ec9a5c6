//! Fraction-free elimination over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Clears denominators: the row times the lcm of its denominators.
pub fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}

/// Solves the overdetermined system whose rows are `[a_1 .. a_n | b]` for the unique `c`
/// with `sum_j a_j c_j = b` on every row.
///
/// Rows are eliminated with Bareiss' one-step rule, so every intermediate stays an
/// integer (each division is exact). Fails with a rank report if the coefficient part
/// has rank below `n`, and with no-solution if some row is inconsistent.
pub fn bareiss_solve(mut rows: Vec<Vec<BigInt>>, n: usize) -> Result<Vec<BigRational>> {
    let m = rows.len();
    if rows.iter().any(|r| r.len() != n + 1) {
        return Err(Error::Domain("augmented rows must have n + 1 entries".into()));
    }
    let mut prev = BigInt::one();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pivot) = (rank..m).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank];
        let pv = &prow[col];
        for row in tail.iter_mut() {
            let f = std::mem::take(&mut row[col]);
            if f.is_zero() {
                for j in col + 1..=n {
                    row[j] = (pv * &row[j]) / &prev;
                }
                continue;
            }
            for j in col + 1..=n {
                row[j] = (pv * &row[j] - &f * &prow[j]) / &prev;
            }
        }
        prev = head[rank][col].clone();
        rank += 1;
    }
    if rank < n {
        return Err(Error::DegenerateSampling { rank, unknowns: n });
    }
    if rows[rank..].iter().any(|r| !r[n].is_zero()) {
        return Err(Error::NoSolution("residual rows are inconsistent with the ansatz".into()));
    }
    let mut c = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        let row = &rows[k];
        let mut acc = BigRational::from_integer(row[n].clone());
        for j in k + 1..n {
            acc -= BigRational::from_integer(row[j].clone()) * &c[j];
        }
        c[k] = acc / BigRational::from_integer(row[k].clone());
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn solves_overdetermined_consistent_system() {
        // c = (1/2, -3)
        let rows = vec![z(&[2, 0, 1]), z(&[0, 1, -3]), z(&[4, 1, -1]), z(&[6, 2, -3])];
        assert_eq!(bareiss_solve(rows, 2).unwrap(), vec![q(1, 2), q(-3, 1)]);
    }

    #[test]
    fn reports_rank_and_inconsistency() {
        let rows = vec![z(&[1, 2, 3]), z(&[2, 4, 6])];
        assert!(matches!(bareiss_solve(rows, 2), Err(Error::DegenerateSampling { rank: 1, unknowns: 2 })));
        let rows = vec![z(&[1, 0, 1]), z(&[0, 1, 1]), z(&[1, 1, 3])];
        assert!(matches!(bareiss_solve(rows, 2), Err(Error::NoSolution(_))));
    }

    #[test]
    fn pivoting_past_zero_leading_entry() {
        let rows = vec![z(&[0, 3, 6]), z(&[5, 1, 7])];
        assert_eq!(bareiss_solve(rows, 2).unwrap(), vec![q(1, 1), q(2, 1)]);
    }

    #[test]
    fn integer_rows() {
        assert_eq!(integer_row(&[q(1, 2), q(2, 3), q(-1, 1)]), z(&[3, 4, -6]));
    }
}
