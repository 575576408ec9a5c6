use num_rational::BigRational;
use num_traits::Zero;

use super::{CoefficientTable, MultiIndex, Representation, Status};
use crate::error::{Error, Result};
use crate::foundation::{factorial, factorial_ratio_u};

fn int(v: num_bigint::BigUint) -> BigRational {
    BigRational::from_integer(v.into())
}

fn check_range(values: &[u32], ell: u32) -> Result<()> {
    match values.iter().find(|&&a| a > ell) {
        Some(a) => Err(Error::Domain(format!("index {a} outside 0..={ell}"))),
        None => Ok(()),
    }
}

/// `C_2(a) = (l+a)!/((l-a)! a!)`.
pub fn c2_closed(a: u32, ell: u32) -> Result<BigRational> {
    check_range(&[a], ell)?;
    Ok(factorial_ratio_u(ell + a, ell - a) / int(factorial(a)))
}

/// Three-body Laurent coefficient `C_3(a, b, c)`.
pub fn c3_closed(a: u32, b: u32, c: u32, ell: u32) -> Result<BigRational> {
    check_range(&[a, b, c], ell)?;
    let outer = c2_closed(a, ell)? * c2_closed(b, ell)? * c2_closed(c, ell)?;
    let abc = int(factorial(a) * factorial(b) * factorial(c));
    let mut sum = BigRational::zero();
    for k in 0..=a.min(b).min(c) {
        let num = int(factorial(ell - k)) * &abc;
        let den =
            int(factorial(ell + k) * factorial(k) * factorial(a - k) * factorial(b - k) * factorial(c - k));
        sum += num / den;
    }
    Ok(outer * sum)
}

/// Product-of-`F_k` table for three bodies: `c(k,k,k) = (l-k)!/((l+k)! k!)`, all else zero.
pub fn c3_table(ell: u32) -> CoefficientTable {
    let terms = (0..=ell).map(|k| {
        let v = int(factorial(ell - k)) / int(factorial(ell + k) * factorial(k));
        (MultiIndex::filled(3, k as u8), v)
    });
    CoefficientTable::new(3, ell, Representation::ProductOfF, Status::Theorem, terms)
        .expect("diagonal indices are in range")
}

/// Laurent table built entry-by-entry from [`c3_closed`].
pub fn c3_laurent_table(ell: u32) -> CoefficientTable {
    let terms = MultiIndex::hypercube(3, ell).map(|m| {
        let e = m.entries();
        let v = c3_closed(e[0] as u32, e[1] as u32, e[2] as u32, ell).expect("in range");
        (m, v)
    });
    CoefficientTable::new(3, ell, Representation::LaurentMonomial, Status::Theorem, terms)
        .expect("hypercube indices are in range")
}

/// Laurent table of `F_2 = F_0(X_12)` built from [`c2_closed`].
pub fn c2_laurent_table(ell: u32) -> CoefficientTable {
    let terms = (0..=ell).map(|a| (MultiIndex::filled(2, a as u8), c2_closed(a, ell).expect("in range")));
    CoefficientTable::new(2, ell, Representation::LaurentMonomial, Status::Theorem, terms).expect("in range")
}

/// Theorem-backed table for `(n, ell)` in the requested representation, when one exists.
///
/// Covers `n <= 3` for every coupling and `ell = 0` for every `n`.
pub fn closed_form_table(n: usize, ell: u32, representation: Representation) -> Option<CoefficientTable> {
    if n <= 1 || ell == 0 {
        return Some(CoefficientTable::unit(n, ell, representation, Status::Theorem));
    }
    match (n, representation) {
        (2, Representation::ProductOfF) => {
            Some(CoefficientTable::unit(2, ell, Representation::ProductOfF, Status::Theorem))
        }
        (2, Representation::LaurentMonomial) => Some(c2_laurent_table(ell)),
        (3, Representation::ProductOfF) => Some(c3_table(ell)),
        (3, Representation::LaurentMonomial) => Some(c3_laurent_table(ell)),
        _ => None,
    }
}

/// True when every stored value is a positive integer and the zero index carries one.
pub fn is_integral_normalized(table: &CoefficientTable) -> bool {
    table.is_normalized() && table.non_integer_terms().is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn c3_table_values() {
        let t1 = c3_table(1);
        assert_eq!(t1.len(), 2);
        assert_eq!(t1.get(&MultiIndex::zeros(3)), q(1, 1));
        assert_eq!(t1.get(&MultiIndex::filled(3, 1)), q(1, 2));
        let t0 = c3_table(0);
        assert_eq!(t0.len(), 1);
        assert_eq!(t0.get(&MultiIndex::zeros(3)), q(1, 1));
        let t2 = c3_table(2);
        assert_eq!(t2.get(&MultiIndex::filled(3, 1)), q(1, 6));
        assert_eq!(t2.get(&MultiIndex::filled(3, 2)), q(1, 48));
        assert_eq!(t2.get(&MultiIndex::new(3, vec![1, 1, 0]).unwrap()), q(0, 1));
    }

    #[test]
    fn c2_values() {
        assert_eq!(c2_closed(0, 1).unwrap(), q(1, 1));
        assert_eq!(c2_closed(1, 1).unwrap(), q(2, 1));
        assert_eq!(c2_closed(1, 2).unwrap(), q(6, 1));
        for ell in 0..8 {
            assert_eq!(c2_closed(0, ell).unwrap(), q(1, 1));
        }
        // (4+a)!/((4-a)! a!) for a = 0..4
        let expect = [1, 20, 180, 840, 1680];
        for (a, e) in expect.iter().enumerate() {
            assert_eq!(c2_closed(a as u32, 4).unwrap(), q(*e, 1));
        }
        assert!(matches!(c2_closed(2, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn c3_values() {
        assert_eq!(c3_closed(1, 1, 1, 1).unwrap(), q(12, 1));
        assert_eq!(c3_closed(1, 0, 0, 1).unwrap(), q(2, 1));
        for ell in 0..5 {
            assert_eq!(c3_closed(0, 0, 0, ell).unwrap(), q(1, 1));
        }
        assert_eq!(c3_closed(2, 2, 2, 2).unwrap(), q(4320, 1));
        assert!(c3_closed(0, 3, 0, 2).is_err());
    }

    #[test]
    fn three_body_laurent_coefficients_are_positive_integers() {
        for ell in 0..=5 {
            let t = c3_laurent_table(ell);
            assert_eq!(t.len(), t.hypercube_size());
            assert!(is_integral_normalized(&t), "l={ell}");
        }
    }

    #[test]
    fn c3_symmetric_in_arguments() {
        let ell = 3;
        for m in MultiIndex::hypercube(3, ell) {
            let e: Vec<u32> = m.entries().iter().map(|&v| v as u32).collect();
            let base = c3_closed(e[0], e[1], e[2], ell).unwrap();
            assert_eq!(base, c3_closed(e[1], e[2], e[0], ell).unwrap());
            assert_eq!(base, c3_closed(e[2], e[1], e[0], ell).unwrap());
        }
    }
}
