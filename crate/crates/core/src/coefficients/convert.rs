use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{CoefficientTable, MultiIndex, Representation};
use crate::error::{Error, Result};
use crate::wavefunction::FkCache;

/// Hypercube size above which the dense inverse transform is refused.
const MAX_DENSE_CELLS: usize = 1 << 20;

/// Expands every `prod F_{k_ij}(X_ij)` into Laurent monomials and collects terms.
pub fn product_to_laurent(table: &CoefficientTable) -> Result<CoefficientTable> {
    if table.representation() != Representation::ProductOfF {
        return Err(Error::InvalidTable("product_to_laurent expects a ProductOfF table".into()));
    }
    let ell = table.ell();
    let fk = FkCache::new(ell);
    let mut out: BTreeMap<MultiIndex, BigRational> = BTreeMap::new();
    for (k, ck) in table.terms() {
        let slots = k.entries();
        // odometer over a_p in k_p..=ell for every slot
        let mut a: Vec<u8> = slots.to_vec();
        'odometer: loop {
            let mut v = ck.clone();
            for (&kp, &ap) in slots.iter().zip(&a) {
                v *= fk.exact(kp as u32, ap as u32);
            }
            let m = MultiIndex::new(table.particles(), a.clone())?;
            *out.entry(m).or_insert_with(BigRational::zero) += v;

            let mut pos = a.len();
            loop {
                if pos == 0 {
                    break 'odometer;
                }
                pos -= 1;
                if (a[pos] as u32) < ell {
                    a[pos] += 1;
                    continue 'odometer;
                }
                a[pos] = slots[pos];
            }
        }
    }
    CoefficientTable::new(table.particles(), ell, Representation::LaurentMonomial, table.status(), out)
}

/// Inverts [`product_to_laurent`].
///
/// The map is a tensor product of one triangular transform per pair, so it is undone
/// axis by axis on the dense hypercube.
pub fn laurent_to_product(table: &CoefficientTable) -> Result<CoefficientTable> {
    if table.representation() != Representation::LaurentMonomial {
        return Err(Error::InvalidTable("laurent_to_product expects a LaurentMonomial table".into()));
    }
    let n = table.particles();
    let ell = table.ell();
    let cells = table.hypercube_size();
    if cells > MAX_DENSE_CELLS {
        return Err(Error::SizeLimit(format!("{cells} hypercube cells exceed the dense conversion limit")));
    }
    let base = ell as usize + 1;
    let slots = crate::foundation::pair_count(n);
    let mut dense = vec![BigRational::zero(); cells];
    for (m, v) in table.terms() {
        dense[m.rank(ell)] = v.clone();
    }
    let fk = FkCache::new(ell);
    // along one axis: C[a] = sum_{k<=a} T[k][a] c[k]; solve by forward substitution
    for axis in 0..slots {
        let stride = base.pow((slots - 1 - axis) as u32);
        for start in 0..cells {
            if !(start / stride).is_multiple_of(base) {
                continue;
            }
            let fibre: Vec<usize> = (0..base).map(|a| start + a * stride).collect();
            for a in 0..base {
                let mut acc = dense[fibre[a]].clone();
                for k in 0..a {
                    acc -= fk.exact(k as u32, a as u32) * &dense[fibre[k]];
                }
                dense[fibre[a]] = acc / fk.exact(a as u32, a as u32);
            }
        }
    }
    let terms = MultiIndex::hypercube(n, ell).zip(dense);
    CoefficientTable::new(n, ell, Representation::ProductOfF, table.status(), terms)
}

/// Returns the table in the requested representation, converting if needed.
pub fn to_representation(
    table: &CoefficientTable,
    representation: Representation,
) -> Result<CoefficientTable> {
    match (table.representation(), representation) {
        (a, b) if a == b => Ok(table.clone()),
        (Representation::ProductOfF, Representation::LaurentMonomial) => product_to_laurent(table),
        _ => laurent_to_product(table),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{c3_closed, c3_table, ell1_conjecture_table, Status};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn two_body_expansion() {
        let t = CoefficientTable::unit(2, 1, Representation::ProductOfF, Status::Theorem);
        let l = product_to_laurent(&t).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.get(&MultiIndex::zeros(2)), q(1));
        assert_eq!(l.get(&MultiIndex::filled(2, 1)), q(2));
    }

    #[test]
    fn trivial_coupling() {
        let t = c3_table(0);
        let l = product_to_laurent(&t).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.get(&MultiIndex::zeros(3)), q(1));
    }

    #[test]
    fn three_body_matches_closed_form() {
        for ell in 1..=3u32 {
            let l = product_to_laurent(&c3_table(ell)).unwrap();
            for m in MultiIndex::hypercube(3, ell) {
                let e = m.entries();
                let want = c3_closed(e[0] as u32, e[1] as u32, e[2] as u32, ell).unwrap();
                assert_eq!(l.get(&m), want, "l={ell} m={m}");
            }
        }
    }

    #[test]
    fn three_body_matches_conjecture() {
        let l = product_to_laurent(&c3_table(1)).unwrap();
        let c = ell1_conjecture_table(3).unwrap();
        assert_eq!(l.terms().collect::<Vec<_>>(), c.terms().collect::<Vec<_>>());
    }

    #[test]
    fn round_trip() {
        for ell in 0..=3u32 {
            let p = c3_table(ell);
            let back = laurent_to_product(&product_to_laurent(&p).unwrap()).unwrap();
            assert_eq!(back, p);
        }
        let l4 = ell1_conjecture_table(4).unwrap();
        let p4 = laurent_to_product(&l4).unwrap();
        assert_eq!(product_to_laurent(&p4).unwrap(), l4);
    }
}
