use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::MultiIndex;
use crate::error::{Error, Result};
use crate::foundation::pair_count;

/// Which expansion of the correlation factor the table's terms refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Representation {
    /// `sum_k c(k) prod_{i<j} F_{k_ij}(X_ij)`
    ProductOfF,
    /// `sum_m C(m) / prod_{i<j} X_ij^{m_ij}`
    LaurentMonomial,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::ProductOfF => "ProductOfF",
            Representation::LaurentMonomial => "LaurentMonomial",
        })
    }
}

/// Provenance of a table's values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Closed forms with a proof behind them (`N <= 3`).
    Theorem,
    /// The `l = 1` clique-counting conjecture.
    Conjecture,
    /// Recovered by the exact linear-system oracle.
    Oracle,
}

/// Exact coefficients of the correlation factor `F_N(x; p)` for one `(N, l)`.
///
/// Only nonzero terms are stored, keyed by multi-index in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    n: usize,
    ell: u32,
    representation: Representation,
    status: Status,
    terms: BTreeMap<MultiIndex, BigRational>,
}

impl CoefficientTable {
    pub fn new(
        n: usize,
        ell: u32,
        representation: Representation,
        status: Status,
        terms: impl IntoIterator<Item = (MultiIndex, BigRational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (m, v) in terms {
            if m.particles() != n {
                return Err(Error::InvalidTable(format!(
                    "multi-index {m} is for N={}, table is N={n}",
                    m.particles()
                )));
            }
            if m.max_entry() as u32 > ell {
                return Err(Error::InvalidTable(format!("multi-index {m} has an entry above l={ell}")));
            }
            if !v.is_zero() {
                map.insert(m, v);
            }
        }
        Ok(Self { n, ell, representation, status, terms: map })
    }

    /// The table of `F_N = 1`, valid for `l = 0` or `N <= 1`.
    pub fn unit(n: usize, ell: u32, representation: Representation, status: Status) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(MultiIndex::zeros(n), BigRational::one());
        Self { n, ell, representation, status, terms }
    }

    #[inline]
    pub fn particles(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn ell(&self) -> u32 {
        self.ell
    }

    #[inline]
    pub fn representation(&self) -> Representation {
        self.representation
    }

    #[inline]
    pub fn status(&self) -> Status {
        self.status
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn get(&self, m: &MultiIndex) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.terms.iter()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Size of the full multi-index hypercube `(l+1)^{N(N-1)/2}`.
    pub fn hypercube_size(&self) -> usize {
        (self.ell as usize + 1).pow(pair_count(self.n) as u32)
    }

    /// Coefficient of the all-zero index equals one.
    pub fn is_normalized(&self) -> bool {
        self.get(&MultiIndex::zeros(self.n)).is_one()
    }

    /// Terms that are not positive integers, if any.
    pub fn non_integer_terms(&self) -> Vec<(MultiIndex, BigRational)> {
        self.terms
            .iter()
            .filter(|(_, v)| !v.is_integer() || !v.is_positive())
            .map(|(m, v)| (m.clone(), v.clone()))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = TableFile {
            n: self.n,
            ell: self.ell,
            representation: self.representation,
            status: self.status,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| TermFile { m: m.entries().to_vec(), value: v.to_string() })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text)?;
        let mut terms = Vec::with_capacity(file.terms.len());
        for t in file.terms {
            let m = MultiIndex::new(file.n, t.m).map_err(|e| Error::InvalidTable(e.to_string()))?;
            let v = BigRational::from_str(t.value.trim())
                .map_err(|_| Error::Parse(format!("bad rational {:?}", t.value)))?;
            terms.push((m, v));
        }
        Self::new(file.n, file.ell, file.representation, file.status, terms)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    #[serde(rename = "N")]
    n: usize,
    ell: u32,
    representation: Representation,
    status: Status,
    terms: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    m: Vec<u8>,
    value: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn json_layout() {
        let t = CoefficientTable::new(
            3,
            1,
            Representation::ProductOfF,
            Status::Oracle,
            [
                (MultiIndex::zeros(3), q(1, 1)),
                (MultiIndex::filled(3, 1), q(1, 2)),
                (MultiIndex::new(3, vec![1, 0, 0]).unwrap(), q(0, 1)),
            ],
        )
        .unwrap();
        assert_eq!(t.len(), 2);
        let json = t.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["N"], 3);
        assert_eq!(v["ell"], 1);
        assert_eq!(v["representation"], "ProductOfF");
        assert_eq!(v["status"], "oracle");
        assert_eq!(v["terms"][0]["m"], serde_json::json!([0, 0, 0]));
        assert_eq!(v["terms"][0]["value"], "1");
        assert_eq!(v["terms"][1]["value"], "1/2");
        assert_eq!(CoefficientTable::from_json(&json).unwrap(), t);
    }

    #[test]
    fn rejects_out_of_range_entries() {
        let bad = CoefficientTable::new(
            2,
            1,
            Representation::LaurentMonomial,
            Status::Theorem,
            [(MultiIndex::new(2, vec![2]).unwrap(), q(1, 1))],
        );
        assert!(matches!(bad, Err(Error::InvalidTable(_))));
        let text = r#"{"N":2,"ell":1,"representation":"LaurentMonomial","status":"theorem",
                       "terms":[{"m":[0],"value":"one"}]}"#;
        assert!(matches!(CoefficientTable::from_json(text), Err(Error::Parse(_))));
    }

    #[test]
    fn integrality_report() {
        let t = CoefficientTable::new(
            2,
            1,
            Representation::LaurentMonomial,
            Status::Oracle,
            [(MultiIndex::zeros(2), q(1, 1)), (MultiIndex::filled(2, 1), q(3, 2))],
        )
        .unwrap();
        assert!(t.is_normalized());
        assert_eq!(t.non_integer_terms().len(), 1);
    }
}
