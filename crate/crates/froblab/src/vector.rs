//! Primitive integer vectors and gcd utilities.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Greatest common divisor of two nonnegative integers, `gcd(0, 0) = 0`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Greatest common divisor of a non-empty list of positive integers.
pub fn gcd_vector(entries: &[u64]) -> Result<u64> {
    if entries.is_empty() {
        return Err(Error::Usage("gcd of an empty list is undefined".into()));
    }
    if entries.contains(&0) {
        return Err(Error::Usage("entries must be positive".into()));
    }
    Ok(entries.iter().copied().fold(0, gcd))
}

/// A vector of at least two positive integers whose gcd is 1.
///
/// Duplicate entries are allowed; order is preserved as given. All
/// quantities derived from the vector are symmetric in the entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<u64>", try_from = "Vec<u64>")]
pub struct PrimitiveVector {
    entries: Vec<u64>,
}

impl PrimitiveVector {
    /// Validates dimension >= 2, positivity, and gcd 1.
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::Usage(format!(
                "need at least 2 entries, got {}",
                entries.len()
            )));
        }
        if entries.contains(&0) {
            return Err(Error::Usage("entries must be positive".into()));
        }
        let g = entries.iter().copied().fold(0, gcd);
        if g != 1 {
            return Err(Error::Domain(format!("not primitive: gcd = {g}")));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn min_entry(&self) -> u64 {
        *self.entries.iter().min().expect("dim >= 2")
    }

    pub fn max_entry(&self) -> u64 {
        *self.entries.iter().max().expect("dim >= 2")
    }

    pub fn contains_one(&self) -> bool {
        self.entries.contains(&1)
    }

    /// Sum of the entries, exact.
    pub fn entry_sum(&self) -> u128 {
        self.entries.iter().map(|&e| u128::from(e)).sum()
    }

    /// Natural log of the product of the entries.
    pub fn ln_product(&self) -> f64 {
        self.entries.iter().map(|&e| (e as f64).ln()).sum()
    }
}

impl From<PrimitiveVector> for Vec<u64> {
    fn from(v: PrimitiveVector) -> Self {
        v.entries
    }
}

impl TryFrom<Vec<u64>> for PrimitiveVector {
    type Error = Error;

    fn try_from(entries: Vec<u64>) -> Result<Self> {
        Self::new(entries)
    }
}

impl fmt::Display for PrimitiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_vector_examples() {
        assert_eq!(gcd_vector(&[4, 6, 9]).unwrap(), 1);
        assert_eq!(gcd_vector(&[6, 9, 21]).unwrap(), 3);
        assert_eq!(gcd_vector(&[7]).unwrap(), 7);
    }

    #[test]
    fn gcd_vector_rejects_empty_and_zero() {
        assert!(matches!(gcd_vector(&[]), Err(Error::Usage(_))));
        assert!(matches!(gcd_vector(&[3, 0]), Err(Error::Usage(_))));
    }

    #[test]
    fn constructor_enforces_invariants() {
        assert!(PrimitiveVector::new(vec![3, 5]).is_ok());
        assert!(PrimitiveVector::new(vec![1, 1, 1]).is_ok());
        assert!(matches!(
            PrimitiveVector::new(vec![7]),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            PrimitiveVector::new(vec![4, 6]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            PrimitiveVector::new(vec![0, 5]),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn duplicates_are_allowed() {
        let v = PrimitiveVector::new(vec![6, 6, 9, 20]).unwrap();
        assert_eq!(v.dim(), 4);
        assert_eq!(v.min_entry(), 6);
        assert_eq!(v.max_entry(), 20);
    }

    #[test]
    fn serde_round_trip_enforces_invariants() {
        let v = PrimitiveVector::new(vec![6, 9, 20]).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, "[6,9,20]");
        let back: PrimitiveVector = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<PrimitiveVector>("[4,6]").is_err());
    }
}
