//! Finite sets of positive integers, stored strictly increasing.
//!
//! These are the sets `F` that Schreier families are made of and the sets
//! `E` that vectors are projected onto. The empty set is a valid value.

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// A finite subset of the positive integers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct IndexSet {
    elements: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexSetError {
    #[error("index 0 is not allowed; indices are 1-based")]
    ZeroIndex,
    #[error("elements must be strictly increasing, got {0} after {1}")]
    NotIncreasing(u32, u32),
    #[error("malformed index `{0}`")]
    Malformed(String),
}

impl IndexSet {
    /// The empty set.
    pub fn empty() -> Self {
        IndexSet { elements: Vec::new() }
    }

    /// Builds a set from a strictly increasing list of positive integers.
    pub fn new(elements: Vec<u32>) -> Result<Self, IndexSetError> {
        for (k, &e) in elements.iter().enumerate() {
            if e == 0 {
                return Err(IndexSetError::ZeroIndex);
            }
            if k > 0 && elements[k - 1] >= e {
                return Err(IndexSetError::NotIncreasing(e, elements[k - 1]));
            }
        }
        Ok(IndexSet { elements })
    }

    /// Builds a set from arbitrary elements, sorting and deduplicating.
    pub fn from_unsorted(mut elements: Vec<u32>) -> Result<Self, IndexSetError> {
        if elements.contains(&0) {
            return Err(IndexSetError::ZeroIndex);
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(IndexSet { elements })
    }

    pub fn singleton(i: u32) -> Self {
        assert!(i >= 1, "indices are 1-based");
        IndexSet { elements: vec![i] }
    }

    /// The interval `{lo, lo+1, ..., hi}`; empty when `hi < lo`.
    pub fn interval(lo: u32, hi: u32) -> Self {
        assert!(lo >= 1, "indices are 1-based");
        IndexSet { elements: (lo..=hi).collect() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> Option<u32> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<u32> {
        self.elements.last().copied()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.elements.binary_search(&i).is_ok()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.elements.iter().copied()
    }

    /// Set intersection.
    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        let elements = self.iter().filter(|i| other.contains(*i)).collect();
        IndexSet { elements }
    }

    /// True when `max(self) < min(other)`; vacuously true if either is empty.
    pub fn precedes(&self, other: &IndexSet) -> bool {
        match (self.max(), other.min()) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        }
    }

    /// The set extended by one element strictly above the current maximum.
    pub fn with_appended(&self, i: u32) -> IndexSet {
        debug_assert!(self.max().is_none_or(|m| m < i));
        let mut elements = self.elements.clone();
        elements.push(i);
        IndexSet { elements }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.elements.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for IndexSet {
    type Err = IndexSetError;

    /// Parses the comma grammar `2,4,5`; elements must be strictly
    /// increasing. The empty string denotes the empty set.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(IndexSet::empty());
        }
        let mut elements = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let e: u32 = part
                .parse()
                .map_err(|_| IndexSetError::Malformed(part.to_owned()))?;
            elements.push(e);
        }
        IndexSet::new(elements)
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.elements.len()))?;
        for e in &self.elements {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_and_disorder() {
        assert!(IndexSet::new(vec![0, 1]).is_err());
        assert!(IndexSet::new(vec![2, 2]).is_err());
        assert!(IndexSet::new(vec![3, 2]).is_err());
        assert!(IndexSet::new(vec![1, 5, 9]).is_ok());
    }

    #[test]
    fn parse_and_display() {
        let s: IndexSet = "2,4,5,6,7".parse().unwrap();
        assert_eq!(s.elements(), &[2, 4, 5, 6, 7]);
        assert_eq!(s.to_string(), "2,4,5,6,7");
        assert_eq!("".parse::<IndexSet>().unwrap(), IndexSet::empty());
        assert!("1,1".parse::<IndexSet>().is_err());
    }

    #[test]
    fn intersection_and_order() {
        let a = IndexSet::interval(2, 6);
        let b: IndexSet = "1,3,6,9".parse().unwrap();
        assert_eq!(a.intersection(&b).elements(), &[3, 6]);
        assert!(IndexSet::interval(1, 2).precedes(&IndexSet::interval(3, 4)));
        assert!(!IndexSet::interval(1, 3).precedes(&IndexSet::interval(3, 4)));
        assert!(IndexSet::empty().precedes(&IndexSet::singleton(1)));
    }
}
