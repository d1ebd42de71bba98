//! Finitely supported vectors with exact rational coefficients.
//!
//! A [`SparseVector`] is an element of `c00`: finitely many basis
//! coordinates, indices 1-based to match the usual basis numbering
//! `e_1, e_2, ...`. Zero coefficients are never stored, so the support is
//! exactly the stored index list. All values are immutable after
//! construction and every operation is pure.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::index_set::IndexSet;
use crate::rational::{parse_rational, ParseRationalError, Rational};

/// A finitely supported vector: strictly increasing indices paired with
/// nonzero rational coefficients. The empty vector represents zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVector {
    entries: Vec<(u32, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VectorError {
    #[error("index 0 is not allowed; the basis is 1-based")]
    ZeroIndex,
    #[error("indices must be strictly increasing, got {0} after {1}")]
    NonIncreasingIndex(u32, u32),
    #[error("zero coefficient at index {0}")]
    ZeroCoefficient(u32),
    #[error("malformed entry `{0}`, expected `index:rational`")]
    MalformedEntry(String),
    #[error("malformed index `{0}`")]
    MalformedIndex(String),
    #[error(transparent)]
    MalformedRational(#[from] ParseRationalError),
    #[error("spread map is not defined at support index {0}")]
    SpreadUndefined(u32),
    #[error("spread map must satisfy f(i) >= i, got f({0}) = {1}")]
    SpreadDecreasing(u32, u32),
    #[error("spread map must be strictly increasing, got f({0}) = {1} and f({2}) = {3}")]
    SpreadNotMonotone(u32, u32, u32, u32),
}

impl SparseVector {
    /// The zero vector.
    pub fn zero() -> Self {
        SparseVector { entries: Vec::new() }
    }

    /// The basis vector `e_i`.
    pub fn unit(i: u32) -> Self {
        assert!(i >= 1, "the basis is 1-based");
        SparseVector { entries: vec![(i, Rational::from_integer(1))] }
    }

    /// Builds a vector from entries that are already strictly increasing
    /// and nonzero.
    pub fn from_entries(entries: Vec<(u32, Rational)>) -> Result<Self, VectorError> {
        for (k, (i, a)) in entries.iter().enumerate() {
            if *i == 0 {
                return Err(VectorError::ZeroIndex);
            }
            if a.is_zero() {
                return Err(VectorError::ZeroCoefficient(*i));
            }
            if k > 0 && entries[k - 1].0 >= *i {
                return Err(VectorError::NonIncreasingIndex(*i, entries[k - 1].0));
            }
        }
        Ok(SparseVector { entries })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of support points.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn min_index(&self) -> Option<u32> {
        self.entries.first().map(|(i, _)| *i)
    }

    pub fn max_index(&self) -> Option<u32> {
        self.entries.last().map(|(i, _)| *i)
    }

    /// The coefficient at `i`; zero when `i` is outside the support.
    pub fn coeff(&self, i: u32) -> Rational {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1,
            Err(_) => Rational::zero(),
        }
    }

    pub fn entries(&self) -> &[(u32, Rational)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|(i, _)| *i)
    }

    pub fn support_set(&self) -> IndexSet {
        IndexSet::new(self.support().collect()).expect("support is strictly increasing")
    }

    /// Scalar multiple; `c = 0` yields the zero vector.
    pub fn scale(&self, c: &Rational) -> SparseVector {
        if c.is_zero() {
            return SparseVector::zero();
        }
        SparseVector {
            entries: self.entries.iter().map(|(i, a)| (*i, a * c)).collect(),
        }
    }
}

impl Add for &SparseVector {
    type Output = SparseVector;

    fn add(self, other: &SparseVector) -> SparseVector {
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut p, mut q) = (0, 0);
        while p < self.entries.len() || q < other.entries.len() {
            let take_left = match (self.entries.get(p), other.entries.get(q)) {
                (Some((i, _)), Some((j, _))) if i == j => {
                    let sum = self.entries[p].1 + other.entries[q].1;
                    if !sum.is_zero() {
                        entries.push((*i, sum));
                    }
                    p += 1;
                    q += 1;
                    continue;
                }
                (Some((i, _)), Some((j, _))) => i < j,
                (Some(_), None) => true,
                (None, _) => false,
            };
            if take_left {
                entries.push(self.entries[p]);
                p += 1;
            } else {
                entries.push(other.entries[q]);
                q += 1;
            }
        }
        SparseVector { entries }
    }
}

impl Neg for &SparseVector {
    type Output = SparseVector;

    fn neg(self) -> SparseVector {
        SparseVector {
            entries: self.entries.iter().map(|(i, a)| (*i, -a)).collect(),
        }
    }
}

impl Sub for &SparseVector {
    type Output = SparseVector;

    fn sub(self, other: &SparseVector) -> SparseVector {
        self + &(-other)
    }
}

/// A coordinate sign: `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn rational(self) -> Rational {
        match self {
            Sign::Plus => Rational::from_integer(1),
            Sign::Minus => Rational::from_integer(-1),
        }
    }

    pub fn apply(self, a: &Rational) -> Rational {
        match self {
            Sign::Plus => *a,
            Sign::Minus => -a,
        }
    }

    /// The sign of a rational, with the convention `sgn(0) = +1`.
    pub fn of(a: &Rational) -> Sign {
        if a.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// A total sign assignment on the positive integers: an explicit finite
/// table plus a default everywhere else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    table: std::collections::BTreeMap<u32, Sign>,
    default: Sign,
}

impl SignPattern {
    pub fn new(table: std::collections::BTreeMap<u32, Sign>, default: Sign) -> Self {
        SignPattern { table, default }
    }

    pub fn all_plus() -> Self {
        SignPattern { table: Default::default(), default: Sign::Plus }
    }

    pub fn all_minus() -> Self {
        SignPattern { table: Default::default(), default: Sign::Minus }
    }

    /// Builds a pattern from a prefix list: index `k+1` gets `prefix[k]`.
    pub fn from_prefix(prefix: &[Sign], default: Sign) -> Self {
        let table = prefix
            .iter()
            .enumerate()
            .map(|(k, s)| (k as u32 + 1, *s))
            .collect();
        SignPattern { table, default }
    }

    pub fn sign(&self, i: u32) -> Sign {
        self.table.get(&i).copied().unwrap_or(self.default)
    }

    pub fn default_sign(&self) -> Sign {
        self.default
    }

    pub fn table(&self) -> &std::collections::BTreeMap<u32, Sign> {
        &self.table
    }
}

/// A strictly increasing relocation of indices with `f(i) >= i`, given as a
/// finite table. Right-shifts of this kind can only grow the norm, which is
/// what the spreading property tests exercise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpreadMap {
    table: std::collections::BTreeMap<u32, u32>,
}

impl SpreadMap {
    pub fn new(table: std::collections::BTreeMap<u32, u32>) -> Result<Self, VectorError> {
        let mut prev: Option<(u32, u32)> = None;
        for (&i, &fi) in &table {
            if fi < i {
                return Err(VectorError::SpreadDecreasing(i, fi));
            }
            if let Some((j, fj)) = prev {
                if fj >= fi {
                    return Err(VectorError::SpreadNotMonotone(j, fj, i, fi));
                }
            }
            prev = Some((i, fi));
        }
        Ok(SpreadMap { table })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, VectorError> {
        Self::new(pairs.into_iter().collect())
    }

    pub fn apply(&self, i: u32) -> Option<u32> {
        self.table.get(&i).copied()
    }
}

/// Projection onto the coordinates in `E`: keeps exactly the coefficients
/// at indices in `E`, drops the rest.
pub fn project(x: &SparseVector, e: &IndexSet) -> SparseVector {
    SparseVector {
        entries: x
            .entries
            .iter()
            .filter(|(i, _)| e.contains(*i))
            .cloned()
            .collect(),
    }
}

/// The supremum norm: the largest coefficient modulus, `0` for the zero
/// vector.
pub fn sup_norm(x: &SparseVector) -> Rational {
    x.entries
        .iter()
        .map(|(_, a)| a.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// The l1 norm: the sum of coefficient moduli.
pub fn ell1_norm(x: &SparseVector) -> Rational {
    x.entries
        .iter()
        .fold(Rational::zero(), |acc, (_, a)| acc + a.abs())
}

/// Multiplies each coefficient by the sign the pattern assigns to its
/// index. The support never changes.
pub fn flip_signs(x: &SparseVector, signs: &SignPattern) -> SparseVector {
    SparseVector {
        entries: x
            .entries
            .iter()
            .map(|(i, a)| (*i, signs.sign(*i).apply(a)))
            .collect(),
    }
}

/// Moves the coefficient at `i` to `f(i)`. The map must be defined on the
/// whole support; monotonicity and `f(i) >= i` are enforced by
/// [`SpreadMap`] at construction.
pub fn spread(x: &SparseVector, f: &SpreadMap) -> Result<SparseVector, VectorError> {
    let mut entries = Vec::with_capacity(x.entries.len());
    for (i, a) in &x.entries {
        let fi = f.apply(*i).ok_or(VectorError::SpreadUndefined(*i))?;
        entries.push((fi, *a));
    }
    SparseVector::from_entries(entries)
}

impl fmt::Display for SparseVector {
    /// The text grammar `index:rational` pairs joined by commas, e.g.
    /// `1:1/2,5:-2/3`. The zero vector prints as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (i, a)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}:{a}")?;
        }
        Ok(())
    }
}

impl FromStr for SparseVector {
    type Err = VectorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(SparseVector::zero());
        }
        let mut entries = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let (idx, coeff) = part
                .split_once(':')
                .ok_or_else(|| VectorError::MalformedEntry(part.to_owned()))?;
            let i: u32 = idx
                .trim()
                .parse()
                .map_err(|_| VectorError::MalformedIndex(idx.to_owned()))?;
            let a = parse_rational(coeff)?;
            entries.push((i, a));
        }
        SparseVector::from_entries(entries)
    }
}

impl Serialize for SparseVector {
    /// Vectors serialize as their text grammar, shared by the CLI and the
    /// JSON report format.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn vec_of(s: &str) -> SparseVector {
        s.parse().unwrap()
    }

    #[test]
    fn projection_keeps_exactly_the_requested_coordinates() {
        let x = vec_of("1:1,2:1,3:1");
        let e: IndexSet = "2,3".parse().unwrap();
        assert_eq!(project(&x, &e), vec_of("2:1,3:1"));
        assert_eq!(project(&x, &IndexSet::empty()), SparseVector::zero());
        let y = vec_of("4:1/2,7:-2/3");
        let f: IndexSet = "7,9".parse().unwrap();
        assert_eq!(project(&y, &f), vec_of("7:-2/3"));
    }

    #[test]
    fn projection_composes_as_intersection() {
        let x = vec_of("1:1,3:-1/2,5:2,9:1/3");
        let e: IndexSet = "1,3,5".parse().unwrap();
        let f: IndexSet = "3,5,9".parse().unwrap();
        assert_eq!(project(&project(&x, &e), &f), project(&x, &e.intersection(&f)));
    }

    #[test]
    fn sup_and_ell1_norms() {
        assert_eq!(sup_norm(&vec_of("2:1,3:1")), rat(1, 1));
        assert_eq!(sup_norm(&SparseVector::zero()), rat(0, 1));
        assert_eq!(sup_norm(&vec_of("1:1/2,5:-2/3")), rat(2, 3));
        assert_eq!(ell1_norm(&vec_of("2:1,3:1")), rat(2, 1));
        assert_eq!(ell1_norm(&SparseVector::zero()), rat(0, 1));
        assert_eq!(ell1_norm(&vec_of("1:1/2,5:-2/3")), rat(7, 6));
    }

    #[test]
    fn sign_flips() {
        let x = vec_of("1:1,2:1");
        assert_eq!(flip_signs(&x, &SignPattern::all_minus()), vec_of("1:-1,2:-1"));
        assert_eq!(flip_signs(&x, &SignPattern::all_plus()), x);
        let pattern = SignPattern::new([(3, Sign::Minus)].into(), Sign::Plus);
        assert_eq!(flip_signs(&vec_of("3:1,5:-1"), &pattern), vec_of("3:-1,5:-1"));
    }

    #[test]
    fn spread_moves_coefficients_right() {
        let f = SpreadMap::from_pairs([(1, 3), (2, 4)]).unwrap();
        assert_eq!(spread(&vec_of("1:1,2:1"), &f).unwrap(), vec_of("3:1,4:1"));

        let id = SpreadMap::from_pairs([(1, 1), (2, 2)]).unwrap();
        assert_eq!(spread(&vec_of("1:1,2:1"), &id).unwrap(), vec_of("1:1,2:1"));

        let g = SpreadMap::from_pairs([(2, 9)]).unwrap();
        assert_eq!(spread(&vec_of("2:1/2"), &g).unwrap(), vec_of("9:1/2"));

        assert!(SpreadMap::from_pairs([(3, 2)]).is_err());
        assert!(SpreadMap::from_pairs([(1, 5), (2, 4)]).is_err());
        assert!(spread(&vec_of("1:1,2:1"), &g).is_err());
    }

    #[test]
    fn parse_rejects_bad_entries() {
        assert!("3:0".parse::<SparseVector>().is_err());
        assert!("0:1".parse::<SparseVector>().is_err());
        assert!("2:1,2:1".parse::<SparseVector>().is_err());
        assert!("3:1,2:1".parse::<SparseVector>().is_err());
        assert!("2:1/0".parse::<SparseVector>().is_err());
        assert!("2".parse::<SparseVector>().is_err());
    }

    #[test]
    fn parse_format_round_trip() {
        for s in ["2:1,3:1", "1:1/2,5:-2/3", ""] {
            let x: SparseVector = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
    }

    #[test]
    fn arithmetic_merges_and_cancels() {
        let x = vec_of("1:1,3:1/2");
        let y = vec_of("2:1,3:-1/2");
        assert_eq!(&x + &y, vec_of("1:1,2:1"));
        assert_eq!(&x - &x, SparseVector::zero());
        assert_eq!(x.scale(&rat(0, 1)), SparseVector::zero());
        assert_eq!(x.scale(&rat(2, 1)), vec_of("1:2,3:1"));
    }
}
