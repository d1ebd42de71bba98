//! Schreier families `S_alpha` for ordinals `alpha < omega*2`.
//!
//! The family of order zero is `A_1`, the singletons together with the
//! empty set. For a successor order `beta + 1`, a nonempty set belongs to
//! the family exactly when it splits into `d` consecutive members of
//! `S_beta` with `d <= min F`. For the limit order omega the family is
//! built along a cofinal sequence of successor ordinals, fixed here as
//! `alpha_n = n`; each `alpha_n = (n-1) + 1` is a successor and the
//! truncated families are nested, `S_n` contained in `S_{n+1}` (every
//! `S_n`-decomposition is an `S_{n+1}`-decomposition block by block).
//!
//! Membership at omega is implemented as `F in S_{min F}`. This is
//! equivalent to the defining clause "`F in S_n` for some `n <= min F`":
//! if such an `n` exists then the nesting chain pushes the witness up to
//! `n = min F`, and conversely `n = min F` is itself an admissible choice.
//! The equivalence leans on the nesting of the chosen cofinal sequence,
//! which the test suite verifies exhaustively on truncations.
//!
//! Ordinals `omega + n` continue with the successor clause. Orders of
//! `omega*2` and beyond are out of scope.
//!
//! Every function here is pure over immutable inputs; memo tables are
//! local to a single call, so concurrent use needs no coordination.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::index_set::IndexSet;

/// An ordinal below `omega*2`: either a natural number or `omega + n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ordinal {
    /// The finite ordinal `n`.
    Finite(u32),
    /// The ordinal `omega + n`.
    OmegaPlus(u32),
}

impl Ordinal {
    pub fn is_zero(self) -> bool {
        self == Ordinal::Finite(0)
    }

    /// Omega is the only limit ordinal in range.
    pub fn is_limit(self) -> bool {
        self == Ordinal::OmegaPlus(0)
    }

    pub fn is_successor(self) -> bool {
        matches!(self, Ordinal::Finite(n) | Ordinal::OmegaPlus(n) if n > 0)
    }

    /// The predecessor of a successor ordinal.
    pub fn predecessor(self) -> Option<Ordinal> {
        match self {
            Ordinal::Finite(n) if n > 0 => Some(Ordinal::Finite(n - 1)),
            Ordinal::OmegaPlus(n) if n > 0 => Some(Ordinal::OmegaPlus(n - 1)),
            _ => None,
        }
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ordinal::Finite(n) => write!(f, "{n}"),
            Ordinal::OmegaPlus(0) => write!(f, "w"),
            Ordinal::OmegaPlus(n) => write!(f, "w+{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchreierError {
    #[error("malformed ordinal `{0}`; expected `0`, `1`, ..., `w`, or `w+n`")]
    MalformedOrdinal(String),
    #[error("expected a successor ordinal, got {0}")]
    NotSuccessor(Ordinal),
    #[error("operation requires alpha >= 1, got {0}")]
    OrderTooSmall(Ordinal),
    #[error("indices are 1-based, got 0")]
    ZeroIndex,
    #[error("enumeration bound exceeded: {0} > {1}")]
    BoundExceeded(u32, u32),
    #[error("the set is not a member of S_{0}")]
    NotMember(Ordinal),
    #[error("greedy construction exceeded {0} elements; the maximal set is unrepresentably large")]
    GreedyTooLarge(usize),
}

impl FromStr for Ordinal {
    type Err = SchreierError;

    /// Grammar: a nonnegative integer, `w`, or `w+n`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Ok(n) = s.parse::<u32>() {
            return Ok(Ordinal::Finite(n));
        }
        if s == "w" {
            return Ok(Ordinal::OmegaPlus(0));
        }
        if let Some(rest) = s.strip_prefix("w+") {
            if let Ok(n) = rest.parse::<u32>() {
                if n > 0 {
                    return Ok(Ordinal::OmegaPlus(n));
                }
            }
        }
        Err(SchreierError::MalformedOrdinal(s.to_owned()))
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A witness that a set belongs to a successor family: consecutive blocks
/// of the predecessor order whose count is at most the minimum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub blocks: Vec<IndexSet>,
    pub order: Ordinal,
}

impl Decomposition {
    /// The union of the blocks.
    pub fn union(&self) -> IndexSet {
        let mut all = Vec::new();
        for b in &self.blocks {
            all.extend(b.iter());
        }
        IndexSet::new(all).expect("blocks are consecutive")
    }
}

/// Default ceiling for the exhaustive enumeration surfaces.
pub const DEFAULT_ENUMERATION_BOUND: u32 = 16;

/// Elements cap for greedy constructions; maximal sets of higher orders
/// explode doubly-exponentially and are rejected rather than attempted.
pub const GREEDY_ELEMENT_CAP: usize = 65_536;

/// Membership test `F in S_alpha`.
///
/// The empty set and singletons belong to every family. `S_0` holds
/// nothing else; `S_1` is `|F| <= min F`; successor orders search for a
/// consecutive decomposition; omega defers to `S_{min F}` (see the module
/// docs for why that is the right reading of the limit clause).
pub fn is_member(f: &IndexSet, alpha: Ordinal) -> bool {
    member_slice(f.elements(), alpha)
}

fn member_slice(f: &[u32], alpha: Ordinal) -> bool {
    if f.len() <= 1 {
        return true;
    }
    match alpha {
        Ordinal::Finite(0) => false,
        Ordinal::Finite(1) => f.len() as u64 <= f[0] as u64,
        Ordinal::OmegaPlus(0) => member_slice(f, Ordinal::Finite(f[0])),
        successor => {
            let beta = successor.predecessor().expect("remaining cases are successors");
            let budget = (f[0] as usize).min(f.len());
            splittable(f, 0, budget, beta, &mut HashMap::new())
        }
    }
}

/// Can `f[start..]` be covered by at most `budget` consecutive nonempty
/// `S_beta` blocks? Memoized on `(start, budget)`.
fn splittable(
    f: &[u32],
    start: usize,
    budget: usize,
    beta: Ordinal,
    memo: &mut HashMap<(usize, usize), bool>,
) -> bool {
    if start == f.len() {
        return true;
    }
    if budget == 0 {
        return false;
    }
    if f.len() - start <= budget {
        // Singletons always fit, so a block per remaining element works.
        return true;
    }
    if let Some(&known) = memo.get(&(start, budget)) {
        return known;
    }
    // Longest-first: members usually decompose with fat blocks.
    let mut found = false;
    for end in (start + 1..=f.len()).rev() {
        if member_slice(&f[start..end], beta) && splittable(f, end, budget - 1, beta, memo) {
            found = true;
            break;
        }
    }
    memo.insert((start, budget), found);
    found
}

/// Searches for the witness decomposition of `F in S_alpha` for a
/// successor `alpha`.
///
/// Returns `None` exactly when `F` is not a member. Among all witnesses
/// the lexicographically smallest block-boundary vector is produced, i.e.
/// the first block is as short as possible, then the second, and so on.
/// The empty set decomposes into zero blocks.
pub fn decompose(f: &IndexSet, alpha: Ordinal) -> Result<Option<Decomposition>, SchreierError> {
    if !alpha.is_successor() {
        return Err(SchreierError::NotSuccessor(alpha));
    }
    let beta = alpha.predecessor().expect("checked successor");
    let elems = f.elements();
    if elems.is_empty() {
        return Ok(Some(Decomposition { blocks: Vec::new(), order: beta }));
    }
    let budget = (elems[0] as usize).min(elems.len());
    let mut boundaries = Vec::new();
    if search_boundaries(elems, 0, budget, beta, &mut boundaries) {
        let mut blocks = Vec::new();
        let mut start = 0;
        for &end in &boundaries {
            blocks.push(IndexSet::new(elems[start..end].to_vec()).expect("slice is increasing"));
            start = end;
        }
        Ok(Some(Decomposition { blocks, order: beta }))
    } else {
        Ok(None)
    }
}

/// Shortest-first depth-first search; the first full cover found has the
/// lexicographically smallest boundary vector.
fn search_boundaries(
    f: &[u32],
    start: usize,
    budget: usize,
    beta: Ordinal,
    boundaries: &mut Vec<usize>,
) -> bool {
    if start == f.len() {
        return true;
    }
    if budget == 0 {
        return false;
    }
    for end in start + 1..=f.len() {
        if member_slice(&f[start..end], beta) {
            boundaries.push(end);
            if search_boundaries(f, end, budget - 1, beta, boundaries) {
                return true;
            }
            boundaries.pop();
        }
    }
    false
}

/// All members of `S_alpha` inside `{1..n}`, sorted by size then
/// lexicographically. Includes the empty set.
pub fn enumerate_members(alpha: Ordinal, n: u32) -> Result<Vec<IndexSet>, SchreierError> {
    enumerate_members_bounded(alpha, n, DEFAULT_ENUMERATION_BOUND)
}

/// As [`enumerate_members`] with an explicit ceiling on `n`.
pub fn enumerate_members_bounded(
    alpha: Ordinal,
    n: u32,
    bound: u32,
) -> Result<Vec<IndexSet>, SchreierError> {
    if n > bound {
        return Err(SchreierError::BoundExceeded(n, bound));
    }
    let mut members = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let set = mask_to_set(mask);
        if is_member(&set, alpha) {
            members.push(set);
        }
    }
    members.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.elements().cmp(b.elements()))
    });
    Ok(members)
}

fn mask_to_set(mask: u64) -> IndexSet {
    let elements = (0..64)
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| b as u32 + 1)
        .collect();
    IndexSet::new(elements).expect("bit order is increasing")
}

/// Incremental membership automaton: accepts elements in increasing order
/// and reports whether each extension keeps the running set inside
/// `S_alpha`. Used for greedy constructions where re-testing the whole
/// prefix on every step would be quadratic.
///
/// Greedy packing is sound here because a block's admissible extensions
/// never depend on the value of its current maximum, only on the block's
/// shape, and starting a block later (at a larger minimum) never shrinks
/// its capacity.
#[derive(Debug, Clone)]
enum GreedyBuilder {
    /// Nothing pushed yet.
    Empty { alpha: Ordinal },
    /// An `S_0` block holding one element.
    Singleton,
    /// A successor-family set under construction.
    Successor {
        beta: Ordinal,
        budget: u32,
        used_blocks: u32,
        open: Box<GreedyBuilder>,
    },
}

impl GreedyBuilder {
    fn new(alpha: Ordinal) -> Self {
        GreedyBuilder::Empty { alpha }
    }

    /// Tries to admit `e` (strictly larger than everything pushed so far).
    fn push(&mut self, e: u32) -> bool {
        match self {
            GreedyBuilder::Empty { alpha } => match *alpha {
                Ordinal::Finite(0) => {
                    *self = GreedyBuilder::Singleton;
                    true
                }
                // S_omega: the first element pins the family to S_e.
                Ordinal::OmegaPlus(0) => {
                    *self = GreedyBuilder::new(Ordinal::Finite(e));
                    self.push(e)
                }
                successor => {
                    let beta = successor.predecessor().expect("remaining cases are successors");
                    let mut open = Box::new(GreedyBuilder::new(beta));
                    assert!(open.push(e), "a fresh block admits its first element");
                    *self = GreedyBuilder::Successor { beta, budget: e, used_blocks: 1, open };
                    true
                }
            },
            GreedyBuilder::Singleton => false,
            GreedyBuilder::Successor { beta, budget, used_blocks, open } => {
                if open.push(e) {
                    return true;
                }
                if *used_blocks < *budget {
                    let mut fresh = Box::new(GreedyBuilder::new(*beta));
                    assert!(fresh.push(e), "a fresh block admits its first element");
                    *open = fresh;
                    *used_blocks += 1;
                    true
                } else {
                    false
                }
            }
        }
    }
}

/// The set obtained from `start` by repeatedly appending the smallest
/// integer that keeps the set in `S_alpha`, until no extension does.
///
/// Appending `max F + 1` is the only extension that ever needs testing:
/// membership of `F + {j}` for `j > max F` does not depend on the value of
/// `j` (the largest element only contributes to block sizes, never to the
/// minima that drive the budgets), so if `max F + 1` fails every larger
/// integer fails too. The same fact makes the result maximal in the
/// [`is_maximal`] sense.
pub fn greedy_maximal(start: u32, alpha: Ordinal) -> Result<IndexSet, SchreierError> {
    if start == 0 {
        return Err(SchreierError::ZeroIndex);
    }
    if alpha < Ordinal::Finite(1) {
        return Err(SchreierError::OrderTooSmall(alpha));
    }
    let mut builder = GreedyBuilder::new(alpha);
    let mut elements = Vec::new();
    let mut e = start;
    while builder.push(e) {
        elements.push(e);
        if elements.len() > GREEDY_ELEMENT_CAP {
            return Err(SchreierError::GreedyTooLarge(GREEDY_ELEMENT_CAP));
        }
        e += 1;
    }
    let result = IndexSet::new(elements).expect("appended in increasing order");
    debug_assert!(is_member(&result, alpha));
    Ok(result)
}

/// Whether `F in S_alpha` admits no extension by a larger integer.
///
/// Testing `F + {max F + 1}` suffices: if some extension by `m > max F`
/// stayed in the family, the extension by `max F + 1` would too, because
/// membership never depends on the value of the largest element.
pub fn is_maximal(f: &IndexSet, alpha: Ordinal) -> Result<bool, SchreierError> {
    if !is_member(f, alpha) {
        return Err(SchreierError::NotMember(alpha));
    }
    let next = f.max().map_or(1, |m| m + 1);
    Ok(!is_member(&f.with_appended(next), alpha))
}

/// Outcome of the exhaustive regularity check on a truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub alpha: Ordinal,
    pub truncation: u32,
    pub members: u64,
    /// A member together with a subset of it that failed membership.
    pub hereditary_counterexample: Option<(IndexSet, IndexSet)>,
    /// A member together with a right-shift of it that failed membership.
    pub spreading_counterexample: Option<(IndexSet, IndexSet)>,
}

impl RegularityReport {
    pub fn passed(&self) -> bool {
        self.hereditary_counterexample.is_none() && self.spreading_counterexample.is_none()
    }
}

/// Exhaustively verifies, over all subsets of `{1..n}`, that the family is
/// hereditary (subsets of members are members) and spreading (right-shifts
/// of members are members).
///
/// Both properties are checked through their one-step generators: removal
/// of a single element, and shift of a single element one place right.
/// Chains of one-step moves reach every subset and every dominating
/// configuration inside the truncation, so closure under the generators is
/// closure outright.
pub fn check_regularity(alpha: Ordinal, n: u32) -> Result<RegularityReport, SchreierError> {
    if n > DEFAULT_ENUMERATION_BOUND {
        return Err(SchreierError::BoundExceeded(n, DEFAULT_ENUMERATION_BOUND));
    }
    let size = 1u64 << n;
    let mut member = vec![false; size as usize];
    let mut members = 0u64;
    for mask in 0..size {
        member[mask as usize] = is_member(&mask_to_set(mask), alpha);
        if member[mask as usize] {
            members += 1;
        }
    }

    let mut hereditary_counterexample = None;
    let mut spreading_counterexample = None;
    'scan: for mask in 0..size {
        if !member[mask as usize] {
            continue;
        }
        for b in 0..n as u64 {
            let bit = 1u64 << b;
            if mask & bit == 0 {
                continue;
            }
            let dropped = mask & !bit;
            if !member[dropped as usize] {
                hereditary_counterexample = Some((mask_to_set(mask), mask_to_set(dropped)));
                break 'scan;
            }
            // Shift element b one place right when the slot is free.
            let up = bit << 1;
            if b + 1 < n as u64 && mask & up == 0 {
                let shifted = dropped | up;
                if !member[shifted as usize] {
                    spreading_counterexample = Some((mask_to_set(mask), mask_to_set(shifted)));
                    break 'scan;
                }
            }
        }
    }

    Ok(RegularityReport {
        alpha,
        truncation: n,
        members,
        hereditary_counterexample,
        spreading_counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> IndexSet {
        s.parse().unwrap()
    }

    #[test]
    fn ordinal_order_and_grammar() {
        assert!(Ordinal::Finite(7) < Ordinal::OmegaPlus(0));
        assert!(Ordinal::OmegaPlus(0) < Ordinal::OmegaPlus(1));
        assert!(Ordinal::Finite(1) < Ordinal::Finite(2));
        for s in ["0", "3", "w", "w+2"] {
            let o: Ordinal = s.parse().unwrap();
            assert_eq!(o.to_string(), s);
        }
        assert!("w+0".parse::<Ordinal>().is_err());
        assert!("omega".parse::<Ordinal>().is_err());
        assert!(Ordinal::OmegaPlus(0).is_limit());
        assert_eq!(Ordinal::OmegaPlus(1).predecessor(), Some(Ordinal::OmegaPlus(0)));
    }

    #[test]
    fn singletons_belong_to_every_family() {
        for alpha in [
            Ordinal::Finite(0),
            Ordinal::Finite(1),
            Ordinal::Finite(5),
            Ordinal::OmegaPlus(0),
            Ordinal::OmegaPlus(2),
        ] {
            assert!(is_member(&set("7"), alpha), "singleton should be in S_{alpha}");
            assert!(is_member(&IndexSet::empty(), alpha));
        }
    }

    #[test]
    fn first_order_membership_is_size_versus_min() {
        assert!(!is_member(&set("1,2"), Ordinal::Finite(1)));
        assert!(is_member(&set("2,3"), Ordinal::Finite(1)));
        assert!(is_member(&set("3,5,9"), Ordinal::Finite(1)));
        assert!(!is_member(&set("3,5,9,11"), Ordinal::Finite(1)));
    }

    #[test]
    fn second_order_membership() {
        assert!(is_member(&set("2,4,5,6,7"), Ordinal::Finite(2)));
        assert!(!is_member(&set("1,3"), Ordinal::Finite(2)));
        assert!(is_member(&set("2,3,4,5,6,7"), Ordinal::Finite(2)));
        assert!(!is_member(&set("2,3,4,5,6,7,8"), Ordinal::Finite(2)));
    }

    #[test]
    fn omega_membership_defers_to_the_minimum() {
        assert!(!is_member(&set("1,2"), Ordinal::OmegaPlus(0)));
        assert!(is_member(&set("2,3"), Ordinal::OmegaPlus(0)));
        assert!(is_member(&set("3,4,5,6,7,8,9,10,11"), Ordinal::OmegaPlus(0)));
    }

    #[test]
    fn decompose_returns_lex_smallest_witness() {
        let d = decompose(&set("2,4,5,6,7"), Ordinal::Finite(2)).unwrap().unwrap();
        assert_eq!(d.order, Ordinal::Finite(1));
        assert_eq!(d.blocks, vec![set("2"), set("4,5,6,7")]);

        let d = decompose(&set("3,4,5"), Ordinal::Finite(1)).unwrap().unwrap();
        assert_eq!(d.order, Ordinal::Finite(0));
        assert_eq!(d.blocks, vec![set("3"), set("4"), set("5")]);

        assert_eq!(decompose(&set("1,3"), Ordinal::Finite(2)).unwrap(), None);
        assert!(decompose(&set("2,3"), Ordinal::OmegaPlus(0)).is_err());
        assert!(decompose(&set("2,3"), Ordinal::Finite(0)).is_err());
        let empty = decompose(&IndexSet::empty(), Ordinal::Finite(1)).unwrap().unwrap();
        assert!(empty.blocks.is_empty());
    }

    #[test]
    fn enumeration_matches_the_definition_on_tiny_truncations() {
        let s0 = enumerate_members(Ordinal::Finite(0), 3).unwrap();
        assert_eq!(s0, vec![IndexSet::empty(), set("1"), set("2"), set("3")]);

        let s1 = enumerate_members(Ordinal::Finite(1), 3).unwrap();
        assert_eq!(
            s1,
            vec![IndexSet::empty(), set("1"), set("2"), set("3"), set("2,3")]
        );

        assert!(enumerate_members_bounded(Ordinal::Finite(1), 20, 16).is_err());
    }

    #[test]
    fn enumeration_count_matches_direct_filter_for_s1() {
        for n in [4u32, 8, 10] {
            let by_enum = enumerate_members(Ordinal::Finite(1), n).unwrap().len();
            let mut direct = 0usize;
            for mask in 0u64..(1 << n) {
                let s = mask_to_set(mask);
                if s.is_empty() || s.len() as u64 <= s.min().unwrap() as u64 {
                    direct += 1;
                }
            }
            assert_eq!(by_enum, direct);
        }
    }

    #[test]
    fn greedy_maximal_examples() {
        assert_eq!(greedy_maximal(3, Ordinal::Finite(1)).unwrap(), set("3,4,5"));
        assert_eq!(greedy_maximal(1, Ordinal::Finite(1)).unwrap(), set("1"));
        assert_eq!(greedy_maximal(2, Ordinal::OmegaPlus(0)).unwrap(), set("2,3,4,5,6,7"));
        assert!(greedy_maximal(0, Ordinal::Finite(1)).is_err());
        assert!(greedy_maximal(3, Ordinal::Finite(0)).is_err());
    }

    /// The greedy automaton must agree with the literal definition:
    /// append max+1 while `is_member` accepts the whole prefix. Starts are
    /// kept small; maximal sets grow doubly exponentially in the order,
    /// and re-checking a third-order prefix per append is already
    /// quadratic in thousands of elements.
    #[test]
    fn greedy_matches_literal_element_greedy() {
        let cases = [
            (Ordinal::Finite(1), 6u32),
            (Ordinal::Finite(2), 4),
            (Ordinal::OmegaPlus(0), 2),
        ];
        for (alpha, max_start) in cases {
            for start in 1..=max_start {
                let fast = greedy_maximal(start, alpha).unwrap();
                let mut literal = vec![start];
                loop {
                    let mut candidate = literal.clone();
                    candidate.push(*literal.last().unwrap() + 1);
                    let cset = IndexSet::new(candidate.clone()).unwrap();
                    if is_member(&cset, alpha) {
                        literal = candidate;
                    } else {
                        break;
                    }
                }
                assert_eq!(fast.elements(), &literal[..], "start={start} alpha={alpha}");
            }
        }
    }

    #[test]
    fn greedy_results_are_members_and_maximal() {
        for alpha in [Ordinal::Finite(1), Ordinal::Finite(2)] {
            for start in 1..=8u32 {
                let f = greedy_maximal(start, alpha).unwrap();
                assert!(is_member(&f, alpha));
                assert!(is_maximal(&f, alpha).unwrap());
            }
        }
    }

    #[test]
    fn maximality_examples() {
        assert!(is_maximal(&set("3,4,5"), Ordinal::Finite(1)).unwrap());
        assert!(is_maximal(&set("2,3"), Ordinal::Finite(1)).unwrap());
        assert!(!is_maximal(&set("2"), Ordinal::Finite(1)).unwrap());
        assert!(is_maximal(&set("1"), Ordinal::Finite(1)).unwrap());
        assert!(is_maximal(&set("1"), Ordinal::Finite(2)).unwrap());
        assert!(!is_member(&set("1,2"), Ordinal::Finite(1)));
        assert!(is_maximal(&set("1,2"), Ordinal::Finite(1)).is_err());
    }

    #[test]
    fn regularity_passes_on_small_truncations() {
        for alpha in [Ordinal::Finite(1), Ordinal::Finite(2), Ordinal::OmegaPlus(0)] {
            let report = check_regularity(alpha, 10).unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }

    /// One-step shifts generate all pointwise dominations; spot-check the
    /// equivalence against the full quantifier on a small truncation.
    #[test]
    fn spreading_single_steps_agree_with_full_shifts() {
        let n = 8u32;
        for alpha in [Ordinal::Finite(1), Ordinal::Finite(2)] {
            let members: Vec<IndexSet> = enumerate_members(alpha, n).unwrap();
            let member_set: std::collections::HashSet<&[u32]> =
                members.iter().map(|m| m.elements()).collect();
            for f in &members {
                if f.is_empty() {
                    continue;
                }
                for mask in 0u64..(1 << n) {
                    let g = mask_to_set(mask);
                    if g.len() != f.len() {
                        continue;
                    }
                    let dominates = f
                        .elements()
                        .iter()
                        .zip(g.elements())
                        .all(|(a, b)| a <= b);
                    if dominates {
                        assert!(
                            member_set.contains(g.elements()),
                            "shift of {f} to {g} left S_{alpha}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn nesting_into_the_successor_holds_exhaustively() {
        let n = 10u32;
        let steps = [
            (Ordinal::Finite(0), Ordinal::Finite(1)),
            (Ordinal::Finite(1), Ordinal::Finite(2)),
            (Ordinal::Finite(2), Ordinal::Finite(3)),
            (Ordinal::OmegaPlus(0), Ordinal::OmegaPlus(1)),
        ];
        for (lo, hi) in steps {
            for mask in 0u64..(1 << n) {
                let f = mask_to_set(mask);
                if is_member(&f, lo) {
                    assert!(is_member(&f, hi), "{f} in S_{lo} but not S_{hi}");
                }
            }
        }
    }
}
