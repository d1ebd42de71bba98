//! The Tsirelson norm on finitely supported vectors.
//!
//! For a parameter `theta` in `(0, 1/2]` and a Schreier order `alpha`, the
//! norm is the unique solution of the implicit equation
//!
//! ```text
//! |x| = max( sup_i |a_i| ,  sup theta * (|E_1 x| + ... + |E_d x|) )
//! ```
//!
//! where the inner supremum ranges over consecutive finite sets
//! `E_1 < ... < E_d` whose minima form a set in `S_alpha`. On finitely
//! supported vectors the equation resolves by recursion on strictly
//! smaller supports, which is what [`tsirelson_norm`] does; the original
//! iterative definition (`norm_0` = sup norm, each layer adding one round
//! of the partition supremum) is exposed as [`norm_iterate`] and reaches
//! the fixed point after finitely many steps.
//!
//! Two reductions keep the search finite, and both are exercised against
//! the definitional [`oracle`] which uses neither:
//!
//! * canonical partitions: it suffices to pick the minima `m_1 < ... < m_d`
//!   from the support, with block `i` equal to the support points in
//!   `[m_i, m_{i+1})`. Raising a minimum to the nearest support point is a
//!   right-shift (spreading keeps the minima admissible), and enlarging a
//!   block toward the next minimum never lowers its norm.
//! * well-foundedness: a single block containing the whole support is
//!   skipped; it contributes `theta * |x| < |x|` and can never attain the
//!   supremum.

pub mod oracle;

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::index_set::IndexSet;
use crate::rational::{rat, Rational};
use crate::schreier::{self, Ordinal};
use crate::vector::SparseVector;

pub use oracle::brute_force_norm;

/// Errors from norm-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormError {
    #[error("theta must lie in (0, 1/2], got {0}")]
    ThetaOutOfRange(Rational),
    #[error("theta is too small: theta^{{-1}} must fit in 32 bits")]
    ThetaTooSmall,
    #[error("the zero vector is not on the sphere and has no witness")]
    ZeroVector,
    #[error("blocks must be consecutive and nonempty")]
    BlocksNotConsecutive,
    #[error("partition minima {0} do not form a set in S_{1}")]
    MinimaNotAdmissible(IndexSet, Ordinal),
    #[error("witness shape does not match the vector")]
    MalformedWitness,
    #[error("oracle supports at most {limit} support points, got {got}")]
    OracleSupportTooLarge { got: usize, limit: usize },
    #[error("oracle supports indices up to {limit}, got {got}")]
    OracleIndexTooLarge { got: u32, limit: u32 },
}

/// The pair `(theta, alpha)` plus the derived integer bounds on
/// `theta^{-1}` that the isometry layer keeps reaching for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormContext {
    theta: Rational,
    alpha: Ordinal,
    floor_inv_theta: u32,
    ceil_inv_theta: u32,
}

impl NormContext {
    pub fn new(theta: Rational, alpha: Ordinal) -> Result<Self, NormError> {
        if !theta.is_positive() || theta > rat(1, 2) {
            return Err(NormError::ThetaOutOfRange(theta));
        }
        let p = *theta.numer();
        let q = *theta.denom();
        // theta = p/q with p, q > 0; theta^{-1} = q/p.
        let ceil = (q + p - 1) / p;
        if ceil > u32::MAX as i128 {
            return Err(NormError::ThetaTooSmall);
        }
        let floor_inv_theta = (q / p) as u32;
        let ceil_inv_theta = ceil as u32;
        Ok(NormContext { theta, alpha, floor_inv_theta, ceil_inv_theta })
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    pub fn alpha(&self) -> Ordinal {
        self.alpha
    }

    /// `floor(theta^{-1})`.
    pub fn floor_inv_theta(&self) -> u32 {
        self.floor_inv_theta
    }

    /// `ceil(theta^{-1})`.
    pub fn ceil_inv_theta(&self) -> u32 {
        self.ceil_inv_theta
    }

    /// Whether `theta^{-1}` is an integer.
    pub fn inv_theta_is_integer(&self) -> bool {
        self.floor_inv_theta == self.ceil_inv_theta
    }

    /// `theta^{-1}` as an exact rational.
    pub fn inv_theta(&self) -> Rational {
        Rational::one() / self.theta
    }
}

impl fmt::Display for NormContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theta={}, alpha={}", self.theta, self.alpha)
    }
}

/// Consecutive blocks whose minima form a set in `S_alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissiblePartition {
    blocks: Vec<IndexSet>,
    minima: IndexSet,
}

impl AdmissiblePartition {
    /// Validates consecutiveness and the minima condition at construction.
    pub fn new(blocks: Vec<IndexSet>, ctx: &NormContext) -> Result<Self, NormError> {
        let mut minima = Vec::with_capacity(blocks.len());
        for (k, b) in blocks.iter().enumerate() {
            let Some(min) = b.min() else {
                return Err(NormError::BlocksNotConsecutive);
            };
            if k > 0 && !blocks[k - 1].precedes(b) {
                return Err(NormError::BlocksNotConsecutive);
            }
            minima.push(min);
        }
        let minima = IndexSet::new(minima).expect("minima of consecutive blocks increase");
        if !schreier::is_member(&minima, ctx.alpha()) {
            return Err(NormError::MinimaNotAdmissible(minima, ctx.alpha()));
        }
        Ok(AdmissiblePartition { blocks, minima })
    }

    pub fn blocks(&self) -> &[IndexSet] {
        &self.blocks
    }

    pub fn minima(&self) -> &IndexSet {
        &self.minima
    }
}

/// A checkable certificate for a claimed norm value: either "the sup norm
/// is attained at this index" or "this admissible partition, with these
/// certificates for the blocks".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormWitness {
    SupLeaf { index: u32 },
    Split { partition: AdmissiblePartition, children: Vec<NormWitness> },
}

impl NormWitness {
    /// Recomputes the value the witness certifies for `x`. Exact: the
    /// result must equal the claimed norm, and the tests insist on it.
    pub fn reconstruct(&self, x: &SparseVector, ctx: &NormContext) -> Result<Rational, NormError> {
        match self {
            NormWitness::SupLeaf { index } => Ok(x.coeff(*index).abs()),
            NormWitness::Split { partition, children } => {
                if partition.blocks().len() != children.len() {
                    return Err(NormError::MalformedWitness);
                }
                let mut sum = Rational::zero();
                for (block, child) in partition.blocks().iter().zip(children) {
                    let restricted = crate::vector::project(x, block);
                    sum += child.reconstruct(&restricted, ctx)?;
                }
                Ok(ctx.theta() * sum)
            }
        }
    }

    /// Number of blocks at the top split; `0` for a sup leaf.
    pub fn top_blocks(&self) -> usize {
        match self {
            NormWitness::SupLeaf { .. } => 0,
            NormWitness::Split { partition, .. } => partition.blocks().len(),
        }
    }
}

impl Serialize for NormWitness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            NormWitness::SupLeaf { index } => {
                let mut s = serializer.serialize_struct("NormWitness", 2)?;
                s.serialize_field("type", "sup")?;
                s.serialize_field("index", index)?;
                s.end()
            }
            NormWitness::Split { partition, children } => {
                let mut s = serializer.serialize_struct("NormWitness", 4)?;
                s.serialize_field("type", "split")?;
                s.serialize_field("minima", partition.minima())?;
                s.serialize_field("blocks", partition.blocks())?;
                s.serialize_field("children", children)?;
                s.end()
            }
        }
    }
}

/// The Tsirelson norm of `x` in `T[theta, S_alpha]`.
pub fn tsirelson_norm(x: &SparseVector, ctx: &NormContext) -> Rational {
    let mut eval = Evaluator::new(x, ctx);
    eval.window_norm(0, x.support_len())
}

/// The norm together with a deterministic optimal witness: among optimal
/// certificates the one with the fewest blocks, ties broken by the
/// lexicographically smallest minima, recursively. A sup leaf (zero
/// blocks, smallest attaining index) is preferred whenever the sup norm
/// attains the value.
pub fn norm_with_witness(
    x: &SparseVector,
    ctx: &NormContext,
) -> Result<(Rational, NormWitness), NormError> {
    if x.is_zero() {
        return Err(NormError::ZeroVector);
    }
    let mut eval = Evaluator::new(x, ctx);
    let value = eval.window_norm(0, x.support_len());
    let witness = eval.witness(0, x.support_len());
    debug_assert_eq!(witness.reconstruct(x, ctx).as_ref(), Ok(&value));
    Ok((value, witness))
}

/// The `n`-th iterate of the original inductive definition: iterate `0` is
/// the sup norm and iterate `n+1` applies one layer of the partition
/// supremum to iterate-`n` values.
pub fn norm_iterate(x: &SparseVector, ctx: &NormContext, n: u32) -> Rational {
    let mut eval = Evaluator::new(x, ctx);
    eval.iterate(0, x.support_len(), n)
}

/// The smallest `n` with `norm_iterate(x, n) = tsirelson_norm(x)`. Finite
/// for every finitely supported vector because each layer refines strictly
/// smaller sub-supports.
pub fn stabilization_index(x: &SparseVector, ctx: &NormContext) -> u32 {
    let mut eval = Evaluator::new(x, ctx);
    let target = eval.window_norm(0, x.support_len());
    let mut n = 0;
    loop {
        if eval.iterate(0, x.support_len(), n) == target {
            return n;
        }
        n += 1;
        assert!(
            (n as usize) <= x.support_len() + 1,
            "iterates must stabilize within support-many layers"
        );
    }
}

/// `x / |x|`, exact. The result has Tsirelson norm exactly one by
/// homogeneity of the norm under rational scaling.
pub fn normalize_to_sphere(x: &SparseVector, ctx: &NormContext) -> Result<SparseVector, NormError> {
    if x.is_zero() {
        return Err(NormError::ZeroVector);
    }
    let norm = tsirelson_norm(x, ctx);
    Ok(x.scale(&(Rational::one() / norm)))
}

/// Convenience check used all over the isometry layer.
pub fn is_on_sphere(x: &SparseVector, ctx: &NormContext) -> bool {
    tsirelson_norm(x, ctx).is_one()
}

// ---------------------------------------------------------------------
// The evaluator: canonical-partition search over one vector's support.
// ---------------------------------------------------------------------

/// Best witness candidate so far: fewest blocks, then lexicographically
/// smallest minima positions, among those attaining the target value.
#[derive(Debug, Clone)]
struct BestSplit {
    minima: Vec<usize>,
}

struct Evaluator<'a> {
    entries: &'a [(u32, Rational)],
    ctx: &'a NormContext,
    /// prefix_l1[i] = sum of |a_k| for k < i.
    prefix_l1: Vec<Rational>,
    norm_memo: HashMap<(usize, usize), Rational>,
    iterate_memo: HashMap<(usize, usize, u32), Rational>,
    /// Memoized admissibility of minima value-sets (orders >= 2 only).
    member_memo: HashMap<Vec<u32>, bool>,
}

impl<'a> Evaluator<'a> {
    fn new(x: &'a SparseVector, ctx: &'a NormContext) -> Self {
        let entries = x.entries();
        let mut prefix_l1 = Vec::with_capacity(entries.len() + 1);
        let mut acc = Rational::zero();
        prefix_l1.push(acc);
        for (_, a) in entries {
            acc += a.abs();
            prefix_l1.push(acc);
        }
        Evaluator {
            entries,
            ctx,
            prefix_l1,
            norm_memo: HashMap::new(),
            iterate_memo: HashMap::new(),
            member_memo: HashMap::new(),
        }
    }

    fn l1(&self, lo: usize, hi: usize) -> Rational {
        self.prefix_l1[hi] - self.prefix_l1[lo]
    }

    fn window_sup(&self, lo: usize, hi: usize) -> Rational {
        self.entries[lo..hi]
            .iter()
            .map(|(_, a)| a.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    fn index_at(&self, pos: usize) -> u32 {
        self.entries[pos].0
    }

    /// Can the minima set `prefix` (positions into the support) be
    /// extended by one more, larger minimum and stay admissible?
    ///
    /// Membership of `F + {j}`, `j > max F`, does not depend on the value
    /// of `j`, so one probe settles the question for every candidate.
    fn extendable(&mut self, prefix: &[usize]) -> bool {
        match self.ctx.alpha() {
            Ordinal::Finite(0) => prefix.is_empty(),
            Ordinal::Finite(1) => {
                prefix.is_empty() || (prefix.len() as u64) < self.index_at(prefix[0]) as u64
            }
            alpha => {
                if prefix.is_empty() {
                    return true;
                }
                let mut probe: Vec<u32> =
                    prefix.iter().map(|&p| self.index_at(p)).collect();
                probe.push(self.index_at(*prefix.last().expect("nonempty")) + 1);
                if let Some(&known) = self.member_memo.get(&probe) {
                    return known;
                }
                let set = IndexSet::new(probe.clone()).expect("increasing by construction");
                let known = schreier::is_member(&set, alpha);
                self.member_memo.insert(probe, known);
                known
            }
        }
    }

    /// The norm of the contiguous support window `[lo, hi)`.
    fn window_norm(&mut self, lo: usize, hi: usize) -> Rational {
        if hi - lo == 0 {
            return Rational::zero();
        }
        if hi - lo == 1 {
            return self.entries[lo].1.abs();
        }
        if let Some(v) = self.norm_memo.get(&(lo, hi)) {
            return *v;
        }
        let sup = self.window_sup(lo, hi);
        let mut best = sup;
        // theta * l1 bounds every partition value; nothing to search when
        // the sup alone already reaches it.
        let cap = self.ctx.theta() * self.l1(lo, hi);
        if best < cap {
            for first in lo..hi {
                // All candidates starting at `first` are bounded by
                // theta * l1([first, hi)), which only shrinks as `first`
                // moves right.
                if self.ctx.theta() * self.l1(first, hi) <= best {
                    break;
                }
                let mut minima = vec![first];
                let closed = Rational::zero();
                self.search_norm(lo, hi, &mut minima, &closed, &mut best);
            }
        }
        self.norm_memo.insert((lo, hi), best);
        best
    }

    /// Depth-first extension of a minima prefix. `closed` is the sum of
    /// finished block norms (blocks strictly before the last minimum).
    fn search_norm(
        &mut self,
        lo: usize,
        hi: usize,
        minima: &mut Vec<usize>,
        closed: &Rational,
        best: &mut Rational,
    ) {
        let last = *minima.last().expect("prefix is nonempty");
        // Candidate: close the final block at the window end.
        if !(minima.len() == 1 && last == lo) {
            let tail = self.window_norm(last, hi);
            let value = self.ctx.theta() * (closed + tail);
            if value > *best {
                *best = value;
            }
        }
        // Bound for every extension below this prefix.
        if self.ctx.theta() * (closed + self.l1(last, hi)) <= *best {
            return;
        }
        if last + 1 >= hi || !self.extendable(minima) {
            return;
        }
        for next in last + 1..hi {
            let closed_next = closed + self.window_norm(last, next);
            minima.push(next);
            self.search_norm(lo, hi, minima, &closed_next, best);
            minima.pop();
        }
    }

    /// The witness for window `[lo, hi)`; assumes `window_norm` values are
    /// already available (it recomputes them on demand anyway).
    fn witness(&mut self, lo: usize, hi: usize) -> NormWitness {
        let value = self.window_norm(lo, hi);
        let sup = self.window_sup(lo, hi);
        if sup == value {
            // Smallest index attaining the sup.
            let index = self.entries[lo..hi]
                .iter()
                .find(|(_, a)| a.abs() == sup)
                .map(|(i, _)| *i)
                .expect("window is nonempty");
            return NormWitness::SupLeaf { index };
        }
        let mut best: Option<BestSplit> = None;
        for first in lo..hi {
            if self.ctx.theta() * self.l1(first, hi) < value {
                break;
            }
            let mut minima = vec![first];
            let closed = Rational::zero();
            self.search_witness(lo, hi, &mut minima, &closed, &value, &mut best);
        }
        let best = best.expect("a split attains any value above the sup");
        let positions = best.minima;
        let mut blocks = Vec::with_capacity(positions.len());
        let mut children = Vec::with_capacity(positions.len());
        for (k, &p) in positions.iter().enumerate() {
            let end = positions.get(k + 1).copied().unwrap_or(hi);
            let indices: Vec<u32> = self.entries[p..end].iter().map(|(i, _)| *i).collect();
            blocks.push(IndexSet::new(indices).expect("window slices increase"));
            children.push(self.witness(p, end));
        }
        let partition =
            AdmissiblePartition::new(blocks, self.ctx).expect("search only visits admissible minima");
        NormWitness::Split { partition, children }
    }

    /// Witness search: keeps every candidate that attains `target`,
    /// picking fewest blocks then lexicographically smallest minima.
    /// Prunes only strictly dominated subtrees so ties survive.
    fn search_witness(
        &mut self,
        lo: usize,
        hi: usize,
        minima: &mut Vec<usize>,
        closed: &Rational,
        target: &Rational,
        best: &mut Option<BestSplit>,
    ) {
        let last = *minima.last().expect("prefix is nonempty");
        if !(minima.len() == 1 && last == lo) {
            let tail = self.window_norm(last, hi);
            let value = self.ctx.theta() * (closed + tail);
            if value == *target {
                let better = match best {
                    None => true,
                    Some(b) => {
                        minima.len() < b.minima.len()
                            || (minima.len() == b.minima.len() && minima[..] < b.minima[..])
                    }
                };
                if better {
                    *best = Some(BestSplit { minima: minima.clone() });
                }
            }
        }
        if self.ctx.theta() * (closed + self.l1(last, hi)) < *target {
            return;
        }
        if last + 1 >= hi || !self.extendable(minima) {
            return;
        }
        // A candidate extending this prefix has more blocks than the
        // prefix's own candidate and a lexicographically larger minima
        // vector, so a strictly shorter recorded witness cannot be beaten.
        if let Some(b) = best {
            if b.minima.len() < minima.len() + 1 {
                return;
            }
        }
        for next in last + 1..hi {
            let closed_next = closed + self.window_norm(last, next);
            minima.push(next);
            self.search_witness(lo, hi, minima, &closed_next, target, best);
            minima.pop();
        }
    }

    /// Iterate `n` of the inductive definition on window `[lo, hi)`.
    ///
    /// Unlike the fixed-point search this enumerates every canonical
    /// minima set including the full cover, whose contribution
    /// `theta * |x|_n` is harmless and keeps the layer faithful to the
    /// definition.
    fn iterate(&mut self, lo: usize, hi: usize, n: u32) -> Rational {
        if hi - lo == 0 {
            return Rational::zero();
        }
        if let Some(v) = self.iterate_memo.get(&(lo, hi, n)) {
            return *v;
        }
        let value = if n == 0 {
            self.window_sup(lo, hi)
        } else {
            let mut best = self.iterate(lo, hi, n - 1);
            let cap = self.ctx.theta() * self.l1(lo, hi);
            if best < cap {
                for first in lo..hi {
                    if self.ctx.theta() * self.l1(first, hi) <= best {
                        break;
                    }
                    let mut minima = vec![first];
                    let closed = Rational::zero();
                    self.search_iterate(hi, n - 1, &mut minima, &closed, &mut best);
                }
            }
            best
        };
        self.iterate_memo.insert((lo, hi, n), value);
        value
    }

    fn search_iterate(
        &mut self,
        hi: usize,
        inner: u32,
        minima: &mut Vec<usize>,
        closed: &Rational,
        best: &mut Rational,
    ) {
        let last = *minima.last().expect("prefix is nonempty");
        let tail = self.iterate(last, hi, inner);
        let value = self.ctx.theta() * (closed + tail);
        if value > *best {
            *best = value;
        }
        if self.ctx.theta() * (closed + self.l1(last, hi)) <= *best {
            return;
        }
        if last + 1 >= hi || !self.extendable(minima) {
            return;
        }
        for next in last + 1..hi {
            let closed_next = closed + self.iterate(last, next, inner);
            minima.push(next);
            self.search_iterate(hi, inner, minima, &closed_next, best);
            minima.pop();
        }
    }
}
