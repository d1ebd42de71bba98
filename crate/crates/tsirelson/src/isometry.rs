//! Coordinate maps and the executable side of the isometry story.
//!
//! Linear isometries of these spaces are coordinate maps: each basis
//! vector goes to a signed basis vector, with the permutation confined to
//! a short prefix (for first-order families) or absent (for higher
//! orders). This module represents such maps, validates their shape,
//! checks them exactly against corpora, and builds the explicit witness
//! vectors that separate every non-conforming map from the isometries.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::index_set::IndexSet;
use crate::norm::{tsirelson_norm, NormContext};
use crate::rational::Rational;
use crate::schreier::{self, Ordinal, SchreierError};
use crate::vector::{Sign, SignPattern, SparseVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsometryError {
    #[error("permutation table must be a bijection of {{1..p}}")]
    NotBijective,
    #[error("malformed coordinate map `{0}`; expected `perm=2,1;signs=-1,1;default=+1`")]
    MalformedMap(String),
    #[error("theta^{{-1}} is an integer; the ceiling pair needs the fractional case")]
    IntegerTheta,
    #[error("vector is not on the unit sphere (norm {0})")]
    NotOnSphere(Rational),
    #[error("flat vector needs k > theta^{{-1}}, got k = {0}")]
    FlatTooShort(u32),
    #[error("operation is specific to alpha = 1, got alpha = {0}")]
    FirstOrderOnly(Ordinal),
    #[error("index {0} is outside the support of the flat vector")]
    OutsideFlatSupport(u32),
    #[error("sigma must move k strictly left: sigma({k}) = {image}")]
    SigmaNotLeft { k: u32, image: u32 },
    #[error("sigma table must be a bijection of its key set")]
    SigmaNotBijective,
    #[error("the obstruction needs alpha > 1, got {0}")]
    OrderTooSmallForObstruction(Ordinal),
    #[error("map does not have the admissible isometry shape for this context")]
    FormValidation,
    #[error(transparent)]
    Schreier(#[from] SchreierError),
    #[error("engine value {engine} contradicts the expected closed form {expected}")]
    EngineMismatch { engine: Rational, expected: Rational },
}

/// A basis-to-signed-basis map: a permutation of a finite prefix
/// `{1..p}`, identity beyond, together with a total sign pattern. The
/// induced action on vectors is linear, injective, and support-preserving.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateMap {
    /// `perm[i-1]` is the image of `i`; a bijection of `{1..perm.len()}`.
    perm: Vec<u32>,
    signs: SignPattern,
}

impl CoordinateMap {
    pub fn new(perm: Vec<u32>, signs: SignPattern) -> Result<Self, IsometryError> {
        let p = perm.len() as u32;
        let mut seen = vec![false; perm.len()];
        for &image in &perm {
            if image == 0 || image > p || seen[(image - 1) as usize] {
                return Err(IsometryError::NotBijective);
            }
            seen[(image - 1) as usize] = true;
        }
        Ok(CoordinateMap { perm, signs })
    }

    pub fn identity() -> Self {
        CoordinateMap { perm: Vec::new(), signs: SignPattern::all_plus() }
    }

    /// The transposition of `i` and `j` with all-plus signs.
    pub fn transposition(i: u32, j: u32) -> Self {
        assert!(i >= 1 && j >= 1 && i != j);
        let p = i.max(j);
        let mut perm: Vec<u32> = (1..=p).collect();
        perm.swap((i - 1) as usize, (j - 1) as usize);
        CoordinateMap { perm, signs: SignPattern::all_plus() }
    }

    /// The same permutation with different signs.
    pub fn with_signs(&self, signs: SignPattern) -> Self {
        CoordinateMap { perm: self.perm.clone(), signs }
    }

    /// A sign-only map (identity permutation).
    pub fn sign_only(signs: SignPattern) -> Self {
        CoordinateMap { perm: Vec::new(), signs }
    }

    pub fn prefix_len(&self) -> u32 {
        self.perm.len() as u32
    }

    pub fn image(&self, i: u32) -> u32 {
        if i >= 1 && (i as usize) <= self.perm.len() {
            self.perm[(i - 1) as usize]
        } else {
            i
        }
    }

    pub fn sign(&self, i: u32) -> Sign {
        self.signs.sign(i)
    }

    pub fn signs(&self) -> &SignPattern {
        &self.signs
    }

    /// Indices the permutation actually moves.
    pub fn moved_indices(&self) -> Vec<u32> {
        (1..=self.prefix_len()).filter(|&i| self.image(i) != i).collect()
    }

    pub fn is_identity_permutation(&self) -> bool {
        self.moved_indices().is_empty()
    }

    /// True when the permutation moves no index outside `{1..bound}`.
    pub fn is_confined_to(&self, bound: u32) -> bool {
        self.moved_indices().into_iter().all(|i| i <= bound && self.image(i) <= bound)
    }

    /// The inverse map: `U^{-1}(e_j) = sign(pi^{-1}(j)) e_{pi^{-1}(j)}`.
    pub fn inverse(&self) -> CoordinateMap {
        let mut perm = vec![0u32; self.perm.len()];
        let mut table = BTreeMap::new();
        for i in 1..=self.prefix_len() {
            let j = self.image(i);
            perm[(j - 1) as usize] = i;
            table.insert(j, self.sign(i));
        }
        // Beyond the prefix the inverse keeps the original signs.
        let signs = SignPattern::new(table, self.signs.default_sign());
        CoordinateMap { perm, signs }
    }

    /// Oddness, `U(-x) = -U(x)`, verified on basis vectors up to the
    /// prefix plus a margin. Structural for coordinate maps; exposed so
    /// reports can state it rather than assume it.
    pub fn is_odd(&self, margin: u32) -> bool {
        (1..=self.prefix_len() + margin).all(|i| {
            let e = SparseVector::unit(i);
            apply_map(self, &(-&e)) == -&apply_map(self, &e)
        })
    }
}

impl fmt::Display for CoordinateMap {
    /// Grammar: `perm=2,1;signs=-1,1;default=+1`. Perm lists the images
    /// of `1..p`; signs list the prefix sign table.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perm=")?;
        for (k, image) in self.perm.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{image}")?;
        }
        write!(f, ";signs=")?;
        let table = self.signs.table();
        let upper = table.keys().max().copied().unwrap_or(0);
        for i in 1..=upper {
            if i > 1 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.signs.sign(i))?;
        }
        write!(f, ";default={}", self.signs.default_sign())
    }
}

impl FromStr for CoordinateMap {
    type Err = IsometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IsometryError::MalformedMap(s.to_owned());
        let mut perm = Vec::new();
        let mut prefix_signs = Vec::new();
        let mut default = Sign::Plus;
        for section in s.split(';') {
            let section = section.trim();
            if section.is_empty() {
                continue;
            }
            let (key, value) = section.split_once('=').ok_or_else(bad)?;
            match key.trim() {
                "perm" => {
                    for part in value.split(',').filter(|p| !p.trim().is_empty()) {
                        perm.push(part.trim().parse::<u32>().map_err(|_| bad())?);
                    }
                }
                "signs" => {
                    for part in value.split(',').filter(|p| !p.trim().is_empty()) {
                        prefix_signs.push(parse_sign(part.trim()).ok_or_else(bad)?);
                    }
                }
                "default" => default = parse_sign(value.trim()).ok_or_else(bad)?,
                _ => return Err(bad()),
            }
        }
        CoordinateMap::new(perm, SignPattern::from_prefix(&prefix_signs, default))
    }
}

fn parse_sign(s: &str) -> Option<Sign> {
    match s {
        "+1" | "1" | "+" => Some(Sign::Plus),
        "-1" | "-" => Some(Sign::Minus),
        _ => None,
    }
}

/// Applies the map: the coefficient at `i` lands at `image(i)` with the
/// sign the pattern assigns to `i`.
pub fn apply_map(map: &CoordinateMap, x: &SparseVector) -> SparseVector {
    let mut entries: Vec<(u32, Rational)> = x
        .entries()
        .iter()
        .map(|(i, a)| (map.image(*i), map.sign(*i).apply(a)))
        .collect();
    entries.sort_by_key(|(i, _)| *i);
    SparseVector::from_entries(entries).expect("bijection keeps indices distinct and coefficients nonzero")
}

/// Whether the map has the shape that the isometry characterization
/// allows: for `alpha = 1`, a permutation confined to
/// `{1..floor(theta^{-1})}` with arbitrary signs; for `alpha > 1`, signs
/// only.
pub fn is_admissible_form(map: &CoordinateMap, ctx: &NormContext) -> bool {
    if ctx.alpha() == Ordinal::Finite(1) {
        map.is_confined_to(ctx.floor_inv_theta())
    } else {
        map.is_identity_permutation()
    }
}

/// Verdict of an exact pairwise check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// A failing pair: both norms are recomputed values, `lhs` for the mapped
/// difference, `rhs` for the original one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryCounterexample {
    pub x: SparseVector,
    pub y: SparseVector,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Outcome of checking one map against one corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub status: Status,
    pub counterexample: Option<IsometryCounterexample>,
    pub pairs_checked: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Verifies `|U(x) - U(y)| = |x - y|` exactly for every pair from the
/// corpus, the zero vector included (so norm preservation is among the
/// pairs). Reports the first failure in corpus order.
pub fn check_isometry(
    map: &CoordinateMap,
    corpus: &[SparseVector],
    ctx: &NormContext,
) -> CheckReport {
    let mut vectors: Vec<SparseVector> = Vec::with_capacity(corpus.len() + 1);
    vectors.push(SparseVector::zero());
    vectors.extend(corpus.iter().cloned());
    let images: Vec<SparseVector> = vectors.iter().map(|v| apply_map(map, v)).collect();
    let mut pairs_checked = 0;
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            pairs_checked += 1;
            let lhs = tsirelson_norm(&(&images[i] - &images[j]), ctx);
            let rhs = tsirelson_norm(&(&vectors[i] - &vectors[j]), ctx);
            if lhs != rhs {
                return CheckReport {
                    status: Status::Fail,
                    counterexample: Some(IsometryCounterexample {
                        x: vectors[i].clone(),
                        y: vectors[j].clone(),
                        lhs,
                        rhs,
                    }),
                    pairs_checked,
                };
            }
        }
    }
    CheckReport { status: Status::Pass, counterexample: None, pairs_checked }
}

/// The pair separating the ceiling index from the permutable prefix when
/// `theta^{-1}` is fractional.
///
/// `bad = e_c - e_{c+1} - ... - e_{2c-1}` for `c = ceil(theta^{-1})` has
/// norm `theta * c > 1`, while the same tail hung on `e_1` has norm
/// exactly one. A map sending some `i <= c - 1` to `c` would have to
/// carry one onto the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CeilingDefect {
    pub bad: SparseVector,
    pub good: SparseVector,
    pub bad_norm: Rational,
    pub good_norm: Rational,
}

pub fn ceiling_defect_pair(ctx: &NormContext) -> Result<CeilingDefect, IsometryError> {
    if ctx.inv_theta_is_integer() {
        return Err(IsometryError::IntegerTheta);
    }
    let c = ctx.ceil_inv_theta();
    let tail = |head: u32| {
        let mut entries = vec![(head, Rational::one())];
        for k in 1..c {
            entries.push((c + k, -Rational::one()));
        }
        entries.sort_by_key(|(i, _)| *i);
        SparseVector::from_entries(entries).expect("distinct indices")
    };
    let bad = tail(c);
    let good = tail(1);
    let expected_bad = ctx.theta() * Rational::from_integer(c as i128);
    let expected_good = Rational::one();
    let bad_norm = tsirelson_norm(&bad, ctx);
    let good_norm = tsirelson_norm(&good, ctx);
    if bad_norm != expected_bad {
        return Err(IsometryError::EngineMismatch { engine: bad_norm, expected: expected_bad });
    }
    if good_norm != expected_good {
        return Err(IsometryError::EngineMismatch { engine: good_norm, expected: expected_good });
    }
    Ok(CeilingDefect { bad, good, bad_norm, good_norm })
}

/// The peak criterion: for `x` on the sphere, `|x + e_n| = 2` holds
/// exactly when `x(n) = 1`. Returns whether the two sides agree for this
/// instance.
pub fn peak_criterion_holds(
    x: &SparseVector,
    n: u32,
    ctx: &NormContext,
) -> Result<bool, IsometryError> {
    let norm = tsirelson_norm(x, ctx);
    if !norm.is_one() {
        return Err(IsometryError::NotOnSphere(norm));
    }
    let bumped = x + &SparseVector::unit(n);
    let reaches_two = tsirelson_norm(&bumped, ctx) == Rational::from_integer(2);
    let coordinate_is_one = x.coeff(n).is_one();
    Ok(reaches_two == coordinate_is_one)
}

/// The compress-and-spike construction: from a sphere vector
/// `y = sum b_i e_i`, the vector `x` scales every coordinate but `j` by
/// theta and plants a unit spike at `j`; it lies on the sphere. The
/// companion `z` scales the others by `1 - theta` and carries
/// `b_j + sgn(b_j)` at `j`; its norm is exactly `1 + |b_j|`.
///
/// Both values are recomputed by the engine and a mismatch is an error:
/// the closed forms are theorems, so disagreement means an engine bug.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaSpikePair {
    pub x: SparseVector,
    pub z: SparseVector,
    pub x_norm: Rational,
    pub z_norm: Rational,
}

pub fn theta_spike_pair(
    y: &SparseVector,
    j: u32,
    spike_sign: Sign,
    ctx: &NormContext,
) -> Result<ThetaSpikePair, IsometryError> {
    let norm = tsirelson_norm(y, ctx);
    if !norm.is_one() {
        return Err(IsometryError::NotOnSphere(norm));
    }
    let b_j = y.coeff(j);
    // sgn(0) = +1 throughout.
    let sgn_bj = Sign::of(&b_j);

    let mut x_entries: Vec<(u32, Rational)> = Vec::with_capacity(y.support_len() + 1);
    let mut z_entries: Vec<(u32, Rational)> = Vec::with_capacity(y.support_len() + 1);
    let one_minus_theta = Rational::one() - ctx.theta();
    for (i, b) in y.entries() {
        if *i == j {
            continue;
        }
        x_entries.push((*i, ctx.theta() * b));
        z_entries.push((*i, one_minus_theta * b));
    }
    x_entries.push((j, spike_sign.rational()));
    let z_spike = b_j + sgn_bj.rational();
    if !z_spike.is_zero() {
        z_entries.push((j, z_spike));
    }
    x_entries.sort_by_key(|(i, _)| *i);
    z_entries.sort_by_key(|(i, _)| *i);
    let x = SparseVector::from_entries(x_entries).expect("entries are distinct and nonzero");
    let z = SparseVector::from_entries(z_entries).expect("entries are distinct and nonzero");

    let x_norm = tsirelson_norm(&x, ctx);
    if !x_norm.is_one() {
        return Err(IsometryError::EngineMismatch { engine: x_norm, expected: Rational::one() });
    }
    let expected_z = Rational::one() + b_j.abs();
    let z_norm = tsirelson_norm(&z, ctx);
    if z_norm != expected_z {
        return Err(IsometryError::EngineMismatch { engine: z_norm, expected: expected_z });
    }
    Ok(ThetaSpikePair { x, z, x_norm, z_norm })
}

/// The flat vector `k^{-1} theta^{-1} (e_k + ... + e_{2k-1})`; for
/// `k > theta^{-1}` it sits exactly on the sphere (the all-singletons
/// partition is admissible and realizes `theta` times the l1 mass).
pub fn flat_unit_vector(k: u32, ctx: &NormContext) -> Result<SparseVector, IsometryError> {
    if ctx.alpha() != Ordinal::Finite(1) {
        return Err(IsometryError::FirstOrderOnly(ctx.alpha()));
    }
    if Rational::from_integer(k as i128) <= ctx.inv_theta() {
        return Err(IsometryError::FlatTooShort(k));
    }
    let coefficient = ctx.inv_theta() / Rational::from_integer(k as i128);
    let entries = (k..2 * k).map(|i| (i, coefficient)).collect();
    let x = SparseVector::from_entries(entries).expect("consecutive indices");
    let norm = tsirelson_norm(&x, ctx);
    if !norm.is_one() {
        return Err(IsometryError::EngineMismatch { engine: norm, expected: Rational::one() });
    }
    Ok(x)
}

/// Norms of the flat vector perturbed by one basis vector inside its
/// support, compared against the closed forms: `|x_k + e_i|` equals
/// `1 + k^{-1} theta^{-1}` while `k <= 2 theta^{-1}`, and `|x_k - e_i|`
/// equals `1 - 2 k^{-1} + theta` beyond. Exactly one side applies to a
/// given `k`; the other stays `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatPerturbations {
    pub plus: Option<Rational>,
    pub minus: Option<Rational>,
}

pub fn flat_perturbation_norms(
    k: u32,
    i: u32,
    ctx: &NormContext,
) -> Result<FlatPerturbations, IsometryError> {
    let x = flat_unit_vector(k, ctx)?;
    if !(k..2 * k).contains(&i) {
        return Err(IsometryError::OutsideFlatSupport(i));
    }
    let k_rat = Rational::from_integer(k as i128);
    let e_i = SparseVector::unit(i);
    if k_rat <= Rational::from_integer(2) * ctx.inv_theta() {
        let expected = Rational::one() + ctx.inv_theta() / k_rat;
        let engine = tsirelson_norm(&(&x + &e_i), ctx);
        if engine != expected {
            return Err(IsometryError::EngineMismatch { engine, expected });
        }
        Ok(FlatPerturbations { plus: Some(engine), minus: None })
    } else {
        let expected =
            Rational::one() - Rational::from_integer(2) / k_rat + *ctx.theta();
        let engine = tsirelson_norm(&(&x - &e_i), ctx);
        if engine != expected {
            return Err(IsometryError::EngineMismatch { engine, expected });
        }
        Ok(FlatPerturbations { plus: None, minus: Some(engine) })
    }
}

/// A finite permutation given as a table on an arbitrary key set,
/// identity everywhere else. Total injectivity forces the table to be a
/// bijection of its keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexBijection {
    table: BTreeMap<u32, u32>,
}

impl IndexBijection {
    pub fn new(table: BTreeMap<u32, u32>) -> Result<Self, IsometryError> {
        for (&k, &v) in &table {
            if k == 0 || v == 0 {
                return Err(IsometryError::SigmaNotBijective);
            }
            // Identity outside the keys: a value escaping the key set
            // collides with the fixed point already sitting there.
            if !table.contains_key(&v) {
                return Err(IsometryError::SigmaNotBijective);
            }
        }
        let mut values: Vec<u32> = table.values().copied().collect();
        values.sort_unstable();
        values.dedup();
        if values.len() != table.len() {
            return Err(IsometryError::SigmaNotBijective);
        }
        Ok(IndexBijection { table })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, IsometryError> {
        Self::new(pairs.into_iter().collect())
    }

    /// The transposition of `a` and `b`.
    pub fn swap(a: u32, b: u32) -> Self {
        IndexBijection { table: BTreeMap::from([(a, b), (b, a)]) }
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.table.get(&i).copied().unwrap_or(i)
    }
}

/// Output of the block-selection procedure that turns "sigma moves `k`
/// left" into a concrete admissibility violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpreadingObstruction {
    /// `{k}` followed by `t` maximal blocks of the reduced order.
    pub blocks: Vec<IndexSet>,
    pub union: IndexSet,
    pub image: IndexSet,
    /// Expected `true`: the union is an `S_alpha` set by construction.
    pub union_member: bool,
    /// Expected `false`: the sigma image cannot be one.
    pub image_member: bool,
}

/// Runs the index-selection procedure for `sigma(k) = t < k` and an order
/// `alpha > 1`: after the singleton `{k}`, it picks `t` maximal blocks of
/// the reduced order greedily, every index chosen past both its
/// predecessor and the predecessor's sigma image. The union is then an
/// `S_alpha` set made of `t + 1 <= k` blocks, while the sigma image
/// starts at `t` and would need to fit into `t` blocks that its chosen
/// spacing rules out.
///
/// The reduced order is `alpha - 1` for successors; for omega it is
/// `t - 1`, the predecessor of the `t`-th member of the cofinal sequence.
/// Maximal blocks of reduced order three or more blow up past any
/// representable size, so those parameters return an error rather than an
/// attempt.
pub fn spreading_obstruction(
    k: u32,
    sigma: &IndexBijection,
    alpha: Ordinal,
    ctx: &NormContext,
) -> Result<SpreadingObstruction, IsometryError> {
    if alpha <= Ordinal::Finite(1) {
        return Err(IsometryError::OrderTooSmallForObstruction(alpha));
    }
    let t = sigma.apply(k);
    if t >= k {
        return Err(IsometryError::SigmaNotLeft { k, image: t });
    }
    let block_order = match alpha {
        Ordinal::OmegaPlus(0) => Ordinal::Finite(t - 1),
        successor => successor.predecessor().expect("alpha > 1 and not omega is a successor"),
    };

    let mut blocks = vec![IndexSet::singleton(k)];
    // The first block starts past k, sigma(k), and theta^{-1}.
    let mut next_floor = k.max(sigma.apply(k)).max(ctx.ceil_inv_theta());
    for _ in 0..t {
        let start = next_floor + 1;
        let block = greedy_maximal_constrained(start, block_order, sigma)?;
        let block_last = block.max().expect("greedy blocks are nonempty");
        next_floor = block_last.max(sigma.apply(block_last));
        blocks.push(block);
    }

    let mut union_elems = Vec::new();
    for b in &blocks {
        union_elems.extend(b.iter());
    }
    let union = IndexSet::new(union_elems).expect("blocks are consecutive");
    let image = IndexSet::from_unsorted(union.iter().map(|i| sigma.apply(i)).collect())
        .expect("sigma is a bijection");
    let union_member = schreier::is_member(&union, alpha);
    let image_member = schreier::is_member(&image, alpha);
    Ok(SpreadingObstruction { blocks, union, image, union_member, image_member })
}

/// Maximal set of the given order built from `start`, except that each
/// next candidate index must clear the sigma image of its predecessor as
/// well. Stops exactly when no extension keeps the set in the family;
/// the candidate's value is irrelevant to membership, so testing the
/// smallest allowed one decides for all.
fn greedy_maximal_constrained(
    start: u32,
    order: Ordinal,
    sigma: &IndexBijection,
) -> Result<IndexSet, IsometryError> {
    if order == Ordinal::Finite(0) {
        return Ok(IndexSet::singleton(start));
    }
    // When sigma fixes everything from `start` on, the constraint is
    // vacuous and the incremental builder applies.
    if sigma.table.keys().all(|&k| k < start) {
        return Ok(schreier::greedy_maximal(start, order)?);
    }
    let mut elements = vec![start];
    loop {
        let last = *elements.last().expect("nonempty");
        let candidate = last.max(sigma.apply(last)) + 1;
        let mut extended = elements.clone();
        extended.push(candidate);
        let extended = IndexSet::new(extended).expect("candidates increase");
        if schreier::is_member(&extended, order) {
            elements = extended.elements().to_vec();
            if elements.len() > schreier::GREEDY_ELEMENT_CAP {
                return Err(SchreierError::GreedyTooLarge(schreier::GREEDY_ELEMENT_CAP).into());
            }
        } else {
            return Ok(IndexSet::new(elements).expect("increasing"));
        }
    }
}

/// Searches for a probe `y` with both `|u + y| > 1` and `|u - y| > 1`,
/// which certifies that `u` is not one of the additively extreme points
/// (the signed prefix basis vectors for alpha = 1, the signed first basis
/// vector above). Probes are the canonical tail sums
/// `e_{j_1} + ... + e_{j_f}` with `f = floor(theta^{-1})` placed past the
/// support (and past `f` when alpha > 1), extended by deterministic
/// corpus vectors up to `budget`.
///
/// `None` reports that no witness was found; it is not a proof that none
/// exists.
pub fn double_expansion_witness(
    u: &SparseVector,
    ctx: &NormContext,
    budget: u32,
) -> Result<Option<(SparseVector, Rational)>, IsometryError> {
    let norm = tsirelson_norm(u, ctx);
    if !norm.is_one() {
        return Err(IsometryError::NotOnSphere(norm));
    }
    let floor = ctx.floor_inv_theta();
    let mut start = u.max_index().unwrap_or(0) + 1;
    if ctx.alpha() > Ordinal::Finite(1) {
        start = start.max(floor + 1);
    }
    let tail = SparseVector::from_entries(
        (start..start + floor).map(|i| (i, Rational::one())).collect(),
    )
    .expect("consecutive indices");

    let mut probes = vec![tail];
    if budget > 0 {
        let spec = crate::harness::CorpusSpec {
            count: budget,
            ..crate::harness::CorpusSpec::default()
        };
        if let Ok(corpus) = crate::harness::generate_corpus(&spec, ctx) {
            probes.extend(corpus);
        }
    }

    for y in probes {
        let plus = tsirelson_norm(&(u + &y), ctx);
        let minus = tsirelson_norm(&(u - &y), ctx);
        let min = plus.min(minus);
        if min > Rational::one() {
            return Ok(Some((y, min)));
        }
    }
    Ok(None)
}

/// Checks that the homogeneous linear extension of a conforming sphere
/// map is an isometry on the corpus: the pairwise check plus norm
/// preservation on off-sphere scalings.
pub fn verify_linear_extension(
    map: &CoordinateMap,
    ctx: &NormContext,
    corpus: &[SparseVector],
) -> Result<CheckReport, IsometryError> {
    if !is_admissible_form(map, ctx) {
        return Err(IsometryError::FormValidation);
    }
    let mut report = check_isometry(map, corpus, ctx);
    if !report.passed() {
        return Ok(report);
    }
    let scalings = [
        Rational::from_integer(2),
        crate::rational::rat(-3, 2),
        crate::rational::rat(1, 3),
    ];
    for x in corpus {
        for c in &scalings {
            let scaled = x.scale(c);
            report.pairs_checked += 1;
            let lhs = tsirelson_norm(&apply_map(map, &scaled), ctx);
            let rhs = tsirelson_norm(&scaled, ctx);
            if lhs != rhs {
                report.status = Status::Fail;
                report.counterexample = Some(IsometryCounterexample {
                    x: scaled,
                    y: SparseVector::zero(),
                    lhs,
                    rhs,
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// The guaranteed separating vector for a map whose largest moved index
/// is `j`: the indicator of the maximal `S_alpha` set from `j`. Its norm
/// is theta times its cardinality, achieved only while the whole set is
/// an admissible minima set; the image under the map starts lower and
/// loses that.
pub fn separating_vector(j: u32, alpha: Ordinal) -> Result<SparseVector, IsometryError> {
    let f = schreier::greedy_maximal(j, alpha)?;
    Ok(SparseVector::from_entries(
        f.iter().map(|i| (i, Rational::one())).collect(),
    )
    .expect("set elements increase"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ctx(theta: (i128, i128), alpha: Ordinal) -> NormContext {
        NormContext::new(rat(theta.0, theta.1), alpha).unwrap()
    }

    fn vec_of(s: &str) -> SparseVector {
        s.parse().unwrap()
    }

    #[test]
    fn apply_moves_and_signs() {
        let swap12 = CoordinateMap::transposition(1, 2);
        assert_eq!(apply_map(&swap12, &SparseVector::unit(1)), SparseVector::unit(2));

        let negate = CoordinateMap::sign_only(SignPattern::all_minus());
        let x = vec_of("1:1/2,3:1");
        assert_eq!(apply_map(&negate, &x), -&x);

        let signed_swap = swap12.with_signs(SignPattern::from_prefix(&[Sign::Minus], Sign::Plus));
        assert_eq!(apply_map(&signed_swap, &vec_of("1:1/2,3:1")), vec_of("2:-1/2,3:1"));
    }

    #[test]
    fn apply_preserves_support_size_and_inverts() {
        let map: CoordinateMap = "perm=3,1,2;signs=-1,1,-1;default=+1".parse().unwrap();
        let x = vec_of("1:1/2,2:-1,3:2/3,9:1");
        let image = apply_map(&map, &x);
        assert_eq!(image.support_len(), x.support_len());
        assert_eq!(apply_map(&map.inverse(), &image), x);
        assert!(map.is_odd(3));
    }

    #[test]
    fn map_grammar_round_trips() {
        let map: CoordinateMap = "perm=2,1;signs=-1,1;default=+1".parse().unwrap();
        assert_eq!(map.image(1), 2);
        assert_eq!(map.sign(1), Sign::Minus);
        let reparsed: CoordinateMap = map.to_string().parse().unwrap();
        assert_eq!(reparsed, map);
        assert!("perm=2,2".parse::<CoordinateMap>().is_err());
        assert!("perm=2,3".parse::<CoordinateMap>().is_err());
        assert!("signs=0".parse::<CoordinateMap>().is_err());
    }

    #[test]
    fn admissible_form_depends_on_theta_and_alpha() {
        assert!(is_admissible_form(
            &CoordinateMap::transposition(1, 2),
            &ctx((1, 2), Ordinal::Finite(1))
        ));
        assert!(!is_admissible_form(
            &CoordinateMap::transposition(1, 3),
            &ctx((2, 5), Ordinal::Finite(1))
        ));
        assert!(is_admissible_form(&CoordinateMap::identity(), &ctx((2, 5), Ordinal::Finite(1))));
        assert!(!is_admissible_form(
            &CoordinateMap::transposition(1, 2),
            &ctx((1, 2), Ordinal::Finite(2))
        ));
        assert!(is_admissible_form(
            &CoordinateMap::sign_only(SignPattern::all_minus()),
            &ctx((1, 2), Ordinal::OmegaPlus(0))
        ));
    }

    #[test]
    fn ceiling_pair_matches_the_closed_forms() {
        let c = ctx((2, 5), Ordinal::Finite(1));
        let defect = ceiling_defect_pair(&c).unwrap();
        assert_eq!(defect.bad, vec_of("3:1,4:-1,5:-1"));
        assert_eq!(defect.good, vec_of("1:1,4:-1,5:-1"));
        assert_eq!(defect.bad_norm, rat(6, 5));
        assert_eq!(defect.good_norm, rat(1, 1));

        let c = ctx((3, 7), Ordinal::Finite(1));
        assert_eq!(ceiling_defect_pair(&c).unwrap().bad_norm, rat(9, 7));

        assert!(matches!(
            ceiling_defect_pair(&ctx((1, 2), Ordinal::Finite(1))),
            Err(IsometryError::IntegerTheta)
        ));
    }

    #[test]
    fn isometry_check_passes_and_fails_where_expected() {
        let c1 = ctx((1, 2), Ordinal::Finite(1));
        let corpus = vec![
            SparseVector::unit(1),
            SparseVector::unit(2),
            vec_of("3:2/3,4:2/3,5:2/3"),
            vec_of("4:1/2,5:1/2,6:1/2,7:1/2"),
        ];
        assert!(check_isometry(&CoordinateMap::transposition(1, 2), &corpus, &c1).passed());

        let c2 = ctx((1, 2), Ordinal::Finite(2));
        let witness_corpus = vec![vec_of("2:1,3:1,4:1,5:1")];
        let report = check_isometry(&CoordinateMap::transposition(1, 2), &witness_corpus, &c2);
        assert!(!report.passed());
        let ce = report.counterexample.unwrap();
        assert_eq!(ce.lhs, rat(3, 2));
        assert_eq!(ce.rhs, rat(2, 1));

        let c3 = ctx((2, 5), Ordinal::Finite(1));
        let ceiling_corpus = vec![vec_of("3:1,4:-1,5:-1")];
        let report = check_isometry(&CoordinateMap::transposition(1, 3), &ceiling_corpus, &c3);
        assert!(!report.passed());
    }

    #[test]
    fn peak_criterion_instances() {
        let c = ctx((1, 2), Ordinal::Finite(1));
        assert!(peak_criterion_holds(&SparseVector::unit(3), 3, &c).unwrap());
        assert!(peak_criterion_holds(&vec_of("3:2/3,4:2/3,5:2/3"), 3, &c).unwrap());
        assert!(peak_criterion_holds(&SparseVector::unit(3), 7, &c).unwrap());
        assert!(peak_criterion_holds(&vec_of("3:2/3,4:2/3,5:2/3"), 9, &c).unwrap());
        assert!(peak_criterion_holds(&vec_of("1:1,2:-1"), 2, &c).unwrap());
        assert!(matches!(
            peak_criterion_holds(&vec_of("3:1,4:1,5:1"), 3, &c),
            Err(IsometryError::NotOnSphere(_))
        ));
    }

    #[test]
    fn spike_pair_instances() {
        let c = ctx((1, 2), Ordinal::Finite(1));

        // Degenerate single-support case: y = e_5, j = 5. The spike lands
        // on the only coordinate; z = 2 e_5 with norm 2 = 1 + |b_5|.
        let pair = theta_spike_pair(&SparseVector::unit(5), 5, Sign::Plus, &c).unwrap();
        assert_eq!(pair.x, SparseVector::unit(5));
        assert_eq!(pair.z, vec_of("5:2"));
        assert_eq!(pair.z_norm, rat(2, 1));

        let y = vec_of("3:2/3,4:2/3,5:2/3");
        let pair = theta_spike_pair(&y, 3, Sign::Plus, &c).unwrap();
        assert_eq!(pair.x, vec_of("3:1,4:1/3,5:1/3"));
        assert_eq!(pair.x_norm, rat(1, 1));
        assert_eq!(pair.z_norm, rat(5, 3));

        // j outside the support: b_j = 0, so the z norm is exactly 1.
        let pair = theta_spike_pair(&y, 9, Sign::Minus, &c).unwrap();
        assert_eq!(pair.z_norm, rat(1, 1));

        assert!(theta_spike_pair(&vec_of("3:1,4:1,5:1"), 3, Sign::Plus, &c).is_err());
    }

    #[test]
    fn flat_vectors_and_their_perturbations() {
        let c = ctx((1, 2), Ordinal::Finite(1));
        assert_eq!(flat_unit_vector(3, &c).unwrap(), vec_of("3:2/3,4:2/3,5:2/3"));
        assert_eq!(
            flat_unit_vector(4, &c).unwrap(),
            vec_of("4:1/2,5:1/2,6:1/2,7:1/2")
        );
        assert!(matches!(
            flat_unit_vector(2, &c),
            Err(IsometryError::FlatTooShort(2))
        ));
        assert!(flat_unit_vector(3, &ctx((1, 2), Ordinal::Finite(2))).is_err());

        let p = flat_perturbation_norms(3, 4, &c).unwrap();
        assert_eq!(p.plus, Some(rat(5, 3)));
        assert_eq!(p.minus, None);

        let p = flat_perturbation_norms(5, 6, &c).unwrap();
        assert_eq!(p.plus, None);
        assert_eq!(p.minus, Some(rat(11, 10)));

        // Boundary k = 2 theta^{-1} still takes the plus form.
        let p = flat_perturbation_norms(4, 4, &c).unwrap();
        assert_eq!(p.plus, Some(rat(3, 2)));

        assert!(flat_perturbation_norms(3, 6, &c).is_err());
    }

    #[test]
    fn obstruction_blocks_separate_union_from_image() {
        let c = ctx((1, 2), Ordinal::Finite(2));
        let sigma = IndexBijection::swap(3, 2);
        let result = spreading_obstruction(3, &sigma, Ordinal::Finite(2), &c).unwrap();
        assert!(result.union_member);
        assert!(!result.image_member);
        assert_eq!(result.blocks[0], IndexSet::singleton(3));

        let sigma = IndexBijection::swap(4, 2);
        let result = spreading_obstruction(4, &sigma, Ordinal::Finite(2), &c).unwrap();
        assert!(result.union_member);
        assert!(!result.image_member);

        let identity = IndexBijection::from_pairs([]).unwrap();
        assert!(matches!(
            spreading_obstruction(3, &identity, Ordinal::Finite(2), &c),
            Err(IsometryError::SigmaNotLeft { .. })
        ));
        assert!(IndexBijection::from_pairs([(3, 2)]).is_err());
        assert!(IndexBijection::from_pairs([(3, 2), (4, 2), (2, 3)]).is_err());
    }

    #[test]
    fn double_expansion_probe_instances() {
        let c = ctx((1, 2), Ordinal::Finite(1));
        // Additively extreme points admit no witness.
        assert!(double_expansion_witness(&SparseVector::unit(1), &c, 0).unwrap().is_none());
        assert!(double_expansion_witness(&SparseVector::unit(2), &c, 0).unwrap().is_none());
        // Past the prefix a witness exists and the tail probe finds it.
        let found = double_expansion_witness(&SparseVector::unit(3), &c, 0).unwrap();
        let (_, value) = found.expect("witness expected");
        assert!(value > rat(1, 1));
        let found = double_expansion_witness(&vec_of("3:2/3,4:2/3,5:2/3"), &c, 0).unwrap();
        assert!(found.is_some());

        // For alpha > 1 only e_1 is extreme; e_2 now has a witness.
        let c2 = ctx((1, 2), Ordinal::Finite(2));
        assert!(double_expansion_witness(&SparseVector::unit(1), &c2, 0).unwrap().is_none());
        assert!(double_expansion_witness(&SparseVector::unit(2), &c2, 0).unwrap().is_some());
    }

    #[test]
    fn linear_extension_passes_for_conforming_maps() {
        let c = ctx((1, 2), Ordinal::Finite(1));
        let corpus = vec![
            SparseVector::unit(1),
            SparseVector::unit(2),
            vec_of("3:2/3,4:2/3,5:2/3"),
        ];
        let report =
            verify_linear_extension(&CoordinateMap::transposition(1, 2), &c, &corpus).unwrap();
        assert!(report.passed());

        assert!(matches!(
            verify_linear_extension(&CoordinateMap::transposition(1, 3), &c, &corpus),
            Err(IsometryError::FormValidation)
        ));
    }

    #[test]
    fn separating_vectors_split_moved_maps() {
        // alpha = 1: the flat block from j = 3.
        let c = ctx((1, 2), Ordinal::Finite(1));
        let sep = separating_vector(3, Ordinal::Finite(1)).unwrap();
        assert_eq!(sep, vec_of("3:1,4:1,5:1"));
        let image = apply_map(&CoordinateMap::transposition(1, 3), &sep);
        assert_ne!(tsirelson_norm(&image, &c), tsirelson_norm(&sep, &c));

        // alpha = 2: the maximal second-order block from j = 2.
        let c2 = ctx((1, 2), Ordinal::Finite(2));
        let sep = separating_vector(2, Ordinal::Finite(2)).unwrap();
        let image = apply_map(&CoordinateMap::transposition(1, 2), &sep);
        assert_ne!(tsirelson_norm(&image, &c2), tsirelson_norm(&sep, &c2));
    }
}
