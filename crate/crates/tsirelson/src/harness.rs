//! Deterministic corpora, the verification suites, and their reports.
//!
//! Everything here is reproducible: a corpus is a pure function of its
//! spec, suites walk their inputs in a fixed order, and reports serialize
//! identically across runs except for the elapsed-time field. Sphere-wide
//! claims are checked on corpora and explicit witness vectors only, and
//! the reports say "sampled", never "proved".

use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::isometry::{
    self, apply_map, check_isometry, separating_vector, CoordinateMap, IsometryError, Status,
};
use crate::norm::{
    norm_iterate, normalize_to_sphere, oracle::ExhaustiveOracle, tsirelson_norm, NormContext,
    NormError,
};
use crate::rational::{rat, Rational};
use crate::schreier::Ordinal;
use crate::vector::{Sign, SignPattern, SparseVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("corpus spec out of range: {0}")]
    InvalidSpec(String),
    #[error("oracle sweep bound must be at most 7, got {0}")]
    BoundTooLarge(u32),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Isometry(#[from] IsometryError),
}

/// Parameters of a deterministic corpus. Identical specs generate
/// identical corpora, byte for byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub max_index: u32,
    pub max_support: u32,
    pub denominators: Vec<u32>,
    pub count: u32,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            max_index: 8,
            max_support: 5,
            denominators: vec![1, 2, 3],
            count: 8,
            seed: 0x5EED_CAFE,
        }
    }
}

/// SplitMix64; fixed here so corpora never shift under dependency bumps.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// Generates the corpus for a context: every basis vector up to the index
/// bound, the flat unit vectors, the ceiling pair when `theta^{-1}` is
/// fractional, and `count` seeded pseudo-random vectors, all normalized
/// onto the unit sphere exactly.
pub fn generate_corpus(
    spec: &CorpusSpec,
    ctx: &NormContext,
) -> Result<Vec<SparseVector>, HarnessError> {
    if spec.max_index == 0 || spec.max_index > 32 {
        return Err(HarnessError::InvalidSpec(format!("max_index {}", spec.max_index)));
    }
    if spec.max_support == 0 || spec.max_support > spec.max_index || spec.max_support > 12 {
        return Err(HarnessError::InvalidSpec(format!("max_support {}", spec.max_support)));
    }
    if spec.denominators.is_empty() || spec.denominators.contains(&0) {
        return Err(HarnessError::InvalidSpec("denominators".into()));
    }

    let mut corpus = Vec::new();
    for i in 1..=spec.max_index {
        corpus.push(SparseVector::unit(i));
    }

    // Flat vectors theta^{-1} k^{-1} (e_k + ... + e_{2k-1}) for
    // theta^{-1} < k <= 2 max(2, theta^{-1}); on the sphere for every
    // alpha >= 1 since their singleton partition is already admissible.
    let inv = ctx.inv_theta();
    let upper = Rational::from_integer(2) * inv.max(Rational::from_integer(2));
    let mut k = ctx.floor_inv_theta() + 1;
    while Rational::from_integer(k as i128) <= upper {
        let coefficient = inv / Rational::from_integer(k as i128);
        let entries = (k..2 * k).map(|i| (i, coefficient)).collect();
        let flat = SparseVector::from_entries(entries).expect("consecutive indices");
        corpus.push(normalize_to_sphere(&flat, ctx)?);
        k += 1;
    }

    if !ctx.inv_theta_is_integer() {
        let defect = isometry::ceiling_defect_pair(ctx)?;
        corpus.push(normalize_to_sphere(&defect.bad, ctx)?);
        corpus.push(normalize_to_sphere(&defect.good, ctx)?);
    }

    let mut rng = SplitMix64(spec.seed);
    for _ in 0..spec.count {
        let support_size = 1 + rng.below(spec.max_support as u64) as u32;
        let mut indices = BTreeSet::new();
        while (indices.len() as u32) < support_size {
            indices.insert(1 + rng.below(spec.max_index as u64) as u32);
        }
        let entries = indices
            .into_iter()
            .map(|i| {
                let numer = 1 + rng.below(3) as i128;
                let numer = if rng.next() & 1 == 0 { numer } else { -numer };
                let denom = spec.denominators[rng.below(spec.denominators.len() as u64) as usize];
                (i, rat(numer, denom as i128))
            })
            .collect();
        let x = SparseVector::from_entries(entries).expect("indices increase");
        corpus.push(normalize_to_sphere(&x, ctx)?);
    }
    Ok(corpus)
}

/// One named check inside a suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub details: String,
}

/// A reproducible failing pair; vectors in the shared text grammar,
/// rationals as strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportCounterexample {
    pub x: String,
    pub y: String,
    pub lhs: String,
    pub rhs: String,
}

/// A whole suite run; serializes to a single JSON document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub suite: String,
    pub theta: String,
    pub alpha: String,
    pub status: Status,
    pub checks: Vec<CheckResult>,
    pub counterexamples: Vec<ReportCounterexample>,
    pub pairs_checked: u64,
    pub elapsed_ms: u128,
}

pub const REPORT_SCHEMA: &str = "tsirelson-lab/1";

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

struct SuiteBuilder {
    suite: String,
    theta: String,
    alpha: String,
    checks: Vec<CheckResult>,
    counterexamples: Vec<ReportCounterexample>,
    pairs_checked: u64,
    started: Instant,
}

impl SuiteBuilder {
    fn new(suite: &str, ctx: &NormContext) -> Self {
        SuiteBuilder {
            suite: suite.to_owned(),
            theta: ctx.theta().to_string(),
            alpha: ctx.alpha().to_string(),
            checks: Vec::new(),
            counterexamples: Vec::new(),
            pairs_checked: 0,
            started: Instant::now(),
        }
    }

    fn check(&mut self, name: &str, ok: bool, details: String) {
        self.checks.push(CheckResult {
            name: name.to_owned(),
            status: if ok { Status::Pass } else { Status::Fail },
            details,
        });
    }

    fn counterexample(&mut self, x: &SparseVector, y: &SparseVector, lhs: &Rational, rhs: &Rational) {
        self.counterexamples.push(ReportCounterexample {
            x: x.to_string(),
            y: y.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }

    fn finish(self) -> SuiteReport {
        let status = if self.checks.iter().all(|c| c.status == Status::Pass) {
            Status::Pass
        } else {
            Status::Fail
        };
        SuiteReport {
            schema: REPORT_SCHEMA,
            suite: self.suite,
            theta: self.theta,
            alpha: self.alpha,
            status,
            checks: self.checks,
            counterexamples: self.counterexamples,
            pairs_checked: self.pairs_checked,
            elapsed_ms: self.started.elapsed().as_millis(),
        }
    }
}

fn corpus_max_index(corpus: &[SparseVector]) -> u32 {
    corpus.iter().filter_map(|x| x.max_index()).max().unwrap_or(1)
}

/// The signed basis vectors that behave as additive extreme points: for
/// first-order families the whole permutable prefix, above it only the
/// first coordinate.
fn extreme_points(ctx: &NormContext) -> Vec<SparseVector> {
    let upper = if ctx.alpha() == Ordinal::Finite(1) { ctx.floor_inv_theta() } else { 1 };
    let mut out = Vec::new();
    for i in 1..=upper {
        out.push(SparseVector::unit(i));
        out.push(-&SparseVector::unit(i));
    }
    out
}

/// Sphere-geometry suite: the peak criterion, the compress-and-spike
/// norms, and the two-sided expansion probes, across the whole corpus.
pub fn run_lemma_suite(ctx: &NormContext, corpus: &[SparseVector]) -> SuiteReport {
    let mut b = SuiteBuilder::new("lemmas", ctx);
    let max_n = corpus_max_index(corpus) + 2;

    let mut peak_ok = true;
    let mut peak_details = format!("{} vectors, n <= {max_n}", corpus.len());
    'peak: for x in corpus {
        for n in 1..=max_n {
            b.pairs_checked += 1;
            match isometry::peak_criterion_holds(x, n, ctx) {
                Ok(true) => {}
                Ok(false) => {
                    peak_ok = false;
                    peak_details = format!("biconditional failed at n={n}");
                    let bumped = x + &SparseVector::unit(n);
                    let lhs = tsirelson_norm(&bumped, ctx);
                    b.counterexample(x, &SparseVector::unit(n), &lhs, &Rational::from_integer(2));
                    break 'peak;
                }
                Err(e) => {
                    peak_ok = false;
                    peak_details = format!("error: {e}");
                    break 'peak;
                }
            }
        }
    }
    b.check("peak_criterion", peak_ok, peak_details);

    let mut spike_ok = true;
    let mut spike_details = format!("{} vectors, j <= {max_n}, both signs", corpus.len());
    'spike: for y in corpus {
        for j in 1..=max_n {
            for sign in [Sign::Plus, Sign::Minus] {
                b.pairs_checked += 1;
                if let Err(e) = isometry::theta_spike_pair(y, j, sign, ctx) {
                    spike_ok = false;
                    spike_details = format!("j={j}: {e}");
                    break 'spike;
                }
            }
        }
    }
    b.check("theta_spike", spike_ok, spike_details);

    let mut extreme_ok = true;
    let mut extreme_details = String::from("no witness against any extreme point");
    for u in extreme_points(ctx) {
        b.pairs_checked += 1;
        match isometry::double_expansion_witness(&u, ctx, 4) {
            Ok(None) => {}
            Ok(Some((y, value))) => {
                extreme_ok = false;
                extreme_details = format!("extreme point {u} admitted a witness");
                b.counterexample(&u, &y, &value, &Rational::one());
            }
            Err(e) => {
                extreme_ok = false;
                extreme_details = format!("error: {e}");
            }
        }
    }
    b.check("extreme_points_admit_no_witness", extreme_ok, extreme_details);

    let extremes = extreme_points(ctx);
    let mut found = 0u32;
    let mut probed = 0u32;
    for u in corpus {
        if extremes.contains(u) {
            continue;
        }
        probed += 1;
        b.pairs_checked += 1;
        if let Ok(Some(_)) = isometry::double_expansion_witness(u, ctx, 4) {
            found += 1;
        }
    }
    b.check(
        "non_extreme_points_yield_witnesses",
        found >= 1 || probed == 0,
        format!("witnesses for {found} of {probed} sampled non-extreme vectors"),
    );

    b.finish()
}

/// Sign patterns sampled for map enumeration.
fn sign_samples() -> Vec<SignPattern> {
    vec![
        SignPattern::all_plus(),
        SignPattern::all_minus(),
        SignPattern::from_prefix(&[Sign::Minus, Sign::Plus, Sign::Minus], Sign::Plus),
        SignPattern::from_prefix(&[Sign::Plus, Sign::Minus], Sign::Plus),
    ]
}

fn permutations(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut items: Vec<u32> = (1..=n).collect();
    heap_permutations(&mut items, n as usize, &mut out);
    out.sort();
    out
}

fn heap_permutations(items: &mut Vec<u32>, k: usize, out: &mut Vec<Vec<u32>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permutations(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Maps that conform to the isometry characterization for this context.
pub fn conforming_maps(ctx: &NormContext) -> Vec<CoordinateMap> {
    let mut maps = Vec::new();
    if ctx.alpha() == Ordinal::Finite(1) {
        for perm in permutations(ctx.floor_inv_theta()) {
            for signs in sign_samples() {
                maps.push(
                    CoordinateMap::new(perm.clone(), signs).expect("permutations are bijections"),
                );
            }
        }
    } else {
        for signs in sign_samples() {
            maps.push(CoordinateMap::sign_only(signs));
        }
    }
    maps
}

/// A deterministic enumeration of maps that move an index the
/// characterization forbids. Every one of them must fail the exact check.
///
/// Orders three and up keep only the transpositions through index 1:
/// their rejection needs no maximal set (any image containing 1 with two
/// or more points is inadmissible outright), whereas maximal sets of
/// those orders exceed any representable size.
pub fn nonconforming_maps(ctx: &NormContext) -> Vec<CoordinateMap> {
    let floor = ctx.floor_inv_theta();
    let mut maps = Vec::new();
    match ctx.alpha() {
        Ordinal::Finite(1) => {
            for j in floor + 1..=floor + 3 {
                for i in 1..j {
                    maps.push(CoordinateMap::transposition(i, j));
                }
            }
            // One longer cycle for variety: 1 -> 2 -> (floor+1) -> 1.
            let j = floor + 1;
            let mut perm: Vec<u32> = (1..=j).collect();
            perm[0] = 2;
            perm[1] = j;
            perm[(j - 1) as usize] = 1;
            maps.push(CoordinateMap::new(perm, SignPattern::all_plus()).expect("cycle is a bijection"));
        }
        Ordinal::Finite(2) => {
            for j in 2..=3u32 {
                for i in 1..j {
                    maps.push(CoordinateMap::transposition(i, j));
                }
            }
        }
        Ordinal::OmegaPlus(0) => {
            maps.push(CoordinateMap::transposition(1, 2));
        }
        _ => {
            maps.push(CoordinateMap::transposition(1, 2));
            maps.push(CoordinateMap::transposition(1, 3));
        }
    }
    maps
}

/// The targeted vectors that separate a non-conforming map from every
/// isometry, together with their preimages so the check sees the pair in
/// both orientations: above first order the short four-point witness and
/// the flat interval from the largest moved index; wherever the maximal
/// family set starting there is representable, its indicator as well.
fn targeted_vectors(map: &CoordinateMap, ctx: &NormContext) -> Vec<SparseVector> {
    let j = map
        .moved_indices()
        .into_iter()
        .max()
        .expect("nonconforming maps move something");
    let mut targets = Vec::new();
    let push_pair = |targets: &mut Vec<SparseVector>, v: SparseVector| {
        targets.push(apply_map(&map.inverse(), &v));
        targets.push(v);
    };
    if ctx.alpha() > Ordinal::Finite(1) {
        push_pair(&mut targets, "2:1,3:1,4:1,5:1".parse().expect("literal"));
        let interval = crate::index_set::IndexSet::interval(j, j + ctx.floor_inv_theta());
        if crate::schreier::is_member(&interval, ctx.alpha()) {
            let flat = SparseVector::from_entries(
                interval.iter().map(|i| (i, Rational::one())).collect(),
            )
            .expect("interval indices increase");
            push_pair(&mut targets, flat);
        }
    }
    if let Ok(sep) = separating_vector(j, ctx.alpha()) {
        push_pair(&mut targets, sep);
    }
    targets
}

/// Isometry suite: conforming maps pass the exact pairwise check and
/// extend linearly; non-conforming maps fail with a concrete pair; the
/// ceiling pair matches the engine when `theta^{-1}` is fractional.
pub fn run_isometry_suite(ctx: &NormContext, corpus: &[SparseVector]) -> SuiteReport {
    let mut b = SuiteBuilder::new("isometry", ctx);

    let mut conform_ok = true;
    let mut conform_details = String::new();
    let maps = conforming_maps(ctx);
    for map in &maps {
        let report = check_isometry(map, corpus, ctx);
        b.pairs_checked += report.pairs_checked;
        if !report.passed() {
            conform_ok = false;
            conform_details = format!("map `{map}` failed");
            if let Some(ce) = report.counterexample {
                b.counterexample(&ce.x, &ce.y, &ce.lhs, &ce.rhs);
            }
            break;
        }
    }
    if conform_ok {
        conform_details = format!("{} maps pass on {} vectors", maps.len(), corpus.len());
    }
    b.check("conforming_maps_pass", conform_ok, conform_details);

    let mut extend_ok = true;
    let mut extend_details = format!("{} maps extend with exact homogeneity", maps.len());
    for map in &maps {
        match isometry::verify_linear_extension(map, ctx, corpus) {
            Ok(report) => {
                b.pairs_checked += report.pairs_checked;
                if !report.passed() {
                    extend_ok = false;
                    extend_details = format!("extension of `{map}` failed");
                    if let Some(ce) = report.counterexample {
                        b.counterexample(&ce.x, &ce.y, &ce.lhs, &ce.rhs);
                    }
                    break;
                }
            }
            Err(e) => {
                extend_ok = false;
                extend_details = format!("error: {e}");
                break;
            }
        }
    }
    b.check("linear_extensions_pass", extend_ok, extend_details);

    let mut nonconform_ok = true;
    let mut rejected = 0usize;
    let bad_maps = nonconforming_maps(ctx);
    let mut nonconform_details = String::new();
    for map in &bad_maps {
        let mut probe_corpus = targeted_vectors(map, ctx);
        probe_corpus.extend(corpus.iter().cloned());
        let report = check_isometry(map, &probe_corpus, ctx);
        b.pairs_checked += report.pairs_checked;
        match report.counterexample {
            Some(ce) => {
                rejected += 1;
                b.counterexample(&ce.x, &ce.y, &ce.lhs, &ce.rhs);
            }
            None => {
                nonconform_ok = false;
                nonconform_details = format!("map `{map}` passed but must not");
                break;
            }
        }
    }
    if nonconform_ok {
        nonconform_details = format!("{rejected} maps rejected with concrete pairs");
    }
    b.check("nonconforming_maps_fail", nonconform_ok, nonconform_details);

    if !ctx.inv_theta_is_integer() {
        match isometry::ceiling_defect_pair(ctx) {
            Ok(defect) => {
                b.pairs_checked += 2;
                b.check(
                    "ceiling_defect",
                    true,
                    format!(
                        "|{}| = {}, |{}| = {}",
                        defect.bad, defect.bad_norm, defect.good, defect.good_norm
                    ),
                );
            }
            Err(e) => b.check("ceiling_defect", false, format!("error: {e}")),
        }
    }

    b.finish()
}

/// Oracle suite: the engine against the definitional enumeration on every
/// vector with support in `{1..bound}` and coefficients `±1, ±1/2`, plus
/// stabilization of the iterates at the implicit value.
pub fn compare_oracle(ctx: &NormContext, bound: u32) -> Result<SuiteReport, HarnessError> {
    if bound > 7 {
        return Err(HarnessError::BoundTooLarge(bound));
    }
    let mut b = SuiteBuilder::new("oracle", ctx);
    let table = ExhaustiveOracle::new(ctx, bound)?;

    let mut agreement_ok = true;
    let mut agreement_details = String::new();
    let mut stabilization_ok = true;
    let mut stabilization_details = String::new();
    let mut vectors = 0u64;
    for x in ExhaustiveOracle::vectors(bound) {
        vectors += 1;
        b.pairs_checked += 1;
        let engine = tsirelson_norm(&x, ctx);
        let oracle = table.norm_of(&x).expect("sweep vectors are in range");
        if engine != oracle && agreement_ok {
            agreement_ok = false;
            agreement_details = format!("engine {engine} vs oracle {oracle} at `{x}`");
            b.counterexample(&x, &SparseVector::zero(), &engine, &oracle);
        }
        let stable = norm_iterate(&x, ctx, x.support_len() as u32);
        if stable != engine && stabilization_ok {
            stabilization_ok = false;
            stabilization_details = format!("iterates reach {stable}, norm is {engine} at `{x}`");
            b.counterexample(&x, &SparseVector::zero(), &stable, &engine);
        }
    }
    if agreement_ok {
        agreement_details = format!("{vectors} vectors agree exactly");
    }
    if stabilization_ok {
        stabilization_details = format!("iterates stabilize on all {vectors} vectors");
    }
    b.check("oracle_agreement", agreement_ok, agreement_details);
    b.check("iterate_stabilization", stabilization_ok, stabilization_details);
    Ok(b.finish())
}
