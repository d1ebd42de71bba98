//! Exact computation in the combinatorial Tsirelson spaces
//! `T[theta, S_alpha]`.
//!
//! The crate works with finitely supported rational vectors and never
//! touches floating point: norms, sphere memberships, and isometry checks
//! are decided exactly. The pieces:
//!
//! * [`vector`]: sparse rational vectors, projections, sup and l1 norms,
//!   sign flips, spreads, and the shared text grammar (`2:1,3:-1/2`).
//! * [`schreier`]: the families `S_alpha` for `alpha < omega*2`:
//!   membership, decomposition witnesses, enumeration, maximal sets, and
//!   exhaustive regularity checks.
//! * [`norm`]: the implicit Tsirelson norm by canonical-partition search,
//!   its witness certificates, the inductive iterates, and a definitional
//!   brute-force oracle on independent arithmetic.
//! * [`isometry`]: coordinate maps, the admissible-shape test, exact
//!   corpus checking, and the explicit constructions (ceiling pair, flat
//!   vectors, compress-and-spike pairs, spreading obstructions, expansion
//!   probes).
//! * [`harness`]: deterministic corpora and the three verification
//!   suites with JSON reports.
//!
//! The mdBook under `book/` walks through the same material with runnable
//! examples; its snippets compile as doc-tests of the companion
//! `tsirelson-book` crate.

pub mod harness;
pub mod index_set;
pub mod isometry;
pub mod norm;
pub mod rational;
pub mod schreier;
pub mod vector;

pub use index_set::IndexSet;
pub use norm::{
    brute_force_norm, norm_iterate, norm_with_witness, normalize_to_sphere, stabilization_index,
    tsirelson_norm, NormContext, NormWitness,
};
pub use rational::{parse_rational, rat, Rational};
pub use schreier::Ordinal;
pub use vector::{
    ell1_norm, flip_signs, project, spread, sup_norm, Sign, SignPattern, SparseVector, SpreadMap,
};
