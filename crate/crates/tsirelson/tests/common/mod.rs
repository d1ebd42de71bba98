//! Definitional reference implementations shared by the integration
//! tests. Deliberately literal: membership recurses over every
//! consecutive partition, the limit clause tries every admissible `n`.

use std::collections::HashMap;

use tsirelson::schreier::Ordinal;

/// Literal Schreier membership straight from the recursive definition.
/// Independent of `tsirelson::schreier::is_member`: no budget pruning, no
/// min-pinning at the limit, just the clauses.
pub struct NaiveSchreier {
    memo: HashMap<(Vec<u32>, Ordinal), bool>,
}

impl NaiveSchreier {
    pub fn new() -> Self {
        NaiveSchreier { memo: HashMap::new() }
    }

    pub fn is_member(&mut self, f: &[u32], alpha: Ordinal) -> bool {
        if f.is_empty() {
            return true;
        }
        let key = (f.to_vec(), alpha);
        if let Some(&known) = self.memo.get(&key) {
            return known;
        }
        let result = match alpha {
            Ordinal::Finite(0) => f.len() <= 1,
            Ordinal::OmegaPlus(0) => {
                // "F in S_{alpha_n} and n <= min F for some n", alpha_n = n.
                (1..=f[0]).any(|n| self.is_member(f, Ordinal::Finite(n)))
            }
            successor => {
                let beta = successor.predecessor().expect("not zero, not limit");
                (1..=(f[0] as usize).min(f.len()))
                    .any(|d| self.splits_into(f, d, beta))
            }
        };
        self.memo.insert(key, result);
        result
    }

    /// Does `f` split into exactly `d` consecutive nonempty `S_beta`
    /// blocks? Enumerates every split point combination.
    fn splits_into(&mut self, f: &[u32], d: usize, beta: Ordinal) -> bool {
        if d == 1 {
            return self.is_member(f, beta);
        }
        if f.len() < d {
            return false;
        }
        for first_len in 1..=f.len() - (d - 1) {
            if self.is_member(&f[..first_len], beta) && self.splits_into(&f[first_len..], d - 1, beta) {
                return true;
            }
        }
        false
    }
}

/// All subsets of `{1..n}` as index vectors, mask order.
pub fn subsets(n: u32) -> impl Iterator<Item = Vec<u32>> {
    (0u64..(1 << n)).map(move |mask| {
        (0..n).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
    })
}
