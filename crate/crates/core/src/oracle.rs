//! Brute-force set computations over `R^n`.
//!
//! Nothing here touches normal forms: spans are closed additively from the
//! scalar multiples of the generators, duals and quotients are found by
//! scanning the whole ambient space. Used to cross-check the normal-form
//! routines at small sizes.

use std::collections::HashSet;

use crate::code::{dot, hamming_weight, Codeword, LinearCode};
use crate::error::{Error, Result};
use crate::ring::{ChainRing, Elem};

pub type WordSet = HashSet<Codeword>;

fn over_budget(needed: u128, budget: u64) -> Error {
    Error::BudgetExceeded {
        needed,
        budget: budget as u128,
    }
}

/// `|R|^n` if it is at most `budget`.
pub fn ambient_size(ring: &ChainRing, n: usize, budget: u64) -> Result<u64> {
    let size = (ring.size() as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if size > budget as u128 {
        return Err(over_budget(size, budget));
    }
    Ok(size as u64)
}

/// Calls `f` on every vector of `R^n`.
pub fn for_each_word(
    ring: &ChainRing,
    n: usize,
    budget: u64,
    mut f: impl FnMut(&[Elem]),
) -> Result<()> {
    ambient_size(ring, n, budget)?;
    let mut x = vec![Elem::ZERO; n];
    loop {
        f(&x);
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(());
            }
            let next = x[pos].0 + 1;
            if next < ring.size() {
                x[pos] = Elem(next);
                break;
            }
            x[pos] = Elem::ZERO;
            pos += 1;
        }
    }
}

/// The `R`-span of `gens`, as a set.
pub fn span(ring: &ChainRing, n: usize, gens: &[Codeword], budget: u64) -> Result<WordSet> {
    let mut steps: Vec<Codeword> = Vec::new();
    for g in gens {
        for a in ring.elements().skip(1) {
            let s: Codeword = g.iter().map(|&x| ring.mul(a, x)).collect();
            if s.iter().any(|x| !x.is_zero()) {
                steps.push(s);
            }
        }
    }
    steps.sort();
    steps.dedup();
    let zero = vec![Elem::ZERO; n];
    let mut set = WordSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for s in &steps {
            let y: Codeword = x.iter().zip(s).map(|(&a, &b)| ring.add(a, b)).collect();
            if !set.contains(&y) {
                if set.len() as u64 >= budget {
                    return Err(over_budget(set.len() as u128 + 1, budget));
                }
                set.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    Ok(set)
}

/// All codewords of `code`, from its original generators.
pub fn words_of(code: &LinearCode, budget: u64) -> Result<WordSet> {
    span(code.ring(), code.len(), code.generators(), budget)
}

/// `{x ∈ R^n : x · g = 0 for all g}`.
pub fn dual(ring: &ChainRing, n: usize, gens: &[Codeword], budget: u64) -> Result<WordSet> {
    let mut out = WordSet::new();
    for_each_word(ring, n, budget, |x| {
        if gens.iter().all(|g| dot(ring, x, g).is_zero()) {
            out.insert(x.to_vec());
        }
    })?;
    Ok(out)
}

/// `{x ∈ R^n : γ^i x ∈ set}`.
pub fn colon_gamma(
    ring: &ChainRing,
    n: usize,
    set: &WordSet,
    i: u32,
    budget: u64,
) -> Result<WordSet> {
    let mut out = WordSet::new();
    for_each_word(ring, n, budget, |x| {
        let y: Codeword = x.iter().map(|&a| ring.mul_gamma_pow(a, i)).collect();
        if set.contains(&y) {
            out.insert(x.to_vec());
        }
    })?;
    Ok(out)
}

pub fn scale(ring: &ChainRing, set: &WordSet, r: Elem) -> WordSet {
    set.iter()
        .map(|x| x.iter().map(|&a| ring.mul(r, a)).collect())
        .collect()
}

/// φ applied to every word.
pub fn project(ring: &ChainRing, set: &WordSet) -> WordSet {
    set.iter()
        .map(|x| x.iter().map(|&a| ring.project(a)).collect())
        .collect()
}

/// Words all of whose coordinates lie in `γ^i R`.
pub fn in_gamma_power(ring: &ChainRing, set: &WordSet, i: u32) -> WordSet {
    set.iter()
        .filter(|x| x.iter().all(|&a| ring.valuation(a) >= i))
        .cloned()
        .collect()
}

/// Minimum nonzero weight, `None` for `{0}`.
pub fn min_weight(set: &WordSet) -> Option<usize> {
    set.iter()
        .map(|x| hamming_weight(x))
        .filter(|&w| w > 0)
        .min()
}

/// Does the set equal the codeword set of `code`?
pub fn same_words(set: &WordSet, code: &LinearCode) -> bool {
    code.cardinality() == Some(set.len() as u128) && set.iter().all(|x| code.contains(x))
}
