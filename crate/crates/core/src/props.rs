//! Randomized property suites over a single chain ring.
//!
//! Each suite draws codes of length at most 6 from a seeded generator and
//! tallies named checks. Where the ambient space or the code is small the
//! normal-form answer is also compared with the brute-force set oracle.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code::{Codeword, LinearCode, DISTANCE_BUDGET};
use crate::error::Result;
use crate::lcp::{check_lcp, coset_decomposition, verify_generating_set};
use crate::oracle::{self, WordSet};
use crate::ring::{ChainRing, Elem};

pub const DEFAULT_TRIALS: usize = 200;
pub const MAX_LENGTH: usize = 6;
/// Codes up to this size are also checked word by word.
pub const EXHAUSTIVE_CODE_LIMIT: u64 = 4096;
/// Ambient spaces up to this size are scanned by the dual and colon oracles.
pub const EXHAUSTIVE_AMBIENT_LIMIT: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: u64,
    pub failed: u64,
}

pub type Tallies = BTreeMap<String, Tally>;

pub fn record(tallies: &mut Tallies, name: &str, ok: bool) {
    let t = tallies.entry(name.to_string()).or_default();
    if ok {
        t.passed += 1;
    } else {
        t.failed += 1;
    }
}

pub fn merge(into: &mut Tallies, from: &Tallies) {
    for (name, t) in from {
        let e = into.entry(name.clone()).or_default();
        e.passed += t.passed;
        e.failed += t.failed;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub ring: String,
    pub trials: usize,
    pub seed: u64,
    pub tallies: Tallies,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.tallies.values().all(|t| t.failed == 0)
    }
}

fn random_code(ring: &ChainRing, n: usize, rng: &mut ChaCha8Rng) -> LinearCode {
    let k = rng.gen_range(0..=n + 1);
    let rows = (0..k)
        .map(|_| {
            // bias towards non-free codes half of the time
            let shift = if rng.gen_bool(0.5) {
                rng.gen_range(0..=ring.v())
            } else {
                0
            };
            (0..n)
                .map(|_| ring.mul_gamma_pow(ring.random(rng), shift))
                .collect()
        })
        .collect();
    LinearCode::new(ring, n, rows).expect("rows of length n")
}

/// A random invertible `n × n` matrix, as a product of elementary operations.
pub fn random_invertible(ring: &ChainRing, n: usize, rng: &mut impl Rng) -> Vec<Codeword> {
    let mut m: Vec<Codeword> = (0..n)
        .map(|i| {
            let mut r = vec![Elem::ZERO; n];
            r[i] = Elem::ONE;
            r
        })
        .collect();
    if n == 0 {
        return m;
    }
    let units: Vec<Elem> = ring.elements().filter(|&u| ring.is_unit(u)).collect();
    for _ in 0..4 * n * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        match rng.gen_range(0..3) {
            0 if i != j => {
                let a = ring.random(rng);
                let src = m[j].clone();
                for (x, y) in m[i].iter_mut().zip(src) {
                    *x = ring.add(*x, ring.mul(a, y));
                }
            }
            1 => {
                let u = units[rng.gen_range(0..units.len())];
                for x in m[i].iter_mut() {
                    *x = ring.mul(u, *x);
                }
            }
            _ => m.swap(i, j),
        }
    }
    m
}

fn small_words(code: &LinearCode) -> Option<WordSet> {
    oracle::words_of(code, EXHAUSTIVE_CODE_LIMIT).ok()
}

fn ambient_small(ring: &ChainRing, n: usize) -> bool {
    oracle::ambient_size(ring, n, EXHAUSTIVE_AMBIENT_LIMIT).is_ok()
}

/// Checks on an arbitrary code.
pub fn check_code(code: &LinearCode, tallies: &mut Tallies) -> Result<()> {
    let ring = code.ring();
    let n = code.len();
    let v = ring.v();
    let dual = code.dual();
    record(tallies, "duality_involution", dual.dual() == *code);
    record(
        tallies,
        "dual_cardinality",
        dual.log_q_cardinality() + code.log_q_cardinality() == n * v as usize,
    );
    let renormalized = LinearCode::new(ring, n, code.rows().to_vec())?;
    record(
        tallies,
        "normal_form_idempotent",
        renormalized.rows() == code.rows(),
    );
    record(
        tallies,
        "normal_form_contains_generators",
        code.generators().iter().all(|g| code.contains(g)),
    );

    if let Some(words) = small_words(code) {
        record(
            tallies,
            "normal_form_span_oracle",
            oracle::same_words(&words, code),
        );
        if !code.is_zero() {
            record(
                tallies,
                "min_distance_oracle",
                Some(code.min_distance()?) == oracle::min_weight(&words),
            );
        }
    }
    if ambient_small(ring, n) {
        let d = oracle::dual(ring, n, code.generators(), EXHAUSTIVE_AMBIENT_LIMIT)?;
        record(tallies, "dual_oracle", oracle::same_words(&d, &dual));
    }

    // φ((C:γ^{v−1−i}))⊥ = φ((C⊥:γ^i))
    let mut bridge = true;
    for i in 0..v {
        let left = code.colon_gamma(v - 1 - i)?.project().dual();
        let right = dual.colon_gamma(i)?.project();
        bridge &= left == right;
    }
    record(tallies, "colon_residue_duality", bridge);
    if n <= 4 && ambient_small(ring, n) {
        let words = oracle::words_of(code, EXHAUSTIVE_AMBIENT_LIMIT)?;
        let dual_words = oracle::dual(ring, n, code.generators(), EXHAUSTIVE_AMBIENT_LIMIT)?;
        let field = ring.residue_field();
        let mut ok = true;
        for i in 0..v {
            let left = oracle::colon_gamma(ring, n, &words, v - 1 - i, EXHAUSTIVE_AMBIENT_LIMIT)?;
            let left: Vec<Codeword> = oracle::project(ring, &left).into_iter().collect();
            let left = oracle::dual(&field, n, &left, EXHAUSTIVE_AMBIENT_LIMIT)?;
            let right = oracle::colon_gamma(ring, n, &dual_words, i, EXHAUSTIVE_AMBIENT_LIMIT)?;
            ok &= left == oracle::project(ring, &right);
            let colon = code.colon_gamma(v - 1 - i)?;
            let left_words =
                oracle::colon_gamma(ring, n, &words, v - 1 - i, EXHAUSTIVE_AMBIENT_LIMIT)?;
            ok &= oracle::same_words(&left_words, &colon);
        }
        record(tallies, "colon_residue_duality_oracle", ok);
    }
    Ok(())
}

/// Checks that apply to free codes.
pub fn check_free_code(code: &LinearCode, tallies: &mut Tallies) -> Result<()> {
    let ring = code.ring();
    let n = code.len();
    let v = ring.v();
    let dual = code.dual();
    record(tallies, "free_dual_is_free", dual.is_free());
    record(
        tallies,
        "free_residue_dual",
        code.project().dual() == dual.project(),
    );
    if !code.is_zero() {
        let d = code.min_distance_exhaustive(DISTANCE_BUDGET)?;
        let d0 = code.project().min_distance_exhaustive(DISTANCE_BUDGET)?;
        record(tallies, "free_residue_distance", d == d0);
    }
    let mut colon = true;
    for i in 1..v {
        colon &= code.colon_gamma(i)?.project() == code.project();
    }
    record(tallies, "free_colon_residue", colon);

    let mut meet = true;
    for i in 0..=v {
        meet &=
            code.intersect(&LinearCode::gamma_power_space(ring, n, i))? == code.gamma_multiple(i);
    }
    record(tallies, "free_gamma_intersection", meet);

    let decomp = coset_decomposition(code)?;
    let residues: HashSet<&Codeword> = decomp.residues.iter().collect();
    record(
        tallies,
        "coset_representatives",
        residues.len() == decomp.t()
            && Some(decomp.t() as u128) == code.project().cardinality()
            && decomp.representatives[0].iter().all(|x| x.is_zero())
            && decomp.representatives.iter().all(|r| code.contains(r)),
    );

    if let Some(words) = small_words(code) {
        let mut meet = true;
        for i in 0..=v {
            let scaled = oracle::scale(ring, &words, ring.gamma_pow(i));
            meet &= oracle::in_gamma_power(ring, &words, i) == scaled;
        }
        record(tallies, "free_gamma_intersection_oracle", meet);

        // C = C̃ ∪ γC̃ ∪ ⋯ ∪ γ^{v−1}C̃ ∪ {0}, disjointly
        let gamma_c = oracle::scale(ring, &words, ring.gamma());
        let shell: WordSet = words.difference(&gamma_c).cloned().collect();
        let mut seen = WordSet::new();
        let mut disjoint = true;
        for i in 0..v {
            for w in oracle::scale(ring, &shell, ring.gamma_pow(i)) {
                disjoint &= seen.insert(w);
            }
        }
        let zero = vec![Elem::ZERO; n];
        disjoint &= seen.insert(zero);
        record(tallies, "shell_partition", disjoint && seen == words);

        record(
            tallies,
            "generating_set_spans",
            verify_generating_set(code, EXHAUSTIVE_CODE_LIMIT)?,
        );
    }
    Ok(())
}

/// Checks on an LCP pair of free codes obtained by splitting an invertible
/// matrix.
pub fn check_lcp_pair(c: &LinearCode, d: &LinearCode, tallies: &mut Tallies) -> Result<()> {
    record(tallies, "lcp_detected", check_lcp(c, d)?);
    record(tallies, "lcp_components_free", c.is_free() && d.is_free());
    record(tallies, "lcp_dual_pair", check_lcp(&c.dual(), &d.dual())?);
    record(
        tallies,
        "lcp_residue_pair",
        check_lcp(&c.project(), &d.project())?,
    );
    record(
        tallies,
        "lcp_dual_cardinality",
        d.dual().log_q_cardinality() == c.log_q_cardinality(),
    );
    if let (Some(cw), Some(dw)) = (small_words(c), small_words(d)) {
        let full = oracle::ambient_size(c.ring(), c.len(), u64::MAX)?;
        let meet = cw.intersection(&dw).count();
        record(
            tallies,
            "lcp_oracle",
            meet == 1 && (cw.len() as u64) * (dw.len() as u64) == full,
        );
    }
    Ok(())
}

/// Runs `trials` random trials over `ring`.
pub fn run_ring_suite(ring: &ChainRing, trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tallies = Tallies::new();
    for _ in 0..trials {
        let n = rng.gen_range(1..=MAX_LENGTH);
        let code = random_code(ring, n, &mut rng);
        check_code(&code, &mut tallies)?;
        if code.is_free() {
            check_free_code(&code, &mut tallies)?;
        }

        let n = rng.gen_range(1..=MAX_LENGTH);
        let m = random_invertible(ring, n, &mut rng);
        let k = rng.gen_range(0..=n);
        let c = LinearCode::new(ring, n, m[..k].to_vec())?;
        let d = LinearCode::new(ring, n, m[k..].to_vec())?;
        check_lcp_pair(&c, &d, &mut tallies)?;
        check_free_code(&c, &mut tallies)?;
    }
    Ok(SuiteReport {
        ring: ring.name(),
        trials,
        seed,
        tallies,
    })
}
