//! Linear complementary pairs, the coset machinery for free codes, the
//! inversion-map equivalence check, and brute-force censuses.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::algebra::{AlgebraElement, CentralIdempotent, GroupAlgebra};
use crate::code::{Codeword, LinearCode};
use crate::error::{Error, Result};
use crate::group::CoordinatePermutation;
use crate::oracle;
use crate::ring::Elem;

/// Default cap on `|R[G]|` for the brute-force ideal census.
pub const CENSUS_BUDGET: u64 = 1 << 16;
/// Default cap on right ideals visited by the one-sided search.
pub const WITNESS_BUDGET: u64 = 100_000;
/// Full permutation search is attempted only up to this length.
pub const PERMUTATION_SEARCH_MAX_N: usize = 8;

#[derive(Clone, Debug)]
pub struct LcpPair {
    pub c: LinearCode,
    pub d: LinearCode,
    pub source: Option<CentralIdempotent>,
}

impl LcpPair {
    pub fn new(c: LinearCode, d: LinearCode) -> Self {
        LcpPair { c, d, source: None }
    }

    /// One side is the zero code.
    pub fn is_trivial(&self) -> bool {
        self.c.is_zero() || self.d.is_zero()
    }

    /// Canonical key of the ordered pair.
    pub fn key(&self) -> (Vec<Codeword>, Vec<Codeword>) {
        (self.c.rows().to_vec(), self.d.rows().to_vec())
    }
}

/// `C ⊕ D = R^n`: trivial intersection and `|C|·|D| = |R|^n`.
pub fn check_lcp(c: &LinearCode, d: &LinearCode) -> Result<bool> {
    let full = c.len() * c.ring().v() as usize;
    let meet = c.intersect(d)?;
    Ok(meet.is_zero() && c.log_q_cardinality() + d.log_q_cardinality() == full)
}

/// `(eR[G], (1 − e)R[G])` for every central idempotent `e`, in the order of
/// the residue idempotents.
pub fn lcp_pairs_from_idempotents(algebra: &GroupAlgebra, budget: u64) -> Result<Vec<LcpPair>> {
    let residues = algebra.residue_central_idempotents(budget)?;
    residues
        .iter()
        .map(|e0| {
            let idem = algebra.hensel_lift_idempotent(e0)?;
            let complement = algebra.sub(&algebra.one(), &idem.element);
            Ok(LcpPair {
                c: algebra.right_principal_code(&idem.element),
                d: algebra.right_principal_code(&complement),
                source: Some(idem),
            })
        })
        .collect()
}

/// Coset representatives of a free code modulo `γC`.
#[derive(Clone, Debug)]
pub struct CosetDecomposition {
    pub code: LinearCode,
    /// `c_1 = 0, c_2, ..., c_t`.
    pub representatives: Vec<Codeword>,
    /// φ(c_i), pairwise distinct.
    pub residues: Vec<Codeword>,
    pub gamma_code: LinearCode,
    index: HashMap<Codeword, usize>,
}

impl CosetDecomposition {
    /// `t = |φ(C)|`.
    pub fn t(&self) -> usize {
        self.representatives.len()
    }

    /// Index `i` with `φ(c_i) = residue`.
    pub fn index_of_residue(&self, residue: &[Elem]) -> Option<usize> {
        self.index.get(residue).copied()
    }

    /// Writes `x ∈ C` as `Σ_j γ^j s_j` with each `s_j ∈ S = {c_2, ..., c_t}`.
    /// Returns `(j, i)` pairs meaning the term `γ^j c_i`; `None` if `x ∉ C`.
    pub fn expand(&self, x: &[Elem]) -> Option<Vec<(u32, usize)>> {
        let ring = self.code.ring();
        let mut coeffs = self.code.coordinates(x)?;
        let mut terms = Vec::new();
        for level in 0..ring.v() {
            let digits: Vec<Elem> = coeffs.iter().map(|&a| ring.project(a)).collect();
            let word = combine(
                ring,
                self.code.len(),
                self.code.rows(),
                &digits.iter().map(|&b| ring.lift(b)).collect::<Vec<_>>(),
            );
            let residue: Codeword = word.iter().map(|&a| ring.project(a)).collect();
            let idx = self.index_of_residue(&residue)?;
            if idx != 0 {
                terms.push((level, idx));
            }
            for (a, b) in coeffs.iter_mut().zip(&digits) {
                *a = ring.div_gamma_pow(ring.sub(*a, ring.lift(*b)), 1);
            }
        }
        Some(terms)
    }
}

fn combine(
    ring: &crate::ring::ChainRing,
    n: usize,
    rows: &[Codeword],
    coeffs: &[Elem],
) -> Codeword {
    let mut out = vec![Elem::ZERO; n];
    for (row, &a) in rows.iter().zip(coeffs) {
        if a.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(row) {
            *o = ring.add(*o, ring.mul(a, x));
        }
    }
    out
}

/// Representatives `Σ lift(b_r) row_r` for `b ∈ F_q^{k_0}` in lexicographic
/// order (last coordinate fastest), so `c_1 = 0`.
pub fn coset_decomposition(code: &LinearCode) -> Result<CosetDecomposition> {
    if !code.is_free() {
        return Err(Error::NotFree);
    }
    let ring = code.ring();
    let k = code.rows().len();
    let q = ring.q();
    let t = (q as u128)
        .checked_pow(k as u32)
        .filter(|&t| t <= u32::MAX as u128)
        .ok_or(Error::BudgetExceeded {
            needed: u128::MAX,
            budget: u32::MAX as u128,
        })? as usize;
    let mut representatives = Vec::with_capacity(t);
    let mut residues = Vec::with_capacity(t);
    let mut index = HashMap::with_capacity(t);
    let mut b = vec![Elem::ZERO; k];
    for i in 0..t {
        let lifted: Vec<Elem> = b.iter().map(|&x| ring.lift(x)).collect();
        let rep = combine(ring, code.len(), code.rows(), &lifted);
        let res: Codeword = rep.iter().map(|&a| ring.project(a)).collect();
        index.insert(res.clone(), i);
        representatives.push(rep);
        residues.push(res);
        for pos in (0..k).rev() {
            if b[pos].0 + 1 < q {
                b[pos] = Elem(b[pos].0 + 1);
                break;
            }
            b[pos] = Elem::ZERO;
        }
    }
    Ok(CosetDecomposition {
        code: code.clone(),
        representatives,
        residues,
        gamma_code: code.gamma_multiple(1),
        index,
    })
}

/// `S = {c_2, ..., c_t}`.
pub fn free_generating_set(code: &LinearCode) -> Result<Vec<Codeword>> {
    Ok(coset_decomposition(code)?
        .representatives
        .into_iter()
        .skip(1)
        .collect())
}

/// Checks, by enumerating `C`, that every codeword is a sum of elements of
/// `S ∪ γS ∪ ⋯ ∪ γ^{v−1}S`, recomputing each sum independently.
pub fn verify_generating_set(code: &LinearCode, budget: u64) -> Result<bool> {
    let decomp = coset_decomposition(code)?;
    let ring = code.ring();
    let mut ok = true;
    code.for_each_codeword(budget, |x| {
        let Some(terms) = decomp.expand(x) else {
            ok = false;
            return false;
        };
        let mut sum = vec![Elem::ZERO; x.len()];
        for (level, idx) in terms {
            let s = &decomp.representatives[idx];
            for (o, &a) in sum.iter_mut().zip(s) {
                *o = ring.add(*o, ring.mul_gamma_pow(a, level));
            }
        }
        ok = sum == x;
        ok
    })?;
    Ok(ok)
}

/// Matches representatives of `C` and `D⊥` through τ: `d_i` is the
/// representative with `φ(d_i) = φ(τ(c_i))`. Checks the matching is a
/// bijection and `τ(c_i) − d_i ∈ γR[G]`.
pub fn coset_alignment(
    c: &LinearCode,
    d_dual: &LinearCode,
    tau: &CoordinatePermutation,
) -> Result<bool> {
    let dc = coset_decomposition(c)?;
    let dd = coset_decomposition(d_dual)?;
    if dc.t() != dd.t() {
        return Ok(false);
    }
    let ring = c.ring();
    let mut hit = vec![false; dd.t()];
    for rep in &dc.representatives {
        let image = tau.apply(rep);
        let res: Codeword = image.iter().map(|&a| ring.project(a)).collect();
        let Some(j) = dd.index_of_residue(&res) else {
            return Ok(false);
        };
        if std::mem::replace(&mut hit[j], true) {
            return Ok(false);
        }
        let in_gamma = image
            .iter()
            .zip(&dd.representatives[j])
            .all(|(&a, &b)| ring.valuation(ring.sub(a, b)) >= 1);
        if !in_gamma {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LcpReport {
    pub card_c: String,
    pub card_d: String,
    pub card_d_dual: String,
    pub tau_image_equals_dual: bool,
    pub d_c: Option<usize>,
    pub d_d_dual: Option<usize>,
    pub security: Option<usize>,
    pub cardinality_check: bool,
}

/// Compares `τ(C)` with `D⊥` and records distances, each found by
/// enumerating the whole code. Distances are absent when either component
/// of the pair is the zero code.
pub fn verify_equivalence(
    pair: &LcpPair,
    tau: &CoordinatePermutation,
    distance_budget: u64,
) -> Result<LcpReport> {
    let image = pair.c.permute(tau)?;
    let d_dual = pair.d.dual();
    let (d_c, d_d_dual) = if pair.is_trivial() || d_dual.is_zero() {
        (None, None)
    } else {
        (
            Some(pair.c.min_distance_exhaustive(distance_budget)?),
            Some(d_dual.min_distance_exhaustive(distance_budget)?),
        )
    };
    Ok(LcpReport {
        card_c: pair.c.cardinality_string(),
        card_d: pair.d.cardinality_string(),
        card_d_dual: d_dual.cardinality_string(),
        tau_image_equals_dual: image == d_dual,
        d_c,
        d_d_dual,
        security: d_c.zip(d_d_dual).map(|(a, b)| a.min(b)),
        cardinality_check: d_dual.log_q_cardinality() == pair.c.log_q_cardinality(),
    })
}

/// `min(d(C), d(D⊥))`.
pub fn security_parameter(pair: &LcpPair, distance_budget: u64) -> Result<usize> {
    let a = pair.c.min_distance_with_budget(distance_budget)?;
    let b = pair.d.dual().min_distance_with_budget(distance_budget)?;
    Ok(a.min(b))
}

/// All two-sided ideals and all ordered LCP pairs among them, found without
/// idempotents: principal ideals of every element, closed under sums.
#[derive(Clone, Debug)]
pub struct Census {
    pub ideals: Vec<LinearCode>,
    pub pairs: Vec<LcpPair>,
}

impl Census {
    pub fn pair_keys(&self) -> BTreeSet<(Vec<Codeword>, Vec<Codeword>)> {
        self.pairs.iter().map(LcpPair::key).collect()
    }
}

fn ideal_lattice(
    algebra: &GroupAlgebra,
    budget: u64,
    ideal_cap: Option<u64>,
    two_sided: bool,
) -> Result<(Vec<LinearCode>, bool)> {
    let n = algebra.order();
    let ring = algebra.ring();
    let units: Vec<Elem> = ring.elements().filter(|&u| ring.is_unit(u)).collect();
    let lefts: Vec<usize> = if two_sided { (0..n).collect() } else { vec![0] };
    let mut principals: HashSet<LinearCode> = HashSet::new();
    let mut covered: HashSet<Codeword> = HashSet::new();
    oracle::for_each_word(ring, n, budget, |x| {
        if x.iter().all(|a| a.is_zero()) || covered.contains(x) {
            return;
        }
        let gens = [AlgebraElement(x.to_vec())];
        let ideal = if two_sided {
            algebra.ideal_from_generators(&gens)
        } else {
            algebra.right_ideal_from_generators(&gens)
        }
        .expect("element of the algebra");
        // u·g·x·h generates the same ideal for units u and g, h in G
        for &g in &lefts {
            let gx = algebra.left_translate(g, x);
            for h in 0..n {
                let gxh = algebra.right_translate(&gx, h);
                for &u in &units {
                    covered.insert(gxh.iter().map(|&a| ring.mul(u, a)).collect());
                }
            }
        }
        principals.insert(ideal);
    })?;
    let mut principals: Vec<LinearCode> = principals.into_iter().collect();
    principals.sort_by(|a, b| a.rows().cmp(b.rows()));
    let zero = LinearCode::zero(ring, n);
    let mut seen: HashSet<LinearCode> = HashSet::from([zero.clone()]);
    let mut queue = vec![zero];
    let mut exhausted = false;
    while let Some(m) = queue.pop() {
        for p in &principals {
            if p.is_subcode_of(&m) {
                continue;
            }
            let s = m.sum(p)?;
            if !seen.contains(&s) {
                if ideal_cap.is_some_and(|cap| seen.len() as u64 >= cap) {
                    exhausted = true;
                    break;
                }
                seen.insert(s.clone());
                queue.push(s);
            }
        }
        if exhausted {
            break;
        }
    }
    let mut ideals: Vec<LinearCode> = seen.into_iter().collect();
    ideals
        .sort_by(|a, b| (a.log_q_cardinality(), a.rows()).cmp(&(b.log_q_cardinality(), b.rows())));
    Ok((ideals, exhausted))
}

fn lcp_pairs_among(ideals: &[LinearCode]) -> Result<Vec<LcpPair>> {
    let mut pairs = Vec::new();
    for c in ideals {
        let full = c.len() * c.ring().v() as usize;
        for d in ideals {
            if c.log_q_cardinality() + d.log_q_cardinality() == full && check_lcp(c, d)? {
                pairs.push(LcpPair::new(c.clone(), d.clone()));
            }
        }
    }
    Ok(pairs)
}

/// Enumerates every two-sided ideal of `R[G]` and every ordered LCP pair of
/// them. Requires `|R[G]| <= budget`.
pub fn brute_force_lcp_census(algebra: &GroupAlgebra, budget: u64) -> Result<Census> {
    let (ideals, _) = ideal_lattice(algebra, budget, None, true)?;
    debug_assert!(ideals.iter().all(|i| algebra.is_two_sided_ideal(i)));
    let pairs = lcp_pairs_among(&ideals)?;
    Ok(Census { ideals, pairs })
}

#[derive(Clone, Debug, Serialize)]
pub struct OneSidedFinding {
    pub c: Vec<Codeword>,
    pub d: Vec<Codeword>,
    pub c_two_sided: bool,
    pub d_two_sided: bool,
    pub card_c: String,
    pub tau_maps_c_to_d_dual: bool,
    /// Result of the full permutation search; only run when τ fails and
    /// `n <= 8`.
    pub some_permutation_maps_c_to_d_dual: Option<bool>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WitnessSearch {
    pub abelian_short_circuit: bool,
    pub budget_exhausted: bool,
    pub right_ideals_enumerated: usize,
    pub findings: Vec<OneSidedFinding>,
}

impl WitnessSearch {
    pub fn tau_failures(&self) -> usize {
        self.findings
            .iter()
            .filter(|f| !f.tau_maps_c_to_d_dual)
            .count()
    }
}

/// Searches all coordinate permutations for one taking `c` onto `target`.
pub fn permutation_equivalent(
    c: &LinearCode,
    target: &LinearCode,
    distance_budget: u64,
) -> Result<bool> {
    if c.log_q_cardinality() != target.log_q_cardinality() {
        return Ok(false);
    }
    if c.weight_distribution(distance_budget)? != target.weight_distribution(distance_budget)? {
        return Ok(false);
    }
    let n = c.len();
    let mut image: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let maps = |image: &[usize]| {
        let perm = CoordinatePermutation::new(image.to_vec()).expect("heap permutation");
        c.rows().iter().all(|r| target.contains(&perm.apply(r)))
    };
    if maps(&image) {
        return Ok(true);
    }
    // Heap's algorithm
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                image.swap(0, i);
            } else {
                image.swap(counters[i], i);
            }
            if maps(&image) {
                return Ok(true);
            }
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(false)
}

/// Looks for LCP pairs of right ideals with a component that is not
/// two-sided and records whether τ still maps `C` onto `D⊥`. `budget` caps
/// the number of right ideals visited.
pub fn one_sided_witness_search(
    algebra: &GroupAlgebra,
    budget: u64,
    distance_budget: u64,
) -> Result<WitnessSearch> {
    if algebra.group().is_abelian() {
        return Ok(WitnessSearch {
            abelian_short_circuit: true,
            ..Default::default()
        });
    }
    if budget == 0 {
        return Ok(WitnessSearch {
            budget_exhausted: true,
            ..Default::default()
        });
    }
    let (ideals, exhausted) = ideal_lattice(algebra, CENSUS_BUDGET, Some(budget), false)?;
    let tau = algebra.group().inversion_permutation();
    let sidedness: Vec<bool> = ideals.iter().map(|i| algebra.is_left_ideal(i)).collect();
    let mut findings = Vec::new();
    for (ci, c) in ideals.iter().enumerate() {
        let full = c.len() * c.ring().v() as usize;
        for (di, d) in ideals.iter().enumerate() {
            if sidedness[ci] && sidedness[di] {
                continue;
            }
            if c.log_q_cardinality() + d.log_q_cardinality() != full || !check_lcp(c, d)? {
                continue;
            }
            let d_dual = d.dual();
            let tau_ok = c.permute(&tau)? == d_dual;
            let some_perm = if !tau_ok && c.len() <= PERMUTATION_SEARCH_MAX_N {
                Some(permutation_equivalent(c, &d_dual, distance_budget)?)
            } else {
                None
            };
            findings.push(OneSidedFinding {
                c: c.rows().to_vec(),
                d: d.rows().to_vec(),
                c_two_sided: sidedness[ci],
                d_two_sided: sidedness[di],
                card_c: c.cardinality_string(),
                tau_maps_c_to_d_dual: tau_ok,
                some_permutation_maps_c_to_d_dual: some_perm,
            });
        }
    }
    Ok(WitnessSearch {
        abelian_short_circuit: false,
        budget_exhausted: exhausted,
        right_ideals_enumerated: ideals.len(),
        findings,
    })
}
