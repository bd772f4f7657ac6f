use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use chainlcp::algebra::{AlgebraElement, GroupAlgebra, IDEMPOTENT_BUDGET};
use chainlcp::code::{Codeword, LinearCode, DISTANCE_BUDGET};
use chainlcp::group::{GroupDescriptor, GroupTable};
use chainlcp::lcp::*;
use chainlcp::oracle::{self, WordSet};
use chainlcp::ring::{ChainRing, Elem, RingDescriptor};

const BUDGET: u64 = 1 << 16;

fn algebra(r: &str, g: &str) -> GroupAlgebra {
    let ring = ChainRing::new(&RingDescriptor::parse_name(r).unwrap()).unwrap();
    let group = GroupTable::from_descriptor(&GroupDescriptor::parse_name(g).unwrap()).unwrap();
    GroupAlgebra::new(&ring, Arc::new(group))
}

fn w(xs: &[u32]) -> Codeword {
    xs.iter().map(|&x| Elem(x)).collect()
}

/// Two-sided ideal generated by `x`, as a set: closure of the span of all
/// `g x h` under addition.
fn ideal_words(a: &GroupAlgebra, x: &[Elem]) -> WordSet {
    let mut gens = Vec::new();
    for g in 0..a.order() {
        for h in 0..a.order() {
            gens.push(a.right_translate(&a.left_translate(g, x), h));
        }
    }
    oracle::span(a.ring(), a.order(), &gens, BUDGET).unwrap()
}

fn is_lcp_words(a: &GroupAlgebra, c: &WordSet, d: &WordSet) -> bool {
    let full = oracle::ambient_size(a.ring(), a.order(), u64::MAX).unwrap();
    c.intersection(d).count() == 1 && (c.len() as u64) * (d.len() as u64) == full
}

/// Ordered LCP pairs of two-sided ideals, using nothing but word sets.
fn census_by_sets(a: &GroupAlgebra) -> BTreeSet<(Vec<Codeword>, Vec<Codeword>)> {
    let mut ideals: Vec<WordSet> = Vec::new();
    oracle::for_each_word(a.ring(), a.order(), BUDGET, |x| {
        let i = ideal_words(a, x);
        if !ideals.contains(&i) {
            ideals.push(i);
        }
    })
    .unwrap();
    // close under sums
    let mut k = 0;
    while k < ideals.len() {
        for j in 0..=k {
            let gens: Vec<Codeword> = ideals[k].iter().chain(&ideals[j]).cloned().collect();
            let s = oracle::span(a.ring(), a.order(), &gens, BUDGET).unwrap();
            if !ideals.contains(&s) {
                ideals.push(s);
            }
        }
        k += 1;
    }
    let mut out = BTreeSet::new();
    for c in &ideals {
        for d in &ideals {
            if is_lcp_words(a, c, d) {
                let to_code = |s: &WordSet| {
                    LinearCode::new(a.ring(), a.order(), s.iter().cloned().collect()).unwrap()
                };
                out.insert((to_code(c).rows().to_vec(), to_code(d).rows().to_vec()));
            }
        }
    }
    out
}

#[test]
fn census_matches_idempotents_and_set_oracle() {
    let cases = [
        ("F2", "C3", 4),
        ("F3", "C3", 2),
        ("Z4", "C2", 2),
        ("F2", "S3", 4),
        ("Z4", "C3", 4),
    ];
    for (r, g, count) in cases {
        let a = algebra(r, g);
        let census = brute_force_lcp_census(&a, CENSUS_BUDGET).unwrap();
        let ours: BTreeSet<_> = lcp_pairs_from_idempotents(&a, IDEMPOTENT_BUDGET)
            .unwrap()
            .iter()
            .map(LcpPair::key)
            .collect();
        assert_eq!(census.pair_keys(), ours, "{r}[{g}]");
        assert_eq!(ours.len(), count, "{r}[{g}]");
        assert_eq!(census_by_sets(&a), ours, "{r}[{g}]");
        for ideal in &census.ideals {
            assert!(a.is_two_sided_ideal(ideal));
        }
    }
}

#[test]
fn check_lcp_against_sets() {
    let a = algebra("Z4", "C3");
    let r = a.ring();
    let c = LinearCode::new(r, 3, vec![w(&[1, 1, 1])]).unwrap();
    let d = LinearCode::new(r, 3, vec![w(&[2, 1, 1]), w(&[1, 2, 1])]).unwrap();
    let cw = oracle::words_of(&c, BUDGET).unwrap();
    let dw = oracle::words_of(&d, BUDGET).unwrap();
    assert_eq!((cw.len(), dw.len()), (4, 16));
    assert!(is_lcp_words(&a, &cw, &dw));
    assert!(check_lcp(&c, &d).unwrap());
}

#[test]
fn z4_c3_worked_instance() {
    let a = algebra("Z4", "C3");
    let pairs = lcp_pairs_from_idempotents(&a, IDEMPOTENT_BUDGET).unwrap();
    assert_eq!(pairs.len(), 4);
    let mut idems: Vec<_> = pairs
        .iter()
        .map(|p| p.source.as_ref().unwrap().element.clone())
        .collect();
    idems.sort();
    let expect: Vec<AlgebraElement> = [[0, 0, 0], [1, 0, 0], [2, 1, 1], [3, 3, 3]]
        .iter()
        .map(|e| AlgebraElement(w(e)))
        .collect();
    assert_eq!(idems, expect);
    let pair = pairs.iter().find(|p| p.c.log_q_cardinality() == 2).unwrap();
    let cw = oracle::words_of(&pair.c, BUDGET).unwrap();
    let dw = oracle::words_of(&pair.d, BUDGET).unwrap();
    let d_dual = oracle::dual(a.ring(), 3, pair.d.generators(), BUDGET).unwrap();
    let tau = a.group().inversion_permutation();
    let tau_c: WordSet = cw.iter().map(|x| tau.apply(x)).collect();
    assert_eq!(cw.len(), 4);
    assert_eq!(dw.len(), 16);
    assert_eq!(d_dual, cw);
    assert_eq!(tau_c, cw);
    assert!(cw.contains(&w(&[1, 1, 1])));
    let security = oracle::min_weight(&cw)
        .unwrap()
        .min(oracle::min_weight(&d_dual).unwrap());
    assert_eq!(security, 3);
    assert_eq!(security_parameter(pair, DISTANCE_BUDGET).unwrap(), 3);
}

#[test]
fn f2_s3_pair_by_brute_force() {
    let a = algebra("F2", "S3");
    // z = (123) + (132)
    let z = AlgebraElement(w(&[0, 0, 0, 1, 1, 0]));
    let one_plus_z = a.add(&a.one(), &z);
    let pair = LcpPair::new(
        a.right_principal_code(&z),
        a.right_principal_code(&one_plus_z),
    );
    let tau = a.group().inversion_permutation();
    let report = verify_equivalence(&pair, &tau, DISTANCE_BUDGET).unwrap();
    assert!(report.tau_image_equals_dual);
    let cw = oracle::words_of(&pair.c, BUDGET).unwrap();
    let d_dual = oracle::dual(a.ring(), 6, pair.d.generators(), BUDGET).unwrap();
    let tau_c: WordSet = cw.iter().map(|x| tau.apply(x)).collect();
    assert_eq!(tau_c, d_dual);
}

#[test]
fn z4_s3_security_equals_enumerated_distance() {
    let a = algebra("Z4", "S3");
    let tau = a.group().inversion_permutation();
    for pair in lcp_pairs_from_idempotents(&a, IDEMPOTENT_BUDGET).unwrap() {
        if pair.is_trivial() {
            continue;
        }
        let cw = oracle::words_of(&pair.c, BUDGET).unwrap();
        let dd = oracle::dual(a.ring(), 6, pair.d.generators(), BUDGET).unwrap();
        let (dc, ddd) = (
            oracle::min_weight(&cw).unwrap(),
            oracle::min_weight(&dd).unwrap(),
        );
        assert_eq!(dc, ddd);
        assert_eq!(security_parameter(&pair, DISTANCE_BUDGET).unwrap(), dc);
        let report = verify_equivalence(&pair, &tau, DISTANCE_BUDGET).unwrap();
        assert_eq!((report.d_c, report.d_d_dual), (Some(dc), Some(ddd)));
    }
}

#[test]
fn coset_machinery_on_catalog_pairs() {
    for (r, g) in [
        ("Z4", "C3"),
        ("Z4", "S3"),
        ("F2u2", "S3"),
        ("F4u2", "C3"),
        ("Z9", "C3"),
    ] {
        let a = algebra(r, g);
        let tau = a.group().inversion_permutation();
        for pair in lcp_pairs_from_idempotents(&a, IDEMPOTENT_BUDGET).unwrap() {
            assert!(pair.c.is_free() && pair.d.is_free());
            let d_dual = pair.d.dual();
            assert!(coset_alignment(&pair.c, &d_dual, &tau).unwrap(), "{r}[{g}]");
            let decomp = coset_decomposition(&pair.c).unwrap();
            let residues: HashSet<&Codeword> = decomp.residues.iter().collect();
            let phi_c = oracle::project(a.ring(), &oracle::words_of(&pair.c, BUDGET).unwrap());
            assert_eq!(residues.len(), phi_c.len());
            assert!(decomp.residues.iter().all(|x| phi_c.contains(x)));
            assert!(verify_generating_set(&pair.c, 4096).unwrap());
        }
    }
}

#[test]
fn one_sided_findings_are_one_sided_lcps() {
    let a = algebra("F2", "S3");
    let search = one_sided_witness_search(&a, WITNESS_BUDGET, DISTANCE_BUDGET).unwrap();
    assert!(!search.budget_exhausted);
    let tau = a.group().inversion_permutation();
    for f in &search.findings {
        let c = LinearCode::new(a.ring(), 6, f.c.clone()).unwrap();
        let d = LinearCode::new(a.ring(), 6, f.d.clone()).unwrap();
        assert!(a.is_right_ideal(&c) && a.is_right_ideal(&d));
        assert!(!(a.is_left_ideal(&c) && a.is_left_ideal(&d)));
        let cw = oracle::words_of(&c, BUDGET).unwrap();
        let dw = oracle::words_of(&d, BUDGET).unwrap();
        assert!(is_lcp_words(&a, &cw, &dw));
        let d_dual = oracle::dual(a.ring(), 6, &f.d, BUDGET).unwrap();
        let tau_c: WordSet = cw.iter().map(|x| tau.apply(x)).collect();
        assert_eq!(tau_c == d_dual, f.tau_maps_c_to_d_dual);
        if !f.tau_maps_c_to_d_dual {
            assert!(f.some_permutation_maps_c_to_d_dual.is_some());
        }
    }
    let limited = one_sided_witness_search(&a, 3, DISTANCE_BUDGET).unwrap();
    assert!(limited.budget_exhausted);
}
