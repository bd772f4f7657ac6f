//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use chainlcp::algebra::{GroupAlgebra, IDEMPOTENT_BUDGET};
use chainlcp::code::DISTANCE_BUDGET;
use chainlcp::group::{GroupDescriptor, GroupTable};
use chainlcp::lcp::{
    brute_force_lcp_census, lcp_pairs_from_idempotents, one_sided_witness_search, LcpPair,
    CENSUS_BUDGET, WITNESS_BUDGET,
};
use chainlcp::oracle::{self, WordSet};
use chainlcp::props::{self, DEFAULT_TRIALS};
use chainlcp::ring::{ChainRing, RingDescriptor};
use chainlcp::verify::{default_catalog, run_catalog, RunOptions, RunReport, SUITE_SEED};
use serde_json::Value;

const ORACLE_BUDGET: u64 = 1 << 16;
const TIME_LIMIT: Duration = Duration::from_secs(120);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn algebra(r: &str, g: &str) -> GroupAlgebra {
    let ring = ChainRing::new(&RingDescriptor::parse_name(r).unwrap()).unwrap();
    let group = GroupTable::from_descriptor(&GroupDescriptor::parse_name(g).unwrap()).unwrap();
    GroupAlgebra::new(&ring, Arc::new(group))
}

fn catalog_algebras() -> Vec<GroupAlgebra> {
    default_catalog()
        .entries
        .iter()
        .map(|e| {
            let ring = ChainRing::new(&e.ring).unwrap();
            GroupAlgebra::new(
                &ring,
                Arc::new(GroupTable::from_descriptor(&e.group).unwrap()),
            )
        })
        .collect()
}

fn pair_equivalence(report: &RunReport, elapsed: Duration) -> Outcome {
    let mut pairs = 0;
    let mut bad = Vec::new();
    for e in &report.entries {
        if e.status != chainlcp::verify::EntryStatus::Ok {
            bad.push(format!("{}[{}] {:?}", e.ring, e.group, e.message));
        }
        for p in &e.pairs {
            pairs += 1;
            if !p.tau_equals_dual {
                bad.push(format!("{}[{}] pair {:?}", e.ring, e.group, p.idempotent));
            }
        }
    }
    let pass = report.entries.len() == 10 && bad.is_empty() && pairs > 0 && elapsed < TIME_LIMIT;
    outcome(
        pass,
        format!(
            "{} algebras, {pairs} ordered pairs, tau(C) = D-dual failures: {:?}, {:.1} s on one thread",
            report.entries.len(),
            bad,
            elapsed.as_secs_f64()
        ),
    )
}

fn distance_equality() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for a in catalog_algebras() {
        for pair in lcp_pairs_from_idempotents(&a, IDEMPOTENT_BUDGET).unwrap() {
            if pair.is_trivial() {
                continue;
            }
            // both sides enumerated from generators, without normal forms
            let c = oracle::words_of(&pair.c, ORACLE_BUDGET).unwrap();
            let d_dual =
                oracle::dual(a.ring(), a.order(), pair.d.generators(), ORACLE_BUDGET).unwrap();
            let (dc, dd) = (oracle::min_weight(&c), oracle::min_weight(&d_dual));
            let lib = (
                pair.c.min_distance_exhaustive(DISTANCE_BUDGET).ok(),
                pair.d.dual().min_distance_exhaustive(DISTANCE_BUDGET).ok(),
            );
            checked += 1;
            if dc.is_none() || dc != dd || lib != (dc, dd) {
                bad.push(format!("{} {:?} {:?} {:?}", a.name(), dc, dd, lib));
            }
        }
    }
    outcome(
        bad.is_empty() && checked > 0,
        format!("{checked} nontrivial pairs, mismatches: {bad:?}"),
    )
}

fn worked_instance() -> Outcome {
    let a = algebra("Z4", "C3");
    let direct = a.central_idempotents(IDEMPOTENT_BUDGET).unwrap();
    let pairs = lcp_pairs_from_idempotents(&a, IDEMPOTENT_BUDGET).unwrap();
    let tau = a.group().inversion_permutation();
    let mut found = Vec::new();
    for p in pairs.iter().filter(|p| !p.is_trivial()) {
        let c = oracle::words_of(&p.c, ORACLE_BUDGET).unwrap();
        let d = oracle::words_of(&p.d, ORACLE_BUDGET).unwrap();
        let d_dual = oracle::dual(a.ring(), 3, p.d.generators(), ORACLE_BUDGET).unwrap();
        let tau_c: WordSet = c.iter().map(|x| tau.apply(x)).collect();
        let security = oracle::min_weight(&c)
            .unwrap()
            .min(oracle::min_weight(&d_dual).unwrap());
        found.push((c.len(), d.len(), d_dual == c && tau_c == c, security));
    }
    found.sort();
    let pass = direct.len() == 4 && pairs.len() == 4 && found.first() == Some(&(4, 16, true, 3));
    outcome(
        pass,
        format!(
            "{} central idempotents, {} pairs; nontrivial (|C|, |D|, D-dual = C = tau(C), security): {:?}",
            direct.len(),
            pairs.len(),
            found
        ),
    )
}

fn oracle_census() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (r, g) in [("F2", "C3"), ("F3", "C3"), ("Z4", "C2"), ("F2", "S3")] {
        let a = algebra(r, g);
        let census = brute_force_lcp_census(&a, CENSUS_BUDGET).unwrap();
        let ours: BTreeSet<_> = lcp_pairs_from_idempotents(&a, IDEMPOTENT_BUDGET)
            .unwrap()
            .iter()
            .map(LcpPair::key)
            .collect();
        let agree = census.pair_keys() == ours;
        pass &= agree;
        lines.push(format!(
            "{r}[{g}] {} pairs {}",
            ours.len(),
            if agree { "equal" } else { "DIFFER" }
        ));
    }
    outcome(pass, lines.join(", "))
}

fn code_property_suites() -> Outcome {
    let required = [
        "duality_involution",
        "dual_cardinality",
        "lcp_dual_pair",
        "lcp_components_free",
        "lcp_residue_pair",
        "free_residue_dual",
        "free_residue_distance",
        "free_gamma_intersection",
        "free_gamma_intersection_oracle",
        "shell_partition",
        "colon_residue_duality",
        "colon_residue_duality_oracle",
        "generating_set_spans",
    ];
    let mut rings: Vec<RingDescriptor> = Vec::new();
    for e in default_catalog().entries {
        if !rings.contains(&e.ring) {
            rings.push(e.ring);
        }
    }
    let mut failures = Vec::new();
    let mut total = 0;
    for desc in &rings {
        let ring = ChainRing::new(desc).unwrap();
        let report = props::run_ring_suite(&ring, DEFAULT_TRIALS, SUITE_SEED).unwrap();
        for (name, t) in &report.tallies {
            total += t.passed + t.failed;
            if t.failed > 0 {
                failures.push(format!("{} {name} {}", report.ring, t.failed));
            }
        }
        for name in required {
            if report.tallies.get(name).is_none_or(|t| t.passed == 0) {
                failures.push(format!("{} {name} never exercised", report.ring));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} rings x {DEFAULT_TRIALS} trials, {total} checks, failures: {failures:?}",
            rings.len()
        ),
    )
}

fn idempotent_lifting(report: &RunReport) -> Outcome {
    let names = [
        "lift_idempotent",
        "lift_central",
        "lift_residue",
        "lift_unique",
        "idempotent_count",
    ];
    let mut bad = Vec::new();
    let mut lifted = 0;
    for e in &report.entries {
        lifted += e.idempotents.len();
        for n in names {
            if e.checks.get(n) != Some(&true) {
                bad.push(format!("{}[{}] {n}", e.ring, e.group));
            }
        }
    }
    outcome(
        bad.is_empty() && lifted > 0,
        format!("{lifted} idempotents lifted, failures: {bad:?}"),
    )
}

fn one_sided_probe() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (r, g) in [("F2", "S3"), ("Z4", "S3")] {
        let a = algebra(r, g);
        match one_sided_witness_search(&a, WITNESS_BUDGET, DISTANCE_BUDGET) {
            Ok(s) => {
                let failures: Vec<_> = s
                    .findings
                    .iter()
                    .filter(|f| !f.tau_maps_c_to_d_dual)
                    .collect();
                let searched = failures
                    .iter()
                    .all(|f| f.some_permutation_maps_c_to_d_dual.is_some());
                let inequivalent = failures
                    .iter()
                    .filter(|f| f.some_permutation_maps_c_to_d_dual == Some(false))
                    .count();
                pass &= searched;
                lines.push(format!(
                    "{r}[{g}] {} right ideals, {} one-sided LCPs, {} with tau(C) != D-dual, {} of those inequivalent under every permutation",
                    s.right_ideals_enumerated,
                    s.findings.len(),
                    failures.len(),
                    inequivalent
                ));
            }
            Err(e) => {
                pass = false;
                lines.push(format!("{r}[{g}] error {e}"));
            }
        }
    }
    outcome(pass, lines.join("; "))
}

fn cli_contract() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_chainlcp");
    let dir = tempfile::tempdir().unwrap();
    let jobs = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .to_string();
    let out = dir.path().join("report.json");
    let status = Command::new(bin)
        .args(["verify", "--jobs", &jobs, "--out", out.to_str().unwrap()])
        .output()
        .unwrap()
        .status;
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap_or_default())
        .unwrap_or(Value::Null);
    let entries = report["entries"].as_array().map_or(0, |e| e.len());
    let reproduced = report["all_passed"] == true
        && entries == 10
        && report["tallies"].as_object().is_some_and(|t| {
            t.values().all(|v| v["failed"] == 0)
                && t.contains_key("pair.tau_equals_dual")
                && t.contains_key("census_agreement")
                && t.contains_key("lift_unique")
                && t.keys().any(|k| k.starts_with("suite."))
        });

    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/z4_c3_pair.json");
    let good = Command::new(bin)
        .args([
            "verify",
            "--catalog",
            fixture.to_str().unwrap(),
            "--trials",
            "10",
        ])
        .output()
        .unwrap();
    let mut catalog: Value =
        serde_json::from_str(&std::fs::read_to_string(&fixture).unwrap()).unwrap();
    // (1, 1, 1) -> (1, 1, 0)
    catalog["entries"][0]["pairs"][0]["c"][0][2] = Value::from(0);
    let corrupt_path = dir.path().join("corrupt.json");
    std::fs::write(&corrupt_path, catalog.to_string()).unwrap();
    let bad = Command::new(bin)
        .args([
            "verify",
            "--catalog",
            corrupt_path.to_str().unwrap(),
            "--trials",
            "10",
        ])
        .output()
        .unwrap();
    let bad_report: Value = serde_json::from_slice(&bad.stdout).unwrap_or(Value::Null);
    let fixture_checks = bad_report["entries"][0]["pairs"]
        .as_array()
        .and_then(|ps| ps.iter().find(|p| p["source"] == "fixture"))
        .map(|p| p["checks"].clone())
        .unwrap_or(Value::Null);
    let flipped: Vec<String> = fixture_checks
        .as_object()
        .map(|m| {
            m.iter()
                .filter(|(_, v)| **v == false)
                .map(|(k, _)| k.clone())
                .collect()
        })
        .unwrap_or_default();

    let pass = status.code() == Some(0)
        && reproduced
        && good.status.code() == Some(0)
        && bad.status.code() == Some(1)
        && flipped.iter().any(|k| k == "tau_equals_dual");
    outcome(
        pass,
        format!(
            "default verify exit {:?} ({entries} entries, criteria reproduced: {reproduced}); fixture exit {:?}; corrupted fixture exit {:?}, failing checks {:?}",
            status.code(),
            good.status.code(),
            bad.status.code(),
            flipped
        ),
    )
}

fn main() {
    let options = RunOptions {
        ring_suites: false,
        jobs: 1,
        ..Default::default()
    };
    let start = Instant::now();
    let report = run_catalog(&default_catalog(), &options).unwrap();
    let elapsed = start.elapsed();

    let results = [
        ("1 pair equivalence", pair_equivalence(&report, elapsed)),
        ("2 distance equality", distance_equality()),
        ("3 worked instance Z4[C3]", worked_instance()),
        ("4 census agreement", oracle_census()),
        ("5 code property suites", code_property_suites()),
        ("6 idempotent lifting", idempotent_lifting(&report)),
        ("7 one-sided probe", one_sided_probe()),
        ("8 CLI contract", cli_contract()),
    ];
    let mut all = true;
    for (name, o) in &results {
        all &= o.pass;
        println!(
            "criterion {name}: {} - {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if !all {
        std::process::exit(1);
    }
}
