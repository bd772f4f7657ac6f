//! Catalog runner: builds every LCP pair of each catalog algebra from its
//! central idempotents and checks the equivalence `τ(C) = D⊥` together with
//! the supporting structural facts, tallying each named check.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{AlgebraElement, GroupAlgebra, IDEMPOTENT_BUDGET};
use crate::code::{Codeword, LinearCode, DISTANCE_BUDGET};
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupKind, GroupTable};
use crate::lcp::{
    brute_force_lcp_census, check_lcp, coset_alignment, one_sided_witness_search,
    verify_equivalence, verify_generating_set, LcpPair, CENSUS_BUDGET, WITNESS_BUDGET,
};
use crate::oracle;
use crate::props::{self, record, SuiteReport, Tallies, DEFAULT_TRIALS, EXHAUSTIVE_CODE_LIMIT};
use crate::ring::{ChainRing, RingDescriptor};

/// Seed shared by every ring suite, so reports are reproducible.
pub const SUITE_SEED: u64 = 0x5EED_1CB5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub idempotents: u64,
    pub distance: u64,
    pub witness: u64,
    pub census: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            idempotents: IDEMPOTENT_BUDGET,
            distance: DISTANCE_BUDGET,
            witness: WITNESS_BUDGET,
            census: CENSUS_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotents: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub census: Option<u64>,
}

impl Budgets {
    pub fn with(self, o: &BudgetOverrides) -> Budgets {
        Budgets {
            idempotents: o.idempotents.unwrap_or(self.idempotents),
            distance: o.distance.unwrap_or(self.distance),
            witness: o.witness.unwrap_or(self.witness),
            census: o.census.unwrap_or(self.census),
        }
    }
}

/// Explicit pair of codes, given by generators in element wire form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixturePair {
    pub c: Vec<Vec<Value>>,
    pub d: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub ring: RingDescriptor,
    pub group: GroupDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budgets: Option<BudgetOverrides>,
    /// Extra pairs checked alongside the idempotent ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<FixturePair>>,
}

impl CatalogEntry {
    pub fn new(ring: RingDescriptor, group: GroupDescriptor) -> Self {
        CatalogEntry {
            ring,
            group,
            budgets: None,
            pairs: None,
        }
    }

    /// Entry from short names such as `Z4` and `S3`.
    pub fn from_names(ring: &str, group: &str) -> Result<Self> {
        Ok(Self::new(
            RingDescriptor::parse_name(ring)?,
            GroupDescriptor::parse_name(group)?,
        ))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog> {
        let catalog: Catalog =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        catalog.validate()?;
        Ok(catalog)
    }

    /// Builds every ring, group and fixture code once.
    pub fn validate(&self) -> Result<()> {
        for entry in &self.entries {
            let ring = ChainRing::new(&entry.ring)?;
            let group = GroupTable::from_descriptor(&entry.group)?;
            for pair in entry.pairs.iter().flatten() {
                fixture_code(&ring, group.order(), &pair.c)?;
                fixture_code(&ring, group.order(), &pair.d)?;
            }
        }
        Ok(())
    }
}

/// The acceptance catalog.
pub fn default_catalog() -> Catalog {
    let names = [
        ("Z4", "C3"),
        ("Z4", "C2xC2"),
        ("Z4", "S3"),
        ("Z4", "D4"),
        ("Z8", "C2"),
        ("Z9", "C3"),
        ("F2u2", "C3"),
        ("F2u2", "S3"),
        ("F3u2", "C4"),
        ("F4u2", "C3"),
    ];
    Catalog {
        entries: names
            .iter()
            .map(|(r, g)| CatalogEntry::from_names(r, g).expect("built-in names"))
            .collect(),
    }
}

fn fixture_code(ring: &ChainRing, n: usize, gens: &[Vec<Value>]) -> Result<LinearCode> {
    let rows = gens
        .iter()
        .map(|g| {
            if g.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: g.len(),
                });
            }
            ring.decode_vec(g)
        })
        .collect::<Result<Vec<_>>>()?;
    LinearCode::new(ring, n, rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Ok,
    BudgetExceeded,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdempotentReport {
    pub residue: Vec<Value>,
    pub lifted: Vec<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<Vec<Value>>,
    #[serde(rename = "card_C")]
    pub card_c: String,
    #[serde(rename = "card_D")]
    pub card_d: String,
    pub tau_equals_dual: bool,
    #[serde(rename = "d_C")]
    pub d_c: Option<usize>,
    #[serde(rename = "d_D_dual")]
    pub d_d_dual: Option<usize>,
    pub security: Option<usize>,
    pub checks: BTreeMap<String, bool>,
    #[serde(skip)]
    log_card_c: usize,
    #[serde(skip)]
    log_card_d: usize,
    #[serde(skip)]
    idempotent_key: Option<Codeword>,
    #[serde(skip)]
    complement_key: Option<Codeword>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub ideals: usize,
    pub pairs: usize,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FindingReport {
    #[serde(rename = "C")]
    pub c: Vec<Vec<Value>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<Value>>,
    pub c_two_sided: bool,
    pub d_two_sided: bool,
    #[serde(rename = "card_C")]
    pub card_c: String,
    pub tau_equals_dual: bool,
    pub some_permutation_equivalent: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub abelian_short_circuit: bool,
    pub skipped: bool,
    pub budget_exhausted: bool,
    pub right_ideals: usize,
    pub tau_failures: usize,
    pub findings: Vec<FindingReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AtlasRow {
    pub ring: String,
    pub group: String,
    pub idempotent: Vec<Value>,
    #[serde(rename = "card_C")]
    pub card_c: String,
    #[serde(rename = "d_C")]
    pub d_c: usize,
    #[serde(rename = "d_D_dual")]
    pub d_d_dual: usize,
    pub security: usize,
    pub tau_equals_dual: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub ring: String,
    pub group: String,
    pub n: usize,
    pub status: EntryStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub idempotents: Vec<IdempotentReport>,
    pub pairs: Vec<PairReport>,
    pub checks: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<CensusReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub one_sided: Option<WitnessReport>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.status == EntryStatus::Ok
            && self.checks.values().all(|&b| b)
            && self.pairs.iter().all(|p| p.checks.values().all(|&b| b))
    }

    /// Nontrivial idempotent pairs, one row per unordered pair `{e, 1 − e}`:
    /// the orientation with the smaller `C` (then the smaller idempotent).
    pub fn atlas_rows(&self) -> Vec<AtlasRow> {
        let mut rows: Vec<(&Codeword, AtlasRow)> = self
            .pairs
            .iter()
            .filter_map(|p| {
                let (e, f) = (p.idempotent_key.as_ref()?, p.complement_key.as_ref()?);
                let (d_c, d_d_dual, security) = (p.d_c?, p.d_d_dual?, p.security?);
                if (p.log_card_c, e) > (p.log_card_d, f) {
                    return None;
                }
                Some((
                    e,
                    AtlasRow {
                        ring: self.ring.clone(),
                        group: self.group.clone(),
                        idempotent: p.idempotent.clone().unwrap_or_default(),
                        card_c: p.card_c.clone(),
                        d_c,
                        d_d_dual,
                        security,
                        tau_equals_dual: p.tau_equals_dual,
                    },
                ))
            })
            .collect();
        rows.sort_by(|a, b| a.0.cmp(b.0));
        rows.into_iter().map(|(_, r)| r).collect()
    }
}

/// What a run should include beyond the per-pair checks.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub budgets: Budgets,
    pub ring_suites: bool,
    pub trials: usize,
    pub census: bool,
    pub one_sided: bool,
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            budgets: Budgets::default(),
            ring_suites: true,
            trials: DEFAULT_TRIALS,
            census: true,
            one_sided: true,
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub wall_ms: Vec<u128>,
    pub suites_wall_ms: u128,
    pub jobs: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub entries: Vec<EntryReport>,
    pub ring_suites: Vec<SuiteReport>,
    pub tallies: Tallies,
    pub all_passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl RunReport {
    /// 0 pass, 1 check failure, 3 budget exceeded, 4 other error.
    pub fn exit_code(&self) -> i32 {
        let failed_check = self.tallies.values().any(|t| t.failed > 0)
            || self.ring_suites.iter().any(|s| !s.all_passed());
        if failed_check {
            1
        } else if self.entries.iter().any(|e| e.status == EntryStatus::Error) {
            4
        } else if self
            .entries
            .iter()
            .any(|e| e.status == EntryStatus::BudgetExceeded)
        {
            3
        } else {
            0
        }
    }

    pub fn atlas(&self) -> Vec<AtlasRow> {
        self.entries.iter().flat_map(|e| e.atlas_rows()).collect()
    }
}

fn encode_rows(ring: &ChainRing, rows: &[Codeword]) -> Vec<Vec<Value>> {
    rows.iter().map(|r| ring.encode_vec(r)).collect()
}

fn check_pair(
    algebra: &GroupAlgebra,
    pair: &LcpPair,
    source: &'static str,
    budgets: &Budgets,
) -> Result<PairReport> {
    let ring = algebra.ring();
    let tau = algebra.group().inversion_permutation();
    let report = verify_equivalence(pair, &tau, budgets.distance)?;
    let (c, d) = (&pair.c, &pair.d);
    let d_dual = d.dual();
    let mut checks = BTreeMap::new();
    let mut put = |name: &str, ok: bool| {
        checks.insert(name.to_string(), ok);
    };
    put("lcp", check_lcp(c, d)?);
    put(
        "two_sided",
        algebra.is_two_sided_ideal(c) && algebra.is_two_sided_ideal(d),
    );
    put("tau_equals_dual", report.tau_image_equals_dual);
    put("dual_cardinality", report.cardinality_check);
    put("components_free", c.is_free() && d.is_free());
    put("dual_lcp", check_lcp(&c.dual(), &d_dual)?);
    let residue = algebra.residue_algebra();
    let (pc, pd) = (c.project(), d.project());
    put(
        "residue_lcp",
        check_lcp(&pc, &pd)? && residue.is_two_sided_ideal(&pc) && residue.is_two_sided_ideal(&pd),
    );
    put("residue_dual", pc.dual() == c.dual().project());
    put(
        "tau_transport",
        algebra.is_two_sided_ideal(&c.permute(&tau)?),
    );
    let aligned = c.is_free() && d_dual.is_free() && coset_alignment(c, &d_dual, &tau)?;
    put("coset_alignment", aligned);
    if c.is_free()
        && c.cardinality()
            .is_some_and(|s| s <= EXHAUSTIVE_CODE_LIMIT as u128)
    {
        put(
            "generating_set",
            verify_generating_set(c, EXHAUSTIVE_CODE_LIMIT)?,
        );
    }
    if let (Some(a), Some(b)) = (report.d_c, report.d_d_dual) {
        put("distance_equal", a == b);
        if c.is_free() {
            put(
                "residue_distance",
                pc.min_distance_exhaustive(budgets.distance)? == a,
            );
        }
    }
    let complement = pair
        .source
        .as_ref()
        .map(|s| algebra.sub(&algebra.one(), &s.element).0);
    Ok(PairReport {
        source,
        idempotent: pair.source.as_ref().map(|s| ring.encode_vec(&s.element.0)),
        card_c: report.card_c,
        card_d: report.card_d,
        tau_equals_dual: report.tau_image_equals_dual,
        d_c: report.d_c,
        d_d_dual: report.d_d_dual,
        security: report.security,
        checks,
        log_card_c: c.log_q_cardinality(),
        log_card_d: d.log_q_cardinality(),
        idempotent_key: pair.source.as_ref().map(|s| s.element.0.clone()),
        complement_key: complement,
    })
}

fn analyse(entry: &CatalogEntry, options: &RunOptions, report: &mut EntryReport) -> Result<()> {
    let budgets = match &entry.budgets {
        Some(o) => options.budgets.with(o),
        None => options.budgets,
    };
    let ring = ChainRing::new(&entry.ring)?;
    let group = Arc::new(GroupTable::from_descriptor(&entry.group)?);
    let algebra = GroupAlgebra::new(&ring, group.clone());
    let residue = algebra.residue_algebra();
    let n = algebra.order();

    let residues = algebra.residue_central_idempotents(budgets.idempotents)?;
    let mut lifted: Vec<AlgebraElement> = Vec::new();
    let mut pairs = Vec::new();
    let (mut idem, mut central, mut above, mut unique) = (true, true, true, true);
    // Σ_g g is central, so lift(e0) + γ·Σ_g g is another central lift of e0
    let shift = AlgebraElement(vec![ring.gamma(); n]);
    for e0 in &residues {
        let lift = algebra.hensel_lift_idempotent(e0)?;
        let e = &lift.element;
        idem &= algebra.is_idempotent(e) && residue.is_idempotent(e0);
        central &= algebra.is_central(e) && residue.is_central(e0);
        above &= algebra.project(e) == *e0;
        let other = algebra.hensel_lift_from(&algebra.add(&algebra.lift(e0), &shift));
        unique &= other == *e;
        report.idempotents.push(IdempotentReport {
            residue: residue.ring().encode_vec(&e0.0),
            lifted: ring.encode_vec(&e.0),
        });
        lifted.push(e.clone());
        let complement = algebra.sub(&algebra.one(), e);
        pairs.push(LcpPair {
            c: algebra.right_principal_code(e),
            d: algebra.right_principal_code(&complement),
            source: Some(lift),
        });
    }
    report.checks.insert("lift_idempotent".into(), idem);
    report.checks.insert("lift_central".into(), central);
    report.checks.insert("lift_residue".into(), above);
    report.checks.insert("lift_unique".into(), unique);
    let distinct: BTreeSet<&AlgebraElement> = lifted.iter().collect();
    let mut count_ok = distinct.len() == residues.len();
    // direct search over R when the class-coordinate space is small enough
    match algebra.central_idempotents(budgets.idempotents) {
        Ok(direct) => {
            let mut sorted = lifted.clone();
            sorted.sort();
            count_ok &= direct == sorted;
        }
        Err(Error::BudgetExceeded { .. }) => {}
        Err(e) => return Err(e),
    }
    report.checks.insert("idempotent_count".into(), count_ok);

    for pair in &pairs {
        report
            .pairs
            .push(check_pair(&algebra, pair, "idempotent", &budgets)?);
    }
    for fixture in entry.pairs.iter().flatten() {
        let pair = LcpPair::new(
            fixture_code(&ring, n, &fixture.c)?,
            fixture_code(&ring, n, &fixture.d)?,
        );
        report
            .pairs
            .push(check_pair(&algebra, &pair, "fixture", &budgets)?);
    }

    let tau = group.inversion_permutation();
    let small = oracle::ambient_size(&ring, n, budgets.census).is_ok();
    let mut transport_ideals: Vec<LinearCode> = pairs
        .iter()
        .flat_map(|p| [p.c.clone(), p.d.clone()])
        .collect();
    if options.census && small {
        let census = brute_force_lcp_census(&algebra, budgets.census)?;
        let ours: BTreeSet<_> = pairs.iter().map(LcpPair::key).collect();
        let agrees = census.pair_keys() == ours;
        report.checks.insert("census_agreement".into(), agrees);
        report.census = Some(CensusReport {
            ideals: census.ideals.len(),
            pairs: census.pairs.len(),
            agrees,
        });
        transport_ideals = census.ideals;
    }
    let mut transported = true;
    for ideal in &transport_ideals {
        transported &= algebra.is_two_sided_ideal(&ideal.permute(&tau)?);
    }
    report
        .checks
        .insert("tau_ideal_transport".into(), transported);

    if group.descriptor().kind == GroupKind::Cyclic {
        let keys: BTreeSet<_> = pairs.iter().map(LcpPair::key).collect();
        let mut preserved = true;
        for k in (1..n).filter(|&k| gcd(k, n) == 1) {
            let map = group.cyclic_power_map(k)?;
            let image: BTreeSet<_> = pairs
                .iter()
                .map(|p| Ok(LcpPair::new(p.c.permute(&map)?, p.d.permute(&map)?).key()))
                .collect::<Result<_>>()?;
            preserved &= image == keys;
        }
        report
            .checks
            .insert("automorphism_transport".into(), preserved);
    }

    if options.one_sided && !group.is_abelian() {
        report.one_sided = Some(if small {
            let search = one_sided_witness_search(&algebra, budgets.witness, budgets.distance)?;
            report.checks.insert("one_sided_probe".into(), true);
            WitnessReport {
                abelian_short_circuit: false,
                skipped: false,
                budget_exhausted: search.budget_exhausted,
                right_ideals: search.right_ideals_enumerated,
                tau_failures: search.tau_failures(),
                findings: search
                    .findings
                    .iter()
                    .map(|f| FindingReport {
                        c: encode_rows(&ring, &f.c),
                        d: encode_rows(&ring, &f.d),
                        c_two_sided: f.c_two_sided,
                        d_two_sided: f.d_two_sided,
                        card_c: f.card_c.clone(),
                        tau_equals_dual: f.tau_maps_c_to_d_dual,
                        some_permutation_equivalent: f.some_permutation_maps_c_to_d_dual,
                    })
                    .collect(),
            }
        } else {
            WitnessReport {
                abelian_short_circuit: false,
                skipped: true,
                budget_exhausted: true,
                right_ideals: 0,
                tau_failures: 0,
                findings: Vec::new(),
            }
        });
    }
    Ok(())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Runs the pipeline for one entry. Failures inside the pipeline are
/// recorded in the report rather than returned.
pub fn run_entry(entry: &CatalogEntry, options: &RunOptions) -> EntryReport {
    let ring = ChainRing::new(&entry.ring).map(|r| r.name());
    let group = GroupTable::from_descriptor(&entry.group);
    let mut report = EntryReport {
        ring: ring.unwrap_or_else(|_| format!("{:?}", entry.ring)),
        group: group
            .as_ref()
            .map(|g| g.name())
            .unwrap_or_else(|_| format!("{:?}", entry.group.kind)),
        n: group.as_ref().map(|g| g.order()).unwrap_or(0),
        status: EntryStatus::Ok,
        message: None,
        idempotents: Vec::new(),
        pairs: Vec::new(),
        checks: BTreeMap::new(),
        census: None,
        one_sided: None,
    };
    if let Err(e) = analyse(entry, options, &mut report) {
        report.status = match e {
            Error::BudgetExceeded { .. } => EntryStatus::BudgetExceeded,
            _ => EntryStatus::Error,
        };
        report.message = Some(e.to_string());
    }
    report
}

fn distinct_rings(catalog: &Catalog) -> Vec<RingDescriptor> {
    let mut seen = Vec::new();
    for e in &catalog.entries {
        if !seen.contains(&e.ring) {
            seen.push(e.ring.clone());
        }
    }
    seen
}

/// Runs every entry (in parallel over `options.jobs` threads) and, if
/// requested, the property suite once per distinct ring.
pub fn run_catalog(catalog: &Catalog, options: &RunOptions) -> Result<RunReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs.max(1))
        .build()
        .map_err(|e| Error::Parse(e.to_string()))?;
    let (timed, suites) = pool.install(|| {
        let timed: Vec<(EntryReport, u128)> = catalog
            .entries
            .par_iter()
            .map(|entry| {
                let start = Instant::now();
                let report = run_entry(entry, options);
                (report, start.elapsed().as_millis())
            })
            .collect();
        let start = Instant::now();
        let suites: Result<Vec<SuiteReport>> = if options.ring_suites {
            distinct_rings(catalog)
                .par_iter()
                .map(|desc| {
                    props::run_ring_suite(&ChainRing::new(desc)?, options.trials, SUITE_SEED)
                })
                .collect()
        } else {
            Ok(Vec::new())
        };
        (timed, suites.map(|s| (s, start.elapsed().as_millis())))
    });
    let (ring_suites, suites_wall_ms) = suites?;

    let mut tallies = Tallies::new();
    for (entry, _) in &timed {
        for (name, &ok) in &entry.checks {
            record(&mut tallies, name, ok);
        }
        for pair in &entry.pairs {
            for (name, &ok) in &pair.checks {
                record(&mut tallies, &format!("pair.{name}"), ok);
            }
        }
    }
    for suite in &ring_suites {
        let prefixed: Tallies = suite
            .tallies
            .iter()
            .map(|(k, v)| (format!("suite.{k}"), *v))
            .collect();
        props::merge(&mut tallies, &prefixed);
    }
    let wall_ms = timed.iter().map(|(_, t)| *t).collect();
    let entries: Vec<EntryReport> = timed.into_iter().map(|(e, _)| e).collect();
    let all_passed =
        entries.iter().all(EntryReport::passed) && ring_suites.iter().all(SuiteReport::all_passed);
    Ok(RunReport {
        entries,
        ring_suites,
        tallies,
        all_passed,
        metadata: Some(Metadata {
            wall_ms,
            suites_wall_ms,
            jobs: options.jobs.max(1),
        }),
    })
}
