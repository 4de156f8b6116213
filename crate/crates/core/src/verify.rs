//! Verification harness: reference values for the bundled models,
//! randomized engine-equivalence campaigns and the unconstrained trace count.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::analyze_models;
use crate::dsl::serialize_process;
use crate::enumerate::{count_valid, enumerate_bruteforce, enumerate_pruned};
use crate::library::{all_models, fdap, fdap_m1, fdap_m2_as_stated, unified_stakeholders, AUDIT};
use crate::model::{ActivityId, Alphabet, Constraint, ConstraintKind, DeclarativeProcess, Trace};
use crate::utility::{favourable_for_utility, UtilityTable};

/// Tolerance for every utility and distance comparison (six reported decimals).
pub const TOLERANCE: f64 = 1e-6;

/// Expected values for one bundled process, stakeholders in order S1, S2, S3.
#[derive(Debug, Clone, Copy)]
pub struct GoldenCase {
    pub model: &'static str,
    pub valid: u64,
    pub favourable: [u64; 3],
    pub utilities: [f64; 3],
    /// Per-stakeholder rank of this process (1 = highest utility).
    pub ranks: [usize; 3],
    /// Distance from the ideal over all three stakeholders, and its rank.
    pub h: f64,
    pub h_rank: usize,
}

pub const SUMMARY: [GoldenCase; 4] = [
    GoldenCase {
        model: "FDAP",
        valid: 46,
        favourable: [43, 10, 32],
        utilities: [0.982869, 0.622806, 0.908149],
        ranks: [3, 4, 4],
        h: 0.388594,
        h_rank: 4,
    },
    GoldenCase {
        model: "FDAP M1",
        valid: 14,
        favourable: [12, 10, 11],
        utilities: [0.947157, 0.885469, 0.917600],
        ranks: [4, 2, 3],
        h: 0.150664,
        h_rank: 2,
    },
    GoldenCase {
        model: "FDAP M2",
        valid: 144,
        favourable: [141, 34, 137],
        utilities: [0.995799, 0.714394, 0.990058],
        ranks: [2, 3, 2],
        h: 0.285810,
        h_rank: 3,
    },
    GoldenCase {
        model: "FDAP M3",
        valid: 852,
        favourable: [849, 601, 838],
        utilities: [0.999478, 0.948361, 0.997548],
        ranks: [1, 1, 1],
        h: 0.051700,
        h_rank: 1,
    },
];

/// Processes in decreasing order of collective favourability.
pub const COLLECTIVE_ORDER: [&str; 4] = ["FDAP M3", "FDAP M1", "FDAP M2", "FDAP"];

/// Distances for each stakeholder subset over (FDAP, M1, M2, M3).
pub const COHORTS: [(&[&str], [f64; 4]); 7] = [
    (&["S1"], [0.017131, 0.052843, 0.004201, 0.000522]),
    (&["S2"], [0.377194, 0.114531, 0.285606, 0.051639]),
    (&["S3"], [0.091851, 0.082400, 0.009942, 0.002452]),
    (&["S1", "S2"], [0.377583, 0.126134, 0.285637, 0.051642]),
    (&["S1", "S3"], [0.093435, 0.097888, 0.010793, 0.002507]),
    (&["S2", "S3"], [0.388216, 0.141093, 0.285779, 0.051697]),
    (
        &["S1", "S2", "S3"],
        [0.388594, 0.150664, 0.285810, 0.051700],
    ),
];

/// Every subset is minimized by the third modification.
pub const COHORT_ARGMIN: &str = "FDAP M3";

/// The 46 valid traces of FDAP, in the reference listing order.
pub const FDAP_TRACES: [&[u32]; 46] = [
    &[],
    &[1],
    &[1, 9, 10],
    &[1, 2, 3, 4],
    &[1, 2, 3, 4, 5, 6],
    &[1, 2, 3, 4, 9, 10],
    &[1, 2, 3, 9, 4, 10],
    &[1, 2, 3, 9, 10, 4],
    &[1, 2, 9, 3, 4, 10],
    &[1, 2, 9, 3, 10, 4],
    &[1, 2, 9, 10, 3, 4],
    &[1, 9, 2, 3, 4, 10],
    &[1, 9, 2, 3, 10, 4],
    &[1, 9, 2, 10, 3, 4],
    &[1, 9, 10, 2, 3, 4],
    &[1, 2, 3, 4, 5, 7, 8],
    &[1, 2, 3, 4, 5, 6, 7, 8],
    &[1, 2, 3, 4, 5, 7, 6, 8],
    &[1, 2, 3, 4, 5, 7, 8, 6],
    &[1, 2, 3, 4, 5, 6, 9, 10],
    &[1, 2, 3, 4, 5, 9, 6, 10],
    &[1, 2, 3, 4, 5, 9, 10, 6],
    &[1, 2, 3, 4, 9, 5, 6, 10],
    &[1, 2, 3, 4, 9, 5, 10, 6],
    &[1, 2, 3, 4, 9, 10, 5, 6],
    &[1, 2, 3, 9, 4, 5, 6, 10],
    &[1, 2, 3, 9, 4, 5, 10, 6],
    &[1, 2, 3, 9, 4, 10, 5, 6],
    &[1, 2, 3, 9, 10, 4, 5, 6],
    &[1, 2, 9, 3, 4, 5, 6, 10],
    &[1, 2, 9, 3, 4, 5, 10, 6],
    &[1, 2, 9, 3, 4, 10, 5, 6],
    &[1, 2, 9, 3, 10, 4, 5, 6],
    &[1, 2, 9, 10, 3, 4, 5, 6],
    &[1, 9, 2, 3, 4, 5, 6, 10],
    &[1, 9, 2, 3, 4, 5, 10, 6],
    &[1, 9, 2, 3, 4, 10, 5, 6],
    &[1, 9, 2, 3, 10, 4, 5, 6],
    &[1, 9, 2, 10, 3, 4, 5, 6],
    &[1, 9, 10, 2, 3, 4, 5, 6],
    &[1, 2, 3, 4, 5, 7, 8, 9, 10],
    &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
    &[1, 2, 3, 4, 5, 7, 6, 8, 9, 10],
    &[1, 2, 3, 4, 5, 7, 8, 6, 9, 10],
    &[1, 2, 3, 4, 5, 7, 8, 9, 6, 10],
    &[1, 2, 3, 4, 5, 7, 8, 9, 10, 6],
];

/// The 14 valid traces of FDAP M1, in the reference listing order.
pub const FDAP_M1_TRACES: [&[u32]; 14] = [
    &[],
    &[1],
    &[1, 2, 3, 4],
    &[1, 2, 3, 4, 5, 6],
    &[1, 2, 3, 4, 5, 7, 8],
    &[1, 2, 3, 4, 5, 6, 7, 8],
    &[1, 2, 3, 4, 5, 7, 6, 8],
    &[1, 2, 3, 4, 5, 7, 8, 6],
    &[1, 2, 3, 4, 5, 7, 8, 9, 10],
    &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
    &[1, 2, 3, 4, 5, 7, 6, 8, 9, 10],
    &[1, 2, 3, 4, 5, 7, 8, 6, 9, 10],
    &[1, 2, 3, 4, 5, 7, 8, 9, 6, 10],
    &[1, 2, 3, 4, 5, 7, 8, 9, 10, 6],
];

/// Traces admitted by the audit modification only when nothing orders 1
/// before 11. The reference counts exclude them.
pub const M2_AUDIT_FIRST: [&[u32]; 3] = [&[11], &[11, 1], &[11, 1, 9, 10]];

/// Unconstrained ten-activity count as commonly quoted. The closed form gives
/// one less; the difference is reported, not reconciled.
pub const QUOTED_UNCONSTRAINED_10: u64 = 9_864_102;

/// Largest `n` for which the closed form fits in `u64`.
pub const UNCONSTRAINED_CAP: u32 = 20;

/// Largest `n` for which [`unconstrained_count`] also enumerates.
pub const UNCONSTRAINED_ENUMERATION_LIMIT: u32 = 8;

pub fn listing(rows: &[&[u32]]) -> Vec<Trace> {
    rows.iter().map(|r| r.iter().copied().collect()).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("n = {n} exceeds the cap of {cap}")]
    CapExceeded { n: u32, cap: u32 },
    #[error("closed form gives {closed_form} but enumeration found {enumerated} for n = {n}")]
    Mismatch {
        n: u32,
        closed_form: u64,
        enumerated: u64,
    },
    #[error("campaign needs at least one case")]
    NoCases,
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn close(&mut self, name: String, expected: f64, actual: f64) {
        let passed = (expected - actual).abs() <= TOLERANCE;
        self.check(
            name,
            passed,
            format!("expected {expected:.6}, actual {actual:.6}"),
        );
    }

    fn exact<T: PartialEq + fmt::Debug>(&mut self, name: String, expected: T, actual: T) {
        let passed = expected == actual;
        self.check(
            name,
            passed,
            format!("expected {expected:?}, actual {actual:?}"),
        );
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag}  {}  ({})", c.name, c.detail)?;
        }
        let failed = self.failures().count();
        writeln!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

fn check_table(report: &mut VerificationReport, label: &str, table: &UtilityTable<f64>) {
    for case in &SUMMARY {
        let p = table
            .processes()
            .iter()
            .position(|n| n == case.model)
            .expect("bundled model present");
        for s in 0..3 {
            let r = table.record(p, s);
            let who = format!("{label}{} {}", r.stakeholder_name, case.model);
            report.exact(format!("{who} valid"), case.valid, r.valid_count);
            report.exact(
                format!("{who} favourable"),
                case.favourable[s],
                r.favourable_count,
            );
            report.close(format!("{who} utility"), case.utilities[s], r.utility);
            let inverted = favourable_for_utility(r.utility, r.valid_count).round() as u64;
            report.exact(format!("{who} inversion"), r.favourable_count, inverted);
        }
    }
}

/// Reproduces every reference count, listing, utility, rank and distance.
pub fn run_golden_suite() -> VerificationReport {
    let mut report = VerificationReport::default();

    for (model, expected) in [(fdap(), &FDAP_TRACES[..]), (fdap_m1(), &FDAP_M1_TRACES[..])] {
        let name = model.process.name().to_string();
        let got = enumerate_pruned(&model.process);
        let mut want = listing(expected);
        want.sort_by(Trace::canonical_cmp);
        report.exact(format!("{name} trace listing"), &want[..], got.traces());
    }
    for case in &SUMMARY {
        let model = all_models()
            .into_iter()
            .find(|m| m.process.name() == case.model)
            .expect("bundled model");
        report.exact(
            format!("{} valid count", case.model),
            case.valid,
            count_valid(&model.process),
        );
    }

    let stated = enumerate_pruned(&fdap_m2_as_stated().process);
    let extra: Vec<Trace> = stated
        .iter()
        .filter(|t| !t.is_empty() && t.entries()[0] == ActivityId(AUDIT))
        .cloned()
        .collect();
    report.check(
        "FDAP M2 without prec(1,11)",
        stated.count() == 147 && listing(&M2_AUDIT_FIRST) == extra,
        format!(
            "{} traces; the extra ones open with the audit: {}",
            stated.count(),
            extra
                .iter()
                .map(Trace::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        ),
    );

    let witness_full: Trace = [1u32, 2, 3, 4].into_iter().collect();
    let witness_prefix: Trace = [1u32, 2].into_iter().collect();
    let fdap_set = enumerate_pruned(&fdap().process);
    report.check(
        "valid traces are not prefix-closed",
        fdap_set.contains(&witness_full) && !fdap_set.contains(&witness_prefix),
        "(1, 2, 3, 4) valid, (1, 2) not",
    );

    let table = analyze_models::<f64>(&all_models()).expect("bundled models analyze");
    check_table(&mut report, "", &table);

    let processes: Vec<_> = all_models().into_iter().map(|m| m.process).collect();
    let unified = crate::analysis::analyze::<f64>(&processes, &unified_stakeholders())
        .expect("bundled models analyze");
    check_table(&mut report, "unified ", &unified);

    for (s, (name, ranking)) in table.stakeholder_rankings().iter().enumerate() {
        for case in &SUMMARY {
            let rank = ranking
                .iter()
                .find(|e| e.name == case.model)
                .map(|e| e.rank);
            report.exact(
                format!("{name} {} rank", case.model),
                Some(case.ranks[s]),
                rank,
            );
        }
    }

    let collective = table.collective_ranking().expect("non-empty");
    for case in &SUMMARY {
        let e = collective
            .iter()
            .find(|e| e.name == case.model)
            .expect("ranked");
        report.close(format!("H {}", case.model), case.h, e.score);
        report.exact(format!("H {} rank", case.model), case.h_rank, e.rank);
    }
    let order: Vec<&str> = collective.iter().map(|e| e.name.as_str()).collect();
    report.exact(
        "collective order".to_string(),
        &COLLECTIVE_ORDER[..],
        &order[..],
    );

    let rows = table.cohort_analysis().expect("non-empty");
    report.exact("cohort row count".to_string(), COHORTS.len(), rows.len());
    for ((subset, values), row) in COHORTS.iter().zip(&rows) {
        let label = format!("{{{}}}", subset.join(","));
        report.exact(
            format!("cohort {label} subset"),
            subset.to_vec(),
            row.subset.iter().map(String::as_str).collect(),
        );
        for (expected, (process, actual)) in values.iter().zip(&row.h_values) {
            report.close(format!("cohort {label} {process}"), *expected, *actual);
        }
        report.exact(
            format!("cohort {label} argmin"),
            COHORT_ARGMIN,
            row.argmin_process.as_str(),
        );
    }

    for (u, favourable) in [(0.714394_f64, 19_335.0_f64), (0.997548, 966_691.0)] {
        let got = favourable_for_utility(u, 1_000_000);
        report.check(
            format!("benchmark u={u} at 10^6 valid"),
            (got - favourable).abs() <= 1.0,
            format!("expected {favourable}, actual {got:.2}"),
        );
    }

    match unconstrained_count(10) {
        Ok(n) => report.check(
            "unconstrained count n=10",
            n == 9_864_101,
            format!(
                "closed form {n}; quoted figure {QUOTED_UNCONSTRAINED_10} differs by {}",
                QUOTED_UNCONSTRAINED_10 as i64 - n as i64
            ),
        ),
        Err(e) => report.check("unconstrained count n=10", false, e.to_string()),
    }

    report
}

/// `sum_{k=0..n} n!/(n-k)!` in closed form; for `n` up to
/// [`UNCONSTRAINED_ENUMERATION_LIMIT`] the result is also confirmed by
/// enumerating an unconstrained process with both engines.
pub fn unconstrained_count(n: u32) -> Result<u64, VerifyError> {
    if n > UNCONSTRAINED_CAP {
        return Err(VerifyError::CapExceeded {
            n,
            cap: UNCONSTRAINED_CAP,
        });
    }
    let closed_form = partial_permutations(n);
    if n <= UNCONSTRAINED_ENUMERATION_LIMIT {
        let p = unconstrained_process(n);
        for enumerated in [
            count_valid(&p),
            enumerate_bruteforce(&p).map_or(0, |s| s.count() as u64),
        ] {
            if enumerated != closed_form {
                return Err(VerifyError::Mismatch {
                    n,
                    closed_form,
                    enumerated,
                });
            }
        }
    }
    Ok(closed_form)
}

/// Counts the unconstrained process by full search; slow for `n = 10`.
pub fn unconstrained_enumerated(n: u32) -> u64 {
    count_valid(&unconstrained_process(n))
}

fn unconstrained_process(n: u32) -> DeclarativeProcess {
    DeclarativeProcess::new(format!("free{n}"), Alphabet::numbered(n), vec![])
        .expect("no constraints")
}

/// Horner form of `sum_k n!/(n-k)!`: `1 + n(1 + (n-1)(1 + ...))`.
fn partial_permutations(n: u32) -> u64 {
    (1..=u64::from(n)).fold(1, |acc, m| 1 + m * acc)
}

/// A failed equivalence or monotonicity case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub case: usize,
    pub process: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignReport {
    pub seed: u64,
    pub cases: usize,
    /// Constraint kinds that appeared somewhere in the campaign.
    pub kinds_seen: Vec<ConstraintKind>,
    /// Lowest-index case where the engines disagree.
    pub divergence: Option<Divergence>,
    /// Lowest-index case where adding a constraint produced a new trace.
    pub monotonicity_violation: Option<Divergence>,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
            && self.monotonicity_violation.is_none()
            && self.kinds_seen.len() == ConstraintKind::ALL.len()
    }
}

impl fmt::Display for CampaignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        let kinds: Vec<&str> = self.kinds_seen.iter().map(|k| k.keyword()).collect();
        writeln!(
            f,
            "{tag}  oracle campaign seed={} cases={} kinds=[{}]",
            self.seed,
            self.cases,
            kinds.join(",")
        )?;
        for (what, d) in [
            ("engines diverge", &self.divergence),
            ("monotonicity", &self.monotonicity_violation),
        ] {
            if let Some(d) = d {
                writeln!(
                    f,
                    "  {what} at case {}: {}\n{}",
                    d.case, d.detail, d.process
                )?;
            }
        }
        Ok(())
    }
}

fn random_constraint(rng: &mut ChaCha8Rng, n: u32) -> Constraint {
    let kind = *ConstraintKind::ALL.choose(rng).expect("non-empty");
    let subject = rng.gen_range(1..=n);
    if kind == ConstraintKind::MustExist {
        return Constraint::mustexist(subject);
    }
    let mut others: Vec<u32> = (1..=n).filter(|&x| x != subject).collect();
    others.shuffle(rng);
    let take = if kind == ConstraintKind::OrResp {
        rng.gen_range(1..=others.len().min(3))
    } else {
        1
    };
    let objects = others[..take].iter().copied().map(ActivityId).collect();
    Constraint::new(kind, subject, objects).expect("distinct activities")
}

/// Random process over 3..=6 activities with 0..=8 distinct constraints.
pub fn random_process(rng: &mut ChaCha8Rng, name: &str) -> DeclarativeProcess {
    let n = rng.gen_range(3..=6);
    let target = rng.gen_range(0..=8);
    let mut constraints: Vec<Constraint> = Vec::new();
    while constraints.len() < target {
        let c = random_constraint(rng, n);
        if !constraints.contains(&c) {
            constraints.push(c);
        }
    }
    DeclarativeProcess::new(name, Alphabet::numbered(n), constraints)
        .expect("in-alphabet constraints")
}

struct CaseOutcome {
    kinds: Vec<ConstraintKind>,
    divergence: Option<Divergence>,
    monotonicity: Option<Divergence>,
}

fn run_case(seed: u64, case: usize) -> CaseOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    let process = random_process(&mut rng, &format!("case{case}"));
    let mut kinds: Vec<_> = process.constraints().iter().map(Constraint::kind).collect();

    let pruned = enumerate_pruned(&process);
    let brute = enumerate_bruteforce(&process).expect("alphabet within cap");
    let divergence = (pruned != brute).then(|| Divergence {
        case,
        process: serialize_process(&process),
        detail: format!(
            "pruned found {}, brute force {}",
            pruned.count(),
            brute.count()
        ),
    });

    let n = process.alphabet().len() as u32;
    let extra = loop {
        let c = random_constraint(&mut rng, n);
        if !process.constraints().contains(&c) {
            break c;
        }
    };
    kinds.push(extra.kind());
    let mut constraints = process.constraints().to_vec();
    constraints.push(extra.clone());
    let stricter = DeclarativeProcess::new(process.name(), process.alphabet().clone(), constraints)
        .expect("in-alphabet constraints");
    let narrowed = enumerate_pruned(&stricter);
    let monotonicity = narrowed
        .iter()
        .find(|t| !brute.contains(t))
        .map(|t| Divergence {
            case,
            process: serialize_process(&stricter),
            detail: format!("adding {extra} admitted new trace {t}"),
        });

    CaseOutcome {
        kinds,
        divergence,
        monotonicity,
    }
}

/// Checks pruned against brute-force enumeration, and that adding a
/// constraint never admits new traces, on `cases` seeded random processes.
pub fn run_oracle_campaign(seed: u64, cases: usize) -> Result<CampaignReport, VerifyError> {
    if cases == 0 {
        return Err(VerifyError::NoCases);
    }
    let outcomes: Vec<CaseOutcome> = (0..cases)
        .into_par_iter()
        .map(|i| run_case(seed, i))
        .collect();
    let mut kinds_seen: Vec<ConstraintKind> = outcomes
        .iter()
        .flat_map(|o| o.kinds.iter().copied())
        .collect();
    kinds_seen.sort();
    kinds_seen.dedup();
    Ok(CampaignReport {
        seed,
        cases,
        kinds_seen,
        divergence: outcomes.iter().find_map(|o| o.divergence.clone()),
        monotonicity_violation: outcomes.iter().find_map(|o| o.monotonicity.clone()),
    })
}
