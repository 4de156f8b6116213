use dproc::library::{
    all_models, fdap, fdap_m2, lightweight_governance, reasonable_governance, strong_governance,
    unified_stakeholders,
};
use dproc::prefs::count_favourable;
use dproc::utility::{favourable_for_utility, UtilityTable};
use dproc::{
    enumerate_bruteforce, enumerate_pruned, parse_process, parse_stakeholders, satisfies_all,
    serialize_process, serialize_stakeholders, utility, Alphabet, Constraint, ConstraintKind,
    DeclarativeProcess, PreferenceExpr, Stakeholder, Trace,
};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn constraint(n: u32) -> impl Strategy<Value = Constraint> {
    (
        proptest::sample::select(ConstraintKind::ALL.to_vec()),
        Just((1..=n).collect::<Vec<u32>>()).prop_shuffle(),
        1..=3usize,
    )
        .prop_map(move |(kind, ids, k)| {
            let objects = match kind {
                ConstraintKind::MustExist => vec![],
                ConstraintKind::OrResp => ids[1..=k.min(ids.len() - 1)].to_vec(),
                _ => vec![ids[1]],
            };
            Constraint::new(kind, ids[0], objects.into_iter().map(Into::into).collect()).unwrap()
        })
}

fn process() -> impl Strategy<Value = DeclarativeProcess> {
    (2..=5u32).prop_flat_map(|n| {
        proptest::collection::vec(constraint(n), 0..=6).prop_map(move |mut cs| {
            let mut seen = Vec::new();
            cs.retain(|c| {
                let fresh = !seen.contains(c);
                seen.push(c.clone());
                fresh
            });
            DeclarativeProcess::new("p", Alphabet::numbered(n), cs).unwrap()
        })
    })
}

fn trace(n: u32) -> impl Strategy<Value = Trace> {
    subsequence((1..=n).collect::<Vec<u32>>(), 0..=n as usize)
        .prop_shuffle()
        .prop_map(|ids| ids.into_iter().collect())
}

fn expr(n: u32) -> impl Strategy<Value = PreferenceExpr> {
    let leaf = prop_oneof![
        (1..=n + 1).prop_map(PreferenceExpr::contains),
        constraint(n).prop_map(PreferenceExpr::atom),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(PreferenceExpr::And),
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(PreferenceExpr::Or),
            inner.prop_map(PreferenceExpr::not),
        ]
    })
}

proptest! {
    #[test]
    fn process_text_round_trip(p in process()) {
        let text = serialize_process(&p);
        prop_assert_eq!(parse_process(&text).unwrap(), p);
    }

    #[test]
    fn stakeholder_text_round_trip(es in proptest::collection::vec(expr(4), 1..=3)) {
        let stakeholders: Vec<Stakeholder> = es
            .into_iter()
            .enumerate()
            .map(|(i, e)| Stakeholder::new(format!("S{i}"), e).unwrap())
            .collect();
        let text = serialize_stakeholders(&stakeholders);
        prop_assert_eq!(parse_stakeholders(&text).unwrap(), stakeholders);
    }

    #[test]
    fn de_morgan(p in expr(4), q in expr(4), t in trace(4)) {
        let lhs = PreferenceExpr::not(PreferenceExpr::and([p.clone(), q.clone()]));
        let rhs = PreferenceExpr::or([PreferenceExpr::not(p.clone()), PreferenceExpr::not(q.clone())]);
        prop_assert_eq!(lhs.eval(&t), rhs.eval(&t));
        let lhs = PreferenceExpr::not(PreferenceExpr::or([p.clone(), q.clone()]));
        let rhs = PreferenceExpr::and([PreferenceExpr::not(p), PreferenceExpr::not(q)]);
        prop_assert_eq!(lhs.eval(&t), rhs.eval(&t));
    }

    #[test]
    fn engines_agree(p in process()) {
        prop_assert_eq!(enumerate_pruned(&p), enumerate_bruteforce(&p).unwrap());
    }

    #[test]
    fn every_emitted_trace_is_valid(p in process()) {
        for t in &enumerate_pruned(&p) {
            prop_assert!(satisfies_all(t, p.constraints()));
        }
    }

    #[test]
    fn adding_a_constraint_never_adds_traces(p in process(), extra in constraint(2)) {
        let mut cs = p.constraints().to_vec();
        if !cs.contains(&extra) {
            cs.push(extra);
        }
        let stricter = DeclarativeProcess::new("q", p.alphabet().clone(), cs).unwrap();
        let wide = enumerate_pruned(&p);
        for t in &enumerate_pruned(&stricter) {
            prop_assert!(wide.contains(t));
        }
    }

    #[test]
    fn utility_bounds_and_inversion(valid in 1u64..5_000_000, frac in 0.0f64..=1.0) {
        let fav = (valid as f64 * frac) as u64;
        let u: f64 = utility(fav, valid).unwrap();
        prop_assert!((0.0..=1.0).contains(&u));
        prop_assert_eq!(u == 0.0, fav == 0);
        prop_assert_eq!(u == 1.0, fav == valid);
        prop_assert_eq!(favourable_for_utility(u, valid).round() as u64, fav);
    }

    #[test]
    fn utility_increases_with_shrinking_steps(valid in 2u64..100_000, k in 1u64..100_000) {
        let k = k % (valid - 1) + 1;
        let u = |s: u64| utility::<f64>(s, valid).unwrap();
        prop_assert!(u(k + 1) > u(k) && u(k) > u(k - 1));
        prop_assert!(u(k + 1) - u(k) < u(k) - u(k - 1));
    }

    #[test]
    fn h_grows_with_the_subset(
        counts in proptest::collection::vec((1u64..200, 0.0f64..=1.0), 1..=5),
        mask in 1u32..32,
    ) {
        let valid = vec![counts.iter().map(|c| c.0).max().unwrap()];
        let favourable = vec![counts.iter().map(|&(_, f)| (valid[0] as f64 * f) as u64).collect::<Vec<_>>()];
        let names: Vec<String> = (0..counts.len()).map(|i| format!("S{i}")).collect();
        let table: UtilityTable<f64> =
            UtilityTable::from_counts(vec!["D".into()], names, &valid, &favourable).unwrap();
        let all: Vec<usize> = (0..counts.len()).collect();
        let some: Vec<usize> = all.iter().copied().filter(|i| mask & (1 << i) != 0).collect();
        prop_assume!(!some.is_empty());
        let h_some = table.h_values(&some).unwrap()[0].1;
        let h_all = table.h_values(&all).unwrap()[0].1;
        prop_assert!(h_some <= h_all);
        prop_assert!(h_all <= (counts.len() as f64).sqrt());
    }
}

#[test]
fn fixtures_round_trip() {
    for m in all_models() {
        let text = serialize_process(&m.process);
        assert_eq!(parse_process(&text).unwrap(), m.process);
        let text = serialize_stakeholders(&m.stakeholders);
        assert_eq!(parse_stakeholders(&text).unwrap(), m.stakeholders);
    }
}

#[test]
fn s1_consolidates_on_ten_activities() {
    let three = Stakeholder::new("S1", PreferenceExpr::any_of(&[4, 5, 8])).unwrap();
    let four = lightweight_governance();
    let traces = enumerate_pruned(&fdap().process);
    assert_eq!(traces.count(), 46);
    for t in &traces {
        assert_eq!(four.judge(t), three.judge(t), "{t}");
    }
}

#[test]
fn unified_stakeholders_match_the_variants() {
    for m in all_models() {
        let traces = enumerate_pruned(&m.process);
        for (unified, variant) in unified_stakeholders().iter().zip(&m.stakeholders) {
            for t in &traces {
                assert_eq!(
                    unified.judge(t),
                    variant.judge(t),
                    "{} {} {t}",
                    m.process.name(),
                    unified.name()
                );
            }
        }
    }
}

#[test]
fn variant_pairs_agree_where_the_spec_says() {
    let m2 = enumerate_pruned(&fdap_m2().process);
    assert_eq!(count_favourable(&strong_governance(false), &m2), 34);
    assert_eq!(count_favourable(&strong_governance(true), &m2), 34);
    let base = enumerate_pruned(&fdap().process);
    assert_eq!(count_favourable(&reasonable_governance(false), &base), 32);
    assert_eq!(count_favourable(&reasonable_governance(true), &base), 32);
    // every FDAP trace with 6 or 7 is already reviewed first
    let with_6_or_7 = base
        .iter()
        .filter(|t| t.contains(6u32.into()) || t.contains(7u32.into()))
        .count();
    assert_eq!(with_6_or_7, 32);
}

#[test]
fn favourable_never_exceeds_valid() {
    for m in all_models() {
        let traces = enumerate_pruned(&m.process);
        for s in &m.stakeholders {
            assert!(count_favourable(s, &traces) <= traces.count() as u64);
        }
    }
}

#[test]
fn contradiction_is_never_favourable() {
    let s = Stakeholder::new(
        "X",
        PreferenceExpr::and([
            PreferenceExpr::not(PreferenceExpr::contains(6)),
            PreferenceExpr::contains(6),
        ]),
    )
    .unwrap();
    assert_eq!(count_favourable(&s, &enumerate_pruned(&fdap().process)), 0);
}
