//! The bundled disaster-assistance processes and transparency stakeholders.
//!
//! Each model is built here in code and also shipped as DSL text under
//! `fixtures/`; the tests check that both agree.

use crate::model::{Activity, Alphabet, Constraint, DeclarativeProcess};
use crate::prefs::{PreferenceExpr, Stakeholder};

pub const FDAP_DPROC: &str = include_str!("../fixtures/fdap.dproc");
pub const FDAP_M1_DPROC: &str = include_str!("../fixtures/fdap_m1.dproc");
pub const FDAP_M2_DPROC: &str = include_str!("../fixtures/fdap_m2.dproc");
pub const FDAP_M3_DPROC: &str = include_str!("../fixtures/fdap_m3.dproc");
/// Stakeholders for processes over activities 1..=10.
pub const STAKEHOLDERS_BASE_DSTAKE: &str = include_str!("../fixtures/stakeholders_base.dstake");
/// Stakeholders for processes with the audit activity 11.
pub const STAKEHOLDERS_AUDIT_DSTAKE: &str = include_str!("../fixtures/stakeholders_audit.dstake");
/// A single stakeholder file that yields the same counts on all four processes.
pub const STAKEHOLDERS_DSTAKE: &str = include_str!("../fixtures/stakeholders.dstake");

const LABELS: [&str; 11] = [
    "Disaster strikes",
    "State identifies the disaster",
    "Damage assessment is made",
    "Officials review damage extent and impact",
    "Governor assesses state resources",
    "State disaster response",
    "Request for federal assistance submitted",
    "President reviews the request",
    "President declares a disaster",
    "FEMA support begins",
    "Independent audit contracted",
];

/// Activity id of the independent audit added by the second modification.
pub const AUDIT: u32 = 11;

/// A process together with the stakeholder variants that apply to its alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedModel {
    pub process: DeclarativeProcess,
    pub stakeholders: Vec<Stakeholder>,
}

fn labeled_alphabet(n: u32) -> Alphabet {
    let acts = (1..=n)
        .map(|id| Activity::labeled(id, LABELS[id as usize - 1]).expect("static label"))
        .collect();
    Alphabet::new(acts).expect("distinct ids")
}

/// The as-is constraint set.
pub fn fdap_constraints() -> Vec<Constraint> {
    vec![
        Constraint::prec(1, 2),
        Constraint::prec(1, 9),
        Constraint::succ(2, 3),
        Constraint::succ(3, 4),
        Constraint::prec(4, 5),
        Constraint::prec(5, 6),
        Constraint::prec(5, 7),
        Constraint::orresp(5, &[6, 7]),
        Constraint::succ(7, 8),
        Constraint::weakresp(8, 9),
        Constraint::succ(9, 10),
    ]
}

/// Any of the review/assessment activities 4, 5, 8 or 11 occurs.
pub fn lightweight_governance() -> Stakeholder {
    Stakeholder::new("S1", PreferenceExpr::any_of(&[4, 5, 8, AUDIT])).unwrap()
}

/// All review/assessment activities of the alphabet occur.
pub fn strong_governance(with_audit: bool) -> Stakeholder {
    let ids: &[u32] = if with_audit {
        &[4, 5, 8, AUDIT]
    } else {
        &[4, 5, 8]
    };
    Stakeholder::new("S2", PreferenceExpr::all_of(ids)).unwrap()
}

/// Action by the state (6 or 7), or the audit, happens after a review (4 or 5).
pub fn reasonable_governance(with_audit: bool) -> Stakeholder {
    let reviewed_before = |x: u32| {
        PreferenceExpr::and([
            PreferenceExpr::contains(x),
            PreferenceExpr::or([
                PreferenceExpr::atom(Constraint::prec(4, x)),
                PreferenceExpr::atom(Constraint::prec(5, x)),
            ]),
        ])
    };
    let mut clauses = vec![reviewed_before(6), reviewed_before(7)];
    if with_audit {
        clauses.push(reviewed_before(AUDIT));
    }
    Stakeholder::new("S3", PreferenceExpr::Or(clauses)).unwrap()
}

fn stakeholders(with_audit: bool) -> Vec<Stakeholder> {
    vec![
        lightweight_governance(),
        strong_governance(with_audit),
        reasonable_governance(with_audit),
    ]
}

/// Stakeholders whose counts agree with the per-model variants on all four
/// bundled processes; see `fixtures/stakeholders.dstake`.
pub fn unified_stakeholders() -> Vec<Stakeholder> {
    vec![
        lightweight_governance(),
        strong_governance(false),
        reasonable_governance(true),
    ]
}

pub fn fdap() -> NamedModel {
    let process = DeclarativeProcess::new("FDAP", labeled_alphabet(10), fdap_constraints())
        .expect("valid model");
    NamedModel {
        process,
        stakeholders: stakeholders(false),
    }
}

/// No presidential discretion: `prec(1,9)` becomes `prec(8,9)`.
pub fn fdap_m1() -> NamedModel {
    let process = fdap()
        .process
        .modified(
            "FDAP M1",
            &[Constraint::prec(1, 9)],
            vec![Constraint::prec(8, 9)],
        )
        .expect("valid model");
    NamedModel {
        process,
        stakeholders: stakeholders(false),
    }
}

/// Independent audit (activity 11) after review 4 and before presidential review 8.
///
/// Also carries `prec(1,11)`: disaster onset precedes the audit as it precedes
/// every other activity. [`fdap_m2_as_stated`] omits it and admits three more
/// traces, `(11)`, `(11, 1)` and `(11, 1, 9, 10)`, for 147 in total.
pub fn fdap_m2() -> NamedModel {
    let process = fdap_m2_as_stated()
        .process
        .modified("FDAP M2", &[], vec![Constraint::prec(1, AUDIT)])
        .expect("valid model");
    NamedModel {
        process,
        stakeholders: stakeholders(true),
    }
}

/// The audit modification with only `resp(4,11)` and `prec(11,8)` added.
pub fn fdap_m2_as_stated() -> NamedModel {
    let mut constraints = fdap_constraints();
    constraints.extend([Constraint::resp(4, AUDIT), Constraint::prec(AUDIT, 8)]);
    let process =
        DeclarativeProcess::new("FDAP M2", labeled_alphabet(11), constraints).expect("valid model");
    NamedModel {
        process,
        stakeholders: stakeholders(true),
    }
}

/// Governor may act unilaterally: `prec(4,5)` becomes `prec(1,5)`.
pub fn fdap_m3() -> NamedModel {
    let process = fdap()
        .process
        .modified(
            "FDAP M3",
            &[Constraint::prec(4, 5)],
            vec![Constraint::prec(1, 5)],
        )
        .expect("valid model");
    NamedModel {
        process,
        stakeholders: stakeholders(false),
    }
}

/// FDAP, M1, M2, M3 in that order.
pub fn all_models() -> Vec<NamedModel> {
    vec![fdap(), fdap_m1(), fdap_m2(), fdap_m3()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_process, parse_stakeholders};

    #[test]
    fn fixtures_match_constructors() {
        let texts = [FDAP_DPROC, FDAP_M1_DPROC, FDAP_M2_DPROC, FDAP_M3_DPROC];
        for (model, text) in all_models().iter().zip(texts) {
            assert_eq!(&parse_process(text).unwrap(), &model.process);
        }
        assert_eq!(
            parse_stakeholders(STAKEHOLDERS_BASE_DSTAKE).unwrap(),
            fdap().stakeholders
        );
        assert_eq!(
            parse_stakeholders(STAKEHOLDERS_AUDIT_DSTAKE).unwrap(),
            fdap_m2().stakeholders
        );
        assert_eq!(
            parse_stakeholders(STAKEHOLDERS_DSTAKE).unwrap(),
            unified_stakeholders()
        );
    }

    #[test]
    fn constraint_sets() {
        let f = fdap().process;
        assert!(f.constraints().contains(&Constraint::weakresp(8, 9)));
        assert!(!f.constraints().contains(&Constraint::prec(8, 9)));
        assert_eq!(f.constraints().len(), 11);
        let m1 = fdap_m1().process;
        assert!(m1.constraints().contains(&Constraint::prec(8, 9)));
        assert!(!m1.constraints().contains(&Constraint::prec(1, 9)));
        let m2 = fdap_m2().process;
        assert_eq!(m2.alphabet().len(), 11);
        assert_eq!(m2.constraints().len(), 14);
        assert!(m2.constraints().contains(&Constraint::prec(1, AUDIT)));
        assert_eq!(fdap_m2_as_stated().process.constraints().len(), 13);
        let m3 = fdap_m3().process;
        assert_eq!(m3.constraints().len(), f.constraints().len());
        assert!(m3.constraints().contains(&Constraint::prec(1, 5)));
        assert!(!m3.constraints().contains(&Constraint::prec(4, 5)));
    }
}
