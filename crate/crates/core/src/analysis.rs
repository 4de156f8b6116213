//! Runs stakeholders over the valid traces of several processes and collects
//! the counts into a [`UtilityTable`].

use num_traits::Float;
use thiserror::Error;

use crate::enumerate::{enumerate_pruned, TraceSet};
use crate::library::NamedModel;
use crate::model::DeclarativeProcess;
use crate::prefs::{check_unique_names, count_favourable, PrefsError, Stakeholder};
use crate::utility::{UtilityError, UtilityTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Prefs(#[from] PrefsError),
    #[error(transparent)]
    Utility(#[from] UtilityError),
    #[error("process '{process}' has stakeholders {found:?}, expected {expected:?}")]
    StakeholderMismatch {
        process: String,
        expected: Vec<String>,
        found: Vec<String>,
    },
}

/// Valid traces and favourable counts of one process.
#[derive(Debug, Clone)]
pub struct ProcessCounts {
    pub traces: TraceSet,
    /// Per stakeholder, in declaration order.
    pub favourable: Vec<u64>,
}

pub fn count_process(process: &DeclarativeProcess, stakeholders: &[Stakeholder]) -> ProcessCounts {
    let traces = enumerate_pruned(process);
    let favourable = stakeholders
        .iter()
        .map(|s| count_favourable(s, &traces))
        .collect();
    ProcessCounts { traces, favourable }
}

/// Each process is judged by its own stakeholder list; the lists must agree on
/// names and order.
pub fn analyze_pairs<T: Float>(
    pairs: &[(&DeclarativeProcess, &[Stakeholder])],
) -> Result<UtilityTable<T>, AnalysisError> {
    let Some((_, first)) = pairs.first() else {
        return Err(UtilityError::EmptyTable.into());
    };
    check_unique_names(first)?;
    let names: Vec<String> = first.iter().map(|s| s.name().to_string()).collect();
    let mut valid = Vec::with_capacity(pairs.len());
    let mut favourable = Vec::with_capacity(pairs.len());
    for (process, stakeholders) in pairs {
        let found: Vec<String> = stakeholders.iter().map(|s| s.name().to_string()).collect();
        if found != names {
            return Err(AnalysisError::StakeholderMismatch {
                process: process.name().to_string(),
                expected: names,
                found,
            });
        }
        let counts = count_process(process, stakeholders);
        valid.push(counts.traces.count() as u64);
        favourable.push(counts.favourable);
    }
    let processes = pairs.iter().map(|(p, _)| p.name().to_string()).collect();
    Ok(UtilityTable::from_counts(
        processes,
        names,
        &valid,
        &favourable,
    )?)
}

/// Judges every process with the same stakeholders.
pub fn analyze<T: Float>(
    processes: &[DeclarativeProcess],
    stakeholders: &[Stakeholder],
) -> Result<UtilityTable<T>, AnalysisError> {
    let pairs: Vec<_> = processes.iter().map(|p| (p, stakeholders)).collect();
    analyze_pairs(&pairs)
}

/// Judges each model with its own stakeholder variants.
pub fn analyze_models<T: Float>(models: &[NamedModel]) -> Result<UtilityTable<T>, AnalysisError> {
    let pairs: Vec<_> = models
        .iter()
        .map(|m| (&m.process, m.stakeholders.as_slice()))
        .collect();
    analyze_pairs(&pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::{fdap, fdap_m2, lightweight_governance};
    use crate::model::{Alphabet, Constraint};
    use crate::prefs::PreferenceExpr;

    #[test]
    fn mismatched_stakeholders() {
        let a = fdap();
        let b = fdap_m2();
        let only_s1 = vec![lightweight_governance()];
        let pairs = [
            (&a.process, a.stakeholders.as_slice()),
            (&b.process, only_s1.as_slice()),
        ];
        assert!(matches!(
            analyze_pairs::<f64>(&pairs),
            Err(AnalysisError::StakeholderMismatch { .. })
        ));
    }

    #[test]
    fn zero_valid_traces_is_an_error() {
        let p = DeclarativeProcess::new(
            "dead",
            Alphabet::numbered(2),
            vec![
                Constraint::mustexist(1),
                Constraint::prec(2, 1),
                Constraint::prec(1, 2),
            ],
        )
        .unwrap();
        let s = vec![Stakeholder::new("S", PreferenceExpr::contains(1)).unwrap()];
        assert_eq!(
            analyze::<f64>(&[p], &s).unwrap_err(),
            AnalysisError::Utility(UtilityError::NoValidTraces)
        );
    }

    #[test]
    fn duplicate_names_rejected() {
        let s = vec![lightweight_governance(), lightweight_governance()];
        assert!(matches!(
            analyze::<f64>(&[fdap().process], &s),
            Err(AnalysisError::Prefs(PrefsError::DuplicateName(_)))
        ));
    }
}
