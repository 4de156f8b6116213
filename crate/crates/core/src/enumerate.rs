//! Enumeration of the valid traces of a declarative process.
//!
//! Two engines are provided. [`enumerate_bruteforce`] walks every partial
//! permutation of the alphabet and filters; it is the reference against
//! which [`enumerate_pruned`] is tested. The pruned search cuts a branch only
//! when some constraint is permanently violated by the current prefix. Valid
//! traces are not prefix-closed (a pending response may be fulfilled later),
//! so every surviving prefix is checked in full.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::model::{ActivityId, Alphabet, Constraint, DeclarativeProcess, Trace};
use crate::semantics::{safety_status, satisfies_all, SafetyStatus};

/// Largest alphabet the brute-force engine accepts unless told otherwise.
pub const DEFAULT_BRUTEFORCE_CAP: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("alphabet has {size} activities; brute-force enumeration is capped at {cap}")]
    CapExceeded { size: usize, cap: usize },
}

/// Valid traces of one process in canonical order (length, then ids).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceSet {
    process_name: String,
    traces: Vec<Trace>,
}

impl TraceSet {
    /// Sorts canonically and drops duplicates.
    pub fn new(process_name: impl Into<String>, mut traces: Vec<Trace>) -> Self {
        traces.sort_by(Trace::canonical_cmp);
        traces.dedup();
        TraceSet {
            process_name: process_name.into(),
            traces,
        }
    }

    pub fn process_name(&self) -> &str {
        &self.process_name
    }

    pub fn traces(&self) -> &[Trace] {
        &self.traces
    }

    pub fn count(&self) -> usize {
        self.traces.len()
    }

    pub fn contains(&self, trace: &Trace) -> bool {
        self.traces
            .binary_search_by(|t| t.canonical_cmp(trace))
            .is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Trace> {
        self.traces.iter()
    }
}

impl<'a> IntoIterator for &'a TraceSet {
    type Item = &'a Trace;
    type IntoIter = std::slice::Iter<'a, Trace>;

    fn into_iter(self) -> Self::IntoIter {
        self.traces.iter()
    }
}

fn sorted_ids(alphabet: &Alphabet) -> Vec<ActivityId> {
    let mut ids: Vec<_> = alphabet.ids().collect();
    ids.sort();
    ids
}

pub fn enumerate_bruteforce(process: &DeclarativeProcess) -> Result<TraceSet, EnumerationError> {
    enumerate_bruteforce_with_cap(process, DEFAULT_BRUTEFORCE_CAP)
}

pub fn enumerate_bruteforce_with_cap(
    process: &DeclarativeProcess,
    cap: usize,
) -> Result<TraceSet, EnumerationError> {
    let size = process.alphabet().len();
    if size > cap {
        return Err(EnumerationError::CapExceeded { size, cap });
    }
    let ids = sorted_ids(process.alphabet());
    let traces = (0..=size)
        .flat_map(|k| ids.iter().copied().permutations(k))
        .map(Trace::new)
        .filter(|t| satisfies_all(t, process.constraints()))
        .collect();
    Ok(TraceSet::new(process.name(), traces))
}

/// Depth-first search state shared by the collecting and counting walks.
struct Search<'p> {
    alphabet: &'p Alphabet,
    constraints: &'p [Constraint],
    ids: Vec<ActivityId>,
}

impl<'p> Search<'p> {
    fn new(process: &'p DeclarativeProcess) -> Self {
        Search {
            alphabet: process.alphabet(),
            constraints: process.constraints(),
            ids: sorted_ids(process.alphabet()),
        }
    }

    fn dead(&self, prefix: &Trace) -> bool {
        self.constraints
            .iter()
            .any(|c| safety_status(prefix, c, self.alphabet) == SafetyStatus::PermanentlyViolated)
    }

    /// Visits every live prefix extending `prefix`, including `prefix` itself.
    fn walk(&self, prefix: &mut Trace, visit: &mut dyn FnMut(&Trace)) {
        if self.dead(prefix) {
            return;
        }
        if satisfies_all(prefix, self.constraints) {
            visit(prefix);
        }
        for &id in &self.ids {
            if prefix.contains(id) {
                continue;
            }
            prefix.push(id);
            self.walk(prefix, visit);
            prefix.pop();
        }
    }

    /// Runs `walk` with the first-level branches split across workers.
    fn par_walk<R, F>(&self, per_branch: F) -> Vec<R>
    where
        R: Send,
        F: Fn(&Self, &mut Trace) -> R + Sync,
    {
        self.ids
            .par_iter()
            .map(|&first| {
                let mut prefix = Trace::new(vec![first]);
                per_branch(self, &mut prefix)
            })
            .collect()
    }
}

pub fn enumerate_pruned(process: &DeclarativeProcess) -> TraceSet {
    let search = Search::new(process);
    let mut traces = Vec::new();
    if !search.dead(&Trace::empty()) && satisfies_all(&Trace::empty(), search.constraints) {
        traces.push(Trace::empty());
    }
    if !search.dead(&Trace::empty()) {
        let branches = search.par_walk(|s, prefix| {
            let mut found = Vec::new();
            s.walk(prefix, &mut |t| found.push(t.clone()));
            found
        });
        traces.extend(branches.into_iter().flatten());
    }
    TraceSet::new(process.name(), traces)
}

/// Number of valid traces, without materializing them.
pub fn count_valid(process: &DeclarativeProcess) -> u64 {
    let search = Search::new(process);
    let root = Trace::empty();
    if search.dead(&root) {
        return 0;
    }
    let root_valid = u64::from(satisfies_all(&root, search.constraints));
    let branches = search.par_walk(|s, prefix| {
        let mut n = 0u64;
        s.walk(prefix, &mut |_| n += 1);
        n
    });
    root_valid + branches.into_iter().sum::<u64>()
}
