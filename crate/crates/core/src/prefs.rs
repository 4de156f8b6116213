//! Stakeholder favourability predicates over traces.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::enumerate::TraceSet;
use crate::model::{ActivityId, Constraint, Trace};
use crate::semantics::satisfies;

/// Boolean combination of temporal atoms.
///
/// Atoms reuse [`Constraint`]; `contains(a)` is stored as `mustexist(a)`.
/// Activities outside a process alphabet never occur in its traces, so atoms
/// over them are decided by the usual vacuity rules.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PreferenceExpr {
    Atom(Constraint),
    And(Vec<PreferenceExpr>),
    Or(Vec<PreferenceExpr>),
    Not(Box<PreferenceExpr>),
}

impl PreferenceExpr {
    pub fn contains(a: u32) -> Self {
        PreferenceExpr::Atom(Constraint::mustexist(a))
    }

    pub fn atom(c: Constraint) -> Self {
        PreferenceExpr::Atom(c)
    }

    pub fn and(children: impl IntoIterator<Item = PreferenceExpr>) -> Self {
        PreferenceExpr::And(children.into_iter().collect())
    }

    pub fn or(children: impl IntoIterator<Item = PreferenceExpr>) -> Self {
        PreferenceExpr::Or(children.into_iter().collect())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(child: PreferenceExpr) -> Self {
        PreferenceExpr::Not(Box::new(child))
    }

    /// `contains(a1) or contains(a2) or ...`
    pub fn any_of(ids: &[u32]) -> Self {
        Self::or(ids.iter().map(|&a| Self::contains(a)))
    }

    /// `contains(a1) and contains(a2) and ...`
    pub fn all_of(ids: &[u32]) -> Self {
        Self::and(ids.iter().map(|&a| Self::contains(a)))
    }

    pub fn eval(&self, trace: &Trace) -> bool {
        match self {
            PreferenceExpr::Atom(c) => satisfies(trace, c),
            PreferenceExpr::And(cs) => cs.iter().all(|c| c.eval(trace)),
            PreferenceExpr::Or(cs) => cs.iter().any(|c| c.eval(trace)),
            PreferenceExpr::Not(c) => !c.eval(trace),
        }
    }

    /// Rejects `and`/`or` nodes without children anywhere in the tree.
    pub fn validate(&self) -> Result<(), PrefsError> {
        match self {
            PreferenceExpr::Atom(_) => Ok(()),
            PreferenceExpr::And(cs) | PreferenceExpr::Or(cs) => {
                if cs.is_empty() {
                    return Err(PrefsError::EmptyConnective);
                }
                cs.iter().try_for_each(PreferenceExpr::validate)
            }
            PreferenceExpr::Not(c) => c.validate(),
        }
    }

    /// Collapses single-operand `and`/`or` nodes into their operand.
    pub fn normalized(self) -> Self {
        match self {
            PreferenceExpr::And(mut cs) | PreferenceExpr::Or(mut cs) if cs.len() == 1 => {
                cs.pop().unwrap().normalized()
            }
            PreferenceExpr::And(cs) => {
                PreferenceExpr::And(cs.into_iter().map(Self::normalized).collect())
            }
            PreferenceExpr::Or(cs) => {
                PreferenceExpr::Or(cs.into_iter().map(Self::normalized).collect())
            }
            PreferenceExpr::Not(c) => PreferenceExpr::not(c.normalized()),
            atom => atom,
        }
    }

    /// Activities mentioned by any atom.
    pub fn activities(&self) -> Vec<ActivityId> {
        let mut out = Vec::new();
        self.collect_activities(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_activities(&self, out: &mut Vec<ActivityId>) {
        match self {
            PreferenceExpr::Atom(c) => out.extend(c.activities()),
            PreferenceExpr::And(cs) | PreferenceExpr::Or(cs) => {
                cs.iter().for_each(|c| c.collect_activities(out))
            }
            PreferenceExpr::Not(c) => c.collect_activities(out),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrefsError {
    #[error("'and'/'or' needs at least one operand")]
    EmptyConnective,
    #[error("stakeholder name must not be empty")]
    EmptyName,
    #[error("stakeholder '{0}' is defined more than once")]
    DuplicateName(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stakeholder {
    name: String,
    expr: PreferenceExpr,
}

impl Stakeholder {
    pub fn new(name: impl Into<String>, expr: PreferenceExpr) -> Result<Self, PrefsError> {
        let name = name.into();
        if name.is_empty() {
            return Err(PrefsError::EmptyName);
        }
        expr.validate()?;
        Ok(Stakeholder {
            name,
            expr: expr.normalized(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn expr(&self) -> &PreferenceExpr {
        &self.expr
    }

    /// Binary judgement S(τ).
    pub fn judge(&self, trace: &Trace) -> u8 {
        u8::from(self.expr.eval(trace))
    }
}

/// S(D): number of traces in `traces` the stakeholder finds favourable.
pub fn count_favourable(stakeholder: &Stakeholder, traces: &TraceSet) -> u64 {
    traces.iter().map(|t| u64::from(stakeholder.judge(t))).sum()
}

/// Ensures stakeholder names are unique within one analysis.
pub fn check_unique_names(stakeholders: &[Stakeholder]) -> Result<(), PrefsError> {
    let mut seen = HashSet::new();
    for s in stakeholders {
        if !seen.insert(s.name()) {
            return Err(PrefsError::DuplicateName(s.name().to_string()));
        }
    }
    Ok(())
}
