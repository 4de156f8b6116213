//! Finite-trace satisfaction for the constraint templates, and the safety
//! test used to prune enumeration.
//!
//! Every activity occurs at most once in a trace, so each template reduces to
//! comparisons between occurrence positions. Atoms over activities that are
//! absent from the trace are decided vacuously.

use crate::model::{Alphabet, Constraint, ConstraintKind, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SafetyStatus {
    /// No extension by unused alphabet activities can satisfy the constraint.
    PermanentlyViolated,
    NotYetViolated,
}

/// `a` occurs strictly before `b`; both must occur.
fn before(a: Option<usize>, b: Option<usize>) -> bool {
    matches!((a, b), (Some(i), Some(j)) if i < j)
}

pub fn satisfies(trace: &Trace, constraint: &Constraint) -> bool {
    let a = trace.position(constraint.subject());
    match constraint.kind() {
        ConstraintKind::MustExist => a.is_some(),
        ConstraintKind::Prec => {
            let b = trace.position(constraint.objects()[0]);
            b.is_none() || before(a, b)
        }
        ConstraintKind::Resp => {
            let b = trace.position(constraint.objects()[0]);
            a.is_none() || before(a, b)
        }
        ConstraintKind::Succ => {
            let b = trace.position(constraint.objects()[0]);
            (b.is_none() || before(a, b)) && (a.is_none() || before(a, b))
        }
        ConstraintKind::WeakResp => {
            let b = trace.position(constraint.objects()[0]);
            match (a, b) {
                (Some(i), Some(j)) => i < j,
                _ => true,
            }
        }
        ConstraintKind::OrResp => {
            a.is_none()
                || constraint
                    .objects()
                    .iter()
                    .any(|&o| before(a, trace.position(o)))
        }
    }
}

pub fn satisfies_all<'a, I>(trace: &Trace, constraints: I) -> bool
where
    I: IntoIterator<Item = &'a Constraint>,
{
    constraints.into_iter().all(|c| satisfies(trace, c))
}

/// Decides whether `trace` can still be extended (by appending distinct
/// activities of `alphabet` not yet used) into a trace satisfying
/// `constraint`. The empty extension counts.
pub fn safety_status(trace: &Trace, constraint: &Constraint, alphabet: &Alphabet) -> SafetyStatus {
    let a = trace.position(constraint.subject());
    // can `id` still be appended after everything already in the trace?
    let available = |id| !trace.contains(id) && alphabet.contains(id);
    let dead = match constraint.kind() {
        ConstraintKind::Prec | ConstraintKind::Succ => {
            let b = trace.position(constraint.objects()[0]);
            let prec_dead = b.is_some() && !before(a, b);
            // with prec intact, a missing responder for succ can be appended
            prec_dead
                || (constraint.kind() == ConstraintKind::Succ
                    && a.is_some()
                    && b.is_none()
                    && !available(constraint.objects()[0]))
        }
        ConstraintKind::WeakResp => {
            let b = trace.position(constraint.objects()[0]);
            matches!((a, b), (Some(i), Some(j)) if j < i)
        }
        ConstraintKind::Resp | ConstraintKind::OrResp => {
            a.is_some()
                && constraint
                    .objects()
                    .iter()
                    .all(|&o| !before(a, trace.position(o)) && !available(o))
        }
        ConstraintKind::MustExist => a.is_none() && !available(constraint.subject()),
    };
    if dead {
        SafetyStatus::PermanentlyViolated
    } else {
        SafetyStatus::NotYetViolated
    }
}
