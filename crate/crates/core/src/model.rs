//! Activities, traces, constraints and declarative processes.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of an activity within an alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActivityId(pub u32);

impl fmt::Display for ActivityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for ActivityId {
    fn from(id: u32) -> Self {
        ActivityId(id)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("activity {0} is declared more than once")]
    DuplicateActivity(ActivityId),
    #[error(
        "label of activity {0} must be a non-empty single line without surrounding whitespace"
    )]
    InvalidLabel(ActivityId),
    #[error(
        "constraint {constraint} references activity {activity}, which is not in the alphabet"
    )]
    UnknownActivity {
        constraint: Constraint,
        activity: ActivityId,
    },
    #[error("constraint {0} relates an activity to itself")]
    Reflexive(Constraint),
    #[error("constraint {0} has the wrong number of arguments for its kind")]
    Arity(Constraint),
    #[error("constraint {0} lists the same activity twice")]
    RepeatedObject(Constraint),
    #[error("constraint {0} is declared more than once")]
    DuplicateConstraint(Constraint),
    #[error("process name must not be empty")]
    EmptyName,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Activity {
    id: ActivityId,
    label: Option<String>,
}

impl Activity {
    pub fn new(id: impl Into<ActivityId>) -> Self {
        Activity {
            id: id.into(),
            label: None,
        }
    }

    /// Labels must survive a trip through the line-oriented process format.
    pub fn labeled(
        id: impl Into<ActivityId>,
        label: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let id = id.into();
        let label = label.into();
        if label.is_empty() || label.trim() != label || label.contains(['\n', '\r']) {
            return Err(ModelError::InvalidLabel(id));
        }
        Ok(Activity {
            id,
            label: Some(label),
        })
    }

    pub fn id(&self) -> ActivityId {
        self.id
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }
}

/// Ordered activity vocabulary of a process.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Alphabet {
    activities: Vec<Activity>,
}

impl Alphabet {
    pub fn new(activities: Vec<Activity>) -> Result<Self, ModelError> {
        let mut seen = HashSet::new();
        for a in &activities {
            if !seen.insert(a.id) {
                return Err(ModelError::DuplicateActivity(a.id));
            }
        }
        Ok(Alphabet { activities })
    }

    /// Unlabeled activities `1..=n`.
    pub fn numbered(n: u32) -> Self {
        Alphabet {
            activities: (1..=n).map(Activity::new).collect(),
        }
    }

    pub fn activities(&self) -> &[Activity] {
        &self.activities
    }

    pub fn ids(&self) -> impl Iterator<Item = ActivityId> + '_ {
        self.activities.iter().map(|a| a.id)
    }

    pub fn contains(&self, id: ActivityId) -> bool {
        self.activities.iter().any(|a| a.id == id)
    }

    pub fn get(&self, id: ActivityId) -> Option<&Activity> {
        self.activities.iter().find(|a| a.id == id)
    }

    pub fn len(&self) -> usize {
        self.activities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.activities.is_empty()
    }
}

/// A recorded execution: distinct activities in order of occurrence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Trace(Vec<ActivityId>);

impl Trace {
    pub fn empty() -> Self {
        Trace(Vec::new())
    }

    pub fn new(entries: Vec<ActivityId>) -> Self {
        Trace(entries)
    }

    pub fn entries(&self) -> &[ActivityId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn position(&self, id: ActivityId) -> Option<usize> {
        self.0.iter().position(|&e| e == id)
    }

    pub fn contains(&self, id: ActivityId) -> bool {
        self.0.contains(&id)
    }

    pub fn push(&mut self, id: ActivityId) {
        self.0.push(id);
    }

    pub fn pop(&mut self) -> Option<ActivityId> {
        self.0.pop()
    }

    /// Canonical trace order: shorter first, then lexicographic by id.
    pub fn canonical_cmp(&self, other: &Trace) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl<T: Into<ActivityId>> FromIterator<T> for Trace {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Trace(iter.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        write!(f, "(")?;
        for (i, id) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{id}")?;
        }
        write!(f, ")")
    }
}

/// True iff the entries are pairwise distinct and drawn from `alphabet`.
/// Constraint satisfaction is not checked.
pub fn validate_trace_shape(trace: &Trace, alphabet: &Alphabet) -> bool {
    let mut seen = HashSet::with_capacity(trace.len());
    trace
        .entries()
        .iter()
        .all(|&id| alphabet.contains(id) && seen.insert(id))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintKind {
    Prec,
    Resp,
    Succ,
    WeakResp,
    OrResp,
    MustExist,
}

impl ConstraintKind {
    pub const ALL: [ConstraintKind; 6] = [
        ConstraintKind::Prec,
        ConstraintKind::Resp,
        ConstraintKind::Succ,
        ConstraintKind::WeakResp,
        ConstraintKind::OrResp,
        ConstraintKind::MustExist,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ConstraintKind::Prec => "prec",
            ConstraintKind::Resp => "resp",
            ConstraintKind::Succ => "succ",
            ConstraintKind::WeakResp => "weakresp",
            ConstraintKind::OrResp => "orresp",
            ConstraintKind::MustExist => "mustexist",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == s)
    }

    fn arity_ok(self, objects: usize) -> bool {
        match self {
            ConstraintKind::MustExist => objects == 0,
            ConstraintKind::OrResp => objects >= 1,
            _ => objects == 1,
        }
    }
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A temporal template applied to a subject activity and its objects.
///
/// The same type doubles as an atom inside stakeholder preference
/// expressions, where activities outside the process alphabet are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraint {
    kind: ConstraintKind,
    subject: ActivityId,
    objects: Vec<ActivityId>,
}

impl Constraint {
    /// Checks arity, reflexivity and repeated objects; alphabet membership is
    /// the process's concern.
    pub fn new(
        kind: ConstraintKind,
        subject: impl Into<ActivityId>,
        objects: Vec<ActivityId>,
    ) -> Result<Self, ModelError> {
        let c = Constraint {
            kind,
            subject: subject.into(),
            objects,
        };
        if !kind.arity_ok(c.objects.len()) {
            return Err(ModelError::Arity(c));
        }
        if c.objects.contains(&c.subject) {
            return Err(ModelError::Reflexive(c));
        }
        let mut seen = HashSet::new();
        if !c.objects.iter().all(|o| seen.insert(*o)) {
            return Err(ModelError::RepeatedObject(c));
        }
        Ok(c)
    }

    fn binary(kind: ConstraintKind, a: u32, b: u32) -> Self {
        Self::new(kind, a, vec![ActivityId(b)]).expect("binary constraint over distinct activities")
    }

    /// `prec(a, b)`. Panics if `a == b`; use [`Constraint::new`] for untrusted input.
    pub fn prec(a: u32, b: u32) -> Self {
        Self::binary(ConstraintKind::Prec, a, b)
    }

    pub fn resp(a: u32, b: u32) -> Self {
        Self::binary(ConstraintKind::Resp, a, b)
    }

    pub fn succ(a: u32, b: u32) -> Self {
        Self::binary(ConstraintKind::Succ, a, b)
    }

    pub fn weakresp(a: u32, b: u32) -> Self {
        Self::binary(ConstraintKind::WeakResp, a, b)
    }

    pub fn orresp(a: u32, bs: &[u32]) -> Self {
        Self::new(
            ConstraintKind::OrResp,
            a,
            bs.iter().copied().map(ActivityId).collect(),
        )
        .expect("well-formed orresp")
    }

    pub fn mustexist(a: u32) -> Self {
        Constraint {
            kind: ConstraintKind::MustExist,
            subject: ActivityId(a),
            objects: Vec::new(),
        }
    }

    pub fn kind(&self) -> ConstraintKind {
        self.kind
    }

    pub fn subject(&self) -> ActivityId {
        self.subject
    }

    pub fn objects(&self) -> &[ActivityId] {
        &self.objects
    }

    /// For binary kinds, the single object.
    pub fn object(&self) -> Option<ActivityId> {
        match self.kind {
            ConstraintKind::OrResp | ConstraintKind::MustExist => None,
            _ => self.objects.first().copied(),
        }
    }

    pub fn activities(&self) -> impl Iterator<Item = ActivityId> + '_ {
        std::iter::once(self.subject).chain(self.objects.iter().copied())
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}", self.kind, self.subject)?;
        match self.kind {
            ConstraintKind::MustExist => {}
            ConstraintKind::OrResp => {
                write!(f, ",(")?;
                for (i, o) in self.objects.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{o}")?;
                }
                write!(f, ")")?;
            }
            _ => write!(f, ",{}", self.objects[0])?,
        }
        write!(f, ")")
    }
}

/// An alphabet together with the constraints every execution must satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclarativeProcess {
    name: String,
    alphabet: Alphabet,
    constraints: Vec<Constraint>,
}

impl DeclarativeProcess {
    /// Constraints keep their declaration order. `succ` is stored as given and
    /// only desugared when evaluated.
    pub fn new(
        name: impl Into<String>,
        alphabet: Alphabet,
        constraints: Vec<Constraint>,
    ) -> Result<Self, ModelError> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(ModelError::EmptyName);
        }
        let mut seen = HashSet::new();
        for c in &constraints {
            if let Some(missing) = c.activities().find(|&a| !alphabet.contains(a)) {
                return Err(ModelError::UnknownActivity {
                    constraint: c.clone(),
                    activity: missing,
                });
            }
            if !seen.insert(c) {
                return Err(ModelError::DuplicateConstraint(c.clone()));
            }
        }
        Ok(DeclarativeProcess {
            name,
            alphabet,
            constraints,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Same alphabet, constraints with `remove` dropped and `add` appended.
    pub fn modified(
        &self,
        name: impl Into<String>,
        remove: &[Constraint],
        add: Vec<Constraint>,
    ) -> Result<Self, ModelError> {
        let constraints = self
            .constraints
            .iter()
            .filter(|c| !remove.contains(c))
            .cloned()
            .chain(add)
            .collect();
        Self::new(name, self.alphabet.clone(), constraints)
    }

    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Self, ModelError> {
        Self::new(self.name.clone(), alphabet, self.constraints.clone())
    }
}
