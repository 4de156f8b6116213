//! Declarative process models over finite traces, exhaustive trace
//! enumeration and stakeholder utility ranking.
//!
//! Utility computations are generic over [`num_traits::Float`]; the aliases
//! below fix the scalar to `f64`.

pub mod analysis;
pub mod dsl;
pub mod enumerate;
pub mod library;
pub mod model;
pub mod prefs;
pub mod report;
pub mod semantics;
pub mod utility;
pub mod verify;

pub use analysis::{analyze, analyze_models, analyze_pairs, AnalysisError};
pub use dsl::{
    parse_process, parse_stakeholders, serialize_process, serialize_stakeholders, ParseError,
};
pub use enumerate::{
    count_valid, enumerate_bruteforce, enumerate_bruteforce_with_cap, enumerate_pruned,
    EnumerationError, TraceSet, DEFAULT_BRUTEFORCE_CAP,
};
pub use model::{
    Activity, ActivityId, Alphabet, Constraint, ConstraintKind, DeclarativeProcess, ModelError,
    Trace,
};
pub use prefs::{PreferenceExpr, PrefsError, Stakeholder};
pub use report::ReportFormat;
pub use semantics::{safety_status, satisfies, satisfies_all, SafetyStatus};
pub use utility::{h_distance, utility, Direction, UtilityError};

/// Default scalar for utilities and distances.
pub type Real = f64;
pub type UtilityTable = utility::UtilityTable<Real>;
pub type UtilityRecord = utility::UtilityRecord<Real>;
pub type RankEntry = utility::RankEntry<Real>;
pub type CohortRow = utility::CohortRow<Real>;
