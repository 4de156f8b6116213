//! Stakeholder utilities, distances from the ideal utility vector and
//! process rankings.
//!
//! All arithmetic is generic over [`num_traits::Float`]; the crate root
//! exports `f64` aliases for everyday use.
//!
//! The utility of a process `D` for stakeholder `S` is
//! `ln(1 + S(D)) / ln(1 + valid(D))`, i.e. the exponent `u` solving
//! `1 + S(D) = (1 + valid(D))^u`. The base of the logarithm cancels.

use std::cmp::Ordering;

use itertools::Itertools;
use num_traits::Float;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UtilityError {
    #[error("utility is undefined for a process with no valid traces")]
    NoValidTraces,
    #[error("favourable count {favourable} exceeds valid count {valid}")]
    FavourableExceedsValid { favourable: u64, valid: u64 },
    #[error("distance needs at least one utility")]
    EmptyUtilities,
    #[error("utility {0} lies outside [0, 1]")]
    OutOfRange(String),
    #[error(
        "utility table is missing an entry for process '{process}' and stakeholder '{stakeholder}'"
    )]
    MissingEntry {
        process: String,
        stakeholder: String,
    },
    #[error("utility table needs at least one process and one stakeholder")]
    EmptyTable,
}

fn cast<T: Float>(x: u64) -> T {
    T::from(x).expect("u64 is representable as a float")
}

/// `ln(1 + favourable) / ln(1 + valid)`.
pub fn utility<T: Float>(favourable: u64, valid: u64) -> Result<T, UtilityError> {
    if valid == 0 {
        return Err(UtilityError::NoValidTraces);
    }
    if favourable > valid {
        return Err(UtilityError::FavourableExceedsValid { favourable, valid });
    }
    Ok(cast::<T>(favourable).ln_1p() / cast::<T>(valid).ln_1p())
}

/// The power-law exponent linking favourable to valid counts. Numerically
/// identical to [`utility`]; the name reads better in benchmarking code.
pub fn implied_exponent<T: Float>(favourable: u64, valid: u64) -> Result<T, UtilityError> {
    utility(favourable, valid)
}

/// Inverse of [`utility`]: the (real) favourable count `(1 + valid)^u - 1`.
pub fn favourable_for_utility<T: Float>(u: T, valid: u64) -> T {
    (cast::<T>(valid).ln_1p() * u).exp_m1()
}

/// Favourable-count window `[valid^alpha, valid^beta]` for utilities in
/// `[alpha, beta]`.
pub fn favourable_bounds<T: Float>(alpha: T, beta: T, valid: u64) -> (T, T) {
    let v = cast::<T>(valid);
    (v.powf(alpha), v.powf(beta))
}

/// Euclidean distance of `utilities` from the all-ones vector.
pub fn h_distance<T: Float>(utilities: &[T]) -> Result<T, UtilityError> {
    if utilities.is_empty() {
        return Err(UtilityError::EmptyUtilities);
    }
    let mut sum = T::zero();
    for &u in utilities {
        if !(u >= T::zero() && u <= T::one()) {
            return Err(UtilityError::OutOfRange(format!("{:?}", u.to_f64())));
        }
        let gap = T::one() - u;
        sum = sum + gap * gap;
    }
    Ok(sum.sqrt())
}

/// One (process, stakeholder) cell of an analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UtilityRecord<T> {
    pub process_name: String,
    pub stakeholder_name: String,
    pub valid_count: u64,
    pub favourable_count: u64,
    pub utility: T,
}

impl<T: Float> UtilityRecord<T> {
    pub fn compute(
        process_name: impl Into<String>,
        stakeholder_name: impl Into<String>,
        valid_count: u64,
        favourable_count: u64,
    ) -> Result<Self, UtilityError> {
        Ok(UtilityRecord {
            process_name: process_name.into(),
            stakeholder_name: stakeholder_name.into(),
            valid_count,
            favourable_count,
            utility: utility(favourable_count, valid_count)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    HigherIsBetter,
    LowerIsBetter,
}

/// Position of one item in a ranking. `rank` is 1-based; equal scores keep
/// declaration order and are marked `tied`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry<T> {
    pub name: String,
    pub score: T,
    pub rank: usize,
    pub tied: bool,
}

fn cmp_scores<T: Float>(a: T, b: T, direction: Direction) -> Ordering {
    let ord = a.partial_cmp(&b).unwrap_or(Ordering::Equal);
    match direction {
        Direction::HigherIsBetter => ord.reverse(),
        Direction::LowerIsBetter => ord,
    }
}

/// Ranks `items`, returning entries in best-first order.
pub fn rank_by<T: Float>(items: &[(String, T)], direction: Direction) -> Vec<RankEntry<T>> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    // stable: equal scores keep declaration order
    order.sort_by(|&i, &j| cmp_scores(items[i].1, items[j].1, direction));
    let tied = |i: usize| {
        items
            .iter()
            .enumerate()
            .any(|(j, other)| j != i && other.1 == items[i].1)
    };
    order
        .iter()
        .enumerate()
        .map(|(pos, &i)| RankEntry {
            name: items[i].0.clone(),
            score: items[i].1,
            rank: pos + 1,
            tied: tied(i),
        })
        .collect()
}

/// Ranks the processes of one stakeholder's records by descending utility.
pub fn rank_processes<T: Float>(records: &[UtilityRecord<T>]) -> Vec<RankEntry<T>> {
    let items: Vec<_> = records
        .iter()
        .map(|r| (r.process_name.clone(), r.utility))
        .collect();
    rank_by(&items, Direction::HigherIsBetter)
}

/// `H` values of every process for one stakeholder subset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohortRow<T> {
    pub subset: Vec<String>,
    /// In process declaration order.
    pub h_values: Vec<(String, T)>,
    pub argmin_process: String,
    /// Another process attains the same minimum.
    pub tied: bool,
}

/// Counts and utilities for every process/stakeholder pair, in declaration order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UtilityTable<T> {
    processes: Vec<String>,
    stakeholders: Vec<String>,
    /// Row-major: `records[p * stakeholders.len() + s]`.
    records: Vec<UtilityRecord<T>>,
}

impl<T: Float> UtilityTable<T> {
    /// `favourable[p][s]` is the favourable count of stakeholder `s` on process `p`.
    pub fn from_counts(
        processes: Vec<String>,
        stakeholders: Vec<String>,
        valid: &[u64],
        favourable: &[Vec<u64>],
    ) -> Result<Self, UtilityError> {
        if processes.is_empty() || stakeholders.is_empty() {
            return Err(UtilityError::EmptyTable);
        }
        let mut records = Vec::with_capacity(processes.len() * stakeholders.len());
        for (p, process) in processes.iter().enumerate() {
            for (s, stakeholder) in stakeholders.iter().enumerate() {
                let missing = || UtilityError::MissingEntry {
                    process: process.clone(),
                    stakeholder: stakeholder.clone(),
                };
                let v = *valid.get(p).ok_or_else(missing)?;
                let f = *favourable
                    .get(p)
                    .and_then(|row| row.get(s))
                    .ok_or_else(missing)?;
                records.push(UtilityRecord::compute(process, stakeholder, v, f)?);
            }
        }
        Ok(UtilityTable {
            processes,
            stakeholders,
            records,
        })
    }

    pub fn processes(&self) -> &[String] {
        &self.processes
    }

    pub fn stakeholders(&self) -> &[String] {
        &self.stakeholders
    }

    pub fn records(&self) -> &[UtilityRecord<T>] {
        &self.records
    }

    pub fn record(&self, process: usize, stakeholder: usize) -> &UtilityRecord<T> {
        &self.records[process * self.stakeholders.len() + stakeholder]
    }

    pub fn find(&self, process: &str, stakeholder: &str) -> Option<&UtilityRecord<T>> {
        self.records
            .iter()
            .find(|r| r.process_name == process && r.stakeholder_name == stakeholder)
    }

    /// One stakeholder's records across all processes.
    pub fn column(&self, stakeholder: usize) -> Vec<UtilityRecord<T>> {
        (0..self.processes.len())
            .map(|p| self.record(p, stakeholder).clone())
            .collect()
    }

    /// Per-stakeholder rankings, in stakeholder declaration order.
    pub fn stakeholder_rankings(&self) -> Vec<(String, Vec<RankEntry<T>>)> {
        self.stakeholders
            .iter()
            .enumerate()
            .map(|(s, name)| (name.clone(), rank_processes(&self.column(s))))
            .collect()
    }

    /// `H` of each process over the stakeholders at `subset` indices.
    pub fn h_values(&self, subset: &[usize]) -> Result<Vec<(String, T)>, UtilityError> {
        self.processes
            .iter()
            .enumerate()
            .map(|(p, name)| {
                let us: Vec<T> = subset.iter().map(|&s| self.record(p, s).utility).collect();
                Ok((name.clone(), h_distance(&us)?))
            })
            .collect()
    }

    /// Processes ranked by `H` over all stakeholders, best first.
    pub fn collective_ranking(&self) -> Result<Vec<RankEntry<T>>, UtilityError> {
        let all: Vec<usize> = (0..self.stakeholders.len()).collect();
        Ok(rank_by(&self.h_values(&all)?, Direction::LowerIsBetter))
    }

    /// One row per non-empty stakeholder subset, ordered by size and then
    /// lexicographically by stakeholder declaration index.
    pub fn cohort_analysis(&self) -> Result<Vec<CohortRow<T>>, UtilityError> {
        let n = self.stakeholders.len();
        let mut rows = Vec::with_capacity((1usize << n) - 1);
        for size in 1..=n {
            for subset in (0..n).combinations(size) {
                let h_values = self.h_values(&subset)?;
                let best = rank_by(&h_values, Direction::LowerIsBetter);
                rows.push(CohortRow {
                    subset: subset
                        .iter()
                        .map(|&s| self.stakeholders[s].clone())
                        .collect(),
                    argmin_process: best[0].name.clone(),
                    tied: best.len() > 1 && best[1].score == best[0].score,
                    h_values,
                });
            }
        }
        Ok(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn utility_values() {
        assert!(close(utility::<f64>(43, 46).unwrap(), 0.982869, 1e-6));
        assert!(close(utility::<f64>(601, 852).unwrap(), 0.948361, 1e-6));
        assert_eq!(utility::<f64>(0, 46).unwrap(), 0.0);
        assert_eq!(utility::<f64>(46, 46).unwrap(), 1.0);
        assert!(close(
            utility::<f32>(43, 46).unwrap() as f64,
            0.982869,
            1e-5
        ));
    }

    #[test]
    fn utility_errors() {
        assert_eq!(utility::<f64>(0, 0), Err(UtilityError::NoValidTraces));
        assert_eq!(
            utility::<f64>(5, 4),
            Err(UtilityError::FavourableExceedsValid {
                favourable: 5,
                valid: 4
            })
        );
        assert_eq!(h_distance::<f64>(&[]), Err(UtilityError::EmptyUtilities));
        assert!(matches!(
            h_distance(&[1.5f64]),
            Err(UtilityError::OutOfRange(_))
        ));
        assert!(matches!(
            h_distance(&[f64::NAN]),
            Err(UtilityError::OutOfRange(_))
        ));
    }

    #[test]
    fn h_values() {
        let h = h_distance(&[0.982869f64, 0.622806, 0.908149]).unwrap();
        assert!(close(h, 0.388594, 1e-6));
        assert_eq!(h_distance(&[1.0f64, 1.0, 1.0]).unwrap(), 0.0);
        assert!(close(
            h_distance(&[0.0f64, 0.0, 0.0]).unwrap(),
            3f64.sqrt(),
            1e-12
        ));
    }

    #[test]
    fn benchmark_inversion() {
        let n = 1_000_000;
        assert!(close(
            implied_exponent::<f64>(19_335, n).unwrap(),
            0.714394,
            1e-6
        ));
        assert!(close(
            implied_exponent::<f64>(966_691, n).unwrap(),
            0.997548,
            1e-6
        ));
        assert!((favourable_for_utility(0.714394f64, n) - 19_335.0).abs() <= 1.0);
        assert!((favourable_for_utility(0.997548f64, n) - 966_691.0).abs() <= 1.0);
        assert_eq!(implied_exponent::<f64>(0, 7).unwrap(), 0.0);
        let (lo, hi) = favourable_bounds(0.5f64, 1.0, 100);
        assert!(close(lo, 10.0, 1e-9) && close(hi, 100.0, 1e-9));
    }

    #[test]
    fn ranking_ties_keep_declaration_order() {
        let items = vec![
            ("a".to_string(), 0.5f64),
            ("b".to_string(), 0.9),
            ("c".to_string(), 0.5),
        ];
        let r = rank_by(&items, Direction::HigherIsBetter);
        let names: Vec<_> = r.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["b", "a", "c"]);
        assert_eq!(
            r.iter().map(|e| e.tied).collect::<Vec<_>>(),
            [false, true, true]
        );
        let single = rank_by(&items[..1], Direction::LowerIsBetter);
        assert_eq!(single[0].rank, 1);
        assert!(!single[0].tied);
    }

    #[test]
    fn single_cell_table() {
        let t = UtilityTable::<f64>::from_counts(
            vec!["P".into()],
            vec!["S".into()],
            &[46],
            &[vec![43]],
        )
        .unwrap();
        let rows = t.cohort_analysis().unwrap();
        assert_eq!(rows.len(), 1);
        let u = t.record(0, 0).utility;
        assert!(close(rows[0].h_values[0].1, 1.0 - u, 1e-15));
        assert_eq!(rows[0].argmin_process, "P");
    }

    #[test]
    fn table_shape_errors() {
        assert_eq!(
            UtilityTable::<f64>::from_counts(vec![], vec!["S".into()], &[], &[]).unwrap_err(),
            UtilityError::EmptyTable
        );
        assert!(matches!(
            UtilityTable::<f64>::from_counts(
                vec!["P".into()],
                vec!["S".into(), "T".into()],
                &[4],
                &[vec![1]]
            ),
            Err(UtilityError::MissingEntry { .. })
        ));
    }
}
