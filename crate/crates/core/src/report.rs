//! Report rendering: aligned tables, CSV and JSON lines, plus Graphviz export.
//!
//! CSV utilities and distances are fixed-point with six decimals. When a
//! report has several sections, CSV sections are separated by one blank line,
//! each with its own header row. JSON lines carry full precision and a `type`
//! field naming the section.

use std::fmt::{Display, Write as _};
use std::str::FromStr;

use num_traits::Float;
use serde_json::json;

use crate::enumerate::TraceSet;
use crate::model::{ConstraintKind, DeclarativeProcess, Trace};
use crate::utility::{UtilityError, UtilityTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Table,
    Csv,
    JsonLines,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "csv" => Ok(ReportFormat::Csv),
            "jsonl" => Ok(ReportFormat::JsonLines),
            other => Err(format!(
                "unknown format '{other}' (expected table, csv or jsonl)"
            )),
        }
    }
}

/// `1st`, `2nd`, `3rd`, `4th`, ..., `11th`, ..., `21st`.
pub fn ordinal(n: usize) -> String {
    let suffix = match (n % 10, n % 100) {
        (_, 11..=13) => "th",
        (1, _) => "st",
        (2, _) => "nd",
        (3, _) => "rd",
        _ => "th",
    };
    format!("{n}{suffix}")
}

fn fixed6<T: Float>(x: T) -> String {
    format!("{:.6}", x.to_f64().unwrap_or(f64::NAN))
}

fn ids(trace: &Trace) -> Vec<u32> {
    trace.entries().iter().map(|a| a.0).collect()
}

fn csv_to_string(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

/// Left-aligns the first column and right-aligns the rest.
fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c == 0 {
                write!(line, "{cell:<w$}", w = widths[0]).unwrap();
            } else {
                write!(line, "  {cell:>w$}", w = widths[c]).unwrap();
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn render_traces(set: &TraceSet, format: ReportFormat) -> String {
    match format {
        ReportFormat::Table => {
            let mut out = format!("{}: {} valid traces\n", set.process_name(), set.count());
            let width = set.count().to_string().len();
            for (i, t) in set.iter().enumerate() {
                writeln!(out, "{:>width$}. {t}", i + 1).unwrap();
            }
            out
        }
        ReportFormat::Csv => {
            let mut rows = vec![vec!["index".into(), "length".into(), "trace".into()]];
            for (i, t) in set.iter().enumerate() {
                let text = ids(t)
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(" ");
                rows.push(vec![(i + 1).to_string(), t.len().to_string(), text]);
            }
            csv_to_string(rows)
        }
        ReportFormat::JsonLines => set
            .iter()
            .enumerate()
            .map(|(i, t)| {
                json!({"process": set.process_name(), "index": i + 1, "trace": ids(t)}).to_string()
                    + "\n"
            })
            .collect(),
    }
}

pub fn render_count(process_name: &str, count: u64, format: ReportFormat) -> String {
    match format {
        ReportFormat::Table => format!("{count}\n"),
        ReportFormat::Csv => csv_to_string(vec![
            vec!["process".into(), "valid".into()],
            vec![process_name.into(), count.to_string()],
        ]),
        ReportFormat::JsonLines => {
            json!({"process": process_name, "valid": count}).to_string() + "\n"
        }
    }
}

/// Per-stakeholder blocks of valid count, favourable count, utility and rank.
pub fn render_utilities<T: Float + Display>(
    table: &UtilityTable<T>,
    format: ReportFormat,
) -> String {
    let rankings = table.stakeholder_rankings();
    let rank_of = |s: usize, process: &str| {
        rankings[s]
            .1
            .iter()
            .find(|e| e.name == process)
            .map(|e| (e.rank, e.tied))
            .expect("every process is ranked")
    };
    match format {
        ReportFormat::Table => {
            let mut out = String::new();
            for (s, stakeholder) in table.stakeholders().iter().enumerate() {
                if s > 0 {
                    out.push('\n');
                }
                let mut rows = vec![vec![
                    "process".to_string(),
                    "valid".into(),
                    format!("{stakeholder}(D)"),
                    "utility".into(),
                    "rank".into(),
                ]];
                for r in table.column(s) {
                    let (rank, tied) = rank_of(s, &r.process_name);
                    rows.push(vec![
                        r.process_name.clone(),
                        r.valid_count.to_string(),
                        r.favourable_count.to_string(),
                        fixed6(r.utility),
                        ordinal(rank) + if tied { "=" } else { "" },
                    ]);
                }
                writeln!(out, "stakeholder {stakeholder}").unwrap();
                out.push_str(&aligned(&rows));
            }
            out
        }
        ReportFormat::Csv => {
            let mut rows = vec![[
                "stakeholder",
                "process",
                "valid",
                "favourable",
                "utility",
                "rank",
                "tied",
            ]
            .map(String::from)
            .to_vec()];
            for (s, stakeholder) in table.stakeholders().iter().enumerate() {
                for r in table.column(s) {
                    let (rank, tied) = rank_of(s, &r.process_name);
                    rows.push(vec![
                        stakeholder.clone(),
                        r.process_name.clone(),
                        r.valid_count.to_string(),
                        r.favourable_count.to_string(),
                        fixed6(r.utility),
                        rank.to_string(),
                        tied.to_string(),
                    ]);
                }
            }
            csv_to_string(rows)
        }
        ReportFormat::JsonLines => {
            let mut out = String::new();
            for (s, _) in table.stakeholders().iter().enumerate() {
                for r in table.column(s) {
                    let (rank, tied) = rank_of(s, &r.process_name);
                    let line = json!({
                        "type": "utility",
                        "stakeholder": r.stakeholder_name,
                        "process": r.process_name,
                        "valid": r.valid_count,
                        "favourable": r.favourable_count,
                        "utility": r.utility.to_f64(),
                        "rank": rank,
                        "tied": tied,
                    });
                    writeln!(out, "{line}").unwrap();
                }
            }
            out
        }
    }
}

/// Collective distance ranking followed by the per-subset cohort table.
pub fn render_cohorts<T: Float + Display>(
    table: &UtilityTable<T>,
    format: ReportFormat,
) -> Result<String, UtilityError> {
    let collective = table.collective_ranking()?;
    let all: Vec<usize> = (0..table.stakeholders().len()).collect();
    let h_all = table.h_values(&all)?;
    let cohorts = table.cohort_analysis()?;
    let rank_of = |p: &str| collective.iter().find(|e| e.name == p).expect("ranked");
    let subset_text = |s: &[String], sep: &str| s.join(sep);

    Ok(match format {
        ReportFormat::Table => {
            let mut out = String::from("collective distance from ideal\n");
            let mut rows = vec![vec!["process".to_string(), "H".into(), "rank".into()]];
            for (p, h) in &h_all {
                let e = rank_of(p);
                rows.push(vec![
                    p.clone(),
                    fixed6(*h),
                    ordinal(e.rank) + if e.tied { "=" } else { "" },
                ]);
            }
            out.push_str(&aligned(&rows));
            let order: Vec<&str> = collective.iter().map(|e| e.name.as_str()).collect();
            writeln!(out, "order: {}", order.join(" > ")).unwrap();

            out.push_str("\ncohorts\n");
            let mut header = vec!["subset".to_string()];
            header.extend(table.processes().iter().cloned());
            header.push("argmin".into());
            let mut rows = vec![header];
            for row in &cohorts {
                let mut cells = vec![format!("{{{}}}", subset_text(&row.subset, ","))];
                cells.extend(row.h_values.iter().map(|(_, h)| fixed6(*h)));
                cells.push(row.argmin_process.clone() + if row.tied { " (tie)" } else { "" });
                rows.push(cells);
            }
            out.push_str(&aligned(&rows));
            out
        }
        ReportFormat::Csv => {
            let mut rows = vec![vec![
                "process".to_string(),
                "h".into(),
                "rank".into(),
                "tied".into(),
            ]];
            for (p, h) in &h_all {
                let e = rank_of(p);
                rows.push(vec![
                    p.clone(),
                    fixed6(*h),
                    e.rank.to_string(),
                    e.tied.to_string(),
                ]);
            }
            let mut out = csv_to_string(rows);
            out.push('\n');
            let mut header = vec!["subset".to_string()];
            header.extend(table.processes().iter().cloned());
            header.extend(["argmin".to_string(), "tied".to_string()]);
            let mut rows = vec![header];
            for row in &cohorts {
                let mut cells = vec![subset_text(&row.subset, "+")];
                cells.extend(row.h_values.iter().map(|(_, h)| fixed6(*h)));
                cells.extend([row.argmin_process.clone(), row.tied.to_string()]);
                rows.push(cells);
            }
            out.push_str(&csv_to_string(rows));
            out
        }
        ReportFormat::JsonLines => {
            let mut out = String::new();
            for (p, h) in &h_all {
                let e = rank_of(p);
                let line = json!({"type": "collective", "process": p, "h": h.to_f64(), "rank": e.rank, "tied": e.tied});
                writeln!(out, "{line}").unwrap();
            }
            for row in &cohorts {
                let h: serde_json::Map<String, serde_json::Value> = row
                    .h_values
                    .iter()
                    .map(|(p, h)| (p.clone(), json!(h.to_f64())))
                    .collect();
                let line = json!({
                    "type": "cohort",
                    "subset": row.subset,
                    "h": h,
                    "argmin": row.argmin_process,
                    "tied": row.tied,
                });
                writeln!(out, "{line}").unwrap();
            }
            out
        }
    })
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: one node per activity, one labelled edge per binary
/// constraint, one edge per responder of `orresp` (sharing the constraint as
/// label) and a double border on activities required by `mustexist`.
pub fn export_dot(process: &DeclarativeProcess) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", dot_escape(process.name())).unwrap();
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    let required: Vec<_> = process
        .constraints()
        .iter()
        .filter(|c| c.kind() == ConstraintKind::MustExist)
        .map(|c| c.subject())
        .collect();
    for a in process.alphabet().activities() {
        let mut attrs = format!("label=\"{}\"", a.id());
        if let Some(l) = a.label() {
            write!(attrs, ", tooltip=\"{}\"", dot_escape(l)).unwrap();
        }
        if required.contains(&a.id()) {
            attrs.push_str(", peripheries=2, xlabel=\"mustexist\"");
        }
        writeln!(out, "  a{} [{attrs}];", a.id()).unwrap();
    }
    for c in process.constraints() {
        match c.kind() {
            ConstraintKind::MustExist => {}
            ConstraintKind::OrResp => {
                for o in c.objects() {
                    writeln!(
                        out,
                        "  a{} -> a{o} [label=\"{c}\", style=dashed];",
                        c.subject()
                    )
                    .unwrap();
                }
            }
            kind => {
                writeln!(
                    out,
                    "  a{} -> a{} [label=\"{kind}\"];",
                    c.subject(),
                    c.objects()[0]
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}
