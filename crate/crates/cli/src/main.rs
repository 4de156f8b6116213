//! `dproc`: enumerate declarative process traces, rank processes by
//! stakeholder utility and export constraint graphs.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 analysis error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use dproc::report::{export_dot, render_cohorts, render_count, render_traces, render_utilities};
use dproc::verify::{
    run_golden_suite, run_oracle_campaign, unconstrained_count, unconstrained_enumerated,
};
use dproc::{
    analyze, count_valid, enumerate_bruteforce_with_cap, enumerate_pruned, parse_process,
    parse_stakeholders, DeclarativeProcess, ReportFormat, UtilityTable, DEFAULT_BRUTEFORCE_CAP,
};

#[derive(Parser, Debug)]
#[command(
    name = "dproc",
    version,
    about = "Declarative process trace enumeration and stakeholder utility ranking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List (or count) the valid traces of a process file.
    Enumerate {
        process: PathBuf,
        #[arg(long, default_value = "table", value_parser = ReportFormat::from_str)]
        format: ReportFormat,
        #[arg(long)]
        count_only: bool,
        /// Use brute-force enumeration instead of the pruned search.
        #[arg(long)]
        oracle: bool,
        /// Largest alphabet brute force will accept.
        #[arg(long, default_value_t = DEFAULT_BRUTEFORCE_CAP)]
        max_bruteforce: usize,
    },
    /// Utility of each process for each stakeholder.
    Analyze {
        #[arg(long)]
        stakeholders: PathBuf,
        #[arg(required = true)]
        processes: Vec<PathBuf>,
        #[arg(long, default_value = "table", value_parser = ReportFormat::from_str)]
        format: ReportFormat,
        /// Also report distances for every non-empty stakeholder subset.
        #[arg(long)]
        cohorts: bool,
    },
    /// Graphviz rendering of a process's constraints.
    ExportDot { process: PathBuf },
    /// Reference tables, engine-equivalence campaign and unconstrained count.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Also enumerate the unconstrained ten-activity process (slow).
        #[arg(long)]
        slow: bool,
    },
}

enum Failure {
    Usage(String),
    Analysis(String),
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_process(path: &Path) -> Result<DeclarativeProcess, Failure> {
    parse_process(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn enumerate(
    path: &Path,
    format: ReportFormat,
    count_only: bool,
    oracle: bool,
    cap: usize,
) -> Result<String, Failure> {
    let process = load_process(path)?;
    if oracle {
        let set = enumerate_bruteforce_with_cap(&process, cap)
            .map_err(|e| Failure::Analysis(e.to_string()))?;
        return Ok(if count_only {
            render_count(process.name(), set.count() as u64, format)
        } else {
            render_traces(&set, format)
        });
    }
    Ok(if count_only {
        render_count(process.name(), count_valid(&process), format)
    } else {
        render_traces(&enumerate_pruned(&process), format)
    })
}

fn run_analyze(
    stakeholders: &Path,
    paths: &[PathBuf],
    format: ReportFormat,
    cohorts: bool,
) -> Result<String, Failure> {
    let stakeholders = parse_stakeholders(&read(stakeholders)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", stakeholders.display())))?;
    let processes = paths
        .iter()
        .map(|p| load_process(p))
        .collect::<Result<Vec<_>, _>>()?;
    let table: UtilityTable =
        analyze(&processes, &stakeholders).map_err(|e| Failure::Analysis(e.to_string()))?;
    let mut out = render_utilities(&table, format);
    if cohorts {
        out.push('\n');
        out.push_str(
            &render_cohorts(&table, format).map_err(|e| Failure::Analysis(e.to_string()))?,
        );
    }
    Ok(out)
}

fn verify(seed: u64, cases: usize, slow: bool) -> Result<String, Failure> {
    let golden = run_golden_suite();
    let campaign = run_oracle_campaign(seed, cases).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut out = format!("{golden}\n{campaign}");
    let mut passed = golden.passed() && campaign.passed();
    if slow {
        let closed = unconstrained_count(10).map_err(|e| Failure::Analysis(e.to_string()))?;
        let enumerated = unconstrained_enumerated(10);
        let ok = closed == enumerated;
        passed &= ok;
        out.push_str(&format!(
            "{}  unconstrained n=10 by enumeration  (closed form {closed}, enumerated {enumerated})\n",
            if ok { "PASS" } else { "FAIL" }
        ));
    }
    if passed {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Analysis("verification failed".into()))
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Enumerate {
            process,
            format,
            count_only,
            oracle,
            max_bruteforce,
        } => enumerate(&process, format, count_only, oracle, max_bruteforce),
        Command::Analyze {
            stakeholders,
            processes,
            format,
            cohorts,
        } => run_analyze(&stakeholders, &processes, format, cohorts),
        Command::ExportDot { process } => Ok(export_dot(&load_process(&process)?)),
        Command::Verify { seed, cases, slow } => verify(seed, cases, slow),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Analysis(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
