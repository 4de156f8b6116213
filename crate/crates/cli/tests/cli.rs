use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str, text: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn dproc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dproc"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn models() -> Vec<String> {
    [
        "fdap.dproc",
        "fdap_m1.dproc",
        "fdap_m2.dproc",
        "fdap_m3.dproc",
    ]
    .into_iter()
    .map(fixture)
    .collect()
}

fn analyze(extra: &[&str]) -> Output {
    let stake = fixture("stakeholders.dstake");
    let models = models();
    let mut args = vec!["analyze", "--stakeholders", stake.as_str()];
    args.extend(models.iter().map(String::as_str));
    args.extend(extra);
    dproc(&args)
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes())
        .records()
        .collect::<Result<_, _>>()
        .unwrap()
}

#[test]
fn count_only() {
    assert_eq!(
        stdout(&dproc(&[
            "enumerate",
            &fixture("fdap.dproc"),
            "--count-only"
        ])),
        "46\n"
    );
    assert_eq!(
        stdout(&dproc(&[
            "enumerate",
            &fixture("fdap_m2.dproc"),
            "--count-only"
        ])),
        "144\n"
    );
    let csv = stdout(&dproc(&[
        "enumerate",
        &fixture("fdap_m3.dproc"),
        "--count-only",
        "--format",
        "csv",
    ]));
    assert_eq!(csv, "process,valid\nFDAP M3,852\n");
}

#[test]
fn trace_listings() {
    let m1 = stdout(&dproc(&[
        "enumerate",
        &fixture("fdap_m1.dproc"),
        "--format",
        "csv",
    ]));
    let rows = csv_rows(&m1);
    assert_eq!(rows.len(), 14);
    assert_eq!(&rows[0][2], "");
    assert_eq!(&rows[13][2], "1 2 3 4 5 7 8 9 10 6");

    let pair = stdout(&dproc(&["enumerate", &fixture("pair.dproc")]));
    assert_eq!(
        pair,
        "pair: 5 valid traces\n1. ε\n2. (1)\n3. (2)\n4. (1, 2)\n5. (2, 1)\n"
    );
    let oracle = stdout(&dproc(&["enumerate", &fixture("pair.dproc"), "--oracle"]));
    assert_eq!(pair, oracle);

    let jsonl = stdout(&dproc(&[
        "enumerate",
        &fixture("fdap.dproc"),
        "--format",
        "jsonl",
    ]));
    assert_eq!(jsonl.lines().count(), 46);
    assert_eq!(
        jsonl.lines().nth(2).unwrap(),
        r#"{"index":3,"process":"FDAP","trace":[1,9,10]}"#
    );
}

#[test]
fn oracle_matches_pruned_on_small_process() {
    let path = scratch(
        "small.dproc",
        "process small\nactivities 5\nprec 1 2\nresp 2 3\norresp 3 4 5\nweakresp 5 4\n",
    );
    let pruned = stdout(&dproc(&["enumerate", &path, "--format", "csv"]));
    let brute = stdout(&dproc(&["enumerate", &path, "--format", "csv", "--oracle"]));
    assert_eq!(pruned, brute);
}

#[test]
fn utilities_csv_round_trip() {
    let expected = [
        ("S1", "FDAP", 46, 43, 0.982869, 3),
        ("S1", "FDAP M1", 14, 12, 0.947157, 4),
        ("S1", "FDAP M2", 144, 141, 0.995799, 2),
        ("S1", "FDAP M3", 852, 849, 0.999478, 1),
        ("S2", "FDAP", 46, 10, 0.622806, 4),
        ("S2", "FDAP M1", 14, 10, 0.885469, 2),
        ("S2", "FDAP M2", 144, 34, 0.714394, 3),
        ("S2", "FDAP M3", 852, 601, 0.948361, 1),
        ("S3", "FDAP", 46, 32, 0.908149, 4),
        ("S3", "FDAP M1", 14, 11, 0.917600, 3),
        ("S3", "FDAP M2", 144, 137, 0.990058, 2),
        ("S3", "FDAP M3", 852, 838, 0.997548, 1),
    ];
    let out = stdout(&analyze(&["--format", "csv"]));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), expected.len());
    for (row, (s, p, valid, fav, u, rank)) in rows.iter().zip(expected) {
        assert_eq!((&row[0], &row[1]), (s, p));
        assert_eq!(row[2].parse::<u64>().unwrap(), valid);
        assert_eq!(row[3].parse::<u64>().unwrap(), fav);
        let parsed: f64 = row[4].parse().unwrap();
        assert!((parsed - u).abs() <= 1e-6, "{s} {p}: {parsed}");
        assert_eq!(format!("{parsed:.6}"), &row[4]);
        assert_eq!(row[5].parse::<usize>().unwrap(), rank);
        assert_eq!(&row[6], "false");
    }
}

#[test]
fn cohorts_csv() {
    let out = stdout(&analyze(&["--format", "csv", "--cohorts"]));
    let sections: Vec<&str> = out.split("\n\n").collect();
    assert_eq!(sections.len(), 3, "{out}");
    let collective = csv_rows(sections[1]);
    let h: Vec<f64> = collective.iter().map(|r| r[1].parse().unwrap()).collect();
    // printed values carry up to half a unit of rounding on top of the 1e-6 tolerance
    for (got, want) in h.iter().zip([0.388594, 0.150664, 0.285810, 0.051700]) {
        assert!((got - want).abs() <= 1.5e-6, "{got} vs {want}");
    }
    let cohorts = csv_rows(sections[2]);
    let subsets: Vec<&str> = cohorts.iter().map(|r| r.get(0).unwrap()).collect();
    assert_eq!(
        subsets,
        ["S1", "S2", "S3", "S1+S2", "S1+S3", "S2+S3", "S1+S2+S3"]
    );
    assert!(cohorts
        .iter()
        .all(|r| &r[5] == "FDAP M3" && &r[6] == "false"));
    let s2: f64 = cohorts[1][3].parse().unwrap();
    assert!((s2 - 0.285606).abs() <= 1e-6);
}

#[test]
fn single_process_single_stakeholder() {
    let stake = scratch("one.dstake", "S := contains(1)\n");
    let out = stdout(&dproc(&[
        "analyze",
        "--stakeholders",
        &stake,
        &fixture("pair.dproc"),
        "--cohorts",
        "--format",
        "jsonl",
    ]));
    let lines: Vec<&str> = out.lines().filter(|l| !l.is_empty()).collect();
    assert_eq!(lines.len(), 3, "{out}");
    // 3 of 5 traces contain 1: u = ln 4 / ln 6
    let u = 4f64.ln() / 6f64.ln();
    assert!(lines[0].contains(r#""favourable":3"#));
    let h = format!("{}", 1.0 - u);
    assert!(lines[1].contains(&h), "{} vs {h}", lines[1]);
}

#[test]
fn deterministic_output() {
    for extra in [&["--cohorts"][..], &["--cohorts", "--format", "jsonl"]] {
        assert_eq!(stdout(&analyze(extra)), stdout(&analyze(extra)));
    }
    let a = stdout(&dproc(&["enumerate", &fixture("fdap_m3.dproc")]));
    let b = stdout(&dproc(&["enumerate", &fixture("fdap_m3.dproc")]));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 853);
}

#[test]
fn dot_export() {
    let fdap = stdout(&dproc(&["export-dot", &fixture("fdap.dproc")]));
    assert_eq!(
        fdap.lines()
            .filter(|l| l.contains(" [label=") && !l.contains("->"))
            .count(),
        10
    );
    assert_eq!(fdap.lines().filter(|l| l.contains("->")).count(), 12);
    let m2 = stdout(&dproc(&["export-dot", &fixture("fdap_m2.dproc")]));
    assert!(m2.contains("a11 [label=\"11\""));
}

#[test]
fn verify_subcommand() {
    let out = stdout(&dproc(&["verify", "--cases", "20", "--seed", "5"]));
    assert!(out.contains("PASS  oracle campaign seed=5 cases=20"));
    assert!(out.contains("9864102"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn exit_codes() {
    let bad = scratch("bad.dproc", "process bad\nactivities 3\nprec 1 2 3\n");
    let out = dproc(&["enumerate", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let unknown = scratch("unknown.dproc", "process bad\nactivities 3\nbefore 1 2\n");
    assert_eq!(dproc(&["enumerate", &unknown]).status.code(), Some(1));
    assert_eq!(
        dproc(&["enumerate", "/nonexistent.dproc"]).status.code(),
        Some(1)
    );
    assert_eq!(dproc(&["enumerate"]).status.code(), Some(1));
    assert_eq!(
        dproc(&["enumerate", &fixture("pair.dproc"), "--format", "xml"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(dproc(&["--help"]).status.code(), Some(0));

    let stake = scratch("broken.dstake", "S := and or\n");
    let out = dproc(&["analyze", "--stakeholders", &stake, &fixture("pair.dproc")]);
    assert_eq!(out.status.code(), Some(1));

    let capped = dproc(&[
        "enumerate",
        &fixture("fdap.dproc"),
        "--oracle",
        "--max-bruteforce",
        "9",
    ]);
    assert_eq!(capped.status.code(), Some(2));

    let dead = scratch(
        "dead.dproc",
        "process dead\nactivities 2\nmustexist 1\nprec 1 2\nprec 2 1\n",
    );
    let stake = scratch("s.dstake", "S := contains(1)\n");
    let out = dproc(&["analyze", "--stakeholders", &stake, &dead]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}
