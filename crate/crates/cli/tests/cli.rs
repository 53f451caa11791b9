use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn cfn5(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfn5"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn petersen_has_no_faithful_flow_but_has_an_integer_one() {
    let pet = data("petersen.g6");
    let o = cfn5(&["decide", path(&pet)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("Infeasible"));

    let o = cfn5(&["--porcelain", "nz5", "--certificate", path(&pet)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("nz5\tfeasible\t15\t"));
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 15);
}

#[test]
fn wheel_rim_certificate_is_printed() {
    let o = cfn5(&["decide", "--certificate", path(&data("w4-rim-41.cg"))]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("Feasible\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 8);
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cg");
    std::fs::write(&bad, "cg 1\nv a\ne 0 a zz (1,4)\n").unwrap();
    let o = cfn5(&["decide", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));

    let o = cfn5(&["decide", path(&dir.path().join("missing"))]);
    assert_eq!(o.status.code(), Some(2));

    let o = cfn5(&["predicate", "5", "rim", "(9,9)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn guard_is_reported_as_an_error() {
    let o = cfn5(&["--guard-edges", "10", "decide", path(&data("petersen.g6"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn k4_capacity() {
    let o = cfn5(&["capacity", path(&data("k4-gadget.cg"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(2,3)u(3,2)\n");
    // Graph6 input has no terminals.
    let o = cfn5(&["capacity", path(&data("petersen.g6"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn predicate_rows() {
    let o = cfn5(&["predicate", "7", "rim", "(4,1)"]);
    assert_eq!(stdout(&o), "Phi_c >= 5: true\n");
    let o = cfn5(&["predicate", "4", "rim", "(4,1)"]);
    assert_eq!(stdout(&o), "Phi_c >= 5: false\n");
    let o = cfn5(&["--porcelain", "predicate", "5", "0x1f", "(4,1)"]);
    assert_eq!(stdout(&o), "predicate\t5\t0x1f\t(4,1)\ttrue\n");
}

#[test]
fn appendix_build_writes_a_snark() {
    let dir = tempfile::tempdir().unwrap();
    let o = cfn5(&["build", "appendix", "--out-dir", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let g6 = dir.path().join("appendix.g6");
    let report = std::fs::read_to_string(dir.path().join("appendix.report")).unwrap();
    assert!(report.contains("girth: 5\n"));
    assert!(report.contains("snark: true\n"));

    let o = cfn5(&["--porcelain", "check-snark", path(&g6)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "check-snark\t28\t42\ttrue\t5\ttrue\tfalse\ttrue\n"
    );
}

#[test]
fn odd_cycle_template_on_petersen() {
    let dir = tempfile::tempdir().unwrap();
    let o = cfn5(&[
        "build",
        "template",
        path(&data("petersen.g6")),
        "--cycle",
        "0,1,2,3,4",
        "--out-dir",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let t = dir.path().join("template.cg");
    assert_eq!(cfn5(&["decide", path(&t)]).status.code(), Some(1));

    // Not a cycle.
    let o = cfn5(&[
        "build",
        "template",
        path(&data("petersen.g6")),
        "--cycle",
        "0,2,4",
        "--out-dir",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cache_replays_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let run = |args: &[&str]| {
        let mut all = vec!["--cache", path(&cache)];
        all.extend_from_slice(args);
        cfn5(&all)
    };
    let w4 = data("w4-rim-41.cg");
    let first = run(&["decide", "--certificate", path(&w4)]);
    let second = run(&["decide", "--certificate", path(&w4)]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.status.code(), second.status.code());

    let records: Vec<_> = std::fs::read_dir(&cache)
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension()? == "record").then_some(p)
        })
        .collect();
    assert_eq!(records.len(), 1);
    let record = std::fs::read_to_string(&records[0]).unwrap();
    assert!(record.contains("decision=feasible\n"));
    assert!(record.contains("exit=0\n"));

    // A hit restores the written files too.
    let out = dir.path().join("out");
    run(&["build", "appendix", "--out-dir", path(&out)]);
    std::fs::remove_dir_all(&out).unwrap();
    let again = run(&["build", "appendix", "--out-dir", path(&out)]);
    assert_eq!(again.status.code(), Some(0));
    assert!(out.join("appendix.g6").exists());

    // Different guards are a different key.
    let p = data("petersen.g6");
    run(&["decide", path(&p)]);
    let o = run(&["--guard-edges", "10", "decide", path(&p)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scan_with_jobs_agrees_and_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("scan.tsv");
    let o = cfn5(&["scan", "5", "--jobs", "3", "--output", path(&report)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(" 0 disagreements"));
    let lines = std::fs::read_to_string(&report).unwrap();
    assert!(lines.lines().count() > 0);
    assert!(lines.lines().all(|l| l.split('\t').count() == 7));
}
