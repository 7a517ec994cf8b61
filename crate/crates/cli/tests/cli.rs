use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hyperdyn_cli::export::read_report;
use hyperdyn_cli::report::{Report, VerdictReport};
use hyperdyn_cli::Scenario;

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn hyperdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperdyn"))
        .args(args)
        .env_remove("HYPERDYN_SEED")
        .output()
        .expect("binary runs")
}

fn report_of(out: &Output) -> Report {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn star_scenario_reports_periods_12_and_30() {
    let path = scenarios().join("star.toml");
    let r = report_of(&hyperdyn(&["run", path.to_str().unwrap()]));
    let periods: Vec<usize> = r.analyses.iter().filter_map(|a| a.period.as_ref()?.period).collect();
    assert_eq!(periods, vec![12, 30]);
    assert_eq!(r.map.as_ref().unwrap().period_bound.as_deref(), Some("360360"));
    assert!(r.checks().all(|(_, c)| c.status != "fail"));
}

#[test]
fn truncated_tent_middle_third_collapses_to_zero() {
    let out = hyperdyn(&[
        "classify",
        "--builtin",
        "truncated-tent(3)",
        "--continuum",
        "{ e0:[1/3,2/3] }",
        "--horizon",
        "100",
    ]);
    let r = report_of(&out);
    let c = r.analyses[0].classification.as_ref().unwrap();
    match &c.verdict {
        VerdictReport::AsymptoticallyDegenerate { limit, .. } => assert_eq!(limit, &vec!["{ e0:[0,0] }".to_string()]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn empty_scenario_gives_empty_report() {
    let path = scenarios().join("empty.toml");
    let out = hyperdyn(&["run", path.to_str().unwrap()]);
    let r = report_of(&out);
    assert!(r.analyses.is_empty());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical_and_seed_overridable() {
    let path = scenarios().join("tent-equicontinuity.toml");
    let a = hyperdyn(&["run", path.to_str().unwrap()]);
    let b = hyperdyn(&["run", path.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report_of(&a).seed, 7);

    let env = Command::new(env!("CARGO_BIN_EXE_hyperdyn"))
        .args(["run", path.to_str().unwrap()])
        .env("HYPERDYN_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(report_of(&env).seed, 11);
    let flag = Command::new(env!("CARGO_BIN_EXE_hyperdyn"))
        .args(["run", path.to_str().unwrap(), "--seed", "12"])
        .env("HYPERDYN_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(report_of(&flag).seed, 12);
}

#[test]
fn failing_check_exits_nonzero_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(
        dir.path(),
        "bad.toml",
        r#"
name = "bad-cycle"
[map]
builtin = "star-3-4-2-5"
[[analyses]]
kind = "cycle-of-graphs"
continuum = "{ a1_0:[0,1] }"
period = 3
[output]
report = "out/bad.json"
"#,
    );
    let out = hyperdyn(&["run", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = read_report(&dir.path().join("out/bad.json")).unwrap();
    let (_, c) = r.checks().next().unwrap();
    assert_eq!(c.status, "fail");
    assert!(c.counterexample.is_some());
    let leftovers = std::fs::read_dir(dir.path().join("out")).unwrap().count();
    assert_eq!(leftovers, 1);
}

#[test]
fn parse_errors_name_file_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", "edge a u v\nedge b v\n");
    let m = write(dir.path(), "m.txt", "piece a 0 1 -> a[0..1]\n");
    let out = hyperdyn(&[
        "classify",
        "--graph",
        g.to_str().unwrap(),
        "--map",
        m.to_str().unwrap(),
        "--continuum",
        "{ a:[0,1] }",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("g.txt") && err.contains("2:"), "{err}");
}

#[test]
fn discontinuous_maps_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", "edge a u v\n");
    let m = write(dir.path(), "m.txt", "piece a 0 1/2 -> a[0..1]\npiece a 1/2 1 -> a[0..1]\n");
    let out = hyperdyn(&["enumerate", "periodic", "--graph", g.to_str().unwrap(), "--map", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_of_periodic_orbit_has_zero_distance_after_preperiod() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = hyperdyn(&[
        "classify",
        "--builtin",
        "star-3-4-2-5",
        "--continuum",
        "{ a1_0:[0,1], a2_0:[0,1] }",
        "--horizon",
        "40",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv_dir = dir.path().join("csv");
    let out = hyperdyn(&["export", "--report", report.to_str().unwrap(), "--csv-dir", csv_dir.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(csv_dir.join("orbit-0.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,diameter,diameter_decimal,dist_to_limit,dist_to_limit_decimal")
    );
    let rows: Vec<&str> = lines.collect();
    // One row per iterate up to the first repeat.
    assert_eq!(rows.len(), 12);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[1], "2");
        assert_eq!(cols[3], "0");
        assert_eq!(cols[4], "0.000000000000");
    }
    assert!(csv_dir.join("checks.csv").exists());
}

#[test]
fn check_command_over_a_corpus() {
    let out = hyperdyn(&["check", "period-bound", "--corpus", "5", "--seed", "3"]);
    let r = report_of(&out);
    assert_eq!(r.seed, 3);
    let statuses: Vec<&str> = r.checks().map(|(_, c)| c.status.as_str()).collect();
    assert_eq!(statuses, vec!["pass", "pass"]);
}

#[test]
fn check_center_on_period_doubling() {
    let r = report_of(&hyperdyn(&["check", "center", "--builtin", "period-doubling(3)"]));
    let a = &r.analyses[0];
    assert!(a.cores.contains(&"{ e0:[1/81,2/81] }".to_string()), "{:?}", a.cores);
    let periods: Vec<usize> = a.chains[0].iter().map(|e| e.period).collect();
    assert_eq!(periods, vec![1, 2, 4, 8]);
    assert!(r.checks().all(|(_, c)| c.status == "pass"));
}

#[test]
fn probe_and_recurrence_commands() {
    let r = report_of(&hyperdyn(&[
        "probe",
        "equicontinuity",
        "--builtin",
        "tent",
        "--subtree",
        "{ e0:[2/5,3/5] }",
        "--samples",
        "30",
        "--horizon",
        "100",
        "--gamma",
        "1/8",
    ]));
    assert_eq!(r.analyses[0].probes.len(), 1);
    assert_eq!(r.analyses[0].checks[0].status, "pass");
    let r = report_of(&hyperdyn(&["check", "recurrence", "--builtin", "arm-rotation(5)"]));
    assert_eq!(r.analyses[0].checks[0].status, "pass");
}

#[test]
fn batch_runs_keep_order_and_reject_shared_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.toml", "name = \"a\"\n[output]\nreport = \"same.json\"\n");
    let b = write(dir.path(), "b.toml", "name = \"b\"\n[output]\nreport = \"same.json\"\n");
    let out = hyperdyn(&["run", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let b = write(dir.path(), "b.toml", "name = \"b\"\n[output]\nreport = \"b.json\"\n");
    let out = hyperdyn(&["run", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(read_report(&dir.path().join("same.json")).unwrap().scenario, "a");
    assert_eq!(read_report(&dir.path().join("b.json")).unwrap().scenario, "b");
}

#[test]
fn shipped_scenarios_round_trip() {
    for entry in std::fs::read_dir(scenarios()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        let s = Scenario::load(&path).unwrap();
        let again = Scenario::from_toml(&s.to_toml(), &path).unwrap();
        assert_eq!(again, s, "{}", path.display());
    }
}

#[test]
fn reports_round_trip_through_json() {
    let path = scenarios().join("tripod.toml");
    let out = hyperdyn(&["run", path.to_str().unwrap()]);
    let r = report_of(&out);
    assert_eq!(r.to_json().as_bytes(), out.stdout.as_slice());
}
