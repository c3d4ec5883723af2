use std::path::Path;
use std::process::{Command, Output};

fn mosar(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mosar")).args(args).env("MOSAR_CACHE_DIR", cache).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn header_value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.split_once('=').filter(|(k, _)| k.trim() == key).map(|(_, v)| v.trim().to_string()))
        .unwrap_or_else(|| panic!("no `{key}` in result file"))
}

fn without_wall_clock(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with("wall_clock_seconds")).collect::<Vec<_>>().join("\n")
}

#[test]
fn solve_srn_uses_full_budget_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = || {
        let o = mosar(&["solve", "--problem", "srn", "--algo", "mosar2", "--seed", "7", "--out", out], dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
        std::fs::read_to_string(dir.path().join("srn-mosar2-seed7.txt")).unwrap()
    };
    let first = run();
    assert_eq!(header_value(&first, "evaluations_main"), "5022");
    assert_eq!(header_value(&first, "evaluations_init"), "100");
    let second = run();
    assert_eq!(without_wall_clock(&first), without_wall_clock(&second));
}

#[test]
fn unknown_algorithm_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = mosar(
        &["solve", "--problem", "srn", "--algo", "nsga2", "--seed", "1", "--out", out.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn config_requires_side_length() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = mosar(
        &["solve", "--problem", "config", "--algo", "mosar2", "--seed", "1", "--out", out.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--sl"));
    assert!(!out.exists());
}

fn table_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect()
}

#[test]
fn small_sweep_writes_runs_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep");
    let o = mosar(
        &[
            "sweep",
            "--sl-grid",
            "9.4,9.0",
            "--seeds",
            "1..3",
            "--tmax",
            "10",
            "--tmin",
            "1",
            "--alpha",
            "0.5",
            "--iters",
            "20",
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));

    let runs = std::fs::read_dir(&out)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with("config-sl"))
        .count();
    assert_eq!(runs, 2 * 3 * 3);
    for table in ["cardinality.txt", "minimal_spacing.txt", "coverage.txt", "accounted_proportion.txt"] {
        assert!(out.join(table).is_file(), "{table}");
    }
    assert_eq!(std::fs::read_dir(out.join("fronts")).unwrap().count(), 2 * 3);

    let coverage = table_rows(&out.join("coverage.txt"));
    let names: Vec<&String> = coverage[0].iter().filter(|c| c.starts_with("C(")).collect();
    assert_eq!(names.len(), 6);
    assert_eq!(coverage.len(), 3);

    let proportion = table_rows(&out.join("accounted_proportion.txt"));
    assert_eq!(proportion[0], ["sl", "amosa", "mosar1", "mosar2"]);
    for row in &proportion[1..] {
        let values: Vec<f64> = row[1..].iter().map(|v| v.parse().unwrap()).collect();
        let total: f64 = values.iter().sum();
        // Rows without any feasible point across algorithms are all zero.
        assert!(total == 0.0 || (total - 1.0).abs() < 1e-3, "{row:?}");
    }
}

#[test]
fn metrics_on_an_empty_feasible_set() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = mosar(&["solve", "--problem", "srn", "--algo", "amosa", "--seed", "2", "--out", out], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("srn-amosa-seed2.txt")).unwrap();
    let (head, body) = text.split_once("[archive]").unwrap();
    let body: String = body
        .lines()
        .map(|l| match l.strip_suffix('1') {
            Some(rest) if l.contains('|') => format!("{rest}0\n"),
            _ => format!("{l}\n"),
        })
        .collect();
    let path = dir.path().join("infeasible.txt");
    std::fs::write(&path, format!("{head}[archive]{body}")).unwrap();

    let o = mosar(&["metrics", "--inputs", path.to_str().unwrap(), "--metrics", "N,S_m,IGD"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let report = stdout(&o);
    assert!(report.contains("N=0"), "{report}");
    assert!(report.contains("S_m=1.000000"), "{report}");
    assert!(report.contains("IGD=empty"), "{report}");
}

#[test]
fn coverage_of_a_set_with_itself_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = mosar(&["solve", "--problem", "tnk", "--algo", "mosar2", "--seed", "1", "--out", out], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let file = dir.path().join("tnk-mosar2-seed1.txt");
    let o = mosar(&["metrics", "--inputs", file.to_str().unwrap(), "--metrics", "N,C"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let report = stdout(&o);
    let line = report.lines().find(|l| l.starts_with("C(")).expect("coverage line");
    assert!(line.ends_with("= 0.000000"), "{line}");
    assert!(line.contains("= 0.000000 ;"), "{line}");
    assert!(!report.contains("N=0 "), "{report}");
}

#[test]
fn malformed_result_file_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken-run.txt");
    std::fs::write(&path, "problem = srn\n[archive]\n1 2 | 3 |\n").unwrap();
    let o = mosar(&["metrics", "--inputs", path.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("broken-run.txt"), "{}", stderr(&o));
}
