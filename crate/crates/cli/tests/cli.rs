use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use trimotion::model::PotentialSpec;
use trimotion::reduction::{wolfes_to_ttw, ReducedProblem2D};

const CAGED: &str = r#"{ "family": "caged_oscillator", "a": 1.0, "b": 1.0, "omega": 1.0, "A": 0.0, "B": 0.0 }"#;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn trimotion(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_trimotion"))
        .args(args)
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn read(path: PathBuf) -> String {
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Data rows of a CSV artifact, split on commas.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&read(path)).unwrap()
}

#[test]
fn caged_solve_matches_oscillator_levels() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "solve.json",
        &format!(
            r#"{{ "command": "solve", "system": {CAGED}, "reduction": {{ "d": 3 }},
                 "discretization": {{ "n": [120, 120] }}, "solver": {{ "levels": 6, "tol": 1e-8 }} }}"#
        ),
    );
    let run = trimotion(&["solve", &cfg]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.contains("solve.csv"));
    let text = read(dir.path().join("solve.csv"));
    assert!(text.starts_with("# tool: trimotion "));
    assert!(text.contains("# grid: nx=120,ny=120"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 6);
    // two three-dimensional radial oscillators at L = 0: E = 6 + 4(n_x + n_y)
    for (row, exact) in rows.iter().zip([6.0, 10.0, 10.0, 14.0, 14.0, 14.0]) {
        let e: f64 = row[1].parse().unwrap();
        let residual: f64 = row[2].parse().unwrap();
        assert!((e - exact).abs() / exact < 5e-3, "{e} vs {exact}");
        assert!(residual <= 1e-8);
    }
    let doc = json(dir.path().join("solve.json"));
    assert_eq!(doc["result"]["converged"], true);
    assert!(read(dir.path().join("solve.json"))
        .trim_start()
        .starts_with("{\n  \"provenance\""));
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", "{\n  \"solver\": { \"levels\": 3,, }\n}\n");
    let run = trimotion(&["solve", &cfg]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("bad.json:2:"), "{}", run.stderr);
}

#[test]
fn unknown_keys_and_mismatched_command_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "typo.json", r#"{ "solver": { "level": 3 } }"#);
    assert_eq!(trimotion(&["solve", &cfg]).code, 2);
    let cfg = write_config(dir.path(), "other.json", r#"{ "command": "scan" }"#);
    let run = trimotion(&["solve", &cfg]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("config is for scan"));
}

#[test]
fn too_many_levels_for_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "small.json",
        &format!(r#"{{ "system": {CAGED}, "reduction": {{ "d": 3 }}, "discretization": {{ "n": [8, 8] }} }}"#),
    );
    let run = trimotion(&["solve", &cfg, "--levels", "65"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("only 64 unknowns"), "{}", run.stderr);
    assert!(!dir.path().join("solve.csv").exists());
}

#[test]
fn non_convergence_exits_3_with_partial_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "tight.json",
        &format!(
            r#"{{ "system": {CAGED}, "reduction": {{ "d": 3 }}, "discretization": {{ "n": [40, 40] }},
                 "solver": {{ "levels": 6, "tol": 1e-30, "max_iter": 1 }} }}"#
        ),
    );
    let run = trimotion(&["solve", &cfg]);
    assert_eq!(run.code, 3, "{}", run.stderr);
    let text = read(dir.path().join("solve.csv"));
    assert!(text.contains("# converged: false"));
    assert_eq!(csv_rows(&text).len(), 6);
}

#[test]
fn overrides_replace_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "solve.json",
        &format!(r#"{{ "system": {CAGED}, "reduction": {{ "d": 3 }}, "output": {{ "prefix": "run" }} }}"#),
    );
    let out = dir.path().join("elsewhere");
    let run = trimotion(&[
        "solve",
        &cfg,
        "--levels",
        "3",
        "--grid",
        "24,30",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let text = read(out.join("run.csv"));
    assert!(text.contains("nx=24,ny=30"));
    assert_eq!(csv_rows(&text).len(), 3);
}

#[test]
fn outputs_reproducible_apart_from_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "solve.json",
        &format!(r#"{{ "system": {CAGED}, "reduction": {{ "d": 3 }}, "discretization": {{ "n": [50, 50] }} }}"#),
    );
    let strip = |s: String| {
        s.lines()
            .filter(|l| !l.contains("timestamp"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let mut seen = Vec::new();
    for sub in ["a", "b"] {
        let out = dir.path().join(sub);
        assert_eq!(trimotion(&["solve", &cfg, "--out", out.to_str().unwrap()]).code, 0);
        seen.push((strip(read(out.join("solve.csv"))), strip(read(out.join("solve.json")))));
    }
    assert_eq!(seen[0], seen[1]);
}

fn map3(dir: &Path, system: &str, jacobi: &str, extra: &str) -> (Run, PathBuf) {
    let cfg = write_config(
        dir,
        "three_body.json",
        &format!(r#"{{ "command": "map3", "system": {system}, "jacobi": {jacobi} {extra} }}"#),
    );
    (trimotion(&["map3", &cfg]), dir.join("map3.json"))
}

fn reduced(path: PathBuf) -> ReducedProblem2D {
    serde_json::from_value(json(path)["problem"].clone()).unwrap()
}

#[test]
fn map3_wolfes_is_ttw_image() {
    let dir = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let (run, _) = map3(
        dir.path(),
        r#"{ "family": "wolfes", "omega": 1.0, "A": 1.0, "B": 2.0 }"#,
        r#"{ "masses": [2.0, 2.0, 2.0], "d": 1 }"#,
        &format!(r#", "output": {{ "dir": {:?} }}"#, out.path()),
    );
    assert_eq!(run.code, 0, "{}", run.stderr);
    let problem = reduced(out.path().join("map3.json"));
    assert_eq!(problem.base, wolfes_to_ttw(1.0, 1.0, 2.0).unwrap().to_spec());
    assert_eq!((problem.cx, problem.cy), (0.0, 0.0));
}

#[test]
fn map3_jacobi_oscillator_and_gauge_terms() {
    let dir = tempfile::tempdir().unwrap();
    let osc = r#"{ "family": "caged_oscillator", "a": 1.0, "b": 1.0, "omega": 1.0, "A": 0.0, "B": 0.0 }"#;
    let (run, out) = map3(dir.path(), osc, r#"{ "masses": [1.0, 2.0, 3.0], "d": 3 }"#, "");
    assert_eq!(run.code, 0, "{}", run.stderr);
    let problem = reduced(out);
    assert!(matches!(
        problem.base,
        PotentialSpec::CagedOscillator { coupling_x, coupling_y, .. } if coupling_x == 0.0 && coupling_y == 0.0
    ));
    assert_eq!((problem.cx, problem.cy), (0.0, 0.0));

    let (run, out) = map3(dir.path(), osc, r#"{ "masses": [1.0, 2.0, 3.0], "d": 2 }"#, "");
    assert_eq!(run.code, 0);
    let problem = reduced(out);
    assert_eq!((problem.cx, problem.cy), (-0.25, -0.25));
}

#[test]
fn map3_rejects_pair_potential_in_three_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let (run, _) = map3(
        dir.path(),
        r#"{ "family": "calogero", "omega": 1.0, "A": 0.5 }"#,
        r#"{ "masses": [1.0, 1.0, 1.0], "d": 3 }"#,
        "",
    );
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("Jacobi distances"), "{}", run.stderr);
}

#[test]
fn reduced_problem_file_feeds_solve_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let osc = r#"{ "family": "caged_oscillator", "a": 1.0, "b": 1.0, "omega": 1.0, "A": 0.0, "B": 0.0 }"#;
    let (run, _) = map3(dir.path(), osc, r#"{ "masses": [1.0, 1.0, 1.0], "d": 3 }"#, "");
    assert_eq!(run.code, 0);
    let cfg = write_config(
        dir.path(),
        "from_file.json",
        r#"{ "problem": "map3.json", "discretization": { "n": [60, 60] }, "solver": { "levels": 3 } }"#,
    );
    assert_eq!(trimotion(&["solve", &cfg]).code, 0);
    assert_eq!(trimotion(&["oracle", &cfg]).code, 0);
    let grid = csv_rows(&read(dir.path().join("solve.csv")));
    let oracle = csv_rows(&read(dir.path().join("oracle.csv")));
    for (g, o) in grid.iter().zip(&oracle) {
        let (g, o): (f64, f64) = (g[1].parse().unwrap(), o[1].parse().unwrap());
        assert!((g - o).abs() / o < 2e-2);
    }
    let o0: f64 = oracle[0][1].parse().unwrap();
    assert!((o0 - 6.0).abs() < 1e-8);
}

#[test]
fn verify_named_checks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "verify.json",
        r#"{ "verify": { "checks": ["wolfes-ttw3", "gram-identity", "centrifugal-d3L0", "integral-order"] } }"#,
    );
    let run = trimotion(&["verify", &cfg]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc = json(dir.path().join("verify.json"));
    assert_eq!(doc["passed"], true);
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4);
    assert!(checks[0]["deviation"].as_f64().unwrap() <= 1e-12);
    assert_eq!(checks[2]["details"]["value"].as_f64(), Some(0.0));
}

#[test]
fn verify_every_check_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "verify.json", "{}");
    let run = trimotion(&["verify", &cfg]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rows = csv_rows(&read(dir.path().join("verify.csv")));
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r[3] == "true"));
}

#[test]
fn verify_unknown_check_id() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "checks.json",
        r#"{ "verify": { "checks": ["gram-identity", "nope"] } }"#,
    );
    let run = trimotion(&["verify", &cfg]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("unknown check id nope"));
    assert!(!dir.path().join("verify.json").exists());
}

fn converge_rows(text: &str) -> (String, Vec<Vec<String>>) {
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap().to_string();
    (header, csv_rows(text))
}

#[test]
fn caged_ladder_is_second_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "converge.json",
        &format!(
            r#"{{ "system": {CAGED}, "reduction": {{ "d": 3 }}, "discretization": {{ "ladder": [60, 120, 240] }},
                 "solver": {{ "levels": 5, "tol": 1e-7 }} }}"#
        ),
    );
    let run = trimotion(&["converge", &cfg]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let (header, rows) = converge_rows(&read(dir.path().join("converge.csv")));
    assert_eq!(header, "h,level,energy,error,order");
    assert_eq!(rows.len(), 15);
    for row in &rows[5..] {
        let p: f64 = row[4].parse().unwrap();
        assert!((1.8..=2.2).contains(&p), "order {p}");
    }
    assert!(rows[..5].iter().all(|r| r[4].is_empty()));
}

#[test]
fn custom_free_particle_ladder_has_no_error_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "free.json",
        r#"{ "system": { "family": "custom2d", "name": "free", "expression": "0" }, "reduction": { "d": 1 },
             "discretization": { "ladder": [20, 40, 80], "offset": "none" }, "solver": { "levels": 3, "tol": 1e-9 } }"#,
    );
    let run = trimotion(&["converge", &cfg]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let (header, rows) = converge_rows(&read(dir.path().join("converge.csv")));
    assert_eq!(header, "h,level,energy,order");
    for row in &rows[6..] {
        let p: f64 = row[3].parse().unwrap();
        assert!((1.9..=2.1).contains(&p), "order {p}");
    }
}

#[test]
fn custom_expression_errors_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        r#"{ "system": { "family": "custom2d", "name": "w", "expression": "x * q" }, "reduction": { "d": 1 } }"#,
    );
    assert_eq!(trimotion(&["solve", &cfg]).code, 2);
}

#[test]
fn scan_reports_multiplicities_and_orders() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "scan.json",
        r#"{ "system": { "family": "ttw", "omega": 1.0, "k": { "m": 1, "n": 1 }, "alpha": 0.3, "beta": 0.3 },
             "scan": { "k": [{ "m": 1, "n": 1 }, { "m": 3, "n": 2 }, { "value": 1.4142135623730951 }], "levels_per_k": 6 },
             "output": { "formats": ["csv", "json", "dat"] } }"#,
    );
    let run = trimotion(&["scan", &cfg]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rows = csv_rows(&read(dir.path().join("scan.csv")));
    assert_eq!(rows.len(), 18);
    let mult: Vec<&str> = rows[..6].iter().map(|r| r[3].as_str()).collect();
    assert_eq!(mult, ["1", "2", "2", "3", "3", "3"]);
    let summary = json(dir.path().join("scan_summary.json"));
    let entries = summary["entries"].as_array().unwrap();
    assert_eq!(entries[0]["integral_order"], 2);
    assert_eq!(entries[1]["integral_order"], 8);
    assert!(entries[2]["integral_order"].is_null());
    let dat = read(dir.path().join("scan.dat"));
    assert_eq!(dat.lines().filter(|l| !l.starts_with('#')).count(), 3);
}
