use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn mcgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn temp_file(contents: &str) -> NamedTempFile {
    let mut file = NamedTempFile::new().unwrap();
    file.write_all(contents.as_bytes()).unwrap();
    file.flush().unwrap();
    file
}

#[test]
fn rank_prints_the_count() {
    let out = mcgraph(&["rank", "--genus", "0", "--punctures", "5", "--xi", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "1\n");
}

#[test]
fn rank_witness_is_json() {
    let out = mcgraph(&[
        "rank", "--genus", "2", "--punctures", "0", "--xi", "-2", "--witness",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("3"));
    let witness: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert!(witness.get("pieces").is_some());
    assert!(witness.get("curves").is_some());
    assert_eq!(lines.next(), None);
}

#[test]
fn rank_rejects_invalid_surfaces() {
    let out = mcgraph(&["rank", "--genus", "0", "--punctures", "2", "--xi", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).starts_with("topology:"));
    assert_eq!(stderr_of(&out).trim_end().lines().count(), 1);
}

#[test]
fn decomps_emits_stable_json_lines() {
    let args = ["decomps", "--genus", "1", "--punctures", "1"];
    let first = mcgraph(&args);
    assert!(first.status.success());
    let text = stdout_of(&first);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    for line in &lines {
        let class: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(class.get("pieces").is_some());
    }
    let second = mcgraph(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn dist_models() {
    let out = mcgraph(&["dist", "--model", "farey", "--from", "0/1", "--to", "1/0"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "1\n");
    let out = mcgraph(&["dist", "--model", "farey4", "--from", "0/1", "--to", "1/0"]);
    assert_eq!(stdout_of(&out), "1\n");
    let out = mcgraph(&[
        "dist",
        "--model",
        "marking",
        "--from",
        "(0/1; 1/0)",
        "--to",
        "(0/1; 1/5)",
    ]);
    assert_eq!(stdout_of(&out), "5\n");
}

#[test]
fn dist_region_uses_the_closed_form() {
    let region = temp_file(r#"{"blocks":["TORUS1","ANNULUS","TORUS1"],"xi":-2}"#);
    let path = region.path().to_str().unwrap();
    let out = mcgraph(&[
        "dist",
        "--model",
        "region",
        "--region",
        path,
        "--from",
        "(0/1; 1/0),0,(0/1; 1/0)",
        "--to",
        "(0/1; 1/5),2,(0/1; 1/0)",
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    // five marking moves plus a twist jump of size 2
    assert_eq!(stdout_of(&out), "8\n");
}

#[test]
fn ball_exports_json_and_dot() {
    let out = mcgraph(&[
        "ball",
        "--model",
        "farey",
        "--center",
        "0/1",
        "--radius",
        "1",
        "--max-slope",
        "3",
    ]);
    assert!(out.status.success());
    let graph: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    let vertices = graph["vertices"].as_array().unwrap();
    assert!(vertices.iter().any(|v| v == "0/1"));
    assert!(vertices.iter().any(|v| v == "1/0"));
    let out = mcgraph(&[
        "ball", "--model", "farey", "--center", "0/1", "--radius", "1", "--max-slope", "3",
        "--out", "dot",
    ]);
    assert!(stdout_of(&out).starts_with("graph G {"));
}

#[test]
fn ball_region_respects_the_universe() {
    let region = temp_file(r#"{"blocks":["TORUS1","PANTS"],"xi":0}"#);
    let path = region.path().to_str().unwrap();
    let out = mcgraph(&[
        "ball", "--model", "region", "--region", path, "--center", "0/1,*", "--radius", "1",
        "--max-slope", "2",
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let graph: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert!(graph["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .any(|v| v == "0/1,*"));
}

#[test]
fn formula_single_pair() {
    let region = temp_file(r#"{"blocks":["TORUS1"],"xi":-2}"#);
    let path = region.path().to_str().unwrap();
    let out = mcgraph(&[
        "formula",
        "--region",
        path,
        "-K",
        "1",
        "--from",
        "(0/1; 1/0)",
        "--to",
        "(0/1; 1/5)",
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "7\n");
}

#[test]
fn formula_samples_are_deterministic_and_fitted() {
    let region = temp_file(r#"{"blocks":["TORUS1"],"xi":-2}"#);
    let path = region.path().to_str().unwrap();
    let args = [
        "formula", "--region", path, "-K", "4", "--samples", "8", "--seed", "7", "--radius",
        "3", "--fit",
    ];
    let first = mcgraph(&args);
    assert!(first.status.success(), "{}", stderr_of(&first));
    let text = stdout_of(&first);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    for row in &lines[..8] {
        assert_eq!(row.matches('"').count(), 4, "quoted keys in {row}");
    }
    let summary: serde_json::Value = serde_json::from_str(lines[8]).unwrap();
    assert_eq!(summary["K"], 4);
    assert_eq!(summary["violations"], 0);
    assert!(summary["a"].as_f64().unwrap() >= 1.0);
    let second = mcgraph(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn quasiflat_reports_tight_bounds() {
    let region = temp_file(r#"{"blocks":["TORUS1","TORUS1"],"xi":0}"#);
    let path = region.path().to_str().unwrap();
    let out = mcgraph(&["quasiflat", "--region", path, "--grid", "3"]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "OK: 0 violations, bounds tight\n");
}

#[test]
fn quasiflat_accepts_a_geodesic_file() {
    let region = temp_file(r#"{"blocks":["TORUS1"],"xi":0}"#);
    let geodesics = temp_file(
        r#"{"rays":[{"block":0,"center":"0/1","positive":["1/3","3/10"],"negative":["-1/3","-3/10"]}]}"#,
    );
    let out = mcgraph(&[
        "quasiflat",
        "--region",
        region.path().to_str().unwrap(),
        "--grid",
        "2",
        "--geodesic-file",
        geodesics.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "OK: 0 violations, bounds tight\n");
}

#[test]
fn cone_adds_apex_vertices() {
    let graph = temp_file(
        r#"{"vertices":["a","b","c","d"],"edges":[["a","b",2],["b","c",2],["c","d",2],["a","d",2]]}"#,
    );
    let subsets = temp_file(r#"[["a","b","c"]]"#);
    let out = mcgraph(&[
        "cone",
        "--graph",
        graph.path().to_str().unwrap(),
        "--subsets",
        subsets.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let coned: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert!(coned["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .any(|v| v == "apex:0"));
}

#[test]
fn delta_prints_the_defect() {
    let graph = temp_file(
        r#"{"vertices":["a","b","c","d"],"edges":[["a","b",1],["b","c",1],["c","d",1],["a","d",1]]}"#,
    );
    let out = mcgraph(&["delta", "--graph", graph.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "1\n");
}

#[test]
fn runtime_errors_exit_one() {
    let graph = temp_file(r#"{"vertices":["a","b"],"edges":[]}"#);
    let out = mcgraph(&["delta", "--graph", graph.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).starts_with("formula:"));
}

#[test]
fn malformed_files_exit_two() {
    let region = temp_file("not json");
    let out = mcgraph(&[
        "dist",
        "--model",
        "region",
        "--region",
        region.path().to_str().unwrap(),
        "--from",
        "0/1",
        "--to",
        "1/0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).starts_with("cli:"));
}

#[test]
fn unknown_flags_exit_two() {
    let out = mcgraph(&["rank", "--genus", "1", "--punctures", "1", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}
