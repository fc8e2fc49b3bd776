use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_desiree"))
        .args(args)
        .env_remove("DESIREE_COLOR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_model(text: &str) -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.dsr");
    std::fs::write(&path, text).unwrap();
    (dir, path)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_reports_three_clashes() {
    let f = fixture("meeting_scheduler.dsr");
    let o = run(&["check", path_str(&f)]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.matches("error[E-CONS]").count(), 3, "{out}");
    assert!(out.contains("consistency: 3 clashes"), "{out}");
    for term in ["User", "Meeting_room", "Room_equipment"] {
        assert!(out.contains(&format!("{term} is below disjoint")), "{term}: {out}");
    }
}

#[test]
fn clean_corpus_checks_clean() {
    let f = fixture("meeting_scheduler_clean.dsr");
    let o = run(&["check", path_str(&f)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("consistency: no clashes"));
}

#[test]
fn signature_violation_fails_check() {
    let (_dir, p) = temp_model("goal G1 = \"a\".\nresolve(G1)[w] = {G1}.\n");
    let o = run(&["check", path_str(&p)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("error[E-SIG]"), "{}", stdout(&o));
}

#[test]
fn syntax_error_is_positioned() {
    let (_dir, p) = temp_model("goal G1 = .\n");
    let o = run(&["check", path_str(&p)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(":1:11: error[E-SYN]"), "{}", stdout(&o));
}

#[test]
fn check_json_summary() {
    let f = fixture("meeting_scheduler.dsr");
    let o = run(&["--json", "check", path_str(&f)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["clashes"], 3);
    assert_eq!(v["summary"]["elements"], 24);
}

#[test]
fn entail_verdicts() {
    let f = fixture("meeting_scheduler_clean.dsr");
    let o = run(&["entail", path_str(&f), "F1", "F1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "proved: F1 entails F1\n");
    assert_eq!(run(&["entail", path_str(&f), "F1", "F99"]).status.code(), Some(2));

    let (_dir, p) = temp_model(
        "axiom Airline_ticket :< Ticket.\nf F1 = Book <object: Ticket>.\nf F2 = Book <object: Airline_ticket>.\n",
    );
    assert_eq!(stdout(&run(&["entail", path_str(&p), "F2", "F1"])), "proved: F2 entails F1\n");
    let back = stdout(&run(&["entail", path_str(&p), "F1", "F2"]));
    assert!(back.starts_with("disproved: F1 does not entail F2\nwitness: "), "{back}");
}

#[test]
fn stats_of_empty_file() {
    let (_dir, p) = temp_model("");
    let o = run(&["stats", path_str(&p)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("total       0       0"), "{out}");
    assert!(out.ends_with("applications 0\naxioms 0\nconflicts 0\n"), "{out}");
}

#[test]
fn query_lists_qualities() {
    let f = fixture("meeting_scheduler.dsr");
    let o = run(&["query", path_str(&f), "<inheres_in: {the_product}>"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "Usability@{the_product}\n");
    assert_eq!(stdout(&run(&["query", path_str(&f), "<means: Email>"])), "F5\n");
}

#[test]
fn bad_query_and_format_exit_two() {
    let f = fixture("meeting_scheduler.dsr");
    assert_eq!(run(&["query", path_str(&f), "<object: "]).status.code(), Some(2));
    assert_eq!(run(&["query", path_str(&f), "<frobnicates: X>"]).status.code(), Some(2));
    assert_eq!(run(&["export", path_str(&f), "--format", "svg"]).status.code(), Some(2));
    assert_eq!(run(&["stats", "/nonexistent/model.dsr"]).status.code(), Some(2));
}

#[test]
fn fmt_is_idempotent() {
    let text = std::fs::read_to_string(fixture("meeting_scheduler.dsr")).unwrap();
    let (_dir, p) = temp_model(&text);
    assert_eq!(run(&["fmt", path_str(&p)]).status.code(), Some(0));
    let once = std::fs::read(&p).unwrap();
    assert_eq!(run(&["fmt", path_str(&p)]).status.code(), Some(0));
    assert_eq!(std::fs::read(&p).unwrap(), once);
}

#[test]
fn export_formats() {
    let f = fixture("meeting_scheduler.dsr");
    let o = run(&["export", path_str(&f)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["elements"].as_array().unwrap().len(), 24);
    assert_eq!(v["applications"].as_array().unwrap().len(), 5);
    assert_eq!(v["disjoint"].as_array().unwrap().len(), 1);
    let dot = stdout(&run(&["export", path_str(&f), "--format", "dot"]));
    assert!(dot.starts_with("digraph desiree {"));
    assert!(dot.contains("\"F1\" [label=\"F1:f\"];"), "{dot}");
}

#[test]
fn output_is_deterministic() {
    let f = fixture("meeting_scheduler.dsr");
    for args in [vec!["check"], vec!["--json", "check"], vec!["export", "--format", "dot"]] {
        let mut args = args.clone();
        args.push(path_str(&f));
        assert_eq!(run(&args).stdout, run(&args).stdout, "{args:?}");
    }
}
