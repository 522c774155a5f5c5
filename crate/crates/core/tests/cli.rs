use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hidden-homfly")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_text_and_json() {
    let o = bin(&["eval", "--word", "1 1 1", "--strands", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("(2*a^1 + 1*a^2)*T^0"), "{text}");
    assert!(text.contains("T0            2"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("memo entries"));

    let o = bin(&["--emit", "json", "--convention", "paper", "eval", "--word", "", "--strands", "3"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["Q"]["components"], 3);
    assert_eq!(v["Q"]["convention"], "paper");
    assert_eq!(v["degree"], 2);
}

#[test]
fn eval_input_errors_exit_two() {
    for args in [
        &["eval", "--word", "0", "--strands", "2"][..],
        &["eval", "--word", "3", "--strands", "2"],
        &["eval", "--word", "x", "--strands", "2"],
        &["eval", "--word", "1", "--strands", "0"],
        &["--convention", "other", "eval", "--word", "1", "--strands", "2"],
    ] {
        let o = bin(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn table_matches_closed_forms() {
    for conv in ["forced", "paper"] {
        let o = bin(&["--convention", conv, "table", "--kmin=-4", "--kmax", "5"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(!stdout(&o).contains("MISMATCH"));
    }
    let o = bin(&["--emit", "json", "table", "--kmin=-1", "--kmax=-1"]);
    assert!(stdout(&o).contains("\"Q_text\":\"(-1*a^-2)*T^0\""), "{}", stdout(&o));
}

#[test]
fn tree_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let o = bin(&["tree", "--word", "1 2 1 2", "--strands", "3", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let tree = hidden_homfly::TreeRecord::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    let f = hidden_homfly::replay_tree(&tree, hidden_homfly::LeafConvention::Forced).unwrap();
    let w = hidden_homfly::BraidWord::new(3, vec![1, 2, 1, 2]).unwrap();
    assert_eq!(f, hidden_homfly::Engine::new().eval_f(&w, &Default::default()).0);

    let o = bin(&["tree", "--word", "-1", "--strands", "2", "--format", "dot"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"), "{dot}");
    assert!(dot.contains("−α⁻¹ξ⁻¹"), "{dot}");

    let o = bin(&["tree", "--word", "1 1", "--strands", "2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let root = &v["nodes"][v["root"].as_u64().unwrap() as usize];
    assert_eq!(root["kind"], "split");
    assert_eq!(root["children"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_writes_reports_and_gates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    let o = bin(&["verify", "--suite", "all", "--cases", "40", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let names: Vec<String> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert!(names.contains(&"degree-law.json".to_string()));
    assert!(names.contains(&"tree-independence-paper.json".to_string()));

    let o = bin(&["--convention", "paper", "verify", "--suite", "tree-independence", "--cases", "40"]);
    assert_eq!(o.status.code(), Some(0), "report-only suite must not gate");
    let o = bin(&["verify", "--suite", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corpus_is_ordered_and_thread_stable() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.txt");
    fs::write(
        &input,
        "# name ; strands ; letters ; expected\ntrefoil ; 2 ; 1 1 1 ; (2*a^1 + 1*a^2)*T^0\nfig8 ; 3 ; 1 -2 1 -2\nbroken ; 2 ; 1 x\nunlink ; 3 ;  ; 1\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "2", "8"] {
        let dest = dir.path().join(format!("out{threads}.jsonl"));
        let o = bin(&["--threads", threads, "corpus", input.to_str().unwrap(), "--out", dest.to_str().unwrap()]);
        assert!(o.status.success());
        outputs.push(fs::read(&dest).unwrap());
    }
    assert!(outputs.iter().all(|o| o == &outputs[0]));
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let names: Vec<&str> = rows.iter().map(|r| r["name"].as_str().unwrap_or("")).collect();
    assert_eq!(names, ["trefoil", "fig8", "", "unlink"]);
    assert_eq!(rows[0]["matches_expected"], true);
    assert!(rows[2]["error"].is_string());
    assert_eq!(rows[3]["matches_expected"], false);

    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    let o = bin(&["corpus", empty.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
}

#[test]
fn fixture_corpus_regresses() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/small.txt");
    let o = bin(&["corpus", path]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 9);
    for r in rows {
        assert_eq!(r["matches_expected"], true, "{r}");
    }
}
