use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::tempdir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn run(bin: &str, args: &[&str]) -> Output {
    Command::new(bin).args(args).env_remove("RUST_LOG").output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn qa(args: &[&str]) -> String {
    stdout(&run(env!("CARGO_BIN_EXE_qa"), args))
}

fn answer_args<'a>(cmd: &'a str, dir: &'a str, question: &'a str) -> Vec<&'a str> {
    vec![cmd, "--corpus", dir, "--question", question]
}

#[test]
fn answers_fixture_question() {
    let dir = fixture("ny");
    let q = dir.join("question.json");
    let out = qa(&answer_args("answer", dir.to_str().unwrap(), q.to_str().unwrap()));
    assert_eq!(out.trim(), "ny-daylight: (B) June objective 10.7500");
}

#[test]
fn json_selection_and_explain_agree() {
    let dir = fixture("sleet");
    let q = dir.join("question.json");
    let (d, q) = (dir.to_str().unwrap(), q.to_str().unwrap());
    let mut args = answer_args("answer", d, q);
    args.push("--json");
    let sel: Value = serde_json::from_str(&qa(&args)).unwrap();
    assert_eq!(sel["chosen"], json!([3]));
    let explained: Value = serde_json::from_str(&qa(&answer_args("explain", d, q))).unwrap();
    assert_eq!(explained["chosen"], json!([3]));
    assert_eq!(explained["violations"], json!([]));
    assert!(explained["stats"]["n_active_rows"].as_u64().unwrap() >= 2);
}

#[test]
fn eval_reports_tie_under_ablation() {
    let dir = fixture("phase");
    let tmp = tempdir().unwrap();
    let report = tmp.path().join("report.json");
    let out = qa(&[
        "eval",
        "--corpus",
        dir.to_str().unwrap(),
        "--questions",
        dir.join("question.json").to_str().unwrap(),
        "--ablation",
        "no_relation_match",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.contains("(2-way tie)"), "{out}");
    let rep: Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(rep["score"], json!(50.0));
    assert_eq!(rep["n_ties"], json!(1));
}

#[test]
fn config_file_limits_chaining() {
    let dir = fixture("ny");
    let tmp = tempdir().unwrap();
    let config = tmp.path().join("qa.toml");
    fs::write(&config, "max_tables_to_chain = 1\n").unwrap();
    let q = dir.join("question.json");
    let mut args = vec!["--config", config.to_str().unwrap()];
    args.extend(answer_args("answer", dir.to_str().unwrap(), q.to_str().unwrap()));
    let out = qa(&args);
    assert!(out.contains("(B) June | (C) December"), "{out}");
}

#[test]
fn perturb_writes_variants() {
    let dir = fixture("ny");
    let tmp = tempdir().unwrap();
    let words = tmp.path().join("words.txt");
    fs::write(&words, "new\nyork\neastern\ndaylight\nhistory\nmonth\nyears\nstate\nsun\nhours\n").unwrap();
    let out_path = tmp.path().join("perturbed.jsonl");
    qa(&[
        "perturb",
        "--questions",
        dir.join("question.json").to_str().unwrap(),
        "--freq-words",
        words.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
        "--variants",
        "4",
    ]);
    let lines: Vec<Value> = fs::read_to_string(out_path).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["options"], json!(["eastern", "June", "history", "years"]));
    assert!(lines.iter().all(|l| l["answerKey"] == json!(1) && l["options"][1] == json!("June")));
}

#[test]
fn score_options_emits_objectives_and_features() {
    let dir = fixture("phase");
    let tmp = tempdir().unwrap();
    let out_path = tmp.path().join("scores.json");
    qa(&[
        "score-options",
        "--corpus",
        dir.to_str().unwrap(),
        "--questions",
        dir.join("question.json").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let scores: Value = serde_json::from_str(&fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(scores["solver"], json!("tableqa"));
    let per: Vec<f64> = serde_json::from_value(scores["scores"]["phase"].clone()).unwrap();
    assert_eq!(per.len(), 4);
    assert!((per[0] - 5.4).abs() < 1e-9, "{per:?}");
    assert!(per[1..].iter().all(|&z| z < per[0]));
    assert!(scores["features"]["phase"].as_array().unwrap().iter().all(|f| f.as_array().unwrap().len() == 11));
}

#[test]
fn ensemble_train_and_predict() {
    let tmp = tempdir().unwrap();
    let golds = [0usize, 2, 1, 3, 2, 0];
    let mut questions = String::new();
    let mut ir = serde_json::Map::new();
    let mut pmi = serde_json::Map::new();
    for (i, &g) in golds.iter().enumerate() {
        let id = format!("q{i}");
        let options = ["a dog", "a cat", "a bird", "a fish"];
        questions.push_str(&json!({"id": id, "question": "Which animal barks?", "options": options, "answerKey": g}).to_string());
        questions.push('\n');
        ir.insert(id.clone(), json!((0..4).map(|m| if m == g { 0.9 } else { 0.2 }).collect::<Vec<_>>()));
        pmi.insert(id, json!([0.25, 0.25, 0.25, 0.25]));
    }
    let qpath = tmp.path().join("questions.jsonl");
    fs::write(&qpath, questions).unwrap();
    let scores = tmp.path().join("scores");
    fs::create_dir(&scores).unwrap();
    fs::write(scores.join("ir.json"), json!({"solver": "ir", "scores": ir}).to_string()).unwrap();
    fs::write(scores.join("pmi.json"), json!({"solver": "pmi", "scores": pmi}).to_string()).unwrap();
    let model = tmp.path().join("model.json");
    let (s, q, m) = (scores.to_str().unwrap(), qpath.to_str().unwrap(), model.to_str().unwrap());

    let trained = qa(&["ensemble", "train", "--scores", s, "--questions", q, "--model", m]);
    assert!(trained.starts_with("trained on 6 questions"), "{trained}");
    let predicted = qa(&["ensemble", "predict", "--scores", s, "--questions", q, "--model", m]);
    assert!(predicted.contains("score 100.0 over 6 questions"), "{predicted}");

    fs::remove_file(scores.join("pmi.json")).unwrap();
    let mismatch = run(env!("CARGO_BIN_EXE_qa"), &["ensemble", "predict", "--scores", s, "--questions", q, "--model", m]);
    assert!(!mismatch.status.success());
}

#[test]
fn missing_corpus_is_an_error() {
    let out = run(env!("CARGO_BIN_EXE_qa"), &["answer", "--corpus", "/nonexistent/corpus", "--question", "q.json"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("loading corpus"));
}

#[test]
fn ilp_solves_json_problem() {
    let tmp = tempdir().unwrap();
    let path = tmp.path().join("p.json");
    let problem = json!({
        "vars": [{"name": "x", "coeff": 3.0}, {"name": "y", "coeff": 2.0}, {"name": "z", "coeff": 4.0}],
        "cons": [
            {"terms": [["x", 1.0], ["y", 1.0], ["z", 1.0]], "sense": "<=", "rhs": 2.0, "tag": "budget"},
            {"terms": [["x", 1.0], ["z", 1.0]], "sense": "<=", "rhs": 1.0, "tag": "exclusive"}
        ]
    });
    fs::write(&path, problem.to_string()).unwrap();
    let out = stdout(&run(env!("CARGO_BIN_EXE_ilp"), &["solve", path.to_str().unwrap()]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "status: optimal");
    assert_eq!(lines[1], "objective: 6");
    assert_eq!(&lines[3..], ["y = 1", "z = 1"]);

    fs::write(
        &path,
        json!({"vars": [{"name": "x", "coeff": 1.0}], "cons": [{"terms": [["x", 1.0]], "sense": ">=", "rhs": 2.0, "tag": "t"}]})
            .to_string(),
    )
    .unwrap();
    let out = stdout(&run(env!("CARGO_BIN_EXE_ilp"), &["solve", path.to_str().unwrap()]));
    assert!(out.starts_with("status: infeasible\n"), "{out}");
}
