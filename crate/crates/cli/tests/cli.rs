use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ihs_cli::instance::parse_instance;
use ihs_cli::witness::SolveReport;
use ihs_core::Status;

fn ihs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ihs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut args = vec!["gen"];
    args.extend_from_slice(extra);
    args.extend_from_slice(&["-o", path_str(&path)]);
    let out = ihs(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn barrier_is_unsat_for_both_solvers() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen(dir.path(), "b.json", &["--model", "barrier", "--k", "2", "--n", "12"]);
    let i = path_str(&inst);
    let ham = ihs(&["solve", "hamilton-power", i, "--k", "2"]);
    assert_eq!(ham.status.code(), Some(10));
    let report: SolveReport = serde_json::from_slice(&ham.stdout).unwrap();
    assert_eq!(report.status, Status::Unsat);
    assert!(report.witness.is_none());
    assert_eq!(ihs(&["solve", "clique-factor", i, "--r", "3"]).status.code(), Some(10));
}

#[test]
fn sat_certificates_pass_check() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen(dir.path(), "k.json", &["--model", "complete", "--n", "9", "--bound", "1", "--seed", "4"]);
    let sol = dir.path().join("sol.json");
    let out = ihs(&["solve", "hamilton-power", path_str(&inst), "--k", "2", "--threads", "3", "-o", path_str(&sol)]);
    assert_eq!(out.status.code(), Some(0));
    let check = ihs(&["check", path_str(&inst), "--witness", path_str(&sol), "--bound", "1"]);
    assert_eq!(check.status.code(), Some(0));

    // tampering with the cycle is caught
    let mut report: SolveReport = serde_json::from_slice(&std::fs::read(&sol).unwrap()).unwrap();
    if let Some(ihs_cli::witness::WitnessFile::HamiltonPower { cycle, .. }) = &mut report.witness {
        cycle.pop();
    }
    std::fs::write(&sol, serde_json::to_vec(&report).unwrap()).unwrap();
    let check = ihs(&["check", path_str(&inst), "--witness", path_str(&sol)]);
    assert_eq!(check.status.code(), Some(1));
    assert_eq!(ihs(&["check", path_str(&inst), "--bound", "0"]).status.code(), Some(1));
}

#[test]
fn timeouts_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen(dir.path(), "k.json", &["--model", "complete", "--n", "12", "--bound", "2", "--seed", "1"]);
    let i = path_str(&inst);
    let out = ihs(&["solve", "hamilton-power", i, "--k", "2", "--budget-nodes", "1", "--deterministic"]);
    assert_eq!(out.status.code(), Some(20));
    assert_eq!(ihs(&["solve", "hamilton-power", i]).status.code(), Some(2));
    assert_eq!(ihs(&["check", "/no/such/file.json"]).status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"format_version": 1, "n": 3, "edges": [[0, 1]], "incompat": {"2": [[[0, 1], [0, 1]]]}}"#).unwrap();
    let out = ihs(&["check", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("incompat.\"2\"[0]"));
}

#[test]
fn gen_output_is_canonical() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in [
        ("b.json", vec!["--model", "barrier", "--k", "2", "--n", "15"]),
        ("g.json", vec!["--model", "gnp", "--n", "14", "--p", "0.7", "--bound", "3", "--seed", "9"]),
        ("d.json", vec!["--model", "dirac", "--n", "10", "--seed", "2"]),
    ] {
        let path = gen(dir.path(), name, &args);
        let text = std::fs::read_to_string(&path).unwrap();
        let inst = parse_instance(text.as_bytes()).unwrap();
        assert_eq!(ihs_cli::instance::emit_instance(&inst.graph, &inst.system, &inst.metadata), text);
        let again = gen(dir.path(), &format!("again-{name}"), &args);
        assert_eq!(std::fs::read_to_string(again).unwrap(), text);
    }
}

#[test]
fn connect_mates_and_absorbers() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen(dir.path(), "k.json", &["--model", "complete", "--n", "8"]);
    let i = path_str(&inst);
    let out = ihs(&["solve", "connect", i, "--k", "2", "--from", "0,1", "--to", "2,3", "--forbid", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let report: SolveReport = serde_json::from_slice(&out.stdout).unwrap();
    let Some(ihs_cli::witness::WitnessFile::PowerPath { path, .. }) = report.witness else {
        panic!("expected a path")
    };
    assert_eq!(path, vec![0, 1, 3, 2]);

    let out = ihs(&["mates", i, "--tuple", "0,1", "--limit", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["count"], 6 * 5);
    assert_eq!(doc["mates"].as_array().unwrap().len(), 3);

    let out = ihs(&["absorbers", i, "--vertex", "0", "--k", "1"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["count"], 7 * 6);
    // a pair is not a compatible clique when its edge is missing
    let path = dir.path().join("p.json");
    std::fs::write(&path, r#"{"format_version": 1, "n": 4, "edges": [[0, 1], [2, 3]]}"#).unwrap();
    assert_eq!(ihs(&["mates", path_str(&path), "--tuple", "0,2"]).status.code(), Some(2));
}

#[test]
fn pipeline_certifies_a_dense_host() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen(dir.path(), "h.json", &["--model", "complete", "--n", "40", "--bound", "1", "--seed", "2"]);
    let rep = dir.path().join("r.json");
    let out = ihs(&["pipeline", path_str(&inst), "--k", "2", "--seed", "1", "-o", path_str(&rep)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: ihs_core::pipeline::PipelineReport = serde_json::from_slice(&std::fs::read(&rep).unwrap()).unwrap();
    assert_eq!(report.certificate().unwrap().len(), 40);

    let params = dir.path().join("p.toml");
    std::fs::write(&params, "k = 2\np = 0.0\n").unwrap();
    let out = ihs(&["pipeline", path_str(&inst), "--params", path_str(&params)]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::write(&params, "k = 2\nwobble = 1\n").unwrap();
    assert_eq!(ihs(&["pipeline", path_str(&inst), "--params", path_str(&params)]).status.code(), Some(2));
}

#[test]
fn experiment_writes_stable_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("e.toml");
    std::fs::write(
        &cfg,
        "model = \"gnp\"\nn = [7, 8]\nk = [1, 2]\nbound = [1]\nseeds = [0, 1]\np = 0.8\n",
    )
    .unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let run = ihs(&["experiment", "--config", path_str(&cfg), "--deterministic", "-o", path_str(out)]);
        assert_eq!(run.status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 1 + 8);
    assert!(text.starts_with("schema_version,instance_id,n,k,bound,min_degree,status,"));

    std::fs::write(&cfg, "model = \"complete\"\nn = [5]\nk = [2]\nbudget_nodes = 0\n").unwrap();
    assert_eq!(ihs(&["experiment", "--config", path_str(&cfg)]).status.code(), Some(2));
}
