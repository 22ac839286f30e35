use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use adaptive_voter::analysis::SweepRecord;
use adaptive_voter::engine::StopReason;
use adaptive_voter::graph::VoterGraph;
use adaptive_voter::harness::{read_csv, CSV_HEADER};
use serde_json::Value;

fn avm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avm")).args(args).output().unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn err(out: &Output) -> String {
    assert!(!out.status.success());
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn sweep_to_stdout_has_the_exact_header() {
    let csv = ok(&avm(&["sweep", "--alphas", "0.5", "--us", "0.5", "--runs", "2", "--agents", "20", "--edges", "40"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.count(), 2);
}

#[test]
fn zero_runs_give_a_header_only_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("empty.csv");
    let o = out.to_str().unwrap();
    ok(&avm(&["sweep", "--runs", "0", "--out", o]));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), format!("{CSV_HEADER}\n"));
}

#[test]
fn reruns_are_byte_identical_for_every_model() {
    let dir = tempfile::tempdir().unwrap();
    for model in ["dtmc", "ctmc-weighted", "ctmc-mass-action", "ctmc-uniform", "ctmc-lcm"] {
        let alphas = if model == "ctmc-mass-action" { "0.01,1" } else { "0.2,0.8" };
        let mut bytes = Vec::new();
        for (i, jobs) in ["1", "4"].into_iter().enumerate() {
            let out = dir.path().join(format!("{model}-{i}.csv"));
            ok(&avm(&[
                "sweep", "--model", model, "--alphas", alphas, "--us", "0.5,0.2", "--runs", "4", "--agents", "30",
                "--edges", "90", "--seed", "7", "--jobs", jobs, "--out", out.to_str().unwrap(),
            ]));
            bytes.push(std::fs::read(&out).unwrap());
        }
        assert_eq!(bytes[0], bytes[1], "{model}");

        let rows: Vec<SweepRecord> = read_csv(bytes[0].as_slice()).unwrap();
        assert_eq!(rows.len(), 16);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.model, model);
            assert_eq!(r.run, (i % 4) as u64);
            assert_eq!(r.wallclock_ms, 0);
            if r.fragmented {
                assert!(r.minority_frac_final > 0.0);
            }
            assert!(r.absorb_reason.is_absorbing());
        }
    }
}

#[test]
fn timing_flag_keeps_the_schema() {
    let csv = ok(&avm(&["sweep", "--alphas", "0.1", "--us", "0.5", "--runs", "3", "--timing"]));
    let rows: Vec<SweepRecord> = read_csv(csv.as_bytes()).unwrap();
    assert_eq!(rows.len(), 3);
}

#[test]
fn bad_flags_are_named() {
    assert!(err(&avm(&["sweep", "--alphas", "1.5"])).contains("--alphas"));
    assert!(err(&avm(&["sweep", "--us", "1.5"])).contains("--us"));
    assert!(err(&avm(&["sweep", "--jobs", "0"])).contains("--jobs"));
    assert!(err(&avm(&["sweep", "--agents", "10", "--edges", "1000"])).contains("--edges"));
    assert!(err(&avm(&["sweep", "--out", "/nonexistent-dir/x.csv"])).contains("--out"));
    assert!(err(&avm(&["sweep", "--model", "mdp"])).contains("mdp"));
    assert!(!avm(&["sweep", "--edges", "10", "--pair-prob", "0.1"]).status.success());
}

#[test]
fn run_from_a_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("t.jsonl");
    let fin = dir.path().join("final.json");
    let out = ok(&avm(&[
        "run", "--model", "ctmc-weighted", "--alpha", "0", "--seed", "4",
        "--graph", fixture("pair.json").to_str().unwrap(),
        "--trajectory-out", traj.to_str().unwrap(),
        "--final-graph-out", fin.to_str().unwrap(),
    ]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["effective_events"], 1);
    assert_eq!(v["summary"]["reason"], "NoDiscordant");
    assert_eq!(v["components"]["n_components"], 1);
    assert_eq!(v["components"]["fragmented"], false);

    let lines: Vec<Value> = std::fs::read_to_string(&traj)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let kinds: Vec<&str> = lines.iter().map(|l| l["type"].as_str().unwrap()).collect();
    assert_eq!(kinds.first(), Some(&"sample"));
    assert_eq!(kinds.iter().filter(|k| **k == "event").count(), 1);
    assert_eq!(kinds.last(), Some(&"final"));

    let g = VoterGraph::from_json_str(&std::fs::read_to_string(&fin).unwrap()).unwrap();
    assert_eq!(g.counts().n_01, 0);
}

#[test]
fn worked_rewire_example_replays_by_seed() {
    let args = |seed: &'static str| {
        avm(&[
            "run", "--model", "dtmc", "--alpha", "1", "--seed", seed,
            "--graph", fixture("three_agents.json").to_str().unwrap(),
        ])
    };
    let first = ok(&args("9"));
    assert_eq!(first, ok(&args("9")));
    let v: Value = serde_json::from_str(&first).unwrap();
    let c = &v["components"];
    assert_eq!(c["n_components"], 2);
    assert_eq!(c["fragmented"], true);
    assert_eq!(c["components"][0]["size"], 2);
    assert_eq!(c["components"][0]["opinion_profile"], "AllOne");
    assert!((c["minority_fraction"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn lcm_stall_is_reported() {
    let out = ok(&avm(&[
        "run", "--model", "ctmc-lcm", "--alpha", "0.5",
        "--graph", fixture("three_agents.json").to_str().unwrap(),
    ]));
    let v: Value = serde_json::from_str(&out).unwrap();
    let reason: StopReason = serde_json::from_value(v["summary"]["reason"].clone()).unwrap();
    assert_eq!(reason, StopReason::NoEffectiveRule);
    assert_eq!(v["summary"]["absorbed"], true);
}

#[test]
fn fixtures_parse() {
    for name in ["pair.json", "three_agents.json", "four_agents.json", "parallel_groups.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let g = VoterGraph::from_json_str(&text).unwrap();
        assert_eq!(g.to_json_string(), text.trim_end());
    }
    let g = VoterGraph::from_json_str(&std::fs::read_to_string(fixture("parallel_groups.json")).unwrap()).unwrap();
    let c = g.counts();
    assert_eq!((c.n_11, c.n_01, c.n_groups()), (1, 2, 3));
}

#[test]
fn bad_graph_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"opinions":[1,0],"edges":[[0,0]]}"#).unwrap();
    let msg = err(&avm(&["run", "--graph", bad.to_str().unwrap()]));
    assert!(msg.starts_with("error:"), "{msg}");
}
