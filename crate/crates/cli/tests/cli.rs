use std::process::{Command, Output};

use constdepth::circuit::json;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_constdepth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn verify_or_coherent_exits_zero() {
    let o = run(&["verify", "--family", "or", "--n", "6", "--mode", "coherent"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["inputs_tested"], 64);
    assert!(v[0]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn dlp_prints_discrete_log() {
    let o = run(&["dlp", "--q", "11", "--x", "7", "--all-branches"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("l_q=7"));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["l_q"], 7);
    assert_eq!(v["instance"]["p"], 5);
    let total: f64 = v["branches"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["probability"].as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn threshold_above_n_is_usage_error() {
    let o = run(&["build", "--family", "th", "--n", "5", "--t", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).contains("t"));
}

#[test]
fn unknown_family_prints_usage() {
    let o = run(&["verify", "--family", "xor", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("unknown family") && err.contains("--help"));
}

#[test]
fn built_circuit_round_trips_to_identical_bytes() {
    for mode in ["gate", "gadget"] {
        let o = run(&[
            "build", "--family", "th", "--n", "6", "--t", "3", "--mode", mode,
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let text = stdout(&o);
        let c = json::from_json(text.trim_end(), None).unwrap();
        assert_eq!(json::to_json(&c), text.trim_end());
    }
}

#[test]
fn out_flag_writes_file_and_leaves_stdout_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("or.json");
    let o = run(&[
        "build",
        "--family",
        "or",
        "--n",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let c = json::from_json(&std::fs::read_to_string(&path).unwrap(), None).unwrap();
    assert_eq!(c.inputs.len(), 4);
}

#[test]
fn metrics_csv_has_header_row() {
    let o = run(&[
        "metrics", "--family", "th", "--n", "8,16", "--t", "n/2", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,t,l,elementary_size,depth,qubit_count,bound_value,ratio")
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn identical_command_lines_give_identical_bytes() {
    let cmds: [&[&str]; 3] = [
        &[
            "verify", "--family", "count", "--n", "1..4", "--mode", "branches",
        ],
        &["dlp", "--q", "23", "--x", "10", "--seed", "9"],
        &["metrics", "--family", "or", "--n", "4,8"],
    ];
    for args in cmds {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn every_family_and_mode_is_reachable() {
    let families: [&[&str]; 9] = [
        &["--family", "or"],
        &["--family", "and"],
        &["--family", "or_exp"],
        &["--family", "or_blocked", "--c", "2"],
        &["--family", "parity"],
        &["--family", "exact", "--t", "2"],
        &["--family", "th", "--t", "2", "--l", "1"],
        &["--family", "th_exactsum", "--t", "n/2"],
        &["--family", "count"],
    ];
    for fam in families {
        for mode in ["gate,branches", "gadget,coherent"] {
            let mut args = vec!["verify", "--n", "3", "--mode", mode];
            args.extend_from_slice(fam);
            let o = run(&args);
            assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        }
    }
    let o = run(&["dlp", "--q", "7", "--x", "3", "--mode", "sample"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}
