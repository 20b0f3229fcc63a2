use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use decolab::circuit::{parse_circuit, run_ideal};
use decolab::linalg::{trace_distance, DensityMatrix};

fn decolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_decolab")).args(args).env_remove("DECOLAB_MAX_QUBITS").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn wire(depth: usize) -> String {
    let mut text = String::from("k 1\nwidth 1\n");
    for _ in 0..depth {
        text.push_str("layer\ngate I [0] -> [0]\n");
    }
    text
}

const BELL: &str = "k 2\nwidth 2\nlayer\ngate H [0] -> [0]\nlayer\ngate CNOT [0,1] -> [0,1]\n";

#[test]
fn bound_at_full_rate() {
    let out = decolab(&["bound", "--k", "2", "--eta", "1", "--depth", "3"]);
    assert!(out.status.success());
    let f: Vec<String> = rows(&stdout(&out)).into_iter().map(|r| r[1].clone()).collect();
    assert_eq!(f, ["0", "1", "1", "1"]);
}

#[test]
fn bound_hand_iterated_rows() {
    let out = decolab(&["bound", "--k", "2", "--eta", "0.6", "--depth", "2", "--n", "1"]);
    let text = stdout(&out);
    assert!(text.starts_with("i,f_i,theta_pow_i,bound_n1\n"));
    assert!(text.contains("\n1,0.36,"));
    assert!(text.contains("\n2,0.553536,"));
    assert!(stderr(&out).contains("above threshold"));
}

#[test]
fn bound_flags_the_boundary() {
    let out = decolab(&["bound", "--k", "2", "--eta", "0.5"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("at/below threshold"));
    assert_eq!(rows(&stdout(&out)).len(), 11);
}

#[test]
fn bound_columns_per_size() {
    let out = decolab(&["bound", "--k", "3", "--eta", "0.9", "--depth", "1", "--n", "3"]);
    assert!(stdout(&out).starts_with("i,f_i,theta_pow_i,bound_n1,bound_n2,bound_n3\n"));
}

#[test]
fn sweep_examples() {
    let out = decolab(&["sweep", "--k", "2", "--eta", "1.0", "--n", "4"]);
    assert_eq!(stdout(&out), "k,eta,n,eps,min_depth\n2,1,4,0.01,1\n");
    let out = decolab(&["sweep", "--k", "2", "--eta", "0.75", "--n", "1", "--eps", "0.01"]);
    assert_eq!(rows(&stdout(&out))[0][4], "7");
}

#[test]
fn sweep_is_monotone_in_n_and_marks_subthreshold_points() {
    let out = decolab(&["sweep", "--k", "1,2,3", "--eta", "0.5,0.8,0.95", "--n", "1,2,8,32,128"]);
    assert!(out.status.success());
    let table = rows(&stdout(&out));
    assert_eq!(table.len(), 45);
    for chunk in table.chunks(5) {
        if chunk[0][4] == "n/a" {
            assert!(chunk.iter().all(|r| r[4] == "n/a"));
            continue;
        }
        let depths: Vec<usize> = chunk.iter().map(|r| r[4].parse().unwrap()).collect();
        assert!(depths.windows(2).all(|w| w[0] <= w[1]), "{chunk:?}");
    }
    // k = 2, η = 0.5 sits on the threshold
    assert!(table.iter().any(|r| r[0] == "2" && r[1] == "0.5" && r[4] == "n/a"));
}

#[test]
fn check_suites_pass() {
    let out = decolab(&["check", "--suite", "noise-action", "--qubits", "3", "--trials", "100", "--seed", "1"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let line = stdout(&out);
    let residual: f64 = line.split_whitespace().nth(4).unwrap().parse().unwrap();
    assert!(residual <= 1e-10);
    let out = decolab(&["check", "--suite", "contractivity", "--trials", "200"]);
    assert!(out.status.success() && stdout(&out).contains("PASS"));
    let out = decolab(&["check", "--suite", "kraus"]);
    assert!(out.status.success() && stdout(&out).starts_with("kraus cases 16 "));
    let out = decolab(&["check", "--trials", "10"]);
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn simulate_without_noise_matches_ideal() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bell.qc", BELL);
    let out = decolab(&["simulate", "--circuit", &path, "--eta", "0", "--probes", "basis"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let q = parse_circuit(BELL).unwrap();
    let finals: Vec<DensityMatrix> =
        (0..4).map(|i| run_ideal(&q, &DensityMatrix::basis(2, i).unwrap()).unwrap().output).collect();
    let mut ideal_max: f64 = 0.0;
    for a in 0..4 {
        for b in a + 1..4 {
            ideal_max = ideal_max.max(trace_distance(&finals[a], &finals[b]).unwrap());
        }
    }
    let last = rows(&stdout(&out)).into_iter().filter(|r| r[0] == "2" && r[2] == "2").next().unwrap();
    assert!((last[3].parse::<f64>().unwrap() - ideal_max).abs() < 1e-12);
    assert!(stderr(&out).contains("practically_worthless no (witness)"));
}

#[test]
fn simulate_identity_wire_decay() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "wire1.qc", &wire(11));
    let out = decolab(&["simulate", "--circuit", &path, "--eta", "0.5", "--probes", "basis"]);
    let summary = stderr(&out);
    let field = |key: &str| {
        let words: Vec<&str> = summary.split_whitespace().collect();
        words[words.iter().position(|w| *w == key).unwrap() + 1].to_string()
    };
    let d: f64 = field("final_max_distance").parse().unwrap();
    assert!((d - 0.5f64.powi(10)).abs() < 1e-12);
    assert_eq!(field("practically_worthless"), "yes");
    assert!(summary.contains("(heuristic)"));
}

#[test]
fn simulate_random_circuit_has_nonnegative_slack() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("random_k2_w4_d12.qc");
    let c = circuit.to_str().unwrap();
    assert!(decolab(&["random", "--k", "2", "--width", "4", "--depth", "12", "--seed", "3", "--output", c]).status.success());
    let report = dir.path().join("report.csv");
    let out = decolab(&["simulate", "--circuit", c, "--eta", "0.6", "--output", report.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("counterexamples 0"));
    let text = fs::read_to_string(&report).unwrap();
    assert!(text.starts_with("level,i_width,n,empirical_d,bound,slack\n"));
    let table = rows(&text);
    assert_eq!(table.len(), 13 * 5);
    for r in table {
        assert!(r[5].parse::<f64>().unwrap() >= -1e-8, "{r:?}");
    }
}

#[test]
fn simulate_side_files_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bell.qc", BELL);
    let traj = dir.path().join("traj.json");
    let states = dir.path().join("states.txt");
    let rec = dir.path().join("rec.json");
    let out = decolab(&[
        "simulate", "--circuit", &path, "--eta", "0.2", "--probes", "pair:0,3", "--format", "json",
        "--trajectory", traj.to_str().unwrap(), "--states", states.to_str().unwrap(),
        "--recursion", rec.to_str().unwrap(), "--noise-after-last",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.as_array().unwrap().len(), 9);
    assert_eq!(report[0].as_object().unwrap().keys().collect::<Vec<_>>(), ["level", "i_width", "n", "empirical_d", "bound", "slack"]);
    let traj: serde_json::Value = serde_json::from_str(&fs::read_to_string(traj).unwrap()).unwrap();
    assert_eq!(traj, serde_json::json!([{"level": 0, "n_i": 2}, {"level": 1, "n_i": 2}, {"level": 2, "n_i": 2}]));
    let states = fs::read_to_string(states).unwrap();
    assert_eq!(states.lines().count(), 3 * 5);
    assert!(states.starts_with("level 0 qubits 2\n1+0i 0+0i 0+0i 0+0i\n"));
    let rec: serde_json::Value = serde_json::from_str(&fs::read_to_string(rec).unwrap()).unwrap();
    assert_eq!(rec.as_array().unwrap().len(), 2 * 3);
}

#[test]
fn parse_errors_exit_two_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.qc", "k 2\nwidth 2\nlayer\ngate CNOT [0,1] -> [0,1]\ngate H [1] -> [1]\n");
    let out = decolab(&["simulate", "--circuit", &path, "--eta", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("qubit 1"));
    let path = write(dir.path(), "bad2.qc", "k 2\nwidth 1\nlayer\ngate FOO [0] -> [0]\n");
    let out = decolab(&["simulate", "--circuit", &path, "--eta", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bound", "--k", "2", "--eta", "1.5"][..],
        &["bound", "--k", "0", "--eta", "0.5"],
        &["sweep", "--k", "2", "--eta", "0.7", "--n", "1", "--eps", "0"],
        &["simulate", "--eta", "0.5"],
        &["simulate", "--circuit", "/nonexistent.qc", "--eta", "0.5"],
        &["simulate", "--circuit", "x.qc", "--eta", "0.5", "--probes", "bogus"],
        &["random", "--k", "5", "--width", "2", "--depth", "1"],
        &["frobnicate"],
    ] {
        assert_eq!(decolab(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn width_cap_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bell.qc", BELL);
    let out = Command::new(env!("CARGO_BIN_EXE_decolab"))
        .args(["simulate", "--circuit", &path, "--eta", "0.5"])
        .env("DECOLAB_MAX_QUBITS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(decolab(&["random", "--k", "2", "--width", "11", "--depth", "1"]).status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_decolab"))
        .args(["random", "--k", "2", "--width", "2", "--depth", "1"])
        .env("DECOLAB_MAX_QUBITS", "13")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = decolab(&["simulate", "--circuit", &path, "--eta", "0.5", "--probes", "pair:0,9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn jobs_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.qc");
    decolab(&["random", "--k", "2", "--width", "3", "--depth", "5", "--seed", "9", "--output", c.to_str().unwrap()]);
    let one = decolab(&["--jobs", "1", "simulate", "--circuit", c.to_str().unwrap(), "--eta", "0.7"]);
    let many = decolab(&["--jobs", "3", "simulate", "--circuit", c.to_str().unwrap(), "--eta", "0.7"]);
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stderr, many.stderr);
    assert_eq!(decolab(&["--jobs", "0", "check", "--suite", "kraus"]).status.code(), Some(2));
}
