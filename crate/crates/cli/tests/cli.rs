use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use prefattach::growth::GrowthTrajectory;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prefattach"))
        .args(args)
        .env_remove("PREFATTACH_THREADS")
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn grow_writes_a_replayable_trajectory() {
    let text = run_ok(&["grow", "--model", "lpam", "--seed-tree", "((()))", "--n", "1000", "--rng", "7"]);
    assert!(text.starts_with("# command: grow\n# config-sha256: "));
    assert!(text.contains("\n# seed: 7\n"));
    let traj = GrowthTrajectory::from_jsonl(&text).unwrap();
    assert_eq!(traj.final_state.num_vertices(), 1000);
    assert!(traj.replays().unwrap());
}

#[test]
fn same_command_same_bytes() {
    let tmp = TempDir::new().unwrap();
    let args = ["discriminate", "--s1", "path4", "--s2", "star4", "--n", "50,100", "--reps", "300", "--rng", "7"];
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "2", "2"].iter().enumerate() {
        let dir = tmp.path().join(format!("run{i}"));
        let mut full: Vec<&str> = args.to_vec();
        let dir_str = dir.to_str().unwrap().to_string();
        full.extend(["--threads", threads, "--out", &dir_str]);
        run_ok(&full);
        outputs.push(read(&dir, "discriminate.csv"));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
    let rows = data_lines(&outputs[0]);
    assert_eq!(rows[0], "n,mean1,var1,mean2,var2,tv_lb");
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().skip(1).all(|r| r.split(',').count() == 6));

    let other = run_ok(&["discriminate", "--n", "50,100", "--reps", "300", "--rng", "8"]);
    assert_ne!(data_lines(&other), rows);
}

#[test]
fn written_config_reproduces_the_run() {
    let tmp = TempDir::new().unwrap();
    let first = tmp.path().join("first");
    let second = tmp.path().join("second");
    run_ok(&["looptree", "--n", "40", "--reps", "3", "--delta", "0.5", "--metric", "--rng", "11", "--out", first.to_str().unwrap()]);
    let config = first.join("config.toml");
    run_ok(&["--config", config.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    for name in ["config.toml", "looptree.csv", "metric.csv"] {
        assert_eq!(read(&first, name), read(&second, name), "{name}");
    }
    // Command-line flags override the file.
    let changed = run_ok(&["looptree", "--config", config.to_str().unwrap(), "--rng", "12"]);
    assert_ne!(data_lines(&changed), data_lines(&read(&first, "looptree.csv")));
}

#[test]
fn every_artifact_carries_the_header() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("dim");
    run_ok(&["dimension", "--fixture", "circle", "--n", "2000", "--centers", "10", "--out", dir.to_str().unwrap()]);
    let hash = read(&dir, "dimension.csv").lines().nth(1).unwrap().to_string();
    assert!(hash.starts_with("# config-sha256: "));
    assert_eq!(read(&dir, "ball_profile.csv").lines().nth(1).unwrap(), hash);
    let summary = read(&dir, "dimension.csv");
    let slope: f64 = data_lines(&summary)[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((slope - 1.0).abs() < 0.1, "slope {slope}");

    let json = run_ok(&["grow", "--model", "remy", "--n", "5", "--rng", "3"]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["header"]["seed"], 3);
    assert_eq!(doc["header"]["config_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(doc["data"]["leaves"].as_array().unwrap().len(), 6);
}

#[test]
fn metric_files_feed_ghdist() {
    let tmp = TempDir::new().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    run_ok(&["looptree", "--n", "4", "--metric", "--out", a.to_str().unwrap()]);
    run_ok(&["looptree", "--n", "4", "--metric", "--rng", "9", "--out", b.to_str().unwrap()]);
    let pairs = tmp.path().join("pairs.txt");
    fs::write(&pairs, "i,j\n0,0\n1,1\n2,2\n3,3\n").unwrap();
    let json = run_ok(&[
        "ghdist",
        "--x",
        a.join("metric.csv").to_str().unwrap(),
        "--y",
        b.join("metric.csv").to_str().unwrap(),
        "--correspondence",
        pairs.to_str().unwrap(),
        "--exact",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let d = &doc["data"];
    let (lower, exact, upper) = (d["lower_bound"].as_f64().unwrap(), d["exact"].as_f64().unwrap(), d["upper_bound"].as_f64().unwrap());
    assert!(lower <= exact && exact <= upper);
}

#[test]
fn seed_files_and_builtins() {
    let tmp = TempDir::new().unwrap();
    let file = tmp.path().join("seed.txt");
    fs::write(&file, "(()())\n").unwrap();
    let seed_arg = format!("@{}", file.display());
    let from_file = run_ok(&["grow", "--seed-tree", &seed_arg, "--n", "30"]);
    let inline = run_ok(&["grow", "--seed-tree", "(()())", "--n", "30"]);
    assert_eq!(data_lines(&from_file), data_lines(&inline));
    let star = run_ok(&["grow", "--seed-tree", "star3", "--n", "30"]);
    assert_eq!(data_lines(&star), data_lines(&inline));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["grow", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(run(&["grow", "--seed-tree", "(()"]).status.code(), Some(1));
    assert_eq!(run(&["grow", "--seed-tree", "path1"]).status.code(), Some(1));
    assert_eq!(run(&["exact-tv", "--n-max", "40"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--budget", "0"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let ok = run(&["verify", "--criteria", "3,4"]);
    assert_eq!(ok.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(doc["data"]["criteria"].as_array().unwrap().len(), 2);
    assert_eq!(doc["data"]["complete"], true);
}

#[test]
fn exact_tv_is_nonincreasing() {
    let csv = run_ok(&["exact-tv", "--s1", "path4", "--s2", "star4", "--n-max", "8"]);
    let tv: Vec<f64> = data_lines(&csv)[1..].iter().map(|r| r.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(tv.len(), 5);
    assert!(tv.windows(2).all(|w| w[1] <= w[0]));
}
