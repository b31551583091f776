use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"
seed = 3
[generate]
num_qubits = 3
dataset_size = 40
[anneal]
max_iterations = 5
samples_per_eval = 20
holdout_samples = 50
local_search = false
[diversity]
pairs_per_bin = 5
[sensors.soil]
ensemble_size = 90
[sensors.dark_matter]
ensemble_size = 20
[classify]
samples_per_class = 10
folds = 3
max_iterations = 10
trajectories = 4
[compare]
families = ["A1", "A3"]
targets = ["uniform", "gaussian"]
"#;

fn cedist(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cedist"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn setup(extra: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.toml"), format!("{SMALL}{extra}")).unwrap();
    dir
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn generate_writes_artifacts_and_reruns_identically() {
    let dir = setup("");
    let stdout = ok(&cedist(dir.path(), &["--config", "c.toml", "--out", "a", "--quiet", "generate"]));
    assert!(stdout.starts_with("final TVD: "), "{stdout}");
    assert_eq!(stdout.lines().count(), 1);
    for f in ["config.toml", "run.txt", "dataset.txt", "histogram.txt", "swap.txt"] {
        assert!(dir.path().join("a").join(f).exists(), "missing {f}");
    }
    ok(&cedist(dir.path(), &["--config", "a/dataset.txt", "--out", "b", "--quiet", "generate"]));
    let read = |p: &str| std::fs::read(dir.path().join(p)).unwrap();
    assert_eq!(read("a/dataset.txt"), read("b/dataset.txt"));
    assert_eq!(read("a/run.txt"), read("b/run.txt"));
}

#[test]
fn seed_override_changes_the_run() {
    let dir = setup("");
    ok(&cedist(dir.path(), &["--config", "c.toml", "--out", "a", "--quiet", "generate"]));
    ok(&cedist(dir.path(), &["--config", "c.toml", "--seed", "99", "--out", "b", "--quiet", "generate"]));
    let read = |p: &str| std::fs::read(dir.path().join(p)).unwrap();
    assert_ne!(read("a/dataset.txt"), read("b/dataset.txt"));
    let echoed = std::fs::read_to_string(dir.path().join("b/config.toml")).unwrap();
    assert!(echoed.contains("seed = 99"));
}

#[test]
fn sensors_then_classify() {
    let dir = setup("");
    ok(&cedist(dir.path(), &["--config", "c.toml", "--out", "o", "sensors"]));
    for f in ["soil_high.txt", "soil_low.txt", "dm_weak.txt", "dm_strong.txt"] {
        assert!(dir.path().join("o").join(f).exists(), "missing {f}");
    }
    ok(&cedist(dir.path(), &["--config", "c.toml", "--out", "o", "classify"]));
    let metrics = std::fs::read_to_string(dir.path().join("o/metrics.txt")).unwrap();
    assert!(metrics.contains("ideal"));
    assert!(metrics.contains("noisy"));
    assert!(metrics.contains("baseline"));
}

#[test]
fn ce_and_swap_read_a_dataset() {
    let dir = setup("");
    ok(&cedist(dir.path(), &["--config", "c.toml", "--out", "a", "--quiet", "generate"]));
    ok(&cedist(dir.path(), &["--config", "c.toml", "--out", "a", "ce", "a/dataset.txt"]));
    ok(&cedist(dir.path(), &["--config", "c.toml", "--out", "a", "swap", "a/dataset.txt"]));
    let ce = std::fs::read_to_string(dir.path().join("a/ce.txt")).unwrap();
    let rows = ce.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 41, "header plus 40 samples");
}

#[test]
fn compare_lists_each_family_once() {
    let dir = setup("");
    ok(&cedist(dir.path(), &["--config", "c.toml", "--out", "c", "compare"]));
    let table = std::fs::read_to_string(dir.path().join("c/comparison.txt")).unwrap();
    let body: Vec<&str> = table.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(body.iter().any(|l| l.trim_start().starts_with("A1")));
    assert!(body.iter().any(|l| l.trim_start().starts_with("A3")));
    assert!(!body.iter().any(|l| l.trim_start().starts_with("A2")));
}

#[test]
fn unknown_key_is_a_config_error() {
    let dir = setup("[anneal.extra]\n");
    let dir2 = tempfile::tempdir().unwrap();
    std::fs::write(dir2.path().join("c.toml"), "[anneal]\nmax_iteratons = 3\n").unwrap();
    let out = cedist(dir2.path(), &["--config", "c.toml", "generate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("max_iteratons"));
    let out = cedist(dir.path(), &["--config", "c.toml", "generate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_sensor_ensemble_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.toml"), "[sensors.soil]\nensemble_size = 0\n").unwrap();
    let out = cedist(dir.path(), &["--config", "c.toml", "sensors"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn more_folds_than_samples_is_rejected() {
    let dir = setup("");
    ok(&cedist(dir.path(), &["--config", "c.toml", "--out", "o", "sensors"]));
    std::fs::write(
        dir.path().join("f.toml"),
        "[classify]\nsamples_per_class = 2\nfolds = 10\nmax_iterations = 2\n",
    )
    .unwrap();
    let out = cedist(dir.path(), &["--config", "f.toml", "--out", "o", "classify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_classifier_inputs_are_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = cedist(dir.path(), &["--out", "nowhere", "classify"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn ce_without_input_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = cedist(dir.path(), &["ce"]);
    assert_eq!(out.status.code(), Some(2));
}
