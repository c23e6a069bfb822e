use std::path::Path;
use std::process::{Command, Output};

fn catbench(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catbench"))
        .args(args)
        .current_dir(cwd)
        .env("CATBENCH_WORKERS", "2")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    assert!(catbench(&["generate-toy", "--dir", "data"], dir.path())
        .status
        .success());
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{
            "datasets": [{"path": "data/toy_deterministic.csv"}, {"path": "data/toy_smoothing.csv"},
                         {"path": "data/toy_mixed.csv"}],
            "encoders": ["OH", "Ord", "Drop"],
            "models": ["DT", "LogReg"],
            "metrics": ["AUC"],
            "tuning": ["NoTuning", "ModelTuning"],
            "output_dir": "out"
        }"#,
    )
    .unwrap();
    let o = catbench(&["run", "--config", "cfg.json"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("executed 36"));
    dir
}

#[test]
fn full_command_sequence() {
    let dir = setup();
    let d = dir.path();

    let o = catbench(&["aggregate", "--strategy", "all", "--out", "out"], d);
    assert!(o.status.success());
    assert!(d.join("out/consensus/DT_AUC_NoTuning__R-Kem.csv").exists());
    assert!(d.join("out/consensus/consensus.json").exists());

    let o = catbench(
        &[
            "aggregate",
            "--strategy",
            "R-M",
            "--model",
            "kNN",
            "--out",
            "out",
        ],
        d,
    );
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no evaluations match"));

    let o = catbench(
        &[
            "analyze",
            "sensitivity",
            "--factor",
            "tuning",
            "--out",
            "out",
        ],
        d,
    );
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("tuning,ModelTuning,NoTuning\n"));

    let o = catbench(
        &["analyze", "replicability", "--pairs", "10", "--out", "out"],
        d,
    );
    assert!(stdout(&o).starts_with("measure,size,mean,ci_low,ci_high,pairs\nrho,1,"));

    let o = catbench(
        &[
            "analyze",
            "tuning-gain",
            "--a",
            "ModelTuning",
            "--b",
            "NoTuning",
            "--out",
            "out",
        ],
        d,
    );
    assert!(stdout(&o).contains("model,DT,"));

    let o = catbench(&["report", "all", "--out", "out"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "ranks.svg",
        "ranks_summary.csv",
        "sensitivity_model.csv",
        "replicability.svg",
        "tuning_gain_ModelTuning_vs_NoTuning.csv",
    ] {
        assert!(d.join("out/reports").join(f).exists(), "{f}");
    }
}

#[test]
fn command_errors_set_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = catbench(&["report", "ranks", "--out", "missing"], dir.path());
    assert!(!o.status.success());
    let o = catbench(&["aggregate", "--strategy", "R-Bogus"], dir.path());
    assert!(!o.status.success());
    std::fs::write(dir.path().join("bad.json"), r#"{"datasets": []}"#).unwrap();
    assert!(!catbench(&["run", "--config", "bad.json"], dir.path())
        .status
        .success());
}

#[test]
fn reports_are_byte_identical_across_invocations() {
    let dir = setup();
    let d = dir.path();
    assert!(catbench(&["report", "all", "--out", "out"], d)
        .status
        .success());
    let read = |name: &str| std::fs::read(d.join("out/reports").join(name)).unwrap();
    let before: Vec<Vec<u8>> = [
        "ranks.csv",
        "sensitivity_aggregation.csv",
        "replicability.csv",
    ]
    .iter()
    .map(|n| read(n))
    .collect();
    assert!(catbench(&["report", "all", "--out", "out"], d)
        .status
        .success());
    let after: Vec<Vec<u8>> = [
        "ranks.csv",
        "sensitivity_aggregation.csv",
        "replicability.csv",
    ]
    .iter()
    .map(|n| read(n))
    .collect();
    assert_eq!(before, after);
}
