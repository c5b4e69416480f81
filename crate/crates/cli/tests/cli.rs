use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"{
    "dim": 2, "n": 32, "half_width": 3.141592653589793,
    "spec": {"variant": "A", "gamma": 1.0, "beta": 1.0, "lambda": 2.0, "nu": 0.1},
    "velocity": {"kind": "STREAM", "amplitude": 1.0, "seed": 42},
    "theta_seed": 7, "p_list": [1, 2, "inf"], "t_final": 0.2, "sample_every": 5
}"#;

fn logdiss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logdiss"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn simulate_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = logdiss(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("series.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "t,norm_p_1,norm_p_2,norm_inf,min_theta,max_theta"
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert!(report["growth_constant"]["inf"].is_number());
    assert_eq!(report["config"]["theta_seed"], 7);
}

#[test]
fn outputs_are_deterministic_and_seed_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let run = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        let mut args = vec!["simulate", "--config", &cfg, "--out", out.to_str().unwrap()];
        args.extend_from_slice(extra);
        assert_eq!(code(&logdiss(&args)), 0);
        (
            std::fs::read(out.join("series.csv")).unwrap(),
            std::fs::read(out.join("report.json")).unwrap(),
        )
    };
    let a = run("a", &[]);
    let b = run("b", &["--threads", "1"]);
    assert_eq!(a, b);
    let c = run("c", &["--seed", "99"]);
    assert_ne!(a.0, c.0);
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let typo = write_config(dir.path(), &SMALL.replace("\"t_final\"", "\"t_fnal\""));
    assert_eq!(code(&logdiss(&["simulate", "--config", &typo])), 1);
    assert_eq!(code(&logdiss(&["simulate"])), 1);
    assert_eq!(
        code(&logdiss(&[
            "simulate",
            "--config",
            "/nonexistent/config.json"
        ])),
        1
    );
    let bad = write_config(
        dir.path(),
        &SMALL.replace("\"gamma\": 1.0", "\"gamma\": 3.0"),
    );
    assert_eq!(code(&logdiss(&["simulate", "--config", &bad])), 1);
}

#[test]
fn blow_up_exits_with_two_and_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let unstable = SMALL
        .replace("\"amplitude\": 1.0", "\"amplitude\": 100.0")
        .replace("\"nu\": 0.1", "\"nu\": 0.0")
        .replace("\"t_final\": 0.2", "\"t_final\": 20.0, \"cfl\": 100.0");
    let cfg = write_config(dir.path(), &unstable);
    let out = dir.path().join("out");
    let o = logdiss(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], false);
    assert!(report["failure"].as_str().unwrap().contains("non-finite"));
    assert!(
        std::fs::read_to_string(out.join("series.csv"))
            .unwrap()
            .lines()
            .count()
            >= 2
    );
}

#[test]
fn verify_passes_and_mutation_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&logdiss(&["verify", "--out", out])), 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify.json")).unwrap())
            .unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(
        code(&logdiss(&[
            "verify",
            "--out",
            out,
            "--constant-scale",
            "1.1"
        ])),
        3
    );
}

#[test]
fn symbol_table_has_requested_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().to_str().unwrap();
    let o = logdiss(&["symbol", "--config", &cfg, "--out", out, "--points", "11"]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(dir.path().join("symbol.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
    assert_eq!(csv.lines().next().unwrap(), "xi,full,main,residual");
}

#[test]
fn sweep_reports_every_cell_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SMALL.replace("\"beta\": 1.0", "\"beta\": 0.0"));
    let out = dir.path().to_str().unwrap();
    let o = logdiss(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        out,
        "--axis",
        "gamma=0.5,1,3",
    ]);
    // γ = 3 is inadmissible: recorded as a cell error, the sweep goes on.
    assert_eq!(code(&o), 3);
    let result: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sweep.json")).unwrap())
            .unwrap();
    let cells = result["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 3);
    assert_eq!(cells[1]["parameters"]["gamma"], 1.0);
    assert!(cells[2]["error"].is_string());
    assert_eq!(result["aggregate"]["passed"], 2);
    assert!(dir.path().join("cell_000.csv").exists());
    let over = logdiss(&[
        "sweep",
        "--config",
        &cfg,
        "--axis",
        "gamma=0.5,1",
        "--cap",
        "1",
    ]);
    assert_eq!(code(&over), 1);
}

#[test]
fn independence_of_a_single_amplitude_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().to_str().unwrap();
    let o = logdiss(&[
        "independence",
        "--config",
        &cfg,
        "--out",
        out,
        "--amplitudes",
        "0",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("independence.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["pass"], true);
}
