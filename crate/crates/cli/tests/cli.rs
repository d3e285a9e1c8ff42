use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_botnet-mfg");

/// Equal recovery, lambda = 1e3, kappa* ~ 0.2343.
const CONFIG: &str = "\
q_rec_D = 1.0
q_rec_U = 1.0
q_inf_D = 0.2
q_inf_U = 1.0
beta_UU = 2.0
beta_UD = 2.0
beta_DU = 2.0
beta_DD = 1.0
lambda = 1000
v_H = 1.0
k_D = 0.5
k_I = 1.0
";

fn setup() -> (TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("params.toml");
    std::fs::write(&path, CONFIG).unwrap();
    let s = path.to_str().unwrap().to_string();
    (dir, s)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_code(o: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn equilibria_above_kappa_star_is_case_i() {
    let (_dir, cfg) = setup();
    let o = run(&["--config", &cfg, "equilibria", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0]["case"], "i");
    for key in ["x_DI", "x_US", "u", "g_DS", "mu", "eig3_im", "stable", "efficient"] {
        assert!(records[0].get(key).is_some(), "{key}");
    }
}

#[test]
fn off_simplex_state_exits_one_with_record() {
    let (_dir, cfg) = setup();
    let o = run(&["--config", &cfg, "hjb", "--x", "0.1,0.2,0.3,0.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_code(&o), "invalid_simplex");
    assert!(o.stdout.is_empty());
}

#[test]
fn invalid_parameters_exit_one() {
    let (_dir, cfg) = setup();
    let o = run(&["--config", &cfg, "--set", "k_I=0", "thresholds"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_code(&o), "invalid_params");
}

#[test]
fn config_problems_exit_two() {
    let (dir, cfg) = setup();
    let o = run(&["--config", &cfg, "--set", "gamma=1", "equilibria"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "config_parse");

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "lambda = = 3\n").unwrap();
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "equilibria"]).status.code(), Some(2));

    let partial = dir.path().join("partial.toml");
    std::fs::write(&partial, "lambda = 3\n").unwrap();
    let o = run(&["--config", partial.to_str().unwrap(), "equilibria"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("q_rec_D"));

    assert_eq!(run(&["--config", "/nonexistent/params.toml", "equilibria"]).status.code(), Some(2));
    // Argument errors come from the parser and share the config status.
    assert_eq!(run(&["--config", &cfg, "hjb", "--x", "0.1,0.2"]).status.code(), Some(2));
    assert_eq!(
        run(&["--config", &cfg, "simulate", "--n-agents", "5", "--horizon", "1", "--policy", "myopic"]).status.code(),
        Some(2)
    );
}

#[test]
fn overrides_replace_config_values() {
    let (_dir, cfg) = setup();
    let all: Vec<String> = CONFIG.lines().map(|l| l.replace(' ', "")).collect();
    let mut args: Vec<&str> = Vec::new();
    for kv in &all {
        args.extend(["--set", kv.as_str()]);
    }
    args.push("thresholds");
    let inline = run(&args);
    let from_file = run(&["--config", &cfg, "thresholds"]);
    assert!(inline.status.success());
    assert_eq!(inline.stdout, from_file.stdout);

    let shifted = run(&["--config", &cfg, "--set", "k_D=0.1", "equilibria", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&shifted.stdout).unwrap();
    assert_eq!(v[0]["case"], "iii");
}

#[test]
fn every_csv_has_a_header() {
    let (_dir, cfg) = setup();
    let cases: [(&[&str], &str); 5] = [
        (&["hjb", "--x", "0.1,0.2,0.3,0.4"], "case,mu,g_DI,g_DS,g_UI,g_US,valid,degenerate,slack1,slack2"),
        (&["fixed-points"], "case,x_DI,x_DS,x_UI,x_US,eig1_re"),
        (&["equilibria"], "case,x_DI,x_DS,x_UI,x_US,u,g_DI"),
        (&["thresholds"], "x_star_ui,x_star_di,x_bar_star_ui,kappa_star"),
        (&["sweep", "--kappa-min", "0.1", "--kappa-max", "0.4", "--steps", "7"], "kappa,count,cases,mu_min"),
    ];
    for (args, header) in cases {
        let mut full = vec!["--config", cfg.as_str()];
        full.extend_from_slice(args);
        let o = run(&full);
        assert!(o.status.success(), "{args:?}");
        let text = stdout(&o);
        assert!(text.starts_with(header), "{args:?}: {text}");
        let cols = text.lines().next().unwrap().split(',').count();
        assert!(text.lines().all(|l| l.split(',').count() == cols));
    }
    let sweep = run(&["--config", &cfg, "sweep", "--kappa-min", "0.1", "--kappa-max", "0.4", "--steps", "7"]);
    assert_eq!(stdout(&sweep).lines().count(), 8);
}

fn simulate_to(cfg: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "--config",
        cfg,
        "simulate",
        "--n-agents",
        "200",
        "--horizon",
        "2",
        "--seed",
        "42",
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn simulation_is_seed_deterministic() {
    let (dir, cfg) = setup();
    let (a, b, c) = (dir.path().join("a.csv"), dir.path().join("b.csv"), dir.path().join("c.csv"));
    let fixed = ["--policy", "fixed:iii", "--replicas", "3", "--set", "lambda=5"];
    assert!(simulate_to(&cfg, &a, &fixed).status.success());
    assert!(simulate_to(&cfg, &b, &fixed).status.success());
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("replica,t,x_DI,x_DS,x_UI,x_US,case\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 101);

    let other = run(&[
        "--config",
        &cfg,
        "--set",
        "lambda=5",
        "simulate",
        "--n-agents",
        "200",
        "--horizon",
        "2",
        "--seed",
        "43",
        "--policy",
        "fixed:iii",
        "--replicas",
        "3",
        "--out",
        c.to_str().unwrap(),
    ]);
    assert!(other.status.success());
    assert_ne!(text, std::fs::read_to_string(&c).unwrap());
}

#[test]
fn myopic_simulation_writes_switch_log() {
    let (dir, cfg) = setup();
    let traj = dir.path().join("t.json");
    let log = dir.path().join("s.csv");
    let o = simulate_to(&cfg, &traj, &["--policy", "myopic", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&traj).unwrap()).unwrap();
    assert_eq!(v[0]["seed"], 42);
    assert!(!v[0]["switches"].as_array().unwrap().is_empty());
    assert_eq!(v[0]["samples"].as_array().unwrap().len(), 101);

    let csv = dir.path().join("t.csv");
    let o = simulate_to(&cfg, &csv, &["--policy", "myopic", "--switch-log", log.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&log).unwrap();
    assert!(text.starts_with("t,old_case,new_case,mu\n0,,"), "{text}");
}

#[test]
fn validate_reports_zero_failures() {
    let o = run(&["validate", "--seed", "7", "--trials", "1000", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 6);
    for c in checks {
        assert_eq!(c["failed"], 0, "{c}");
        assert_eq!(c["passed"], 1000, "{c}");
    }
    assert!(!run(&["validate", "--trials", "10"]).status.success());
}
