//! End-to-end tests that drive the compiled `ama` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ama"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

fn write_k2(dir: &Path) -> PathBuf {
    let path = dir.join("k2.graph");
    fs::write(&path, "2 1\n0 1\n").unwrap();
    path
}

const TINY_CONFIG: &str = "\
[experiment]
graph_family = \"er\"
sizes = [4]
graphs_per_size = 1
algorithms = [\"pu\", \"pnu\"]
depths = [1]
runs_per_setting = 2
master_seed = 7

[optimizer]
max_iters = 30
";

#[test]
fn help_exits_zero() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("Usage"));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = bin().arg("--definitely-not-a-flag").output().unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn jobs_zero_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let k2 = write_k2(dir.path());
    let out = run_in(dir.path(), &["--jobs", "0", "oracle", k2.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("usage error"));
}

#[test]
fn gen_regular_graphs_have_uniform_degree() {
    let dir = TempDir::new().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "gen", "--family", "regular-3", "--n", "8", "--count", "3", "--seed", "7",
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    for seed in 7..10 {
        let path = dir.path().join(format!("regular-3-8-{seed}.graph"));
        let text = fs::read_to_string(&path).expect("generated file exists");
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("8 12"));
        let mut degree = [0usize; 8];
        for line in lines {
            let mut it = line.split_whitespace();
            let u: usize = it.next().unwrap().parse().unwrap();
            let v: usize = it.next().unwrap().parse().unwrap();
            degree[u] += 1;
            degree[v] += 1;
        }
        assert!(degree.iter().all(|&d| d == 3), "not 3-regular: {degree:?}");
    }
}

#[test]
fn gen_er_zero_probability_yields_empty_graph() {
    let dir = TempDir::new().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "gen", "--family", "er", "--n", "4", "--seed", "3", "--er-edge-prob", "0",
        ],
    );
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(dir.path().join("er-4-3.graph")).unwrap();
    assert_eq!(text.trim(), "4 0");
}

#[test]
fn gen_rerun_is_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = ["gen", "--family", "er", "--n", "10", "--count", "4", "--seed", "42"];
    assert_eq!(code(&run_in(a.path(), &args)), 0);
    assert_eq!(code(&run_in(b.path(), &args)), 0);
    for seed in 42..46 {
        let name = format!("er-10-{seed}.graph");
        let left = fs::read(a.path().join(&name)).unwrap();
        let right = fs::read(b.path().join(&name)).unwrap();
        assert_eq!(left, right, "{name} differs between reruns");
    }
}

#[test]
fn gen_unknown_family_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["gen", "--family", "petersen", "--n", "10"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("usage error"));
}

#[test]
fn oracle_reports_alpha_and_penalty_check() {
    let dir = TempDir::new().unwrap();
    let k2 = write_k2(dir.path());
    let out = run_in(dir.path(), &["oracle", k2.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("alpha=1"));
    assert!(text.lines().any(|l| l == "10"));
    assert!(text.lines().any(|l| l == "01"));
    assert!(text.contains("penalty-check: ok"));
}

#[test]
fn oracle_counts_cycle_optima() {
    let dir = TempDir::new().unwrap();
    let c5 = dir.path().join("c5.graph");
    fs::write(&c5, "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n").unwrap();
    let out = run_in(dir.path(), &["oracle", c5.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("alpha=2"));
    assert!(text.contains("optima (5):"));
}

#[test]
fn solve_baseline_requires_p() {
    let dir = TempDir::new().unwrap();
    let k2 = write_k2(dir.path());
    let out = run_in(dir.path(), &["solve", k2.to_str().unwrap(), "--algo", "qaoa_plus"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("p is required"));
}

#[test]
fn solve_ama_rejects_p() {
    let dir = TempDir::new().unwrap();
    let k2 = write_k2(dir.path());
    let out = run_in(
        dir.path(),
        &["solve", k2.to_str().unwrap(), "--algo", "ama", "--p", "3"],
    );
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("p not applicable to ama"));
}

#[test]
fn solve_reports_depth_model() {
    let dir = TempDir::new().unwrap();
    let k2 = write_k2(dir.path());
    let out = run_in(
        dir.path(),
        &["solve", k2.to_str().unwrap(), "--algo", "qaoa_plus", "--p", "1"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("depth: 7"), "missing depth line in:\n{text}");
    assert!(text.contains("alpha: 1"));
}

#[test]
fn solve_ama_reaches_k2_optimum() {
    let dir = TempDir::new().unwrap();
    let k2 = write_k2(dir.path());
    let out = run_in(
        dir.path(),
        &[
            "solve", k2.to_str().unwrap(), "--algo", "ama", "--seed", "1", "--json-out",
            "report.json",
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("adaptive trace:"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    let ratio = report["approximation_ratio"].as_f64().unwrap();
    assert!(ratio >= 0.99, "approximation ratio {ratio} below 0.99");
    assert!(report["trace"].is_object());
    assert_eq!(report["alpha"].as_u64(), Some(1));
}

#[test]
fn solve_missing_file_is_runtime_error() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["solve", "no-such.graph", "--algo", "ama"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn bench_writes_results_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bench.toml"), TINY_CONFIG).unwrap();
    let args = ["bench", "--config", "bench.toml", "--out-dir", "out"];
    let first = run_in(dir.path(), &args);
    assert_eq!(code(&first), 0, "stderr: {}", stderr(&first));
    assert!(stdout(&first).contains("wrote"));

    let csv = fs::read_to_string(dir.path().join("out/results.csv")).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("algo,p,n,oar,aar,total_itrs,total_cds,total_cnots,total_runtime")
    );
    assert_eq!(csv.lines().count(), 3, "2 settings expected:\n{csv}");
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/results.json")).unwrap())
            .unwrap();
    assert_eq!(json.as_array().map(Vec::len), Some(2));
    assert!(dir.path().join("out/plotdata/oar.csv").is_file());

    let rerun_args = ["bench", "--config", "bench.toml", "--out-dir", "out2"];
    let second = run_in(dir.path(), &rerun_args);
    assert_eq!(code(&second), 0);
    let csv2 = fs::read_to_string(dir.path().join("out2/results.csv")).unwrap();
    assert_eq!(csv, csv2, "rerun produced different bytes");
}

#[test]
fn bench_jobs_setting_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bench.toml"), TINY_CONFIG).unwrap();
    let serial = run_in(
        dir.path(),
        &["--jobs", "1", "bench", "--config", "bench.toml", "--out-dir", "s"],
    );
    let parallel = run_in(
        dir.path(),
        &["--jobs", "4", "bench", "--config", "bench.toml", "--out-dir", "p"],
    );
    assert_eq!(code(&serial), 0);
    assert_eq!(code(&parallel), 0);
    let left = fs::read(dir.path().join("s/results.csv")).unwrap();
    let right = fs::read(dir.path().join("p/results.csv")).unwrap();
    assert_eq!(left, right);
}

#[test]
fn bench_rejects_zero_runs() {
    let dir = TempDir::new().unwrap();
    let config = TINY_CONFIG.replace("runs_per_setting = 2", "runs_per_setting = 0");
    fs::write(dir.path().join("bad.toml"), config).unwrap();
    let out = run_in(dir.path(), &["bench", "--config", "bad.toml"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("runs_per_setting"));
}

#[test]
fn config_with_unknown_key_is_config_error() {
    let dir = TempDir::new().unwrap();
    let config = format!("{TINY_CONFIG}learning_rte = 0.1\n");
    fs::write(dir.path().join("bad.toml"), config).unwrap();
    let out = run_in(dir.path(), &["bench", "--config", "bad.toml"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("learning_rte"));
}

#[test]
fn env_override_shows_in_print_config() {
    let dir = TempDir::new().unwrap();
    let config = TINY_CONFIG
        .replace("algorithms = [\"pu\", \"pnu\"]", "algorithms = [\"pu\"]")
        .replace("runs_per_setting = 2", "runs_per_setting = 1");
    fs::write(dir.path().join("bench.toml"), config).unwrap();
    let out = bin()
        .current_dir(dir.path())
        .env("AMA_OPTIMIZER_MAX_ITERS", "7")
        .args(["bench", "--config", "bench.toml", "--out-dir", "out", "--print-config"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("max_iters = 7"), "override missing:\n{}", stdout(&out));
}

#[test]
fn env_override_with_unknown_section_fails() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bench.toml"), TINY_CONFIG).unwrap();
    let out = bin()
        .current_dir(dir.path())
        .env("AMA_TYPO_MAX_ITERS", "7")
        .args(["bench", "--config", "bench.toml", "--out-dir", "out"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("TYPO"));
}

#[test]
fn report_renders_table_from_results() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bench.toml"), TINY_CONFIG).unwrap();
    let bench = run_in(dir.path(), &["bench", "--config", "bench.toml", "--out-dir", "out"]);
    assert_eq!(code(&bench), 0);
    let out = run_in(dir.path(), &["report", "--input", "out/results.json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("algo"));
    assert!(text.contains("pu"));
    assert!(text.contains("pnu"));
}

#[test]
fn oar_cost_writes_cost_tables() {
    let dir = TempDir::new().unwrap();
    let config = "\
[experiment]
graph_family = \"er\"
sizes = [4]
graphs_per_size = 1
algorithms = [\"pnu\", \"ama\"]
master_seed = 5
cost_runs_factor = 3
cost_runs_ama_factor = 2

[optimizer]
max_iters = 40
";
    fs::write(dir.path().join("cost.toml"), config).unwrap();
    let out = run_in(
        dir.path(),
        &[
            "oar-cost", "--config", "cost.toml", "--out-dir", "out", "--targets", "0.7,0.9",
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("out/oar_cost.csv")).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some(
            "algo,n,target_oar,min_depth,t_avg,expected_itrs,expected_runtime,\
             expected_depth,expected_cnots,unreached,reached_graphs"
        )
    );
    assert_eq!(csv.lines().count(), 5, "2 algos x 2 targets expected:\n{csv}");
    assert!(dir.path().join("out/plotdata/cost_runtime.csv").is_file());
}
