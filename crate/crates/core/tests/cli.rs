use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pinchlab(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pinchlab"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    let out = dir.join("out").display().to_string();
    fs::write(&path, format!("{body}\n[output]\ndir = \"{out}\"\n")).unwrap();
    path.display().to_string()
}

const CIRCLE: &str = r#"
[scenario]
kind = "perturbed_circle"
radius = 1.0
amplitude = 0.15
n = 128
seed = 3

[flow]
stop_time = 0.05
sample_interval = 0.005

[estimates]
deltas = [0.1]
sigmas = [0.02]
ps = [10.0]
"#;

#[test]
fn run_writes_the_run_directory_and_analyze_reproduces_it() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "run.toml", CIRCLE);
    let out = pinchlab(&["run", &cfg], &[]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let dir = tmp.path().join("out");
    for f in [
        "trace.csv",
        "meta",
        "estimates.csv",
        "estimates_rho.csv",
        "gronwall.csv",
        "levelsets.csv",
        "residuals.csv",
        "witness.csv",
        "constants.txt",
        "pinching.svg",
        "lp_margins.svg",
        "frames/0000.txt",
    ] {
        assert!(dir.join(f).exists(), "missing {f}");
    }
    let trace = fs::read_to_string(dir.join("trace.csv")).unwrap();
    assert!(trace.starts_with("t,H_max,H_min,mu_max,rho_max,area\n"));
    assert_eq!(trace.lines().count(), 12);
    let est = fs::read_to_string(dir.join("estimates.csv")).unwrap();
    assert!(est.starts_with("t,delta,sigma,p,int_f_plus_p,ddt_lhs,bound_rhs,margin,pass\n"));
    assert!(fs::read_to_string(dir.join("witness.csv")).unwrap().starts_with("delta,theorem,C_hat,B_hat\n"));
    assert!(fs::read_to_string(dir.join("pinching.svg")).unwrap().starts_with("<svg"));

    let before: Vec<Vec<u8>> = ["estimates.csv", "levelsets.csv", "witness.csv", "constants.txt"]
        .iter()
        .map(|f| fs::read(dir.join(f)).unwrap())
        .collect();
    let out = pinchlab(&["analyze", dir.to_str().unwrap()], &[]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let after: Vec<Vec<u8>> = ["estimates.csv", "levelsets.csv", "witness.csv", "constants.txt"]
        .iter()
        .map(|f| fs::read(dir.join(f)).unwrap())
        .collect();
    assert_eq!(before, after);
}

#[test]
fn inadmissible_parameters_exit_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    let body = CIRCLE.replace("sigmas = [0.02]", "sigmas = [0.4]").replace("ps = [10.0]", "ps = [100.0]");
    let cfg = write_config(tmp.path(), "bad.toml", &body);
    let out = pinchlab(&["run", &cfg], &[]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("L^p growth bound needs sigma"), "{}", stderr(&out));
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn unknown_keys_exit_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "typo.toml", &CIRCLE.replace("stop_time", "stop_tme"));
    let out = pinchlab(&["run", &cfg], &[]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("stop_tme"), "{}", stderr(&out));
    let out = pinchlab(&["run", "/nonexistent/config.toml"], &[]);
    assert_eq!(code(&out), 1);
}

#[test]
fn negative_growth_constant_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let body = CIRCLE.replace("ps = [10.0]", "ps = [10.0]\nc_hat = -1.0");
    let cfg = write_config(tmp.path(), "neg.toml", &body);
    let out = pinchlab(&["run", &cfg], &[]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("c_hat"), "{}", stderr(&out));
}

const SWEEP: &str = r#"
[[scenarios]]
kind = "circle"
radius = 1.0
n = 64

[[scenarios]]
kind = "ellipse"
a = 1.5
b = 1.0
n = 96

[flow]
stop_time = 0.02
sample_interval = 0.005

[estimates]
deltas = [0.1]
sigmas = [0.02, 0.4]
ps = [10.0]
"#;

#[test]
fn sweep_runs_the_cartesian_product() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "sweep.toml", SWEEP);
    let out = pinchlab(&["sweep", &cfg], &[("PINCHLAB_THREADS", "2")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let dir = tmp.path().join("out");
    let status = fs::read_to_string(dir.join("status.csv")).unwrap();
    let rows: Vec<&str> = status.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows.iter().filter(|r| r.contains(",completed,")).count(), 2);
    assert_eq!(rows.iter().filter(|r| r.contains(",skipped,")).count(), 2);
    let witness = fs::read_to_string(dir.join("witness.csv")).unwrap();
    assert!(witness.starts_with("cell,scenario,delta,sigma,p,theorem,C_hat,B_hat\n"));
    // two completed cells, one δ, two theorems
    assert_eq!(witness.lines().count(), 1 + 4);
    assert!(dir.join("00_circle_d0.1_s0.02_p10/trace.csv").exists());
    assert!(!dir.join("00_circle_d0.1_s0.4_p10").exists());

    let serial = tempfile::tempdir().unwrap();
    let cfg = write_config(serial.path(), "sweep.toml", SWEEP);
    assert_eq!(code(&pinchlab(&["sweep", &cfg], &[("PINCHLAB_THREADS", "1")])), 0);
    assert_eq!(witness, fs::read_to_string(serial.path().join("out/witness.csv")).unwrap());
}

#[test]
fn empty_sweep_exits_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "empty.toml", "scenarios = []\n");
    let out = pinchlab(&["sweep", &cfg], &[]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("empty sweep"));
}

#[test]
fn verify_detects_injected_faults() {
    let ok = pinchlab(&["verify", "--only", "C4"], &[]);
    assert_eq!(code(&ok), 0);
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("PASS C4"));

    let flipped = pinchlab(&["verify", "--only", "C3", "--inject", "sign-flip"], &[]);
    assert_eq!(code(&flipped), 2);
    assert!(String::from_utf8_lossy(&flipped.stdout).starts_with("FAIL C3"));

    let doubled = pinchlab(&["verify", "--only", "C1", "--inject", "dt-double"], &[]);
    assert_eq!(code(&doubled), 2);
    assert!(String::from_utf8_lossy(&doubled.stdout).contains("stability limit"));

    let bad = pinchlab(&["verify", "--inject", "nonsense"], &[]);
    assert_eq!(code(&bad), 2);
    assert!(stderr(&bad).contains("unknown fault"));
}
