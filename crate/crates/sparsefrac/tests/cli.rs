use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsefrac"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .env_remove("SPARSEFRAC_CONFIG")
        .output()
        .unwrap()
}

#[test]
fn unweighted_characteristic_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["char"], &configs().join("unweighted.toml"), dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let apq: f64 = stdout.lines().find_map(|l| l.strip_prefix("apq = ")).unwrap().parse().unwrap();
    assert!((apq - 1.0).abs() < 1e-12);
    let csv = std::fs::read_to_string(dir.path().join("char.csv")).unwrap();
    assert!(csv.starts_with("quantity,value\n"));
}

#[test]
fn missing_field_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(&config, "[exponents]\nn = 1\np = 2.0\n").unwrap();
    let out = run(&["char"], &config, dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
}

#[test]
fn out_of_range_weight_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(configs().join("power_weight.toml")).unwrap().replace("gamma = -0.3", "gamma = 0.9");
    std::fs::write(&config, text).unwrap();
    let out = run(&["char"], &config, dir.path());
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("power_weight.toml");
    let mut reports = Vec::new();
    for jobs in ["1", "2"] {
        let out_dir = dir.path().join(jobs);
        let out = run(&["verify", "--jobs", jobs, "--format", "json"], &config, &out_dir);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        reports.push(std::fs::read(out_dir.join("report.json")).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn failing_verification_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("strict.toml");
    let text = std::fs::read_to_string(configs().join("power_weight.toml")).unwrap() + "threshold_factor = 1e-6\n";
    std::fs::write(&config, text).unwrap();
    let out = run(&["verify"], &config, dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(dir.path().join("report.csv").exists());
}

#[test]
fn operator_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["op"], &configs().join("unweighted.toml"), dir.path());
    assert!(out.status.success());
    let f = sparsefrac::io::read_grid_function(std::fs::read(dir.path().join("op.csv")).unwrap().as_slice()).unwrap();
    assert_eq!(f.mesh().len(), 1024);
    assert!(f.values().iter().all(|&v| v >= 0.0));
}
