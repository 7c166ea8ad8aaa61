use std::path::Path;
use std::process::{Command, Output};

fn cnzn(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cnzn"));
    cmd.args(args).env_remove("CNZN_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("CNZN_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn usage_and_config_errors_exit_2() {
    assert_eq!(code(&cnzn(&["genus0", "--n", "2"], None)), 2);
    assert_eq!(code(&cnzn(&["genus0", "--n", "3", "--N", "5"], None)), 2);
    assert_eq!(code(&cnzn(&["verify-hae", "--n", "3", "--g", "3", "--k-max", "4"], None)), 2);
    assert_eq!(code(&cnzn(&["potential", "--n", "3", "--insertions", "5"], None)), 2);
    assert_eq!(code(&cnzn(&["genus0", "--n", "3", "--format", "yaml"], None)), 2);
    assert_eq!(code(&cnzn(&["no-such-command"], None)), 2);
}

#[test]
fn failed_verification_exits_1() {
    // A nonzero even-order constant violates the symplectic condition.
    let o = cnzn(&["pmatrix", "--n", "3", "--k-max", "4", "--policy", "custom", "--constants", "0,1"], None);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("\"status\": \"failed\""));
}

#[test]
fn anomaly_equation_passes_for_small_n() {
    for n in ["3", "4", "5"] {
        let o = cnzn(&["verify-hae", "--n", n, "--g", "2", "--format", "text"], None);
        assert_eq!(code(&o), 0, "n={n}");
        let text = String::from_utf8(o.stdout).unwrap();
        assert!(text.contains("status: verified"));
        assert!(!text.contains("FAIL"));
    }
}

#[test]
fn genus0_reports_named_identities() {
    let o = cnzn(&["genus0", "--n", "3", "--N", "30", "--format", "text"], None);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("PASS C_1 = C_3"));
    let o = cnzn(&["genus0", "--n", "4", "--format", "text"], None);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("PASS A_{n/2} = 0"));
}

#[test]
fn cold_and_warm_cache_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for args in [vec!["verify-hae", "--n", "3"], vec!["pmatrix", "--n", "4", "--format", "csv"], vec!["potential", "--n", "3", "--g", "1", "--insertions", "1,1", "--format", "text"]] {
        let cold = cnzn(&args, Some(dir.path()));
        let warm = cnzn(&args, Some(dir.path()));
        let uncached = cnzn(&args, None);
        assert_eq!(code(&cold), 0);
        assert_eq!(cold.stdout, warm.stdout, "{args:?}");
        assert_eq!(cold.stdout, uncached.stdout, "{args:?}");
    }
    let names: Vec<String> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    // Reports for three runs and one table; no temporary files left behind.
    assert_eq!(names.len(), 4, "{names:?}");
    for name in &names {
        let hash = name.trim_end_matches(".json").rsplit('-').next().unwrap();
        assert_eq!(hash.len(), 64, "{name}");
        assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
    }
}

#[test]
fn output_does_not_depend_on_jobs() {
    let one = cnzn(&["verify-identities", "--n", "3", "--jobs", "1", "--seed", "11"], None);
    let four = cnzn(&["verify-identities", "--n", "3", "--jobs", "4", "--seed", "11"], None);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn seed_changes_only_the_random_checks() {
    let a = String::from_utf8(cnzn(&["verify-identities", "--n", "3", "--seed", "1"], None).stdout).unwrap();
    let b = String::from_utf8(cnzn(&["verify-identities", "--n", "3", "--seed", "2"], None).stdout).unwrap();
    assert_ne!(a, b);
    let strip = |s: &str| s.lines().filter(|l| !l.contains("random #") && !l.contains("\"seed\"")).map(String::from).collect::<Vec<_>>();
    assert_eq!(strip(&a).len(), strip(&b).len());
}

#[test]
fn formats_render_the_same_checks() {
    let json = String::from_utf8(cnzn(&["verify-hae", "--n", "3"], None).stdout).unwrap();
    let csv = String::from_utf8(cnzn(&["verify-hae", "--n", "3", "--format", "csv"], None).stdout).unwrap();
    let text = String::from_utf8(cnzn(&["verify-hae", "--n", "3", "--format", "text"], None).stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(csv.lines().filter(|l| l.starts_with("check,")).count(), checks.len());
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS ")).count(), checks.len());
    assert!(csv.starts_with("kind,name,status,value\n"));
}
