use std::path::PathBuf;
use std::process::{Command, Output};

const HEADER: &str = "n,re_a,im_a,re_b,im_b,re_ratio,im_ratio,re_limit,im_limit,abs_err";

fn polykern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polykern")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polykern-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn circle_study_writes_csv_to_stdout() {
    let out = polykern(&["circle-study", "--n", "20,40", "--quiet"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 64);
    assert!(rows[0].starts_with("20,0.0000000000000000e0,"));
    assert!(out.stderr.is_empty());
}

#[test]
fn study_honours_config_out_and_precision() {
    let dir = scratch("cfg");
    let cfg = dir.join("p.toml");
    std::fs::write(
        &cfg,
        "setting = \"circle_perturbed\"\ngamma = 0.0\ntau = 0.0\npoint_grid = [{ a = [1.0, 0.0], b = [2.0, 0.0] }]\n",
    )
    .unwrap();
    let csv = dir.join("out.csv");
    let run = |bits: &str| {
        let out = polykern(&[
            "circle-study", "--config", cfg.to_str().unwrap(), "--out", csv.to_str().unwrap(),
            "--n", "16,64", "--precision-bits", bits,
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8(out.stderr).unwrap().contains("n = 64"));
        std::fs::read_to_string(&csv).unwrap()
    };
    let ext = run("113");
    let dbl = run("53");
    assert_eq!(ext.lines().count(), 3);
    assert_eq!(ext, run("113"));
    for (a, b) in ext.lines().skip(1).zip(dbl.lines().skip(1)) {
        let f = |s: &str| s.split(',').map(|x| x.parse::<f64>().unwrap()).collect::<Vec<_>>();
        let (a, b) = (f(a), f(b));
        assert!((a[5] - b[5]).abs() < 1e-12 && (a[6] - b[6]).abs() < 1e-12);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn invalid_input_exits_with_error() {
    let out = polykern(&["circle-study", "--n", "40,20"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("strictly increasing"));
    assert_eq!(polykern(&["circle-study", "--precision-bits", "500"]).status.code(), Some(2));
    assert_eq!(polykern(&["props", "--suite", "no_such_suite"]).status.code(), Some(2));
    assert!(!polykern(&["no-such-command"]).status.success());
}

#[test]
fn lemniscate_setting_is_checked() {
    let dir = scratch("lem");
    let cfg = dir.join("l.toml");
    std::fs::write(
        &cfg,
        "setting = \"lemniscate\"\nm = 2\nrho = 0.6\npoint_grid = [{ a = [0.0, 0.0], b = [1.0, 0.0] }]\n\
         [basis]\noracle_degree = 20\noracle_resolution = { radial = 48, angular = 128 }\nresolution = { radial = 96, angular = 256 }\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = polykern(&["lemniscate-study", "--config", cfg, "--n", "10,20", "--quiet"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);
    assert_eq!(polykern(&["circle-study", "--config", cfg]).status.code(), Some(2));
    assert_eq!(polykern(&["lemniscate-study", "--n", "10", "--precision-bits", "113"]).status.code(), Some(2));
    let out = polykern(&["christoffel-study", "--config", cfg, "--n", "10,20", "--quiet"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("n,re_a,im_a,scaled,target,rel_dev"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn christoffel_study_reports_target() {
    let out = polykern(&["christoffel-study", "--n", "10,100"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 100.0);
    // default model γ = 1: target Γ(4) / L(0, 0) = 6
    assert!((last[4] - 6.0).abs() < 1e-12);
    assert!(String::from_utf8(out.stderr).unwrap().contains("rel dev"));
}

#[test]
fn props_pass_and_report() {
    let out = polykern(&["props", "--suite", "kummer,derform,t_positive"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
    let quiet = polykern(&["props", "--suite", "kummer", "--quiet"]);
    assert!(quiet.status.success() && quiet.stdout.is_empty());
}

#[test]
fn oracle_check_passes() {
    let out = polykern(&["oracle-check"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["circle_oracle", "lemniscate_oracle", "christoffel_oracle"] {
        assert!(text.contains(&format!("PASS {name}")));
    }
}
