use std::fs;
use std::path::Path;
use std::process::Command;

use charged_drop_cli::{run_with, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["charged-drop"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn out_dir(dir: &Path) -> String {
    dir.to_str().unwrap().to_owned()
}

#[test]
fn help_and_version_succeed() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for cmd in ["two", "charges", "regime", "nondim"] {
        assert!(out.contains(cmd), "{cmd} missing from help");
    }
    assert_eq!(run(&["--version"]).0, EXIT_OK);
    assert_eq!(run(&["two", "sweep", "--help"]).0, EXIT_OK);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).0, EXIT_USAGE);
    assert_eq!(run(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(run(&["two", "solve", "--eps", "0.01"]).0, EXIT_USAGE);
    assert_eq!(run(&["nondim", "--r0", "1", "--rsigma", "1", "--rb", "x"]).0, EXIT_USAGE);
    assert_eq!(run(&["--config", "/nonexistent/cfg.toml", "nondim"]).0, EXIT_USAGE);
}

#[test]
fn domain_errors_exit_1() {
    let (code, _, err) = run(&["two", "solve", "--eps", "-0.01", "--gamma", "100"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("eps"));
    assert_eq!(run(&["two", "solve", "--eps", "0.5", "--gamma", "100"]).0, EXIT_DOMAIN);
    assert_eq!(run(&["nondim", "--r0", "0", "--rsigma", "1", "--rb", "1"]).0, EXIT_DOMAIN);
    assert_eq!(run(&["charges", "optimize", "--n", "1000", "--eps", "0.2"]).0, EXIT_DOMAIN);
}

#[test]
fn nondim_example() {
    let (code, out, _) = run(&["nondim", "--r0", "1", "--rsigma", "1", "--rb", "5"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rho"], 1.0);
    assert_eq!(v["lambda"], 5.0);
    assert_eq!(v["gamma"], 5.0);
}

#[test]
fn solve_prints_a_record() {
    let (code, out, _) = run(&["two", "solve", "--eps", "0.01", "--gamma", "100"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["case"], "Case1");
    assert_eq!(v["exists"], true);
    assert!((v["E_total"].as_f64().unwrap() - 12.566_421_118).abs() < 1e-8);

    let (code, out, _) = run(&["--format", "csv", "two", "solve", "--eps", "0.01", "--gamma", "100"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("eps,gamma,exists,case,"));
    assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
}

#[test]
fn solve_without_minimizer_reports_split() {
    let (code, out, err) = run(&["two", "solve", "--eps", "0.01", "--gamma", "5000"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["case"], "Split");
    assert_eq!(v["exists"], false);
    assert!(err.contains("no classical minimizer"));
}

#[test]
fn solve_profile_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = out_dir(dir.path());
    let args = [
        "--out-dir",
        &d,
        "--format",
        "csv",
        "--plot",
        "svg",
        "two",
        "solve",
        "--eps",
        "0.01",
        "--gamma",
        "100",
        "--profile",
        "64",
    ];
    let (code, _, err) = run(&args);
    assert_eq!(code, EXIT_OK, "{err}");
    let csv = fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    assert_eq!(csv.lines().count(), 65);
    assert!(csv.starts_with("t,x,z\n"));
    let svg = fs::read_to_string(dir.path().join("profile.svg")).unwrap();
    assert!(svg.contains("<polyline"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[output]\nformat = \"csv\"\n\n[nondim]\nr0 = 2.0\nrsigma = 1.0\nrb = 16.0\n").unwrap();
    let c = cfg.to_str().unwrap();

    let (code, out, _) = run(&["--config", c, "nondim"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().next(), Some("rho,lambda,gamma"));
    assert!(out.lines().nth(1).unwrap().ends_with(",2.0000000000000000e0"));

    // flags win over the file
    let (_, out, _) = run(&["--config", c, "--format", "json", "nondim", "--rb", "8"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["gamma"], 1.0);

    fs::write(&cfg, "[nondim]\nradius = 1.0\n").unwrap();
    assert_eq!(run(&["--config", c, "nondim"]).0, EXIT_USAGE);
}

#[test]
fn regime_map_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = out_dir(dir.path());
    let (code, _, err) =
        run(&["--out-dir", &d, "regime", "map", "--eps", "1e-3", "--gamma", "1000,300", "--n", "2,10,1000"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(err.contains("regime_map.csv"));
    let csv = fs::read_to_string(dir.path().join("regime_map.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "eps,gamma,n,label,split_energy,classical_estimate");
    assert_eq!(lines.len(), 7);
    // lexicographic order: γ = 300 first
    assert!(lines[1].starts_with("1.0000000000000000e-3,3.0000000000000000e2,2,"));
    assert!(lines.iter().any(|l| l.contains(",1000,")));
}

#[test]
fn regime_map_from_config_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("grid.toml");
    let out = dir.path().join("out");
    fs::write(
        &cfg,
        format!(
            "[output]\nout_dir = {:?}\n\n[regime]\neps = [1e-4, 1e-3]\ngamma = 1000.0\nn = [1, 2, 50, 5000]\n",
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let (code, _, err) = run(&["regime", "map", "--config", cfg.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let csv = fs::read_to_string(out.join("regime_map.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("eps,gamma,n,label,split_energy,classical_estimate"));
    assert_eq!(csv.lines().count(), 9);
    assert!(csv.contains(",5000,NotExists,"));
}

#[test]
fn sweep_and_boundary_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = out_dir(dir.path());
    let (code, _, err) =
        run(&["--out-dir", &d, "--format", "json", "two", "sweep", "--eps", "1e-2,5e-3", "--gamma", "100,1000"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("two_sweep.json")).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["eps"], 5e-3);

    let (code, _, err) = run(&["--out-dir", &d, "--plot", "svg", "two", "boundary", "--eps", "1e-2"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let csv = fs::read_to_string(dir.path().join("boundary.csv")).unwrap();
    assert!(csv.starts_with("eps,gamma_c,gamma_c_eps\n"));
    let svg = fs::read_to_string(dir.path().join("boundary.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 1);
    assert!(svg.contains(r#"class="reference""#));
}

#[test]
fn converge_writes_table_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let d = out_dir(dir.path());
    let args =
        ["--out-dir", &d, "--plot", "svg", "charges", "converge", "--n", "6,12", "--eps", "1e-3", "--restarts", "2"];
    let (code, _, err) = run(&args);
    assert_eq!(code, EXIT_OK, "{err}");
    let csv = fs::read_to_string(dir.path().join("uniformity.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("n,shell_fraction,riesz_gap,cap_discrepancy"));
    assert_eq!(csv.lines().count(), 3);
    assert!(dir.path().join("uniformity.svg").exists());
}

#[test]
fn optimize_outputs_configuration() {
    let (code, out, _) = run(&["charges", "optimize", "--n", "4", "--eps", "0.01", "--R", "2", "--seed", "3"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["R"], 2.0);
    assert_eq!(v["centers"].as_array().unwrap().len(), 4);
    let (_, alias, _) = run(&["charges", "optimize", "--n", "4", "--eps", "0.01", "--radius", "2", "--seed", "3"]);
    assert_eq!(out, alias);
}

#[test]
fn failed_command_writes_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = out_dir(dir.path());
    // ε beyond the supported range: nothing is computed, so nothing is written
    let (code, _, _) = run(&["--out-dir", &d, "--plot", "svg", "two", "boundary", "--eps", "0.3"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn unwritable_out_dir_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain-file");
    fs::write(&file, "").unwrap();
    let d = out_dir(&file);
    assert_eq!(run(&["--out-dir", &d, "two", "boundary", "--eps", "1e-2"]).0, EXIT_USAGE);
}

#[test]
fn binary_honours_out_dir_env() {
    let dir = tempfile::tempdir().unwrap();
    let flag_dir = dir.path().join("flag");
    let env_dir = dir.path().join("env");
    let status = Command::new(env!("CARGO_BIN_EXE_charged-drop"))
        .env("CHARGED_DROP_OUT", &env_dir)
        .args(["--out-dir", flag_dir.to_str().unwrap(), "regime", "map", "--eps", "1e-3", "--gamma", "300", "--n", "2"])
        .output()
        .unwrap();
    assert!(status.status.success());
    assert!(env_dir.join("regime_map.csv").exists());
    assert!(!flag_dir.exists());

    let status = Command::new(env!("CARGO_BIN_EXE_charged-drop")).args(["two", "solve"]).output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_USAGE));
}
