use std::fs;
use std::path::Path;

use toric_nk_cli::main_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["toricnk".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const PHI0: &str = "3 + mu1^2 + mu2^2 + mu3^2 + mu1*mu2*mu3/s\n";

#[test]
fn verify_exact_solution_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write(dir.path(), "phi0.txt", PHI0);
    let (code, out, _) = run(&["verify", "--phi", &phi]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "residual: 0 (exact)");
}

#[test]
fn verify_reports_nonzero_residual() {
    let (code, out, _) = run(&["verify", "--phi", "3 + mu1^2"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("residual: "));
    assert_ne!(out.trim(), "residual: 0 (exact)");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["verify", "--phi", "mu1 +* 2"]).0, 2);
    assert_eq!(run(&["verify", "--phi", "mu1", "--config", "/nonexistent/cfg"]).0, 2);
    assert_eq!(run(&["search", "--degree", "9"]).0, 2);
    assert_eq!(run(&["radial", "--x0", "1"]).0, 2);
}

#[test]
fn singular_orbits_json_lists_four() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write(dir.path(), "phi0.txt", PHI0);
    let (code, out, _) = run(&["singular-orbits", "--phi", &phi]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], 4);
    assert_eq!(v["orbits"].as_array().unwrap().len(), 4);
    assert!(v["meta"]["command_line"].as_str().unwrap().starts_with("toricnk singular-orbits"));
}

#[test]
fn outputs_embed_run_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = out.to_str().unwrap();
    let (code, _, _) = run(&["region", "--samples", "200", "--seed", "4", "--format", "csv", "--out", o]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&out).unwrap();
    let head: Vec<&str> = text.lines().take(5).collect();
    assert!(head[0].starts_with("# tool_version: toric-nk "));
    assert!(head[1].starts_with("# command_line: toricnk region"));
    assert_eq!(head[2], "# seed: 4");
    assert!(head[3].starts_with("# tolerance."));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 201);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, extra) in [
        ("search", &["--starts", "20", "--seed", "3"][..]),
        ("sweep", &["--grid", "4", "--format", "csv"][..]),
        ("spectrum", &["--samples", "20"][..]),
    ] {
        let path = dir.path().join(format!("{cmd}.out"));
        let p = path.to_str().unwrap();
        let mut args = vec![cmd, "--out", p];
        args.extend_from_slice(extra);
        let mut copies = Vec::new();
        for jobs in ["1", "3"] {
            let mut a = args.clone();
            a.extend(["--jobs", jobs]);
            // the jobs flag is part of the command line, so compare runs with equal flags
            assert_eq!(run(&a).0, 0, "{cmd}");
            let first = fs::read(&path).unwrap();
            assert_eq!(run(&a).0, 0);
            assert_eq!(first, fs::read(&path).unwrap(), "{cmd} with --jobs {jobs}");
            copies.push(String::from_utf8(first).unwrap());
        }
        let strip = |s: &str| s.lines().filter(|l| !l.contains("command_line")).collect::<Vec<_>>().join("\n");
        assert_eq!(strip(&copies[0]), strip(&copies[1]), "{cmd}: results depend on --jobs");
    }
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", "# radial defaults\nt0 = 1\nx0 = 5\nxp0 = 2\ntol = 1e-8\nformat = csv\n");
    let (code, out, _) = run(&["radial", "--config", &cfg]);
    assert_eq!(code, 0);
    assert!(out.contains("# tolerance.integration: 1.0000000000000000e-8"));
    let (_, out, _) = run(&["radial", "--config", &cfg, "--tol", "1e-9", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["meta"]["tolerances"]["integration"], 1e-9);
    assert_eq!(v["termination"], "EPS2_ZERO");

    let bad = write(dir.path(), "bad.cfg", "colour = red\n");
    assert_eq!(run(&["radial", "--config", &bad]).0, 2);
}

#[test]
fn search_json_shape() {
    let (code, out, _) = run(&["search", "--degree", "3", "--starts", "10", "--seed", "5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["degree"], 3);
    assert_eq!(v["seed"], 5);
    assert_eq!(v["starts"], 10);
    for hit in v["converged"].as_array().unwrap() {
        assert_eq!(hit["classified_as"]["kind"], "phi0_equivalent");
        assert!(hit["residual_norm"].as_f64().unwrap() < 1e-10);
        assert_eq!(hit["coeffs"].as_array().unwrap().len(), 10);
    }
}

#[test]
fn remaining_commands_succeed() {
    let (code, out, _) = run(&["lemmas", "--samples", "50"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&["surface", "--directions", "50", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().filter(|l| !l.starts_with('#')).count() > 50);
    let (code, out, _) = run(&["radial", "--direction", "backward"]);
    assert_eq!(code, 0);
    assert!(out.contains("T_ZERO_SINGULARITY"));
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("singular-orbits"));
}
