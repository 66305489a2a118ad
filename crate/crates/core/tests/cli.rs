//! End-to-end runs of the `ion-sculpt` binary: artifacts, summaries and the
//! exit-code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("ion-sculpt-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn ion(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ion-sculpt"));
    c.args(args);
    for (k, _) in std::env::vars() {
        if k.starts_with("ION_SCULPT_") {
            c.env_remove(k);
        }
    }
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().unwrap()
}

fn summary(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap()
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("missing {key} in {v}"))
}

fn out_arg(d: &Path) -> &str {
    d.to_str().unwrap()
}

#[test]
fn sculpt_ideal_phase_state_preset() {
    let d = scratch("ideal");
    let o = ion(&["sculpt-ideal", "--nbar", "0.25", "--out", out_arg(&d)], &[]);
    assert_eq!(o.status.code(), Some(0));
    let s = summary(&o);
    assert!((num(&s, "fidelity") - 0.99).abs() < 0.02);
    assert!((num(&s, "probability") - 0.38).abs() < 0.02);
    assert!((num(&s, "rate") - 0.60).abs() < 0.03);
    for f in [
        "plan.json",
        "state.json",
        "summary.json",
        "wigner_initial.csv",
        "wigner_final.csv",
    ] {
        assert!(d.join(f).exists(), "{f}");
    }
    let csv = std::fs::read_to_string(d.join("wigner_final.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("q,p,w"));
}

#[test]
fn vacuum_target_without_cycles_reports_overlap() {
    let d = scratch("vacuum");
    let o = ion(
        &["sculpt-ideal", "--out", out_arg(&d)],
        &[("ION_SCULPT_TARGET", "[1]"), ("ION_SCULPT_EMIT_WIGNER", "false")],
    );
    let s = summary(&o);
    assert_eq!(s["cycles"], 0);
    assert!((num(&s, "fidelity") - (-0.25f64).exp()).abs() < 1e-12);

    let o = ion(
        &["sculpt-ideal", "--nbar", "0", "--out", out_arg(&d)],
        &[("ION_SCULPT_TARGET", "[1]"), ("ION_SCULPT_EMIT_WIGNER", "false")],
    );
    assert!((num(&summary(&o), "fidelity") - 1.0).abs() < 1e-15);
}

#[test]
fn malformed_target_is_a_config_error() {
    let o = ion(
        &["sculpt-ideal", "--out", out_arg(&scratch("bad"))],
        &[("ION_SCULPT_TARGET", "[0, 0, 0]")],
    );
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["error"], "config");
    assert_eq!(e["exit_code"], 2);
}

#[test]
fn unknown_flag_and_preset_are_config_errors() {
    assert_eq!(ion(&["table1", "--bogus"], &[]).status.code(), Some(2));
    let o = ion(&["sculpt-ideal"], &[("ION_SCULPT_PRESET", "cat-state")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn noiseless_noisy_run_matches_ideal_run() {
    let di = scratch("gamma0-ideal");
    let dn = scratch("gamma0-noisy");
    let env = [("ION_SCULPT_EMIT_WIGNER", "false")];
    let si = summary(&ion(&["sculpt-ideal", "--out", out_arg(&di)], &env));
    let sn = summary(&ion(&["sculpt-noisy", "--gamma", "0", "--out", out_arg(&dn)], &env));
    assert!((num(&si, "fidelity") - num(&sn, "fidelity")).abs() < 1e-9);
    assert!((num(&si, "probability") - num(&sn, "probability")).abs() < 1e-9);
    assert!((num(&sn, "purity") - 1.0).abs() < 1e-9);
}

#[test]
fn noisy_optimizer_run_and_determinism() {
    let a = scratch("opt-a");
    let b = scratch("opt-b");
    let env = [("ION_SCULPT_EMIT_WIGNER", "false")];
    let args = |d: &Path| {
        vec![
            "sculpt-noisy".to_string(),
            "--optimize".into(),
            "--budget".into(),
            "1500".into(),
            "--seed".into(),
            "5".into(),
            "--out".into(),
            d.display().to_string(),
        ]
    };
    let run = |d: &Path| {
        let a = args(d);
        ion(&a.iter().map(String::as_str).collect::<Vec<_>>(), &env)
    };
    let s = summary(&run(&a));
    assert!(
        num(&s, "fidelity") >= 0.90 && num(&s, "probability") >= 0.85 && num(&s, "rate") >= 0.63,
        "{s}"
    );
    run(&b);
    for f in ["optim.json", "rho.json", "pulses.json"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
    let optim: Value = serde_json::from_slice(&std::fs::read(a.join("optim.json")).unwrap()).unwrap();
    let trace = optim["trace"].as_array().unwrap();
    assert!(trace
        .windows(2)
        .all(|w| w[1]["objective"].as_f64() >= w[0]["objective"].as_f64()));
}

#[test]
fn table1_single_row_and_check() {
    let d = scratch("table-one");
    let o = ion(&["table1", "--nbar", "0.25", "--check", "--out", out_arg(&d)], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(d.join("table1.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "nbar,g_tau,phi,P,F,R");
    assert_eq!(lines.len(), 2);
}

#[test]
fn table1_check_fails_with_injected_noise() {
    let o = ion(
        &[
            "table1",
            "--nbar",
            "0.25",
            "--check",
            "--gamma",
            "1e-7",
            "--out",
            out_arg(&scratch("table-noisy")),
        ],
        &[],
    );
    assert_eq!(o.status.code(), Some(4));
    let e = stderr_json(&o);
    assert_eq!(e["error"], "check_failed");
    assert_eq!(e["failures"].as_array().unwrap().len(), 1);
}

#[test]
fn table1_default_run_has_seven_rows() {
    let d = scratch("table-all");
    let o = ion(&["table1", "--out", out_arg(&d)], &[]);
    assert_eq!(o.status.code(), Some(0));
    let s = summary(&o);
    assert_eq!(s["rows"].as_array().unwrap().len(), 7);
    assert!((num(&s, "best_nbar") - 0.25).abs() < 1e-12);
}

#[test]
fn appendix_c_outputs_and_cone_error() {
    let d = scratch("appc");
    let o = ion(&["appendix-c", "--out", out_arg(&d)], &[]);
    assert_eq!(o.status.code(), Some(0));
    let s = summary(&o);
    assert!((num(&s, "cone_r_x_max") - num(&s, "cone_r_x_min")).abs() < 1e-12);
    assert!((num(&s, "cone_r_x_max") - 3f64.sqrt() / 2.0).abs() < 1e-12);
    assert!(num(&s, "wigner_sup_distance") > 0.1);
    for f in [
        "cone.csv",
        "wigner_xi.csv",
        "wigner_lambda_half.csv",
        "wigner_lambda_sqrt3_half.csv",
        "wigner_mixture_a.csv",
        "wigner_mixture_b.csv",
    ] {
        assert!(d.join(f).exists(), "{f}");
    }

    let o = ion(
        &["appendix-c", "--out", out_arg(&d)],
        &[("ION_SCULPT_LAMBDA", "0.01"), ("ION_SCULPT_FIDELITY", "0.95")],
    );
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "out_of_cone");
}

#[test]
fn wigner_from_state_file() {
    let d = scratch("wigner");
    let state = d.join("state.json");
    std::fs::write(&state, r#"{"n_max": 1, "amps": [[0.6, 0.0], [0.0, 0.8]]}"#).unwrap();
    let o = ion(&["wigner", state.to_str().unwrap(), "--out", out_arg(&d)], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!((num(&summary(&o), "integral") - 1.0).abs() < 1e-3);

    let o = ion(
        &["wigner", d.join("missing.json").to_str().unwrap(), "--out", out_arg(&d)],
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn pulse_fidelity_curves() {
    let d = scratch("pulse");
    let o = ion(&["pulse-fidelity", "--out", out_arg(&d)], &[]);
    let s = summary(&o);
    assert_eq!(s["crossover_n"], 25);
    let c = std::fs::read_to_string(d.join("pulse_fidelity_c.csv")).unwrap();
    assert_eq!(c.lines().next(), Some("t,f_c"));
    let j = std::fs::read_to_string(d.join("pulse_fidelity_jc.csv")).unwrap();
    assert_eq!(j.lines().next(), Some("n,t,f_jc"));
}

#[test]
fn config_file_and_flags_compose() {
    let d = scratch("config");
    let cfg = d.join("run.json");
    std::fs::write(&cfg, r#"{"preset": "xi", "emit_wigner": false, "nbar": 0.09}"#).unwrap();
    let o = ion(
        &["sculpt-ideal", "--config", cfg.to_str().unwrap(), "--out", out_arg(&d)],
        &[],
    );
    let s = summary(&o);
    assert_eq!(s["cycles"], 1);
    assert!(num(&s, "fidelity") > 0.99 && num(&s, "probability") > 0.85, "{s}");
    assert!(!d.join("wigner_final.csv").exists());

    std::fs::write(&cfg, r#"{"unknown_key": 1}"#).unwrap();
    assert_eq!(
        ion(&["sculpt-ideal", "--config", cfg.to_str().unwrap()], &[])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn missing_root_is_a_solver_error() {
    let o = ion(
        &["sculpt-ideal", "--nbar", "0", "--out", out_arg(&scratch("noroot"))],
        &[("ION_SCULPT_G_TAU", "2.0")],
    );
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"], "no_finite_root");
}
