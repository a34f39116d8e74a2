//! End-to-end checks of the `qite` binary.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qite"))
}

#[test]
fn runs_a_config_and_writes_both_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(
        &config,
        "method = all\n\
         [model]\n\
         n = 3\n\
         [ite]\n\
         steps = 10\n\
         [qite]\n\
         steps = 10\n\
         [varqite]\n\
         steps = 10\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(out_dir.join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("method,step,beta,energy,fidelity,extra\n"));
    // every data row: method name, integer step, %.12e numbers
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 6, "bad row: {line}");
        fields[1].parse::<usize>().unwrap();
        for f in &fields[2..4] {
            assert!(f.contains('e'), "not scientific notation: {f}");
            f.parse::<f64>().unwrap();
        }
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
            .unwrap();
    assert!(summary["e_gs"].is_number());
    assert!(summary["wall_seconds"].is_number());
    assert!(summary["methods"]["qite_d2"]["final_energy"].is_number());
}

#[test]
fn no_method_undercuts_the_ground_energy() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(
        &config,
        "method = all\n\
         [model]\n\
         n = 4\n\
         [ite]\n\
         steps = 40\n\
         [qite]\n\
         steps = 40\n\
         domains = 2, 4\n\
         [varqite]\n\
         steps = 100\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
            .unwrap();
    let e_gs = summary["e_gs"].as_f64().unwrap();
    for (name, m) in summary["methods"].as_object().unwrap() {
        let e = m["final_energy"].as_f64().unwrap();
        assert!(e >= e_gs - 1e-9, "{name}: {e} undercuts e_gs = {e_gs}");
    }
}

#[test]
fn long_ite_run_reaches_the_ground_energy() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(
        &config,
        "method = ite\n[model]\nn = 8\n[ite]\ndtau = 0.25\nsteps = 80\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
            .unwrap();
    let gap = summary["final_energy"].as_f64().unwrap() - summary["e_gs"].as_f64().unwrap();
    assert!(gap.abs() <= 1e-6, "gap {gap:e}");
}

#[test]
fn rejects_a_bad_config_with_a_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.conf");
    std::fs::write(&config, "method = ed\n[model]\nn = 4\nwhat = 1\n").unwrap();
    let out = bin().args(["--config"]).arg(&config).output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 4"), "{stderr}");
    assert!(stderr.contains("what"), "{stderr}");
}

#[test]
fn rejects_domain_size_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.conf");
    std::fs::write(&config, "method = qite\n[model]\nn = 4\n[qite]\ndomains = 1\n").unwrap();
    let out = bin().args(["--config"]).arg(&config).output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("domain_size"), "{stderr}");
}

#[test]
fn missing_config_file_fails_cleanly() {
    let out = bin().args(["--config", "/nonexistent/x.conf"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
}

#[test]
fn hamiltonian_file_model_source_works() {
    let dir = tempfile::tempdir().unwrap();
    let ham = dir.path().join("h.txt");
    std::fs::write(&ham, "-1.0 ZZ\n1.0 XI\n1.0 IX\n").unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(
        &config,
        format!(
            "method = ite\n[model]\nhamiltonian_file = {}\n[ite]\nsteps = 40\n",
            ham.display()
        ),
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
            .unwrap();
    // same model as TFIM N=2, J=1, g=1
    let e_gs = summary["e_gs"].as_f64().unwrap();
    assert!((e_gs + 5f64.sqrt()).abs() <= 1e-6, "e_gs = {e_gs}");
}
