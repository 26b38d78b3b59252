use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn spinorbit(dir: &Path, mode: &str, config: &str, extra: &[&str]) -> std::process::Output {
    let path = dir.join("run.toml");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_spinorbit"))
        .arg(mode)
        .arg("--config")
        .arg(&path)
        .args(extra)
        .output()
        .unwrap()
}

#[test]
fn chsh_single_photon() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinorbit(
        dir.path(),
        "chsh",
        "[state]\nfamily = \"entangled-fock\"\nn = 1\n",
        &[],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    let s = v["s_value"].as_f64().unwrap();
    assert!(
        (s - 2.828427).abs() < 1e-6 && (s - 2.0 * 2f64.sqrt()).abs() < 1e-9,
        "{s}"
    );
}

#[test]
fn coherent_noise_scan_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"
        [state]
        family = "pure-coherent"
        u = 2.0
        [scan.alpha]
        start = 0
        stop = "pi"
        points = 9
        [scan.beta]
        start = 0
        stop = "pi"
        points = 9
    "#;
    let target = dir.path().join("scan.csv");
    let out = spinorbit(
        dir.path(),
        "noise-scan",
        config,
        &["--output", target.to_str().unwrap()],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&target).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("alpha,beta,mean_m,var_m,itot,mean_ratio,var_ratio")
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 81);
    for row in rows {
        assert!((row[6] - 1.0).abs() < 1e-6, "{row:?}");
    }
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = "[state]\nfamily = \"two-mode-squeezed-vacuum\"\nzeta = 1.0\n[scan.alpha]\nstart = 0\nstop = \"pi/2\"\npoints = 4\n";
    let a = spinorbit(dir.path(), "noise-scan", config, &["--format", "json"]);
    let b = spinorbit(dir.path(), "noise-scan", config, &["--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn mode_pattern_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinorbit(
        dir.path(),
        "mode-pattern",
        "[pattern]\nlabel = \"phi-minus\"\nresolution = 5\n",
        &[],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("x,y,EH_re,EH_im,EV_re,EV_im\n"));
    assert_eq!(text.lines().count(), 26);
}

#[test]
fn verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinorbit(dir.path(), "verify", "", &[]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().len() > 20);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let typo = spinorbit(
        dir.path(),
        "chsh",
        "[state]\nfamily = \"entangled-fock\"\nn = 1\ngamma = 0.1\n",
        &[],
    );
    assert_eq!(typo.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&typo.stderr).contains("gamma"));

    let range = spinorbit(
        dir.path(),
        "chsh",
        "[state]\nfamily = \"werner-fock\"\nn = 1\np = 1.5\n",
        &[],
    );
    assert_eq!(range.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&range.stderr).contains("state.p"));

    let huge = spinorbit(
        dir.path(),
        "chsh",
        "[state]\nfamily = \"pure-coherent\"\nu = 2000.0\n",
        &[],
    );
    assert_eq!(huge.status.code(), Some(3));

    let unwritable = dir.path().join("missing").join("out.json");
    let io = spinorbit(
        dir.path(),
        "chsh",
        "[state]\nfamily = \"entangled-fock\"\nn = 1\n",
        &["--output", unwritable.to_str().unwrap()],
    );
    assert_eq!(io.status.code(), Some(4));

    let missing = Command::new(env!("CARGO_BIN_EXE_spinorbit"))
        .args(["chsh", "--config"])
        .arg(dir.path().join("absent.toml"))
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(4));
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let text = fs::read_to_string(&path).unwrap();
            spinorbit_cli::parse_config(&text)
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert!(seen >= 5);
}
