use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_granhydro"));
    c.env_remove("GRANHYDRO_OUT").env("RUST_LOG", "warn");
    c
}

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn run_haff(dir: &Path) {
    let out = bin().arg("run").arg(scenarios().join("haff.json")).arg("--out").arg(dir).output().unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn run_then_verify() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("haff");
    run_haff(&dir);
    for f in ["scenario.json", "diagnostics.csv", "balance.csv", "final.csv", "report.json", "manifest.json"] {
        assert!(dir.join(f).is_file(), "{f}");
    }
    assert!(dir.join("snapshot_t1.csv").is_file());
    let out = bin().arg("verify").arg(&dir).output().unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verify_rejects_tampered_energy() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("haff");
    run_haff(&dir);
    let path = dir.join("diagnostics.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    // raise E in one record; the hash check and the monotonicity check both catch it
    let mut cols: Vec<String> = lines[20].split(',').map(String::from).collect();
    let e: f64 = cols[3].parse().unwrap();
    cols[3] = format!("{:e}", e * 1.5);
    lines[20] = cols.join(",");
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    let out = bin().arg("verify").arg(&dir).output().unwrap();
    assert_eq!(code(&out), 4);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("diagnostics.csv"), "{stdout}");
    assert!(stdout.contains("energy_non_increasing"), "{stdout}");
}

#[test]
fn cold_singular_trajectory() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["exact", "singular", "--param", "alpha0=1", "--param", "s0=0", "--param", "t_end=3", "--out"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_path(tmp.path().join("singular.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["t", "alpha", "s"]);
    let mut n = 0;
    for row in rdr.records() {
        let row = row.unwrap();
        let t: f64 = row[0].parse().unwrap();
        let alpha: f64 = row[1].parse().unwrap();
        assert!((alpha - 1.0 / (t + 1.0)).abs() < 1e-8, "t = {t}");
        n += 1;
    }
    assert!(n > 2);
}

#[test]
fn unknown_exact_parameter_is_invalid() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin().args(["exact", "haff", "--param", "rho=2", "--out"]).arg(tmp.path()).output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn invalid_scenario_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("bad.json");
    let text = std::fs::read_to_string(scenarios().join("haff.json")).unwrap().replace("1.6666666666666667", "0.9");
    std::fs::write(&path, text).unwrap();
    let out = bin().arg("run").arg(&path).arg("--out").arg(tmp.path().join("o")).output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_scenario_exits_1() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin().arg("run").arg(tmp.path().join("absent.json")).output().unwrap();
    assert_eq!(code(&out), 1);
}
