use std::fs;
use std::process::Command;

fn loctime() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loctime"))
}

fn stdout(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn simulate_dumps_sorted_ledger() {
    let csv = stdout(loctime().args(["simulate", "-d", "2", "-n", "500", "--seed", "4"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x1,x2,count"));
    let rows: Vec<Vec<i64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.iter().map(|r| r[2]).sum::<i64>(), 500);
    assert!(rows.windows(2).all(|w| w[0][..2] < w[1][..2]));
}

#[test]
fn oracle_tables_carry_provenance() {
    let csv = stdout(loctime().args(["oracle", "returns", "-d", "2", "--n-max", "4"]));
    let header: Vec<&str> = csv.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(header.iter().any(|l| l.starts_with("# method:")));
    assert!(header.iter().any(|l| l.starts_with("# tolerance:")));
    assert!(header.iter().any(|l| l.starts_with("# truncation:")));
    assert!(csv.contains("\n4,0.140625,0.078125\n"));
    let esc = stdout(loctime().args(["oracle", "escape", "-d", "3", "--n-max", "3"]));
    assert!(esc.contains("# gamma_d: 0.6594"));
    let bad = loctime()
        .args(["oracle", "escape", "-d", "2", "--n-max", "3"])
        .output()
        .unwrap();
    assert!(!bad.status.success());
}

#[test]
fn experiment_run_report_and_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("line.cfg");
    fs::write(
        &cfg,
        "theorem = max-line\nd = 2\nsubset = line:1,-1\nschedule = 1e3, 1e4, 1e5\nwalkers = 8\nseed = 3\n",
    )
    .unwrap();
    let out = dir.path().join("run");
    let text = stdout(
        loctime()
            .args(["experiment", "run"])
            .arg(&cfg)
            .arg("-o")
            .arg(&out)
            .arg("--svg"),
    );
    assert!(text.contains("max-line"));
    for f in [
        "records.csv",
        "summary.csv",
        "plot.csv",
        "plot.svg",
        "manifest.json",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    let rep = stdout(loctime().arg("report").arg(out.join("manifest.json")));
    assert!(rep.contains("envelope-mean"));
    let again = dir.path().join("again");
    let text = stdout(
        loctime()
            .args(["experiment", "run"])
            .arg(out.join("manifest.json"))
            .arg("-o")
            .arg(&again),
    );
    assert!(text.contains("rerun identical: true"));
    assert_eq!(
        fs::read(out.join("records.csv")).unwrap(),
        fs::read(again.join("records.csv")).unwrap()
    );
}

#[test]
fn memory_policy_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("big.cfg");
    fs::write(
        &cfg,
        "theorem = max-2d\nd = 2\nsubset = all\nschedule = 1e8\nwalkers = 1\nseed = 1\n",
    )
    .unwrap();
    let out = loctime()
        .args(["experiment", "run"])
        .arg(&cfg)
        .arg("-o")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("memory policy"));
}
