use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn calmks(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_calmks"))
        .args(args)
        .output()
        .expect("spawn calmks")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn norm_value(text: &str, name: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(name).and_then(|r| r.strip_prefix(' ')))
        .unwrap_or_else(|| panic!("no {name} in {text}"))
        .trim()
        .parse()
        .unwrap()
}

fn snapshot_stems(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| {
            let name = e.unwrap().file_name().into_string().unwrap();
            name.strip_suffix(".bin").map(str::to_owned)
        })
        .collect();
    v.sort();
    v
}

#[test]
fn zero_horizon_writes_initial_snapshot_only() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("run");
    let out = calmks(&[
        "simulate",
        "--n",
        "32",
        "--T",
        "0",
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(snapshot_stems(&out_dir), ["snap_00000"]);
    assert!(out_dir.join("manifest.txt").exists());
    assert!(out_dir.join("norms.csv").exists());

    // grad-sines initial data has L2 norm 2 sqrt(2) pi
    let norms = calmks(&["norms", out_dir.join("snap_00000.bin").to_str().unwrap()]);
    assert!(norms.status.success());
    let l2 = norm_value(&stdout(&norms), "l2");
    assert!((l2 - 2.0 * 2f64.sqrt() * std::f64::consts::PI).abs() < 1e-8, "{l2}");
}

#[test]
fn snapshots_follow_the_snapshot_interval() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("run");
    let out = calmks(&[
        "simulate",
        "--form",
        "vector",
        "--kind",
        "type3",
        "--epsilon",
        "0.1",
        "--n",
        "32",
        "--dt",
        "1e-3",
        "--T",
        "0.02",
        "--snapshot-every",
        "0.01",
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(snapshot_stems(&out_dir).len(), 3);
    let meta = fs::read_to_string(out_dir.join("snap_00002.meta")).unwrap();
    assert!(meta.contains("t = 0.02"), "{meta}");
}

#[test]
fn rerun_from_manifest_is_bitwise_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("a");
    let out = calmks(&[
        "simulate",
        "--kind",
        "type1",
        "--epsilon",
        "0.05",
        "--n",
        "32",
        "--dt",
        "1e-3",
        "--T",
        "0.01",
        "--output-dir",
        first.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let second = tmp.path().join("b");
    let out = calmks(&[
        "simulate",
        "--config",
        first.join("manifest.txt").to_str().unwrap(),
        "--output-dir",
        second.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    for stem in snapshot_stems(&first) {
        let file = format!("{stem}.bin");
        assert_eq!(fs::read(first.join(&file)).unwrap(), fs::read(second.join(&file)).unwrap());
    }
    assert_eq!(
        fs::read(first.join("norms.csv")).unwrap(),
        fs::read(second.join("norms.csv")).unwrap()
    );
}

#[test]
fn missing_config_fails_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("run");
    let out = calmks(&[
        "simulate",
        "--config",
        tmp.path().join("nope.cfg").to_str().unwrap(),
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(!out_dir.exists());
}

#[test]
fn invalid_values_fail_before_running() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("run");
    for bad in [["--n", "31"], ["--dt", "-1"], ["--kind", "type9"], ["--lambda", "x"]] {
        let out = calmks(&["simulate", bad[0], bad[1], "--output-dir", out_dir.to_str().unwrap()]);
        assert!(!out.status.success(), "{bad:?}");
    }
    assert!(!out_dir.exists());
}

#[test]
fn blow_up_exits_nonzero_with_time() {
    let tmp = tempfile::tempdir().unwrap();
    let out = calmks(&[
        "simulate",
        "--form",
        "vector",
        "--init",
        "high-osc",
        "--n",
        "32",
        "--dt",
        "0.5",
        "--T",
        "50",
        "--output-dir",
        tmp.path().join("run").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("blow-up at t ="), "{err}");
}

#[test]
fn converge_rejects_single_epsilon() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("run");
    let out = calmks(&[
        "converge",
        "--kind",
        "type1",
        "--eps-list",
        "0.1",
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 3"));
    assert!(!out_dir.exists());
}

#[test]
fn converge_writes_csv_and_slopes() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("run");
    let out = calmks(&[
        "converge",
        "--kind",
        "type2",
        "--n",
        "32",
        "--dt",
        "1e-3",
        "--T",
        "0.05",
        "--eps-list",
        "0.1,0.03,0.01",
        "--jobs",
        "1",
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("slope")).count(), 3, "{text}");
    let csv = fs::read_to_string(out_dir.join("errors.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    let slope: f64 = text
        .lines()
        .find(|l| l.starts_with("slope Linf(L2)"))
        .and_then(|l| l.split_whitespace().nth(2))
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 2.0).abs() < 0.2, "{slope}");
}

#[test]
fn norms_of_truncated_and_zero_snapshots() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("run");
    let out = calmks(&[
        "simulate",
        "--n",
        "16",
        "--T",
        "0",
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let bin = out_dir.join("snap_00000.bin");
    let bytes = fs::read(&bin).unwrap();

    fs::write(&bin, vec![0u8; bytes.len()]).unwrap();
    let zero = calmks(&["norms", bin.to_str().unwrap()]);
    assert!(zero.status.success());
    let text = stdout(&zero);
    for name in ["l2", "linf", "h2"] {
        assert_eq!(norm_value(&text, name), 0.0);
    }

    fs::write(&bin, &bytes[..bytes.len() - 8]).unwrap();
    let truncated = calmks(&["norms", bin.to_str().unwrap()]);
    assert!(!truncated.status.success());
    let missing = calmks(&["norms", tmp.path().join("none.bin").to_str().unwrap()]);
    assert!(!missing.status.success());
}
