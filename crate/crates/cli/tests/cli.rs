use std::path::Path;
use std::process::{Command, Output};

use calogero_core::io::read_csv;
use calogero_core::{BigRational, CoefficientTable, ModelParams, Propagator};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_calogero")).args(args).current_dir(dir).output().expect("spawn calogero")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Asserts a failed run with exactly one `error: <kind>: ...` line on stderr.
fn assert_error(out: &Output, kind: &str) {
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(out));
    let err = stderr(out);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("error: {kind}: ")), "{err}");
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

#[test]
fn kernel_point_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        run(&["kernel", "--N", "2", "--ell", "1", "--t", "pi/8", "--x=-1,1", "--y=-0.5,0.7"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,abs"));
    let v: Vec<f64> = lines.next().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    let prop = Propagator::for_params(ModelParams::new(2, 1, 1.0).unwrap()).unwrap();
    let want = prop.eval(&[-1.0, 1.0], &[-0.5, 0.7], std::f64::consts::PI / 8.0).unwrap();
    assert_eq!((v[0], v[1]), (want.re, want.im));
}

#[test]
fn psi_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["psi", "--N", "3", "--ell", "2", "--x=-1,0.2,1.5", "--p=1,-0.3,2", "--out", "p.csv"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = read_csv(&dir.path().join("p.csv")).unwrap();
    assert_eq!(header, ["re", "im", "abs"]);
    assert_eq!(rows.len(), 1);
    assert!((rows[0][0].hypot(rows[0][1]) - rows[0][2]).abs() <= 1e-15 * rows[0][2]);
}

#[test]
fn invalid_configurations_fail_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 9] = [
        (&["kernel", "--N", "2", "--ell", "1", "--t", "pi", "--x=0,1", "--y=1,2"], "caustic"),
        (&["kernel", "--N", "2", "--ell", "1", "--t", "4", "--x=0,1", "--y=1,2"], "outside-window"),
        (&["kernel", "--N", "2", "--ell", "1", "--t", "2pi", "--x=0,1", "--y=1,2"], "usage"),
        (&["kernel", "--N", "2", "--ell", "1", "--t", "0.1", "--x=0,1,2", "--y=1,2"], "domain"),
        (
            &["kernel", "--N", "2", "--ell", "1", "--t", "0.1", "--x=0,1", "--y=1,2", "--route", "l0"],
            "domain",
        ),
        (&["verify", "--suite", "no-such-suite"], "parse"),
        (&["grid", "--N", "2", "--y=0,1"], "domain"),
        (&["grid", "--y=0,1"], "domain"),
        (&["evolve", "--N", "4", "--out", "e.csv"], "size-limit"),
    ];
    for (args, kind) in cases {
        assert_error(&run(args, dir.path()), kind);
    }
    // nothing is written when validation fails
    assert!(!dir.path().join("e.csv").exists());
    assert!(!dir.path().join("kernel.csv").exists());
}

#[test]
fn missing_table_file_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        run(&["psi", "--N", "2", "--ell", "1", "--x=0,1", "--p=1,2", "--table", "absent.json"], dir.path());
    assert_error(&out, "io");
}

#[test]
fn verify_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        run(&["verify", "--suite", "bessel-match", "--N", "2", "--ell", "3", "--out", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["suite"], "bessel-match");
    assert_eq!(report["passed"], true);
    assert!(!report["checks"].as_array().unwrap().is_empty());

    let out = run(&["verify", "--suite", "oracle-roundtrip", "--N", "3", "--ell", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["metric"].as_str().unwrap().contains("residual") && c["value"] == 0.0));

    // exit status follows the report, whatever the outcome
    let out = run(&["verify", "--suite", "free-limit", "--ell", "1"], dir.path());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let passed = report["passed"].as_bool().unwrap();
    assert_eq!(out.status.code(), Some(if passed { 0 } else { 1 }));
}

#[test]
fn solve_three_body_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["solve", "--N", "3", "--ell", "1", "--out", "t.json"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let table = CoefficientTable::read(dir.path().join("t.json")).unwrap();
    let terms: Vec<(Vec<u8>, String)> =
        table.terms().map(|(m, v)| (m.entries().to_vec(), v.to_string())).collect();
    assert_eq!(terms, vec![(vec![0, 0, 0], "1".to_string()), (vec![1, 1, 1], "1/2".to_string())]);
}

#[test]
fn solve_two_body_laurent_matches_factorial_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["solve", "--N", "2", "--ell", "4", "--basis", "laurent", "--out", "t.json"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let table = CoefficientTable::read(dir.path().join("t.json")).unwrap();
    assert_eq!(table.len(), 5);
    for (m, v) in table.terms() {
        let a = m.entries()[0] as u64;
        let want = factorial(4 + a) / (factorial(4 - a) * factorial(a));
        assert_eq!(*v, BigRational::from_integer(want.into()), "a={a}");
    }
}

#[test]
fn grid_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for stem in ["a", "b"] {
        let out = run(&["grid", "--res", "33", "--out", "g", "--stem", stem], dir.path());
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let g = dir.path().join("g");
    for suffix in [".csv", "_re.pgm", "_im.pgm", "_abs.pgm", "_pgm.txt"] {
        let a = std::fs::read(g.join(format!("a{suffix}"))).unwrap();
        let b = std::fs::read(g.join(format!("b{suffix}"))).unwrap();
        assert_eq!(a, b, "{suffix}");
    }
    let pgm = std::fs::read(g.join("a_abs.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n33 33\n255\n"));
    assert_eq!(pgm.len(), b"P5\n33 33\n255\n".len() + 33 * 33);
    let (header, rows) = read_csv(&g.join("a.csv")).unwrap();
    assert_eq!(header, ["u", "v", "re", "im", "abs"]);
    assert_eq!(rows.len(), 33 * 33);
    let sidecar = std::fs::read_to_string(g.join("a_pgm.txt")).unwrap();
    assert!(sidecar.starts_with("channel,min,max\nre,"));
}

#[test]
fn grid_zero_coupling_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["grid", "--ell", "0", "--res", "17", "--y=-1,-0.5,1.5"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let (_, rows) = read_csv(&dir.path().join("kernel.csv")).unwrap();
    assert!(rows.iter().all(|r| r[4].is_finite()));
    assert!(rows.iter().any(|r| r[4] > 0.0));
}

fn norm_drift(text: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with("norm: initial=")).expect("norm line");
    let field = line.split_whitespace().find_map(|f| f.strip_prefix("drift=")).unwrap();
    field.parse().unwrap()
}

#[test]
fn evolve_is_deterministic_and_unitary() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["evolve", "--N", "2", "--ell", "1", "--t", "0.3", "--res", "9"];
    let a = run(&[&args[..], &["--out", "a.csv"]].concat(), dir.path());
    let b = run(&[&args[..], &["--out", "b.csv"]].concat(), dir.path());
    assert!(a.status.success(), "{}", stderr(&a));
    assert!(b.status.success(), "{}", stderr(&b));
    assert_eq!(
        std::fs::read(dir.path().join("a.csv")).unwrap(),
        std::fs::read(dir.path().join("b.csv")).unwrap()
    );
    assert!(norm_drift(&stdout(&a)) <= 1e-3, "{}", stdout(&a));
    let (header, rows) = read_csv(&dir.path().join("a.csv")).unwrap();
    assert_eq!(header, ["x1", "x2", "re", "im", "abs", "re0", "im0", "abs0"]);
    assert_eq!(rows.len(), 81);
}

#[test]
fn evolve_zero_coupling_routes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["evolve", "--ell", "0", "--t", "0.3", "--x=-3,3;-2.5,3.2;0.5,-1", "--skip-norm"];
    let a = run(&[&args[..], &["--out", "a.csv"]].concat(), dir.path());
    let b = run(&[&args[..], &["--out", "b.csv", "--route", "l0"]].concat(), dir.path());
    assert!(a.status.success() && b.status.success(), "{}{}", stderr(&a), stderr(&b));
    let (_, ra) = read_csv(&dir.path().join("a.csv")).unwrap();
    let (_, rb) = read_csv(&dir.path().join("b.csv")).unwrap();
    let scale = ra.iter().map(|r| r[4]).fold(0.0, f64::max);
    for (p, q) in ra.iter().zip(&rb) {
        assert!((p[2] - q[2]).hypot(p[3] - q[3]) <= 1e-10 * scale);
    }
}

#[test]
fn evolve_short_time_returns_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "evolve",
            "--omega",
            "0",
            "--t",
            "1e-3",
            "--centres=-4,4",
            "--widths",
            "1.5,1.5",
            "--x=-4,4",
            "--skip-norm",
            "--out",
            "s.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let (_, rows) = read_csv(&dir.path().join("s.csv")).unwrap();
    let r = &rows[0];
    let diff = (r[2] - r[5]).hypot(r[3] - r[6]);
    assert!(diff <= 1e-3 * r[7], "{diff} vs {}", r[7]);
}
