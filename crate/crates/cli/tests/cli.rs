use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, contents).unwrap();
        path
    }
}

fn keller(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_keller"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn jac_reports_determinant_and_verdict() {
    let ws = Workspace::new();
    let square = ws.file("sq.map", "f = x^2\ng = y\n");
    let out = keller(&["jac", square.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "J = 2*x\nkeller: false\n");

    let shear = ws.file("shear.map", "f = x + y^2\ng = y\n");
    let out = keller(&["jac", shear.to_str().unwrap()]);
    assert_eq!(stdout(&out), "J = 1\nkeller: true\n");
}

#[test]
fn invert_prints_inverse_or_fails_with_one() {
    let ws = Workspace::new();
    let shear = ws.file("shear.map", "f = x + y^2\ng = y\n");
    let out = keller(&["invert", shear.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("status: inverse_found"), "{text}");
    assert!(text.contains("inverse: (-v^2 + u, v)"), "{text}");

    let square = ws.file("sq.map", "f = x^2\ng = y\n");
    let out = keller(&["invert", square.to_str().unwrap(), "--bound", "3"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("no_inverse_within_bound"));
}

#[test]
fn annihilator_command() {
    let ws = Workspace::new();
    let shear = ws.file("shear.map", "f = x + y^2\ng = y\n");
    let out = keller(&["annihilator", shear.to_str().unwrap(), "--coord", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("phi = u2^2 - u1 + z\ndeg_z: 1\n"), "{}", stdout(&out));

    let square = ws.file("sq.map", "f = x^2\ng = y\n");
    let out = keller(&["annihilator", square.to_str().unwrap(), "--coord", "1"]);
    assert_eq!(code(&out), 2);
    let out = keller(&["annihilator", square.to_str().unwrap(), "--coord", "1", "--unchecked"]);
    assert!(stdout(&out).contains("deg_z: 2"));
    let out = keller(&["annihilator", square.to_str().unwrap(), "--coord", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn dynamics_commands() {
    let ws = Workspace::new();
    let swap = ws.file("swap.map", "f = y\ng = x\n");
    let out = keller(&["order", swap.to_str().unwrap()]);
    assert_eq!((code(&out), stdout(&out)), (0, "order: 2\n".to_string()));

    let shift = ws.file("shift.map", "f = x + 1\ng = y\n");
    let out = keller(&["order", shift.to_str().unwrap(), "--max", "50"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "order: none (checked up to 50)\n");

    let out = keller(&["fixed-points", swap.to_str().unwrap()]);
    assert_eq!(stdout(&out), "kind: positive_dimensional\ndefining: x - y = 0\n");
    let out = keller(&["fixed-points", shift.to_str().unwrap()]);
    assert_eq!(stdout(&out), "kind: empty\n");

    let hyper = ws.file("hyper.map", "f = 2*x\ng = 1/2*y\n");
    let out = keller(&["classify-affine", hyper.to_str().unwrap()]);
    let text = stdout(&out);
    assert!(text.contains("det: 1\n") && text.contains("fixed point: (0, 0)\n"), "{text}");
    assert!(text.contains("finite order: none\n"));
    let out = keller(&["classify-affine", ws.file("sq.map", "f = x^2\ng = y").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn pq_check_command() {
    let ws = Workspace::new();
    let p = ws.file("p.map", "f = x^2\ng = y\n");
    let q = ws.file("q.map", "f = -x\ng = y\n");
    let out = keller(&["pq-check", p.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!((code(&out), stdout(&out)), (0, "identical\n".to_string()));

    let shear = ws.file("shear.map", "f = x + y^2\ng = y\n");
    let out = keller(&["pq-check", shear.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "difference:\n  -2*x = 0\n");
}

#[test]
fn factor_command() {
    let out = keller(&["factor", "z^4 - 1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "1 * (z - 1) * (z + 1) * (z^2 + 1)\nirreducible: false\n"
    );
    let out = keller(&["factor", "2*t^2 - 4"]);
    assert_eq!(stdout(&out), "2 * (t^2 - 2)\nirreducible: true\n");
    let out = keller(&["factor", "t^2 + s"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn census_preimage_json_is_stable_across_jobs() {
    let ws = Workspace::new();
    let shear = ws.file("shear.map", "f = x + y^2\ng = y\n");
    let mut reports = Vec::new();
    for jobs in ["1", "2", "8"] {
        let out = keller(&["census", "preimage", shear.to_str().unwrap(), "--n", "6", "--jobs", jobs, "--json"]);
        assert_eq!(code(&out), 0);
        reports.push(stdout(&out));
    }
    assert!(reports.iter().all(|r| *r == reports[0]));
    let v: serde_json::Value = serde_json::from_str(&reports[0]).unwrap();
    assert_eq!(v["n"], 6);
    assert_eq!(v["total_points"], 169);
    assert_eq!(v["unique_count"], 169);
    assert_eq!(v["bad_pairs"]["multi"], 0);
    assert!(v["elapsed_ms"].is_null());
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut expected = vec![
        "n", "total_points", "unique_count", "multi_count", "bad_pairs", "multi_points", "elapsed_ms",
    ];
    expected.sort();
    let mut keys = keys;
    keys.sort();
    assert_eq!(keys, expected);

    let target = ws.dir.path().join("report.json");
    let out = keller(&[
        "census", "preimage", shear.to_str().unwrap(), "--n", "6", "--json", "--out", target.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    assert_eq!(fs::read_to_string(target).unwrap(), reports[0]);
}

#[test]
fn census_growth_commands() {
    let ws = Workspace::new();
    let a = ws.file("a.poly", "# reducibility\nA = z^2 - (x^2 + y)\n");
    let out = keller(&["census", "reducible", a.to_str().unwrap(), "--ns", "10,20", "--csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "N,count\n10,50\n20,109\n");

    let out = keller(&["census", "integral", "--num", "x", "--den", "1", "--ns", "2", "--csv"]);
    assert_eq!(stdout(&out), "N,count\n2,25\n");

    let out = keller(&["census", "variety", "x*y - 1", "--ns", "10,100", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["entries"][1]["count"], 2);
    assert_eq!(v["fitted_exponent"], 0.0);
}

#[test]
fn usage_and_parse_errors_exit_with_two() {
    let ws = Workspace::new();
    let bad = ws.file("bad.map", "f = x +\ng = y\n");
    let out = keller(&["jac", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 1, column 8"), "{err}");

    assert_eq!(code(&keller(&["no-such-command"])), 2);
    assert_eq!(code(&keller(&["jac", "/nonexistent/file.map"])), 2);
    assert_eq!(code(&keller(&["census", "variety", "x*y", "--ns", "3", "--json", "--csv"])), 2);
}
