use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn here(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(rel)
}

fn arcspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arcspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn job(name: &str) -> String {
    here(&format!("jobs/{name}")).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(here(&format!("golden/{name}"))).unwrap()
}

#[test]
fn multiplicity_of_example_three() {
    let o = arcspace(&["mult", "--job", &job("ex3.job")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[result]\nm = 2\n");
}

#[test]
fn example_one_model() {
    let o = arcspace(&["model", "--job", &job("ex1.job"), "--N", "2", "--K", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("equations = 1\n"));
    assert!(text.contains("leading.1 = c_z_0^2\n"));
    assert_eq!(text, golden("ex1_model.txt"));
}

#[test]
fn control_point_obstruction() {
    let o = arcspace(&["lift-arc", "--job", &job("ex1_lift.job")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("ex1_lift.txt"));
}

#[test]
fn verify_example_one() {
    let o = arcspace(&["verify-example", "--example", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("verify_1.txt"));
}

#[test]
fn verify_examples_two_and_three() {
    for (e, r) in [("2", "1"), ("2", "3"), ("3", "1"), ("3", "2")] {
        let o = arcspace(&["verify-example", "--example", e, "--r", r]);
        assert_eq!(o.status.code(), Some(0), "example {e} r={r}\n{}", stdout(&o));
        assert!(!stdout(&o).contains("status = fail"));
    }
}

#[test]
fn other_commands() {
    let o = arcspace(&["lift", "--job", &job("curve.job")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("obstruction.0 = e\n"));

    let o = arcspace(&["flow", "--job", &job("flow.job")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("arc.x = t - 3/2*t^3 + 9/8*t^5 - 9/16*t^7 + O(t^8)\n"));

    let o = arcspace(&["truncate", "--job", &job("truncate.job")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("arc.x = t + O(t^10)\n"));

    let o = arcspace(&["model", "--job", &job("x2y.job")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("series.0 = c_0_1*c_2_0\n"));
}

#[test]
fn json_matches_text() {
    let o = arcspace(&[
        "model",
        "--job",
        &job("ex1.job"),
        "--N",
        "2",
        "--K",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let obj = v.as_object().unwrap();
    assert_eq!(obj["leading.1"], "c_z_0^2");
    assert_eq!(obj["equations"], "1");
    assert!(obj.values().all(|x| x.is_string()));

    let o = arcspace(&["verify-example", "--example", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["check.control-point[Q[w]/(w^3)].obstruction"], "w^2");
    assert_eq!(v["check.alpha-identity.status"], "pass");
}

#[test]
fn out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let o = arcspace(&["mult", "--job", &job("ex3.job"), "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(path).unwrap(), "[result]\nm = 2\n");
}

#[test]
fn selftest_is_byte_stable() {
    let a = arcspace(&["selftest", "--seed", "3"]);
    let b = arcspace(&["selftest", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("[result]\nseed = 3\n"));
    assert!(!stdout(&a).contains("status = fail"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.job");
    std::fs::write(
        &bad,
        "[hypersurface]\nvariables = x, y, z\ntransverse = y\nequation = x*y -* z^2\n[arc]\nx = t\ny = 0\nz = 0\n[run]\ncommand = mult\n",
    )
    .unwrap();
    let o = arcspace(&["mult", "--job", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.job:4:17"), "{err}");

    let cases: [&[&str]; 6] = [
        &["model", "--job", &job("ex3.job")],
        &["mult"],
        &["mult", "--job", "/nonexistent/x.job"],
        &["verify-example"],
        &["verify-example", "--example", "4"],
        &["verify-example", "--example", "1", "--N", "0"],
    ];
    for args in cases {
        assert_eq!(arcspace(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(arcspace(&["nonsense"]).status.code(), Some(2));
    assert_eq!(arcspace(&["mult", "--format", "yaml"]).status.code(), Some(2));
}
