use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use csc::instance::{load, save, Fleet, Instance, Point};

fn csc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csc")).args(args).output().expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const SPEC: &str = r#"{
  "targets": {"min": 3, "max": 7},
  "chargers": 2,
  "sensors": {"min": 1, "max": 2},
  "side": 10.0,
  "speed": 1.0,
  "sweep_period": 12.0,
  "charge_period": 24.0,
  "seeds": 5,
  "base_seed": 11,
  "variants": ["rcsc_tc_ge_tt", "csc2_tc_ge_tt"]
}"#;

fn write_instance(dir: &Path, name: &str, inst: &Instance) -> String {
    let path = dir.join(name);
    fs::write(&path, save(inst)).unwrap();
    path.to_str().unwrap().to_string()
}

fn one_charger(n: usize) -> Instance {
    let targets: Vec<Point> = (0..n).map(|i| Point::new(1.0 + 0.1 * i as f64, 0.5)).collect();
    let fleet = Fleet { sensors: 1, speed: 1.0, sweep_period: 8.0, charge_period: 8.0 };
    Instance::euclidean(&targets, &[Point::new(0.0, 0.0)], fleet)
}

#[test]
fn gen_is_deterministic_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(&spec, SPEC).unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(csc(&["gen", p(&spec), "--out", p(&a)]).status.success());
    assert!(csc(&["gen", p(&spec), "--out", p(&b)]).status.success());
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 5);
    for name in names {
        let x = fs::read(a.join(&name)).unwrap();
        assert_eq!(x, fs::read(b.join(&name)).unwrap());
        let inst = load(&x).unwrap();
        assert!(inst.validate().is_valid());
        assert_eq!(inst.n_chargers(), 2);
    }
}

#[test]
fn solve_then_verify_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(dir.path(), "line.json", &one_charger(4));
    let out = dir.path().join("out");
    let run = csc(&["solve", &inst, "--variant", "rcsc", "--out", p(&out)]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let schedule = out.join("line.schedule.json");
    assert!(out.join("line.report.json").exists());

    let check = csc(&["verify", &inst, p(&schedule)]);
    assert_eq!(check.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&check.stdout).unwrap();
    assert_eq!(report["feasible"], true);

    let (s1, s2) = (dir.path().join("1.svg"), dir.path().join("2.svg"));
    assert!(csc(&["render", &inst, p(&schedule), "--out", p(&s1)]).status.success());
    assert!(csc(&["render", &inst, p(&schedule), "--out", p(&s2)]).status.success());
    assert_eq!(fs::read(&s1).unwrap(), fs::read(&s2).unwrap());
}

#[test]
fn verify_flags_stretched_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(dir.path(), "line.json", &one_charger(4));
    let out = dir.path().join("out");
    assert!(csc(&["solve", &inst, "--variant", "rcsc", "--out", p(&out)]).status.success());
    let path = out.join("line.schedule.json");
    let mut doc: serde_json::Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    doc["itineraries"][0]["segments"][0]["length"] = serde_json::json!(100.0);
    fs::write(&path, serde_json::to_vec(&doc).unwrap()).unwrap();
    assert_eq!(csc(&["verify", &inst, p(&path)]).status.code(), Some(1));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(dir.path(), "one.json", &one_charger(3));
    let out = dir.path().join("out");
    let run = csc(&["solve", &inst, "--variant", "csc2", "--out", p(&out)]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("requires exactly 2 chargers"));

    let big = write_instance(dir.path(), "big.json", &one_charger(20));
    let run = csc(&["solve", &big, "--variant", "rcsc", "--kernel", "exact", "--out", p(&out)]);
    assert_eq!(run.status.code(), Some(2));
    let run = csc(&["solve", &big, "--variant", "rcsc", "--kernel", "heuristic", "--seed", "3", "--out", p(&out)]);
    assert!(run.status.success());

    let missing = dir.path().join("missing.json");
    assert_eq!(csc(&["solve", p(&missing), "--variant", "rcsc", "--out", p(&out)]).status.code(), Some(2));
}

#[test]
fn render_needs_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let fleet = Fleet { sensors: 1, speed: 1.0, sweep_period: 4.0, charge_period: 4.0 };
    let inst = Instance::with_matrix(1, 1, vec![0.0, 1.0, 1.0, 0.0], fleet).unwrap();
    let inst = write_instance(dir.path(), "m.json", &inst);
    let out = dir.path().join("out");
    assert!(csc(&["solve", &inst, "--variant", "rcsc", "--out", p(&out)]).status.success());
    let run = csc(&["render", &inst, p(&out.join("m.schedule.json")), "--out", p(&dir.path().join("m.svg"))]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("rendering requires coordinates"));
}

#[test]
fn certify_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(&spec, SPEC).unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(csc(&["certify", p(&spec), "--out", p(&a)]).status.success());
    assert!(csc(&["certify", p(&spec), "--out", p(&b)]).status.success());
    let csv = fs::read_to_string(a.join("certify.csv")).unwrap();
    assert_eq!(csv, fs::read_to_string(b.join("certify.csv")).unwrap());
    assert_eq!(csv.lines().count(), 11);

    let empty = dir.path().join("empty.json");
    fs::write(&empty, SPEC.replace("\"seeds\": 5", "\"seeds\": 0")).unwrap();
    let c = dir.path().join("c");
    assert!(csc(&["certify", p(&empty), "--out", p(&c)]).status.success());
    assert_eq!(fs::read_to_string(c.join("certify.csv")).unwrap().lines().count(), 1);
}

#[test]
fn bound_prints_ratio() {
    let run = csc(&["bound", "--variant", "rcsc", "--q", "1", "--alpha", "0.5"]);
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "0.393469");
    let run = csc(&["bound", "--variant", "csc2", "--q-hat", "2", "--alpha", "0.5", "--gamma", "0.4"]);
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "0.213372");
    assert_eq!(csc(&["bound", "--variant", "rcsc", "--q", "1", "--alpha", "2"]).status.code(), Some(2));
}
