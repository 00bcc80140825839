use std::process::{Command, Output};

use rarita_core::kernel_io::{load, Kernel};

fn rarita(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rarita")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_kernel_writes_loadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let zk = dir.path().join("z30.txt");
    let o = rarita(&["gen-kernel", "--n", "3", "--k", "0", "--kind", "zk", "--out", zk.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&zk).unwrap();
    assert!(text.contains("terms = 1\n") && text.contains("blade=0 coeff=1/1"));

    let ek = dir.path().join("e31.txt");
    let o = rarita(&["gen-kernel", "--n", "3", "--k", "1", "--kind", "ek", "--out", ek.to_str().unwrap()]);
    assert!(o.status.success());
    match load(&ek).unwrap() {
        Kernel::Ek(e) => assert_eq!((e.n, e.k), (3, 1)),
        other => panic!("wrong kind {:?}", other.kind()),
    }
}

#[test]
fn gen_kernel_rejects_small_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.txt");
    let o = rarita(&["gen-kernel", "--n", "2", "--k", "1", "--kind", "zk", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn check_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let o = rarita(&["check", "lemma6", "reproducing", "--n", "3", "--k", "2", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("[check lemma6]\nstatus = pass\nresidual = exact-zero"));
    assert_eq!(text.matches("[check ").count(), 2);

    let o = rarita(&["check", "stokes", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("stokes") && stdout(&o).contains("fail"));

    let o = rarita(&["check", "ek-left", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("skipped"));

    assert_eq!(rarita(&["check", "nonexistent"]).status.code(), Some(2));
    assert_eq!(rarita(&["check", "lemma6", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(rarita(&["bogus"]).status.code(), Some(2));
}

#[test]
fn eval_ek_prints_blades() {
    let o = rarita(&["eval-ek", "--n", "3", "--k", "1", "--x", "0.5,-1,2", "--u", "0,1,0", "--v", "1,0,0"]);
    assert!(o.status.success());
    let lines: Vec<_> = stdout(&o).lines().map(str::to_string).collect();
    assert!(!lines.is_empty());
    for l in &lines {
        let (b, v) = l.split_once(',').unwrap();
        b.parse::<u16>().unwrap();
        assert!(v.parse::<f64>().unwrap().is_finite());
    }
    let o = rarita(&["eval-ek", "--n", "3", "--k", "1", "--x", "0,0,0", "--u", "0,1,0", "--v", "1,0,0"]);
    assert_eq!(o.status.code(), Some(2));
}
