use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperdilute"))
        .args(args)
        .current_dir(dir)
        .env_remove("HYPERDILUTE_BUDGET")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(dir: &Path, args: &[&str]) -> i32 {
    run(dir, args).status.code().expect("exit status")
}

fn put(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

#[test]
fn ghw_of_the_small_jigsaw() {
    let t = TempDir::new().unwrap();
    ok(t.path(), &["gen", "jigsaw", "2", "2", "-o", "j22.hg"]);
    assert_eq!(ok(t.path(), &["width", "--kind", "ghw", "j22.hg"]).trim(), "2");
    assert_eq!(ok(t.path(), &["width", "--kind", "tw", "j22.hg"]).trim(), "2");
    let json = ok(t.path(), &["--format", "json", "width", "j22.hg", "--witness", "d.json"]);
    assert!(json.contains("\"width\": 2"));
    assert!(fs::read_to_string(t.path().join("d.json")).unwrap().starts_with('{'));
}

#[test]
fn text_and_json_round_trip() {
    let t = TempDir::new().unwrap();
    ok(t.path(), &["gen", "grid", "3", "3", "-o", "g.hg"]);
    ok(t.path(), &["--format", "json", "dual", "g.hg", "-o", "d.json"]);
    ok(t.path(), &["dual", "d.json", "-o", "back.hg"]);
    // the double dual of a graph without isolated vertices is itself
    assert_eq!(code(t.path(), &["check-dilution", "back.hg", "g.hg", "--sequence", "/dev/null"]), 0);
    ok(t.path(), &["reduce", "g.hg", "--sequence", "r.seq", "-o", "r.hg"]);
    ok(t.path(), &["dilute", "g.hg", "r.seq", "-o", "r2.hg"]);
    assert_eq!(
        fs::read_to_string(t.path().join("r.hg")).unwrap(),
        fs::read_to_string(t.path().join("r2.hg")).unwrap()
    );
}

#[test]
fn packaged_mesh_sequence_reaches_the_jigsaw() {
    let t = TempDir::new().unwrap();
    ok(t.path(), &["gen", "mesh-example", "--sequence", "m.seq", "-o", "mesh.hg"]);
    ok(t.path(), &["dilute", "mesh.hg", "m.seq", "-o", "out.hg"]);
    ok(t.path(), &["gen", "jigsaw", "3", "2", "-o", "j.hg"]);
    let out = ok(t.path(), &["check-dilution", "mesh.hg", "j.hg", "--sequence", "m.seq"]);
    assert_eq!(out.trim(), "yes");
}

#[test]
fn dilution_search_and_obstruction() {
    let t = TempDir::new().unwrap();
    ok(t.path(), &["gen", "grid", "3", "3", "-o", "g.hg"]);
    ok(t.path(), &["dual", "g.hg", "-o", "d.hg"]);
    ok(t.path(), &["gen", "jigsaw", "2", "2", "-o", "j.hg"]);
    ok(t.path(), &["check-dilution", "d.hg", "j.hg", "-o", "found.seq"]);
    ok(t.path(), &["check-dilution", "d.hg", "j.hg", "--sequence", "found.seq"]);
    // a dilution never grows: the larger hypergraph is out of reach
    assert_eq!(code(t.path(), &["check-dilution", "j.hg", "d.hg"]), 1);
    put(t.path(), "bad.seq", "delv nowhere\n");
    assert_eq!(code(t.path(), &["check-dilution", "d.hg", "j.hg", "--sequence", "bad.seq"]), 1);
}

#[test]
fn exit_codes() {
    let t = TempDir::new().unwrap();
    assert_eq!(code(t.path(), &["dual", "missing.hg"]), 2);
    put(t.path(), "junk.hg", "e(a,b\n");
    assert_eq!(code(t.path(), &["dual", "junk.hg"]), 2);
    ok(t.path(), &["gen", "grid", "4", "4", "-o", "g.hg"]);
    assert_eq!(code(t.path(), &["width", "--kind", "tw", "--limit", "3", "g.hg"]), 3);
    assert_eq!(code(t.path(), &["--strict", "width", "--kind", "tw", "--limit", "3", "g.hg"]), 1);
    assert_eq!(code(t.path(), &["suite", "-c", "99"]), 2);
}

#[test]
fn jigsaw_extraction() {
    let t = TempDir::new().unwrap();
    ok(t.path(), &["gen", "grid", "3", "3", "-o", "g.hg"]);
    ok(t.path(), &["dual", "g.hg", "-o", "d.hg"]);
    ok(t.path(), &["jigsaw-extract", "d.hg", "--save-minor", "m.txt", "-o", "s.seq"]);
    ok(t.path(), &["gen", "jigsaw", "2", "2", "-o", "j.hg"]);
    ok(t.path(), &["check-dilution", "d.hg", "j.hg", "--sequence", "s.seq"]);
    // the saved minor is accepted back
    ok(t.path(), &["jigsaw-extract", "d.hg", "--minor", "m.txt"]);
    // a path has no 2x2 grid minor in its dual
    put(t.path(), "path.hg", "e(a,b)\ne(b,c)\ne(c,d)\n");
    assert_eq!(code(t.path(), &["jigsaw-extract", "path.hg"]), 1);
}

#[test]
fn prejigsaw_witness_check() {
    let t = TempDir::new().unwrap();
    ok(t.path(), &["gen", "subdivided", "2", "3", "2", "--witness", "w.txt", "-o", "s.hg"]);
    assert_eq!(ok(t.path(), &["prejigsaw-extract", "s.hg", "--check", "w.txt"]).trim(), "yes");
    ok(t.path(), &["gen", "jigsaw", "2", "3", "-o", "j.hg"]);
    assert_eq!(code(t.path(), &["prejigsaw-extract", "j.hg", "--check", "w.txt"]), 1);
}

#[test]
fn query_reduction_preserves_answers() {
    let t = TempDir::new().unwrap();
    put(t.path(), "tri.hg", "e(a,b)\ne(b,c)\ne(a,c)\n");
    put(t.path(), "tri.seq", "delv a\n");
    put(t.path(), "q.cq", "R(x)\nS(y)\nT(x,y)\n");
    put(t.path(), "d.db", "R(1).\nR(2).\nS(2).\nS(3).\nT(1,2).\nT(2,3).\nT(1,3).\nT(3,3).\n");
    let before = ok(t.path(), &["cq-count", "q.cq", "d.db"]);
    assert_eq!(before.trim(), "3");
    let sizes = ok(t.path(), &["cq-reduce", "q.cq", "d.db", "tri.hg", "tri.seq", "-o", "red"]);
    assert_eq!(sizes.lines().count(), 1);
    for f in ["p.cq", "dp.db", "rename.map"] {
        assert!(t.path().join("red").join(f).exists(), "{f}");
    }
    assert_eq!(ok(t.path(), &["cq-count", "red/p.cq", "red/dp.db"]), before);
    assert_eq!(ok(t.path(), &["cq-eval", "red/p.cq", "red/dp.db"]).lines().count(), 3);

    ok(t.path(), &["--format", "json", "cq-reduce", "q.cq", "d.db", "tri.hg", "tri.seq", "-o", "redj"]);
    assert_eq!(ok(t.path(), &["cq-count", "redj/p.cq", "redj/dp.db"]), before);
}

#[test]
fn core_and_semantic_width() {
    let t = TempDir::new().unwrap();
    put(t.path(), "c.cq", "E(x,y)\nE(y,x)\nE(y,z)\nE(z,y)\n");
    assert_eq!(ok(t.path(), &["core", "c.cq"]).lines().count(), 2);
    assert_eq!(ok(t.path(), &["sghw", "c.cq"]).trim(), "1");
}

#[test]
fn suite_subset() {
    let t = TempDir::new().unwrap();
    let out = ok(t.path(), &["suite", "-c", "6", "-c", "11"]);
    assert_eq!(out.lines().filter(|l| l.contains("PASS")).count(), 2);
}
