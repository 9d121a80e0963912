use std::path::Path;
use std::process::{Command, Output};

const F16: &str = "gf(2,1,4;modulus=[1,1,0,0,1])";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankcodes"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gab_file(dir: &Path) {
    let o = run(dir, &["gab", "--field", F16, "--g", "g^0,g^5", "--k", "1", "--out", "c.code"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("d_{R,min}=2"));
}

#[test]
fn gab_writes_file_and_distance() {
    let dir = tempfile::tempdir().unwrap();
    gab_file(dir.path());
    let text = std::fs::read_to_string(dir.path().join("c.code")).unwrap();
    assert_eq!(text, format!("gabidulin\n{F16}\nl=2,m=4,k=1\n1,g^5\n"));
}

#[test]
fn aut_oracle_matches() {
    let dir = tempfile::tempdir().unwrap();
    gab_file(dir.path());
    let o = run(dir.path(), &["aut", "--code", "c.code", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("d=2"));
    assert!(s.lines().any(|l| l == "analytic order 45; brute order 45; MATCH"), "{s}");
    let full = stdout(&run(dir.path(), &["aut", "--code", "c.code", "--full"]));
    assert_eq!(full.lines().filter(|l| l.starts_with("rm[")).count(), 45);
    assert!(full.contains("rm[alpha=1; L=0,1;1,1; gamma=0]"));
}

#[test]
fn counterexample_line() {
    let o = run(Path::new("."), &["verify-paper", "--example", "berger-counterexample"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l
        == "order([α,I₂])=80; GL₂(F₃) max-relevant-order check: no element of order 16; groups non-isomorphic: PASS"));
}

#[test]
fn verify_examples() {
    for id in ["f16-aut", "f64-not-gabidulin", "distance-law"] {
        let o = run(Path::new("."), &["verify-paper", "--example", id]);
        assert_eq!(o.status.code(), Some(0), "{id}: {}", stdout(&o));
    }
    let s = stdout(&run(Path::new("."), &["verify-paper", "--example", "f64-not-gabidulin"]));
    assert!(s.contains("16777216") && s.contains("4096"));
    let s = stdout(&run(Path::new("."), &["verify-paper", "--example", "f64-not-direct-product"]));
    assert!(s.contains("(g^1, g^14, g^37, g^16)"));
    let o = run(Path::new("."), &["verify-paper", "--example", "nope"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let here = Path::new(".");
    assert_eq!(run(here, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(here, &["gab", "--g", "1", "--k", "1"]).status.code(), Some(2));
    // g = (1, 1) is dependent: a domain error.
    assert_eq!(run(here, &["gab", "--field", F16, "--g", "1,1", "--k", "1"]).status.code(), Some(1));
    assert_eq!(run(here, &["gab", "--field", F16, "--g", "1,g", "--k", "3"]).status.code(), Some(1));
}

#[test]
fn expand_lift_unlift_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    gab_file(d);
    assert!(run(d, &["expand", "--code", "c.code", "--out", "m.code"]).status.success());
    let o = run(d, &["lift", "--code", "m.code", "--pivots", "1,2", "--out", "s.code"]);
    assert!(stdout(&o).contains("16 codewords"));
    assert_eq!(stdout(&run(d, &["mindist", "--code", "s.code"])), "d_{S,min}=4\n");
    let o = run(d, &["unlift", "--code", "s.code", "--out", "back.code"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("pivots 1,2"));
    let a = std::fs::read_to_string(d.join("m.code")).unwrap();
    let b = std::fs::read_to_string(d.join("back.code")).unwrap();
    assert_eq!(a.lines().take(3).collect::<Vec<_>>(), b.lines().take(3).collect::<Vec<_>>());
    assert_eq!(stdout(&run(d, &["mindist", "--code", "back.code"])), "d_{R,min}=2\n");
    assert!(run(d, &["compress", "--code", "back.code", "--out", "rm.code"]).status.success());
    assert_eq!(stdout(&run(d, &["mindist", "--code", "rm.code"])), "d_{R,min}=2\n");
    // Off-front pivots need --pivots to unlift.
    run(d, &["lift", "--code", "m.code", "--pivots", "2,5", "--out", "s2.code"]);
    let o = run(d, &["unlift", "--code", "s2.code", "--pivots", "2,5"]);
    assert!(o.status.success());
}

#[test]
fn vector_and_matrix_verbs() {
    let here = Path::new(".");
    let s = stdout(&run(here, &["expand", "--field", F16, "--x", "g,g^4"]));
    assert_eq!(s, "0,1,0,0;1,1,0,0\n");
    let s = stdout(&run(here, &["compress", "--field", F16, "--matrix", "0,1,0,0;1,1,0,0"]));
    assert_eq!(s, "g^1,g^4\n");
    assert_eq!(stdout(&run(here, &["dist", "--field", F16, "--x", "1,g", "--y", "1,g"])), "d_R=0\n");
    let s = stdout(&run(here, &["dist", "--field", "gf(2,1,1)", "--a", "1,0,0;0,1,0", "--b", "1,0,0;0,0,1", "--subspace"]));
    assert_eq!(s, "d_S=2\n");
    let map = "rm[alpha=g^5; L=0,1;1,1; gamma=3]";
    let inv = stdout(&run(here, &["order", "--field", F16, "--map", map]));
    assert!(inv.starts_with("order "));
    let s = stdout(&run(here, &["compose", "--field", F16, "--f", map, "--g", "rm[alpha=1; L=1,0;0,1; gamma=0]"]));
    assert_eq!(s.trim(), map);
    let s = stdout(&run(here, &["apply", "--field", "gf(2,1,2)", "--map", "mat[T; L=1,0;0,1; M=1,1;0,1; gamma=0]", "--matrix", "1,0;0,0"]));
    assert_eq!(s, "1,1;0,0\n");
}

#[test]
fn equiv_finds_witness() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    gab_file(d);
    run(d, &["gab", "--field", F16, "--g", "g^0,g", "--k", "1", "--out", "e.code"]);
    let o = run(d, &["equiv", "--code", "c.code", "--other", "c.code"]);
    assert!(stdout(&o).starts_with("equivalent via rm["));
    let o = run(d, &["equiv", "--code", "c.code", "--other", "e.code"]);
    assert!(o.status.success());
    let o = run(d, &["equiv", "--code", "c.code", "--other", "e.code", "--mode", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    gab_file(dir.path());
    let a = stdout(&run(dir.path(), &["aut", "--code", "c.code", "--full"]));
    let b = stdout(&run(dir.path(), &["aut", "--code", "c.code", "--full"]));
    assert_eq!(a, b);
    let r1 = stdout(&run(dir.path(), &["gab", "--field", F16, "--g", "random", "--l", "2", "--k", "1", "--seed", "7"]));
    let r2 = stdout(&run(dir.path(), &["gab", "--field", F16, "--g", "random", "--l", "2", "--k", "1", "--seed", "7"]));
    assert_eq!(r1, r2);
}
