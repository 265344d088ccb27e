use std::process::{Command, Output};

fn pevbar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pevbar"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn faces_in_text() {
    let o = pevbar(&[
        "--algebra",
        "nat:12",
        "bar",
        "faces",
        "--level",
        "1",
        "--index",
        "0",
        "--term",
        "{{3,4},{5}}",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("face: {5,7}"));
}

#[test]
fn witnesses_in_json() {
    let o = pevbar(&[
        "--algebra",
        "nat:12",
        "--format",
        "json",
        "pev",
        "witnesses",
        "--from",
        "{1,1,2}",
        "--to",
        "{2,2}",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 1);
    assert_eq!(v["witnesses"][0]["tau"], "{{1,1},{2}}");
}

#[test]
fn failing_property_exits_one() {
    let o = pevbar(&[
        "--algebra",
        "terminal",
        "--width",
        "2",
        "pev",
        "relation",
        "--check",
        "equivalence",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("status: fail"));
}

#[test]
fn passing_property_exits_zero() {
    let o = pevbar(&[
        "--monad",
        "csgrp",
        "--algebra",
        "cyclic:2",
        "--max-leaves",
        "3",
        "squares",
        "property",
        "split",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn bad_configuration_exits_two() {
    assert_eq!(pevbar(&["--monad", "bogus", "laws"]).status.code(), Some(2));
    assert_eq!(pevbar(&["bar", "faces"]).status.code(), Some(2));
}

#[test]
fn oversized_search_exits_three() {
    let o = pevbar(&[
        "--monad",
        "monoid",
        "--carrier",
        "a,b,c,d",
        "--width",
        "6",
        "--max-candidates",
        "1000",
        "terms",
        "count",
        "--level",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn verify_nonuniqueness_passes() {
    let o = pevbar(&["--format", "json", "verify", "nonuniqueness"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["overall"], "pass");
}
