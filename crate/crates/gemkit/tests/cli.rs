//! End-to-end checks of the command-line binary: exit codes, output
//! determinism and round-trips through the gem text format.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gemkit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary launches")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn catalog_entry_flows_through_invariants_and_classify() {
    let dir = tempdir("cli-flow");
    let gem = dir.join("s1xs3.gem");
    let out = run(&["catalog", "S1xS3", "--gem"]);
    assert!(out.status.success());
    std::fs::write(&gem, &out.stdout).unwrap();
    let path = gem.to_str().unwrap();

    let inv = run(&["invariants", path]);
    assert!(inv.status.success());
    let text = stdout(&inv);
    assert!(text.contains("regular-genus: 1"), "{text}");
    assert!(text.contains("gurau-degree: 12"), "{text}");
    assert!(text.contains("first-homology: Z"), "{text}");

    let cls = run(&["classify", path]);
    assert!(cls.status.success());
    let text = stdout(&cls);
    assert!(text.contains("certainty: exact"), "{text}");
    assert!(text.contains("candidate: S^1 x S^3"), "{text}");

    let val = run(&["validate", path]);
    assert!(val.status.success());
    assert!(stdout(&val).contains("manifold: closed"));

    let rec = run(&["recognize", path]);
    assert!(rec.status.success());
    assert!(stdout(&rec).contains("verdict: not-sphere"));
}

#[test]
fn construct_product_hits_the_published_degree() {
    let dir = tempdir("cli-product");
    let lens = dir.join("l21.gem");
    let prod = dir.join("l21xi.gem");
    let out = run(&["construct", "lens", "--p", "2", "-o", lens.to_str().unwrap()]);
    assert!(out.status.success());
    let out = run(&[
        "construct",
        "product-i",
        "--input",
        lens.to_str().unwrap(),
        "-o",
        prod.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let inv = run(&["invariants", prod.to_str().unwrap()]);
    let text = stdout(&inv);
    assert!(text.contains("gurau-degree: 18"), "{text}");
    let cls = run(&["classify", prod.to_str().unwrap()]);
    let text = stdout(&cls);
    assert!(text.contains("candidate: L(2,1) x I"), "{text}");
    assert!(text.contains("certainty: exact"), "{text}");
}

#[test]
fn identity_suite_passes_on_a_sphere() {
    let dir = tempdir("cli-sphere");
    let gem = dir.join("s4.gem");
    let out = run(&["construct", "sphere", "--d", "4", "-o", gem.to_str().unwrap()]);
    assert!(out.status.success());
    let out = run(&["verify-identities", gem.to_str().unwrap(), "--assume-sphere"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("fail: 0"), "{text}");
    assert!(text.contains("assumed: sphere"), "{text}");
}

#[test]
fn census_output_is_identical_across_worker_counts() {
    let args = ["census", "--d", "3", "--max-order", "6", "--manifolds"];
    let one: Vec<String> = (0..2)
        .map(|i| {
            let jobs = if i == 0 { "1" } else { "3" };
            let out = bin().args(args).args(["--jobs", jobs]).output().unwrap();
            assert!(out.status.success());
            stdout(&out)
        })
        .collect();
    assert_eq!(one[0], one[1]);
    assert!(one[0].starts_with("digest\torder"));
}

#[test]
fn exit_codes_separate_usage_and_domain_failures() {
    // missing required parameter: usage error
    let out = run(&["construct", "sphere"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown subcommand: usage error from the parser
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    // unreadable input: domain failure
    let out = run(&["invariants", "/nonexistent/nope.gem"]);
    assert_eq!(out.status.code(), Some(1));
    // unknown catalog entry: domain failure
    let out = run(&["catalog", "S1xS9"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn catalog_listing_is_stable_and_complete() {
    let a = run(&["catalog", "--format", "tsv"]);
    let b = run(&["catalog", "--format", "tsv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 33, "header plus 32 entries");
    assert!(text.lines().any(|l| l.starts_with("Lambda_2\t")));
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gemkit-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
