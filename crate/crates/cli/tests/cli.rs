use std::process::{Command, Output};

use serde_json::Value;

fn brcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn report_cusp() {
    let out = brcalc(&["report", "--vars", "x,y", "--phi", "x^3+y^2", "--f", "y"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["br_direct"], 2);
    assert_eq!(v["routes_agree"], true);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["oracle"]["checked"], v["oracle"]["agreed"]);
}

#[test]
fn report_not_finitely_determined_is_not_an_error() {
    let out = brcalc(&["report", "--vars", "x,y", "--phi", "x*y", "--f", "x"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["finitely_determined"], false);
    assert_eq!(v["br_direct"], "INFINITE");
}

#[test]
fn input_errors_exit_2() {
    for args in [
        &["report", "--vars", "x,y", "--phi", "x^3+", "--f", "y"][..],
        &["report", "--vars", "x,y", "--phi", "x^3+w", "--f", "y"],
        &["report", "--vars", "x,y", "--phi", "1+x", "--f", "y"],
        &["verify", "--corpus", "/nonexistent/corpus.json"],
        &["report", "--vars", "x,y"],
    ] {
        assert_eq!(brcalc(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn reports_are_byte_identical() {
    let args = [
        "report",
        "--vars",
        "x,y",
        "--phi",
        "x^5+y^5+x^2*y^2",
        "--f",
        "x+2*y",
        "--seed",
        "7",
    ];
    assert_eq!(brcalc(&args).stdout, brcalc(&args).stdout);
    let text = [
        "report", "--vars", "x,y", "--phi", "x*y", "--f", "x+y", "--format", "text",
    ];
    assert_eq!(brcalc(&text).stdout, brcalc(&text).stdout);
}

#[test]
fn timings_are_opt_in() {
    let base = ["report", "--vars", "x,y", "--phi", "x^3+y^2", "--f", "y"];
    assert!(json(&brcalc(&base)).get("timings_us").is_none());
    let mut with = base.to_vec();
    with.push("--timings");
    assert!(json(&brcalc(&with))["timings_us"]["br_direct"].is_u64());
}

#[test]
fn verify_builtin_fails_only_on_non_finitely_determined_directions() {
    let out = brcalc(&["verify", "--corpus", "builtin", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let mut failed = Vec::new();
    for g in v["germs"].as_array().unwrap() {
        assert_eq!(g["oracle"]["checked"], g["oracle"]["agreed"]);
        for c in g["checks"].as_array().unwrap() {
            if c["passed"] == false {
                failed.push(format!(
                    "{} {}",
                    g["name"].as_str().unwrap(),
                    c["name"].as_str().unwrap()
                ));
                assert!(c["detail"]
                    .as_str()
                    .unwrap()
                    .contains("not finitely determined"));
            }
        }
    }
    assert_eq!(failed.len(), 7, "{failed:?}");
    assert!(v["symmetry"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["check"]["passed"] == true));
}

#[test]
fn verify_custom_corpus_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus.json");
    std::fs::write(
        &path,
        r#"[{"name":"cusp","vars":["x","y"],"phi":"x^3+y^2","f_list":["x+2*y","y"],
             "expected":{"mu_X":2,"tau_X":2,"polar_mult":3},"tags":["weighted-homogeneous","curve"]},
            {"name":"Y-1-1","vars":["x","y"],"phi":"x^5+y^5+x^2*y^2","f_list":["x-y","y+x^2"],
             "expected":{"mu_X":11,"tau_X":10}}]"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let out = brcalc(&["verify", "--corpus", p, "--format", "text"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let out = brcalc(&["corpus", "--corpus", p]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 4);
}

#[test]
fn corpus_expected_mismatch_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus.json");
    std::fs::write(
        &path,
        r#"[{"name":"cusp","vars":["x","y"],"phi":"x^3+y^2","f_list":["y"],"expected":{"tau_X":3}}]"#,
    )
    .unwrap();
    assert_eq!(
        brcalc(&["corpus", "--corpus", path.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn corpus_order_does_not_depend_on_jobs() {
    let one = brcalc(&["corpus", "--jobs", "1"]);
    let four = brcalc(&["corpus", "--jobs", "4"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let docs = json(&one);
    assert_eq!(docs[0]["name"], "A1");
}

#[test]
fn tau_routes() {
    let out = brcalc(&["tau-routes", "--vars", "x,y", "--phi", "x^3+y^2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tau_X"], 2);
    assert!(v["routes"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["equals_tau"] == true));

    let out = brcalc(&[
        "tau-routes",
        "--vars",
        "x,y",
        "--phi",
        "x*y",
        "--p",
        "x",
        "--p",
        "x-y",
    ]);
    let v = json(&out);
    assert_eq!(v["routes"][0]["quotient"], 0);
    assert_eq!(v["routes"][0]["finitely_determined"], false);
    assert_eq!(v["routes"][1]["quotient"], 1);

    let out = brcalc(&["tau-routes", "--vars", "x,y", "--phi", "x*y", "--p", "x^2"]);
    assert_eq!(json(&out)["routes"][0]["quotient"], "UNDEFINED");
}

#[test]
fn oracle_check() {
    let out = brcalc(&[
        "oracle-check",
        "--vars",
        "x,y,z",
        "--phi",
        "x^2+y^2+z^2",
        "--f",
        "x+2*y+3*z",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 5);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}
