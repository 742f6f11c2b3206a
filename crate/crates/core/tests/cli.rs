use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coverhom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn build_mod_two() {
    let out = run(&["build", "--mod-ell", "2", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summary"]["genus"], 17);
    assert_eq!(v["summary"]["rank"], 34);
    assert_eq!(v["summary"]["gram_det_abs"], "1");
    assert_eq!(v["summary"]["riemann_hurwitz_ok"], true);
}

#[test]
fn build_identity_with_perms() {
    let out = run(&["build", "--identity", "2", "--perms"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summary"]["rank"], 4);
    assert_eq!(v["perms"]["perm"]["a1"], serde_json::json!([1]));
}

#[test]
fn disconnected_cover_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    std::fs::write(
        &p,
        r#"{"genus":1,"degree":2,"perm":{"a1":[1,2],"b1":[1,2]}}"#,
    )
    .unwrap();
    let out = run(&["build", "--cover", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cover disconnected"));
}

#[test]
fn exit_codes_follow_verdicts() {
    assert_eq!(
        run(&["check", "fullness", "--identity", "2"]).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["check", "fullness", "--identity", "2", "--budget", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["check", "nosuch", "--identity", "2"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["check", "fullness"]).status.code(), Some(1));
    assert_eq!(
        run(&[
            "check",
            "fullness",
            "--identity",
            "1",
            "--sigma",
            "separating2"
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn gap_and_powerlemma() {
    let out = run(&["check", "gap", "--g", "2", "--ell", "3", "--budget", "40"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["outcome"], "GAP_CERTIFIED");
    let out = run(&[
        "check",
        "powerlemma",
        "--n",
        "3",
        "--ell",
        "4",
        "--trials",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["power_identity_passed"], 1000);
    assert_eq!(v["report"]["centrality_passed"], 1000);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let args = [
        "check",
        "twistfixed",
        "--mod-ell",
        "2",
        "2",
        "--seed",
        "5",
        "--budget",
        "6",
    ];
    let stdout = run(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", p.to_str().unwrap()]);
    let out = run(&with_out);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&p).unwrap(), stdout);
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["check", "orbit", "--mod-ell", "2", "2", "--seed", "11"][..],
        &["check", "pants", "--mod-ell", "2", "2", "--seed", "4"][..],
        &[
            "check",
            "symplectic",
            "--abelian",
            r#"{"genus":2,"orders":[4],"targets":{"a1":[1],"b2":[1]}}"#,
        ][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn golden_fullness_report() {
    let golden =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fullness_mod2_g2_seed3.json");
    let out = run(&["check", "fullness", "--mod-ell", "2", "2", "--seed", "3"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        std::fs::read_to_string(golden).unwrap()
    );
}
