//! End-to-end tests of the `symlie` binary: exit codes, output schemas, and
//! file round trips.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use symlie::bits::BitString;
use symlie::io;
use symlie::operator::i_z_string;
use symlie::{Operator, Scalar};

fn symlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symlie"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|_| {
        panic!(
            "stdout is not JSON:\n{}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write_op(path: &Path, op: &Operator) {
    io::write_operator(path, op).unwrap();
}

#[test]
fn dims_json_anchors() {
    let out = symlie(&["dims", "--m", "4", "--k", "2", "--l", "2"]);
    assert!(out.status.success());
    let rows = stdout_json(&out);
    assert_eq!(rows[0]["predicted_h_k"], 127);
    assert_eq!(rows[0]["h_m_dim"], 128);

    let out = symlie(&["dims", "--m", "3", "--k", "2", "--l", "INF"]);
    let rows = stdout_json(&out);
    assert_eq!(rows[0]["predicted_h_k"], 19);
    assert_eq!(rows[0]["L"], "INF");
}

#[test]
fn dims_csv_and_verified_grid() {
    let out = symlie(&[
        "dims", "--m", "3..4", "--k", "2..3", "--l", "2,3,INF", "--verify", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m,k,L,regime,constraints,h_m_dim,predicted_h_k,gap,oracle_h_k,agree"
    );
    let body: Vec<&str> = lines.collect();
    assert_eq!(body.len(), 12); // (m,k) ∈ {(3,2),(3,3),(4,2),(4,3)}, three L values each
    assert!(body.iter().all(|l| l.ends_with(",true")));
}

#[test]
fn dims_oracle_only_rows_for_k1() {
    let out = symlie(&["dims", "--m", "3", "--k", "1", "--l", "2", "--verify"]);
    assert!(out.status.success());
    let rows = stdout_json(&out);
    assert_eq!(rows[0]["regime"], "oracle-only");
    assert!(rows[0]["oracle_h_k"].is_number());
    assert!(rows[0].get("predicted_h_k").is_none());
}

#[test]
fn dims_trivial_symmetry_label() {
    let out = symlie(&["dims", "--m", "3", "--k", "2", "--l", "1"]);
    let rows = stdout_json(&out);
    assert_eq!(rows[0]["regime"], "trivial symmetry");
}

#[test]
fn member_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // iZ^{⊗4} violates the even-L trace constraint: exit 3
    let z4 = dir.path().join("z4.json");
    write_op(&z4, &i_z_string(BitString::ones(4)));
    let out = symlie(&[
        "member", "--m", "4", "--k", "2", "--l", "2", "--operator",
        z4.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let verdict = stdout_json(&out);
    assert_eq!(verdict["member"], false);
    let failing: Vec<&str> = verdict["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["ok"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failing.iter().any(|n| n.contains("Z^⊗m")), "{failing:?}");

    // the zero operator is a member: exit 0
    let zero = dir.path().join("zero.json");
    write_op(&zero, &Operator::zero(4));
    let out = symlie(&[
        "member", "--m", "4", "--k", "2", "--l", "2", "--operator",
        zero.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    // non-skew-Hermitian input: exit 3 with the named failing check
    let notskew = dir.path().join("notskew.json");
    write_op(
        &notskew,
        &Operator::pauli_x(1, 4).scaled(&Scalar::from_ratio(1, 1)),
    );
    let out = symlie(&[
        "member", "--m", "4", "--k", "2", "--l", "2", "--operator",
        notskew.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let verdict = stdout_json(&out);
    assert!(verdict["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == "skew-hermitian" && c["ok"] == false));

    // malformed file: exit 2
    std::fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    let out = symlie(&[
        "member", "--m", "4", "--k", "2", "--l", "2", "--operator",
        dir.path().join("bad.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn synth_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = symlie(&[
        "synth", "--target", "Z:1110", "--m", "4", "--n", "3", "--k", "3", "--out",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("verified exact"));

    let out = symlie(&[
        "verify-cert", "--cert", cert.to_str().unwrap(), "--m", "4", "--k", "3", "--l", "3",
        "--target", "Z:1110",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["matches_target"], true);
    assert_eq!(report["uses_aux"], false);

    // wrong target is detected
    let out = symlie(&[
        "verify-cert", "--cert", cert.to_str().unwrap(), "--m", "4", "--target", "Z:0111",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn synth_excluded_target_errors() {
    let out = symlie(&["synth", "--target", "Z:1111", "--m", "4", "--n", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("excluded target"));
}

#[test]
fn synth_offdiagonal_with_aux_leaves() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("f.json");
    let out = symlie(&[
        "synth", "--target", "F:1100:0011", "--m", "4", "--n", "2", "--k", "2", "--out",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("aux leaves: true"));
    let out = symlie(&[
        "verify-cert", "--cert", cert.to_str().unwrap(), "--m", "4", "--k", "2", "--l", "2",
        "--allow-aux", "--target", "F:1100:0011",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn product_rep_examples() {
    let out = symlie(&["product-rep", "--involutions", "Z,Z,I,I", "--k", "2"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["universal"], true);
    assert_eq!(report["bmask"], "1100");

    let out = symlie(&["product-rep", "--involutions", "X,X,X,I", "--k", "2", "--check"]);
    let report = stdout_json(&out);
    assert_eq!(report["universal"], false);
    assert_eq!(report["classes"][0], "Z_LIKE");
    assert_eq!(report["oracle"]["consistent"], true);

    let out = symlie(&["product-rep", "--involutions=-I,-I,-I,-I", "--k", "2"]);
    let report = stdout_json(&out);
    assert_eq!(report["universal"], true);
    assert_eq!(report["bmask"], "0000");
    assert_eq!(report["classes"][0], "MINUS_I");
}

#[test]
fn reduce_reports_l() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("group.json");
    std::fs::write(
        &group,
        r#"{"generators":[{"phases":["0","1/3"]}]}"#,
    )
    .unwrap();
    let out = symlie(&["reduce", "--group", group.to_str().unwrap()]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["L"], "3");

    std::fs::write(&group, r#"{"generators":[{"phases":["0","0"]}]}"#).unwrap();
    let out = symlie(&["reduce", "--group", group.to_str().unwrap()]);
    let report = stdout_json(&out);
    assert_eq!(report["L"], "1");
    assert_eq!(report["description"], "trivial symmetry");
}

#[test]
fn closure_modes_and_threads_env() {
    let dir = tempfile::tempdir().unwrap();
    let sub = dir.path().join("sub.json");
    let out = symlie(&[
        "closure", "--m", "3", "--k", "2", "--l", "2", "--mode", "both", "--out",
        sub.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["dim"], 31);
    assert_eq!(io::read_basis(&sub).unwrap().len(), 31);

    // SYMLIE_THREADS sets the default worker count and the result is
    // byte-identical to the single-threaded run
    let single = symlie(&["closure", "--m", "3", "--k", "2", "--l", "3"]);
    let threaded = Command::new(env!("CARGO_BIN_EXE_symlie"))
        .args(["closure", "--m", "3", "--k", "2", "--l", "3"])
        .env("SYMLIE_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(single.stdout, threaded.stdout);
}

#[test]
fn member_with_group_file() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("group.json");
    std::fs::write(&group, r#"{"generators":[{"phases":["0","1/2"]}]}"#).unwrap();
    let op = dir.path().join("op.json");
    write_op(&op, &i_z_string(BitString::ones(4)));
    let out = symlie(&[
        "member", "--m", "4", "--k", "2", "--group", group.to_str().unwrap(), "--operator",
        op.to_str().unwrap(),
    ]);
    // L reduces to 2, so iZ^{⊗4} is rejected just as with --l 2
    assert_eq!(out.status.code(), Some(3));
}
