//! Behavior of the cubisym binary: exit codes, report shape, determinism,
//! and the class-group cache life cycle. Everything here runs against
//! m = 5 or pure-arithmetic subcommands, so the suite stays fast.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubisym"))
}

fn run(cache: &Path, args: &[&str]) -> Output {
    bin()
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .env_remove("CUBISYM_CONFIG")
        .env_remove("CUBISYM_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    let s = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(s.trim()).unwrap_or_else(|e| panic!("bad JSON ({e}): {s}"))
}

fn strip_timings(mut v: Value) -> Value {
    if let Value::Object(o) = &mut v {
        o.remove("timings");
    }
    v
}

#[test]
fn usage_errors_exit_one_with_machine_readable_code() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["analyze", "--m", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["error"]["code"], "usage");

    let out = run(tmp.path(), &["normeq", "--m", "5", "--target", "zebra"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"]["code"], "parse");

    let out = run(tmp.path(), &["normeq", "--m", "5", "--target", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"]["code"], "usage");
}

#[test]
fn math_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    // the decision rules need an unramified base; p | m is rejected
    let out = run(tmp.path(), &["analyze", "--m", "5", "--p", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"]["code"], "math");

    // composite base
    let out = run(tmp.path(), &["analyze", "--m", "5", "--p", "15", "--exponent", "1"]);
    assert_eq!(out.status.code(), Some(1));

    // cube radicand has no degree-6 Kummer field
    let out = run(tmp.path(), &["classnum", "--m", "8"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"]["code"], "math");

    // the oracle itself is fine with a ramified base: theta has norm m
    let out = run(tmp.path(), &["analyze", "--m", "5", "--p", "5", "--exponent", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["verdict"], "split");
}

#[test]
fn help_and_version_exit_zero() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin().arg("--version").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("cubisym"));
}

#[test]
fn character_and_shape_are_pure_and_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["character", "--alpha", "2", "--pi", "3+1*w"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["command"], "character");
    assert!(["0", "1", "w", "w2"].contains(&r["value"].as_str().unwrap()));

    let out = run(tmp.path(), &["shape", "--l", "3", "--p", "23", "--m", "43"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["f"], 2);
    assert_eq!(r["r"], 1);
    assert_eq!(r["kummer"], serde_json::json!([{"e": 1, "f": 2, "count": 3}]));

    // p = l is the ramified cyclotomic case, fine without --m
    let out = run(tmp.path(), &["shape", "--l", "5", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["e"], 4);
    // but the Kummer step must refuse it
    let out = run(tmp.path(), &["shape", "--l", "3", "--p", "3", "--m", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical_apart_from_timings() {
    let tmp = tempfile::tempdir().unwrap();
    let a = run(tmp.path(), &["analyze", "--m", "5", "--p", "17"]);
    let b = run(tmp.path(), &["analyze", "--m", "5", "--p", "17"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let (ra, rb) = (report(&a), report(&b));
    // first run misses the cache, second hits it; nothing else may move
    assert_eq!(strip_timings(ra.clone()), strip_timings(rb.clone()));
    assert_eq!(ra["timings"]["class_group_cache"], "miss");
    assert_eq!(rb["timings"]["class_group_cache"], "hit");
    assert_eq!(ra["verdict"], "split");
    assert_eq!(ra["rule"], "residue-criterion");
    assert_eq!(ra["exponent"], 1);
}

#[test]
fn division_verdicts_and_indeterminate_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["analyze", "--m", "5", "--p", "19"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdict"], "division");
    assert_eq!(r["residue"], false);

    // the pure division rule needs no class group at all
    let out = run(tmp.path(), &["--no-cache", "analyze", "--m", "5", "--p", "19", "--rule", "division"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["rule"], "non-residue-division");

    // oracle path at an explicit exponent
    let out = run(tmp.path(), &["analyze", "--m", "5", "--p", "17", "--exponent", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdict"], "split");
    assert_eq!(r["rule"], "exponent-zero");
}

#[test]
fn classnum_reports_group_data() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["classnum", "--m", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["h_L"], "1");
    assert_eq!(r["elementary_divisors"], serde_json::json!([]));
    assert_eq!(r["certainty"], "proven");
}

#[test]
fn cache_round_trip_reuses_and_survives_tampering() {
    let tmp = tempfile::tempdir().unwrap();
    let cold = run(tmp.path(), &["classnum", "--m", "5"]);
    assert_eq!(report(&cold)["timings"]["class_group_cache"], "miss");
    let files: Vec<_> = std::fs::read_dir(tmp.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(files.len(), 1, "one cache entry after one field");

    let warm = run(tmp.path(), &["classnum", "--m", "5"]);
    assert_eq!(report(&warm)["timings"]["class_group_cache"], "hit");
    assert_eq!(
        strip_timings(report(&cold)),
        strip_timings(report(&warm)),
        "cache hit must not change the report"
    );

    // different budgets key a different entry
    let other = run(tmp.path(), &["classnum", "--m", "5", "--relation-rounds", "13"]);
    assert_eq!(report(&other)["timings"]["class_group_cache"], "miss");
    assert_eq!(std::fs::read_dir(tmp.path()).unwrap().count(), 2);

    // corrupt the payload: checksum catches it, the tool recomputes.
    // the class-group JSON is stored as an escaped string field, so the
    // h entry appears with backslashed quotes in the raw file.
    let mut tampered = 0;
    for f in std::fs::read_dir(tmp.path()).unwrap() {
        let p = f.unwrap().path();
        let body = std::fs::read_to_string(&p).unwrap();
        let next = body.replace(r#"\"h\":\"1\""#, r#"\"h\":\"7\""#);
        if next != body {
            tampered += 1;
        }
        std::fs::write(&p, next).unwrap();
    }
    assert_eq!(tampered, 2, "both entries carry the class number");
    let refreshed = run(tmp.path(), &["classnum", "--m", "5"]);
    assert_eq!(refreshed.status.code(), Some(0));
    let r = report(&refreshed);
    assert_eq!(r["h_L"], "1", "tampered cache must not leak into results");
    assert_eq!(r["timings"]["class_group_cache"], "miss");
    let stderr = String::from_utf8_lossy(&refreshed.stderr);
    assert!(stderr.contains("warning"), "tampering warns on stderr: {stderr}");

    // and the rewritten entry is immediately valid again
    let again = run(tmp.path(), &["classnum", "--m", "5"]);
    assert_eq!(report(&again)["timings"]["class_group_cache"], "hit");
}

#[test]
fn no_cache_flag_skips_the_disk() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("--no-cache")
        .arg("--cache-dir")
        .arg(tmp.path())
        .args(["classnum", "--m", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["timings"]["class_group_cache"], "off");
    assert_eq!(std::fs::read_dir(tmp.path()).unwrap().count(), 0);
}

#[test]
fn config_file_supplies_budgets_and_is_overridden_by_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cubisym.toml");
    std::fs::write(
        &cfg,
        "[budgets]\nrelation_rounds = 9\nharvest_vectors_per_ideal = 500\n",
    )
    .unwrap();
    let out = bin()
        .arg("--config")
        .arg(&cfg)
        .arg("--no-cache")
        .args(["classnum", "--m", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["budgets"]["relation_rounds"], 9);
    assert_eq!(r["budgets"]["harvest_vectors_per_ideal"], 500);

    let out = bin()
        .arg("--config")
        .arg(&cfg)
        .arg("--no-cache")
        .arg("--relation-rounds")
        .arg("11")
        .args(["classnum", "--m", "5"])
        .output()
        .unwrap();
    assert_eq!(report(&out)["budgets"]["relation_rounds"], 11);

    let out = bin()
        .arg("--config")
        .arg(tmp.path().join("missing.toml"))
        .args(["classnum", "--m", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"]["code"], "usage");
}

#[test]
fn normeq_reports_certificates() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["normeq", "--m", "5", "--target", "17"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["solvable"], "yes");
    assert_eq!(r["unit"]["a"], "1");
    assert_eq!(r["unit"]["b"], "0");
    assert_eq!(r["beta"].as_array().unwrap().len(), 6);
    assert!(r["trace"].as_array().unwrap().len() > 0);

    let out = run(tmp.path(), &["normeq", "--m", "5", "--target", "19"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["solvable"], "no");
    assert_eq!(r["beta"], Value::Null);
}

#[test]
fn field_dump_matches_the_maximal_order() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["field", "--m", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["inputs"]["m"], 5);
    assert!(r["disc"].as_str().unwrap().starts_with('-'), "totally complex field");
    assert_eq!(r["defining_poly"].as_array().unwrap().len(), 7);
    assert_eq!(r["basis_num"]["cols"], 6);
}
