use std::process::Command;

use jnnf::lab::{canonical_group_hash, run_pipeline, Bounds, Cache, PipelineConfig, Status};
use jnnf::perm::PermGroup;
use jnnf::Error;

fn jnnf() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_jnnf"));
    c.env_remove("JNNF_CACHE_DIR");
    c
}

fn config_error(toml: &str) -> (String, String) {
    match PipelineConfig::from_toml(toml).and_then(|c| c.validate().map(|_| ())) {
        Err(Error::Config { field, msg }) => (field, msg),
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn validation_names_the_offending_field() {
    let (field, _) = config_error(
        r#"
        [[jobs]]
        module = "perm-engine"
        operation = "orbits"
        params = { group = "S3" }
        [[jobs]]
        module = "perm-engine"
        operation = "frobnicate"
        "#,
    );
    assert_eq!(field, "jobs[1].operation");

    let (field, _) = config_error(
        r#"
        [[jobs]]
        module = "perm-engine"
        operation = "orbits"
        params = { grop = "S3" }
        "#,
    );
    assert_eq!(field, "jobs[0].params");

    let (field, _) = config_error(
        r#"
        [[jobs]]
        module = "no-such-module"
        operation = "orbits"
        params = { group = "S3" }
        "#,
    );
    assert_eq!(field, "jobs[0].module");

    assert!(PipelineConfig::from_toml("sed = 1").is_err());
}

#[test]
fn invalid_config_runs_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path()).unwrap();
    let cfg = PipelineConfig::from_toml(
        r#"
        [[jobs]]
        module = "jnnf-invariants"
        operation = "example_2_8"
        params = { p = 2, n = 1 }
        [[jobs]]
        module = "jnnf-invariants"
        operation = "example_2_8"
        params = { p = 2 }
        "#,
    )
    .unwrap();
    assert!(run_pipeline(&cfg, Some(&cache)).is_err());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn group_hash_ignores_generator_presentation() {
    let b = Bounds::default();
    let a5 = PermGroup::from_cycles(5, &[vec![vec![0, 1, 2]], vec![vec![0, 1, 2, 3, 4]]]).unwrap();
    let a5_swapped = PermGroup::from_cycles(5, &[vec![vec![0, 1, 2, 3, 4]], vec![vec![0, 1, 2]]]).unwrap();
    let a5_other = PermGroup::from_cycles(5, &[vec![vec![2, 3, 4]], vec![vec![0, 1, 2]], vec![vec![1, 2, 3]]]).unwrap();
    let s5 = PermGroup::from_cycles(5, &[vec![vec![0, 1]], vec![vec![0, 1, 2, 3, 4]]]).unwrap();
    let h = canonical_group_hash(&a5, &b);
    assert_eq!(h, canonical_group_hash(&a5_swapped, &b));
    assert_eq!(h, canonical_group_hash(&a5_other, &b));
    assert_ne!(h, canonical_group_hash(&s5, &b));
}

#[test]
fn named_and_explicit_groups_share_cache_entries() {
    let named = PipelineConfig::from_toml(
        r#"
        [[jobs]]
        module = "perm-engine"
        operation = "orbits"
        params = { group = "S3" }
        "#,
    )
    .unwrap();
    let explicit = PipelineConfig::from_toml(
        r#"
        [[jobs]]
        module = "perm-engine"
        operation = "orbits"
        params = { group = { kind = "perm", degree = 3, generators = [[[0, 1, 2]], [[1, 2]]] } }
        "#,
    )
    .unwrap();
    let a = run_pipeline(&named, None).unwrap();
    let b = run_pipeline(&explicit, None).unwrap();
    assert_eq!(a[0].input_hash, b[0].input_hash);
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path()).unwrap();
    let cfg = PipelineConfig::from_toml(
        r#"
        [[jobs]]
        module = "group-kernel"
        operation = "normal_subgroups"
        params = { group = "S4" }
        "#,
    )
    .unwrap();
    let first = run_pipeline(&cfg, Some(&cache)).unwrap();
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(entry.unwrap().path(), "garbage").unwrap();
    }
    let second = run_pipeline(&cfg, Some(&cache)).unwrap();
    assert!(!second[0].timing.as_ref().unwrap().cached);
    assert_eq!(first[0].body(), second[0].body());
    assert_eq!(second[0].status, Status::Pass);
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = dir.path().join("ok.toml");
    std::fs::write(
        &ok,
        r#"
        seed = 1
        [[jobs]]
        id = "census"
        module = "jnnf-invariants"
        operation = "example_2_8"
        params = { p = 2, n = 1 }
        "#,
    )
    .unwrap();
    let out = dir.path().join("out.jsonl");
    let st = jnnf()
        .args(["verify", "--config"])
        .arg(&ok)
        .arg("--output")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let st = jnnf().arg("report").arg(&out).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&st.stdout).contains("census"));

    let failing = dir.path().join("bad.toml");
    std::fs::write(
        &failing,
        r#"
        [[jobs]]
        module = "congruence-sl"
        operation = "sl1"
        params = { n = 3, p = 3, k = 2 }
        "#,
    )
    .unwrap();
    let st = jnnf().args(["verify", "--config"]).arg(&failing).output().unwrap();
    assert_eq!(st.status.code(), Some(1));

    let invalid = dir.path().join("invalid.toml");
    std::fs::write(&invalid, "[[jobs]]\nmodule = \"perm-engine\"\noperation = \"nope\"\n").unwrap();
    let st = jnnf().args(["verify", "--config"]).arg(&invalid).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&st.stderr).contains("jobs[0].operation"));

    let st = jnnf()
        .args(["sl1", "--n", "3", "--p", "3", "--k", "2"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&st.stderr).contains("p divides n"));
}

#[test]
fn cli_build_and_invariants() {
    let out = jnnf().args(["build", "--group", "A4"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["order"], "12");

    let out = jnnf()
        .args(["invariants", "--group", "S4", "--c", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["normal_subgroup_orders"], serde_json::json!([1, 4, 12, 24]));
    assert_eq!(v["melnikov_order"], 12);

    let dir = tempfile::tempdir().unwrap();
    let stage = dir.path().join("stage.toml");
    std::fs::write(&stage, "p = [3]\nq = [7, 7]\nt = [1]\n").unwrap();
    let out = jnnf().args(["build", "--stage"]).arg(&stage).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim_v"], 2187);
    assert_eq!(v["dim_w"], 729);

    let out = jnnf()
        .args(["sl1", "--n", "2", "--p", "3", "--k", "3", "--verify", "lcs,graded"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["result"]["order"], 729);
}
