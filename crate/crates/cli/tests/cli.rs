//! End-to-end tests driving the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

use impq_core::lattice::complement;
use impq_core::random::{commuting_projector_pair, haar_random_projector, Seed};
use impq_core::Projector;

fn impq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_impq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_projector(path: &Path, p: &Projector) {
    let text = serde_json::to_string_pretty(p.matrix()).unwrap();
    std::fs::write(path, text).unwrap();
}

#[test]
fn spin_example_passes_and_emits_everything() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("spin.json");
    let matrices = dir.path().join("mats");
    let out = impq(&[
        "spin-example",
        "--json",
        json.to_str().unwrap(),
        "--emit-matrices",
        matrices.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("spectrum of the direct pairing"));
    assert!(stdout.contains("does not hold"));
    // the JSON report parses and embeds the four matrices
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(value["checks"]["spin_spectra"]["pass"].as_bool().unwrap());
    // emitted matrices load back as valid schema files
    for name in [
        "direct_upper.json",
        "cross_upper.json",
        "reference_direct.json",
        "reference_cross.json",
    ] {
        let m: impq_core::ComplexMatrix =
            serde_json::from_str(&std::fs::read_to_string(matrices.join(name)).unwrap()).unwrap();
        assert_eq!(m.dim(), 4);
    }
}

#[test]
fn verify_small_campaign_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        r#"{"dims": [[2, 2]], "samples_per_dim": 4, "master_seed": 11}"#,
    )
    .unwrap();
    let json_a = dir.path().join("a.json");
    let json_b = dir.path().join("b.json");
    for json in [&json_a, &json_b] {
        let out = impq(&[
            "verify",
            "--config",
            config.to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let stdout = String::from_utf8_lossy(&out.stdout);
        assert!(stdout.contains("4 passed"));
    }
    assert_eq!(
        std::fs::read(&json_a).unwrap(),
        std::fs::read(&json_b).unwrap(),
        "same (config, seed) must produce identical report bytes"
    );
}

#[test]
fn verify_seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        r#"{"dims": [[2, 2]], "samples_per_dim": 2, "master_seed": 11}"#,
    )
    .unwrap();
    let out = impq(&[
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "99",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("0x63")); // 99
}

#[test]
fn verify_rejects_malformed_config_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    std::fs::write(&config, r#"{"dims": [[2, 2]], "unknown_field": 1}"#).unwrap();
    let out = impq(&["verify", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json"));
}

#[test]
fn gap_reports_zero_for_commuting_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, q1) = commuting_projector_pair(3, Seed(5)).unwrap();
    let p2 = haar_random_projector(3, 1, Seed(6)).unwrap();
    let q2 = haar_random_projector(3, 2, Seed(7)).unwrap();
    let paths: Vec<_> = ["p1", "q1", "p2", "q2"]
        .iter()
        .map(|n| dir.path().join(format!("{n}.json")))
        .collect();
    for (path, proj) in paths.iter().zip([&p1, &q1, &p2, &q2]) {
        write_projector(path, proj);
    }
    let json = dir.path().join("gap.json");
    let out = impq(&[
        "gap",
        "--p1",
        paths[0].to_str().unwrap(),
        "--q1",
        paths[1].to_str().unwrap(),
        "--p2",
        paths[2].to_str().unwrap(),
        "--q2",
        paths[3].to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("vanishes"));
    assert!(stdout.contains("verdict: pass"));
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(value["residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn gap_exit_2_on_schema_violation_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("broken.json");
    std::fs::write(&bad, r#"{"dim": 2, "entries": [[[1.0, 0.0]]]}"#).unwrap();
    let good = dir.path().join("good.json");
    write_projector(&good, &haar_random_projector(2, 1, Seed(1)).unwrap());
    let out = impq(&[
        "gap",
        "--p1",
        bad.to_str().unwrap(),
        "--q1",
        good.to_str().unwrap(),
        "--p2",
        good.to_str().unwrap(),
        "--q2",
        good.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("broken.json"), "{stderr}");
}

#[test]
fn gap_exit_2_on_non_projector_input() {
    let dir = tempfile::tempdir().unwrap();
    let not_projector = dir.path().join("herm.json");
    std::fs::write(
        &not_projector,
        r#"{"dim": 2, "entries": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}"#,
    )
    .unwrap();
    let good = dir.path().join("good.json");
    write_projector(&good, &haar_random_projector(2, 1, Seed(2)).unwrap());
    let out = impq(&[
        "gap",
        "--p1",
        not_projector.to_str().unwrap(),
        "--q1",
        good.to_str().unwrap(),
        "--p2",
        good.to_str().unwrap(),
        "--q2",
        good.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a certified projector"));
}

#[test]
fn gap_marginal_case_second_pair_identity() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = haar_random_projector(3, 1, Seed(21)).unwrap();
    let q1 = complement(&p1);
    let id = Projector::identity(2);
    let paths: Vec<_> = ["p1", "q1", "p2", "q2"]
        .iter()
        .map(|n| dir.path().join(format!("{n}.json")))
        .collect();
    for (path, proj) in paths.iter().zip([&p1, &q1, &id, &id]) {
        write_projector(path, proj);
    }
    let out = impq(&[
        "gap",
        "--p1",
        paths[0].to_str().unwrap(),
        "--q1",
        paths[1].to_str().unwrap(),
        "--p2",
        paths[2].to_str().unwrap(),
        "--q2",
        paths[3].to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("vanishes"));
}

#[test]
fn sweep_grid_produces_validated_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = impq(&[
        "sweep",
        "--grid",
        "a:0:1:11,b:auto,phi:0:6.283:12",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "a,b,phi,numeric,closed_form,abs_diff");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11 * 12);
    // every row: |numeric − closed_form| tiny and value admissible
    for row in rows {
        let fields: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert!(fields[5] < 1e-12, "{row}");
        assert!(fields[3] >= -1e-12, "{row}");
    }
}

#[test]
fn sweep_spot_value_at_pure_state() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("spot.csv");
    let out = impq(&[
        "sweep",
        "--grid",
        "a:1:1:1,b:0:0:1,phi:0:0:1",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let row = text.lines().nth(1).unwrap();
    let fields: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
    assert!((fields[3] - 1.0 / 12.0).abs() < 1e-13);
    assert!((fields[4] - 1.0 / 12.0).abs() < 1e-15);
}

#[test]
fn sweep_rejects_bad_grid_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("never.csv");
    let out = impq(&["sweep", "--grid", "a:0:1", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = impq(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}
