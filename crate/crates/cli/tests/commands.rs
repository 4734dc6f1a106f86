use std::process::Command;

use serde_json::Value;

fn lablocus(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lablocus"))
        .args(args)
        .env_remove("LABLOCUS_TOLERANCE")
        .env_remove("LABLOCUS_D")
        .env_remove("LABLOCUS_SEED")
        .env_remove("LABLOCUS_FORMAT")
        .env_remove("LABLOCUS_STRICT_LOCAL")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out, err) = lablocus(&all);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

#[test]
fn main_table_at_defaults() {
    let (code, v) = json(&["table", "--which", "main"]);
    assert_eq!(code, 0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[3]["measurability"], "No");
    assert_eq!(rows[1]["localisation"], "t1/t2-localised");
    assert_eq!(v["config"]["tolerance"], 1e-9);
    assert_eq!(v["config"]["mode"], "context-inclusive");
    for r in rows {
        for m in r["members"].as_array().unwrap() {
            assert!(m["verdicts"]["measurability_distance"].is_f64());
        }
    }
}

#[test]
fn markdown_table_keeps_column_order() {
    let (code, out, _) = lablocus(&["table", "--which", "main"]);
    assert_eq!(code, 0);
    assert!(out.contains(
        "| Protocols | P_A of the Lab | O_A (relative event) | Rel. measurability of R_A | Localisation of O_A |"
    ));
    assert!(out.contains("| All QS | \\|P_A\\|=1 | A | Yes | localised |"));
}

#[test]
fn appendix_has_one_unresolved_cell() {
    let (code, v) = json(&["table", "--which", "appendix"]);
    assert_eq!(code, 0);
    let rows = v["rows"].as_array().unwrap();
    let unresolved: Vec<&Value> = rows.iter().filter(|r| r["class"] == "Unresolved").collect();
    assert_eq!(unresolved.len(), 1);
    assert_eq!(unresolved[0]["scenario"], "qs_g");
    assert!(unresolved[0]["evidence"].is_null());
}

// Every Yes verdict sits on a distance that is exactly zero, so even a
// tolerance far below rounding noise leaves the table unchanged.
#[test]
fn tiny_tolerance_keeps_exact_zero_distances() {
    let (code, v) = json(&["table", "--which", "main", "--tolerance", "1e-30"]);
    assert_eq!(code, 0);
    for r in v["rows"].as_array().unwrap() {
        if r["measurability"] == "Yes" {
            for m in r["members"].as_array().unwrap() {
                assert_eq!(m["verdicts"]["measurability_distance"], 0.0);
            }
        }
    }
}

#[test]
fn strict_local_mode_reports_a_mismatch() {
    let (code, out, err) = lablocus(&["table", "--which", "main", "--strict-local"]);
    assert_eq!(code, 1);
    assert!(
        err.contains("row 4 measurability: expected `No`, computed `Yes`"),
        "{err}"
    );
    assert!(out.contains("Mismatches:"));
    assert!(out.contains("mode strict-local"));
}

#[test]
fn invalid_flags_are_usage_errors() {
    for args in [
        vec!["table", "--which", "main", "--tolerance", "0"],
        vec!["table", "--which", "main", "--tolerance", "1e-2"],
        vec!["table", "--which", "main", "--d", "5"],
        vec!["table", "--which", "sideways"],
        vec!["verify", "--format", "yaml"],
    ] {
        let (code, _, err) = lablocus(&args);
        assert_eq!(code, 2, "{args:?}: {err}");
    }
}

#[test]
fn environment_overrides_flags_defaults() {
    let out = Command::new(env!("CARGO_BIN_EXE_lablocus"))
        .args(["scenario", "--name", "qs_ct"])
        .env("LABLOCUS_FORMAT", "json")
        .env("LABLOCUS_SEED", "5")
        .env("LABLOCUS_D", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["config"]["d"], 3);
}

#[test]
fn classical_alice_in_time() {
    let (code, v) = json(&["scenario", "--name", "qs_ct", "--reference", "t", "--event", "A"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"]["measurability"], "Yes");
    assert_eq!(v["verdicts"]["localisation"], "non-localised");
    assert_eq!(v["verdicts"]["localisation_distances"].as_array().unwrap().len(), 2);
}

#[test]
fn quinn_cannot_measure_the_slit() {
    let (code, v) = json(&["scenario", "--name", "double-slit", "--agent", "quinn"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"]["measurability"], "No");
    assert!(v["verdicts"]["measurability_distance"].as_f64().unwrap() >= 0.1);
    assert!(v["interference"]["reference_measured"].is_array());
}

#[test]
fn claire_with_quantum_trajectories_matches_classical_alice() {
    for event in ["A", "A1", "A2"] {
        let (_, claire) = json(&[
            "scenario",
            "--name",
            "qs_qt",
            "--reference",
            "t",
            "--agent",
            "claire",
            "--event",
            event,
        ]);
        let (_, alice) = json(&["scenario", "--name", "qs_ct", "--reference", "t", "--event", event]);
        assert_eq!(claire["verdicts"], alice["verdicts"], "{event}");
    }
}

#[test]
fn unsupported_choice_prints_the_matrix() {
    let (code, out, err) = lablocus(&["scenario", "--name", "qs_g", "--agent", "claire", "--reference", "xt"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("supported combinations:"));
    assert!(err.contains("--name double-slit --agent quinn --reference x --event A"));
    let (code, _, err) = lablocus(&["scenario", "--name", "qs_x"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown scenario"));
}

#[test]
fn verify_is_deterministic_per_seed() {
    let (c1, a, _) = lablocus(&["verify", "--seed", "7", "--format", "json"]);
    let (c2, b, _) = lablocus(&["verify", "--seed", "7", "--format", "json"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["criteria"].as_array().unwrap().len(), 9);
    assert_eq!(v["passed"], true);
    let (_, other, _) = lablocus(&["verify", "--seed", "8", "--format", "json"]);
    assert_ne!(a, other);
}

#[test]
fn verify_reruns_at_other_dimension() {
    let (code, v) = json(&["verify", "--d", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["d"], 3);
    for c in v["criteria"].as_array().unwrap() {
        assert_eq!(c["passed"], true, "{c}");
    }
}
