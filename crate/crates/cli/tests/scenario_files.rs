use std::process::Command;

use lablocus_cli::commands::round_trip;
use lablocus_cli::schema::{self, ScenarioFile};
use lablocus_cli::{CliError, RunConfig};
use lablocus_core::atlas::{
    build_context, supported, Agent, EventKind, LabChoice, ModelParams, ReferenceKind, ScenarioId,
};
use lablocus_core::linalg::{basis, c, hadamard, kron_vec, outer, pauli_x, pauli_z, Matrix, Vector, C64};
use serde_json::{json, Value};

fn m(a: &Matrix) -> Value {
    Value::Array(
        (0..a.nrows())
            .map(|i| Value::Array((0..a.ncols()).map(|j| json!([a[(i, j)].re, a[(i, j)].im])).collect()))
            .collect(),
    )
}

fn v(a: &Vector) -> Value {
    Value::Array(a.iter().map(|z| json!([z.re, z.im])).collect())
}

fn check(doc: &Value, extra: &[&str]) -> (i32, String, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lablocus"))
        .arg("check")
        .arg(&path)
        .args(extra)
        .env_remove("LABLOCUS_FORMAT")
        .env_remove("LABLOCUS_STRICT_LOCAL")
        .env_remove("LABLOCUS_TOLERANCE")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn check_json(doc: &Value) -> Value {
    let (code, out, err) = check(doc, &["--format", "json"]);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn singleton() -> Value {
    json!({
        "version": "1",
        "name": "trivial reference",
        "factors": [{"label": "R", "dim": 1}, {"label": "T", "dim": 2}],
        "reference": {"factor": "R", "outcomes": [{"label": "T_A", "projector": [[[1.0, 0.0]]]}]},
        "target": ["T"],
        "initial": {"pure": [[1.0, 0.0], [0.0, 0.0]]},
        "event": [{"conditioned": [{"label": "T_A", "unitary": m(&hadamard())}]}]
    })
}

#[test]
fn singleton_lab_is_localised_and_measurable() {
    let r = check_json(&singleton());
    assert_eq!(r["verdicts"]["measurability"], "Yes");
    assert_eq!(r["verdicts"]["measurability_distance"], 0.0);
    assert_eq!(r["verdicts"]["localisation"], "localised");
    assert_eq!(r["verdicts"]["localisation_distances"][0]["distance"], 0.0);
    assert_eq!(r["name"], "trivial reference");
}

fn cnot_control_first() -> Matrix {
    let mut u = Matrix::zeros(4, 4);
    for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        u[(i, j)] = c(1.0, 0.0);
    }
    u
}

fn id(n: usize) -> Matrix {
    Matrix::identity(n, n)
}

/// Control C entangled with the reference R, distinct operations per
/// reference value, then R reset from C and C closed with a Hadamard.
fn entangled(alpha: C64, beta: C64, psi: &Vector) -> (Value, f64) {
    let cr = &kron_vec(&basis(2, 0), &basis(2, 0)) * alpha + kron_vec(&basis(2, 1), &basis(2, 1)) * beta;
    let initial = kron_vec(&cr, psi);
    // continuation on C, R, T: CNOT(C -> R), then H on C
    let step1 = cnot_control_first().kronecker(&id(2));
    let step2 = hadamard().kronecker(&id(4));
    let cont = step2 * step1;
    let doc = json!({
        "version": "1",
        "factors": [{"label": "C", "dim": 2}, {"label": "R", "dim": 2}, {"label": "T", "dim": 2}],
        "reference": {"factor": "R", "outcomes": [
            {"label": "r1", "projector": m(&outer(&basis(2, 0), &basis(2, 0)))},
            {"label": "r2", "projector": m(&outer(&basis(2, 1), &basis(2, 1)))}
        ]},
        "target": ["T"],
        "environment": ["C"],
        "initial": {"pure": v(&initial)},
        "event": [{"conditioned": [
            {"label": "r1", "unitary": m(&pauli_x())},
            {"label": "r2", "kraus": [m(&pauli_z())]}
        ]}],
        "continuation": {"kraus": [m(&cont)], "output": [
            {"label": "C", "dim": 2}, {"label": "R", "dim": 2}, {"label": "T", "dim": 2}
        ]}
    });
    // after the reset R is |0>; compare the coherent and the dephased state
    // of C and T directly
    let a = pauli_x() * psi;
    let b = pauli_z() * psi;
    let branch = |k: usize, t: &Vector| kron_vec(&(hadamard() * basis(2, k)), t);
    let coherent = branch(0, &a) * alpha + branch(1, &b) * beta;
    let mixed = outer(&branch(0, &a), &branch(0, &a)) * c(alpha.norm_sqr(), 0.0)
        + outer(&branch(1, &b), &branch(1, &b)) * c(beta.norm_sqr(), 0.0);
    let oracle = (outer(&coherent, &coherent) - mixed).singular_values().sum() / 2.0;
    (doc, oracle)
}

#[test]
fn entangled_reference_is_not_measurable() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = Vector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
    for (alpha, beta) in [(c(h, 0.0), c(h, 0.0)), (c(0.6, 0.0), c(0.0, 0.8))] {
        let (doc, oracle) = entangled(alpha, beta, &psi);
        let r = check_json(&doc);
        assert_eq!(r["verdicts"]["measurability"], "No");
        let d = r["verdicts"]["measurability_distance"].as_f64().unwrap();
        assert!(d >= 0.1);
        assert!((d - oracle).abs() <= 1e-9, "{d} vs {oracle}");
        assert_eq!(r["verdicts"]["localisation"], "non-localised");
    }
    // without the recombining continuation the comparison happens locally
    let (doc, _) = entangled(c(h, 0.0), c(h, 0.0), &psi);
    let (code, out, _) = check(&doc, &["--format", "json", "--strict-local"]);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["verdicts"]["measurability"], "Yes");
}

#[test]
fn incomplete_projectors_are_numeric_errors() {
    let mut doc = singleton();
    doc["reference"]["outcomes"][0]["projector"] = json!([[[0.9, 0.0]]]);
    let (code, out, err) = check(&doc, &[]);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    assert!(err.contains("idempotence") || err.contains("completeness"), "{err}");

    // 0.9 I on two dimensions with one projector per level
    let (mut doc, _) = entangled(c(1.0, 0.0), c(0.0, 0.0), &basis(2, 0));
    let p = outer(&basis(2, 0), &basis(2, 0)) * c(0.9, 0.0);
    doc["reference"]["outcomes"] =
        json!([{"label": "r1", "projector": m(&(p.clone() + outer(&basis(2, 1), &basis(2, 1)) * c(0.9, 0.0)))}]);
    let (code, _, err) = check(&doc, &[]);
    assert_eq!(code, 3);
    assert!(err.contains("invariant"), "{err}");
}

#[test]
fn projectors_summing_short_of_identity_name_completeness() {
    let (mut doc, _) = entangled(c(1.0, 0.0), c(0.0, 0.0), &basis(2, 0));
    // two orthogonal projectors that only cover |0>
    doc["reference"]["outcomes"] = json!([
        {"label": "r1", "projector": m(&outer(&basis(2, 0), &basis(2, 0)))},
        {"label": "r2", "projector": m(&Matrix::zeros(2, 2))}
    ]);
    let (code, _, err) = check(&doc, &[]);
    assert_eq!(code, 3);
    assert!(err.contains("completeness"), "{err}");
}

#[test]
fn numeric_violations_exit_with_three() {
    let mut non_psd = singleton();
    non_psd["initial"] = json!({"density": [[[1.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.5, 0.0]]]});
    let mut not_unitary = singleton();
    not_unitary["event"][0]["conditioned"][0]["unitary"] = m(&(id(2) * c(0.5, 0.0)));
    let mut lossy = singleton();
    lossy["event"][0]["conditioned"][0] = json!({"label": "T_A", "kraus": [m(&outer(&basis(2, 0), &basis(2, 0)))]});
    for (doc, what) in [
        (non_psd, "positive"),
        (not_unitary, "unitary"),
        (lossy, "trace-preserving"),
    ] {
        let (code, _, err) = check(&doc, &[]);
        assert_eq!(code, 3, "{what}: {err}");
        assert!(err.contains(what), "{err}");
    }
}

#[test]
fn schema_violations_name_the_field() {
    let mut missing = singleton();
    missing.as_object_mut().unwrap().remove("version");
    let mut typo = singleton();
    typo["event"][0]["conditioned"][0]["unitry"] = json!([]);
    let mut ragged = singleton();
    ragged["reference"]["outcomes"][0]["projector"] = json!([[[1.0, 0.0], [0.0, 0.0]]]);
    let mut unknown_target = singleton();
    unknown_target["target"] = json!(["Q"]);
    for (doc, path) in [
        (missing, "`.`"),
        (typo, "`event[0].conditioned[0].unitry`"),
        (ragged, "`reference.outcomes[0].projector[0]`"),
        (unknown_target, "`target[0]`"),
    ] {
        let (code, _, err) = check(&doc, &[]);
        assert_eq!(code, 2, "{err}");
        assert!(err.contains(path), "{path}: {err}");
    }
    let (code, _, err) = {
        let out = Command::new(env!("CARGO_BIN_EXE_lablocus"))
            .args(["check", "/nonexistent/scenario.json"])
            .output()
            .unwrap();
        (out.status.code().unwrap(), (), String::from_utf8(out.stderr).unwrap())
    };
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"));
}

#[test]
fn every_builtin_model_survives_the_file_format() {
    let cfg = RunConfig::default();
    for (s, c) in supported() {
        let (before, after) = round_trip(s, c, &cfg).unwrap();
        assert_eq!(before.measurability, after.measurability, "{s} {c}");
        assert_eq!(before.localisation, after.localisation, "{s} {c}");
        assert!((before.measurability_distance - after.measurability_distance).abs() <= 1e-12);
        for (x, y) in before.localisation_distances.iter().zip(&after.localisation_distances) {
            assert_eq!(x.label, y.label);
            assert!((x.distance - y.distance).abs() <= 1e-12, "{s} {c}");
        }
    }
}

#[test]
fn serialised_model_is_stable() {
    let p = ModelParams::default();
    let m = build_context(
        ScenarioId::QsCt,
        LabChoice::new(Agent::Alice, ReferenceKind::T, EventKind::A),
        &p,
    )
    .unwrap();
    let file = ScenarioFile::from_model(&m, None);
    let text = schema::to_json(&file);
    let back = schema::parse(&text).unwrap();
    assert_eq!(back, file);
    assert_eq!(schema::to_json(&back), text);
}

#[test]
fn emitted_file_checks_like_the_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("qs_qt.json");
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_lablocus"))
            .args(args)
            .args(["--format", "json"])
            .env_remove("LABLOCUS_FORMAT")
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    let scenario = run(&[
        "scenario",
        "--name",
        "qs_qt",
        "--reference",
        "xt",
        "--emit-file",
        path.to_str().unwrap(),
    ]);
    let checked = run(&["check", path.to_str().unwrap()]);
    assert_eq!(
        scenario["verdicts"]["measurability"],
        checked["verdicts"]["measurability"]
    );
    assert_eq!(
        scenario["verdicts"]["localisation"],
        checked["verdicts"]["localisation"]
    );
    let a = scenario["verdicts"]["measurability_distance"].as_f64().unwrap();
    let b = checked["verdicts"]["measurability_distance"].as_f64().unwrap();
    assert!((a - b).abs() <= 1e-12);
}

#[test]
fn library_errors_keep_the_exit_contract() {
    let e = schema::parse("{").unwrap_err();
    assert_eq!(e.exit_code(), 2);
    assert!(matches!(e, CliError::Schema { .. }));
}
