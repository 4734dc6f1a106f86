//! The scenario file format, version "1".
//!
//! Complex numbers are `[re, im]` pairs and matrices are arrays of rows. A
//! file lists the factors of the context space, names which of them are the
//! reference, the target and the environment, and gives the initial state,
//! the event and (optionally) the continuation. See the README for an
//! annotated example.

use lablocus_core::atlas::Model;
use lablocus_core::lab::{ConditionedStep, Context, Event, Lab, Step};
use lablocus_core::linalg::{
    c, identity, DensityOperator, Factor, KrausChannel, Matrix, ReferenceMeasurement, Sector, Space, Vector,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

/// Tolerance on `|<psi|psi> - 1|` for pure initial states.
const NORM_TOL: f64 = 1e-9;

pub type ComplexDoc = [f64; 2];
pub type MatrixDoc = Vec<Vec<ComplexDoc>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub factors: Vec<FactorDoc>,
    pub reference: ReferenceDoc,
    pub target: Vec<String>,
    #[serde(default)]
    pub environment: Vec<String>,
    pub initial: InitialDoc,
    pub event: Vec<StepDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuation: Option<ContinuationDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDoc {
    pub label: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sectors: Option<Vec<SectorDoc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorDoc {
    pub label: String,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceDoc {
    pub factor: String,
    pub outcomes: Vec<OutcomeDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeDoc {
    pub label: String,
    pub projector: MatrixDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialDoc {
    /// State vector on the context space, factor order as listed.
    Pure(Vec<ComplexDoc>),
    Density(MatrixDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StepDoc {
    /// One operation on the target per reference outcome.
    Conditioned(Vec<OperationDoc>),
    /// Unitary on the reference factor alone.
    ReferenceDynamics(MatrixDoc),
}

/// Exactly one of `unitary` and `kraus`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationDoc {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<MatrixDoc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuationDoc {
    /// Kraus operators from the context space to `output`.
    pub kraus: Vec<MatrixDoc>,
    pub output: Vec<FactorDoc>,
}

/// Parses and type-checks a document. Errors carry the JSON path.
pub fn parse(text: &str) -> Result<ScenarioFile, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::schema(path, e.into_inner().to_string())
    })?;
    if file.version != SCHEMA_VERSION {
        return Err(CliError::schema(
            "version",
            format!("unsupported version `{}`, expected `{SCHEMA_VERSION}`", file.version),
        ));
    }
    Ok(file)
}

pub fn to_json(file: &ScenarioFile) -> String {
    serde_json::to_string_pretty(file).expect("scenario files always serialise")
}

fn matrix(m: &MatrixDoc, rows: usize, cols: usize, path: &str) -> Result<Matrix, CliError> {
    if m.len() != rows {
        return Err(CliError::schema(
            path,
            format!("expected {rows} rows, found {}", m.len()),
        ));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(CliError::schema(
                format!("{path}[{i}]"),
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
    }
    Ok(Matrix::from_fn(rows, cols, |i, j| c(m[i][j][0], m[i][j][1])))
}

fn matrix_doc(m: &Matrix) -> MatrixDoc {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn factor(f: &FactorDoc) -> Factor {
    let out = Factor::new(f.label.clone(), f.dim);
    match &f.sectors {
        Some(s) => out.with_sectors(s.iter().map(|s| Sector::new(s.label.clone(), s.dim)).collect()),
        None => out,
    }
}

fn factor_doc(f: &Factor) -> FactorDoc {
    FactorDoc {
        label: f.label.clone(),
        dim: f.dim,
        sectors: f.sectors.as_ref().map(|s| {
            s.iter()
                .map(|s| SectorDoc {
                    label: s.label.clone(),
                    dim: s.dim,
                })
                .collect()
        }),
    }
}

fn space(factors: &[FactorDoc], path: &str) -> Result<Space, CliError> {
    for (k, f) in factors.iter().enumerate() {
        if let Some(s) = &f.sectors {
            let total: usize = s.iter().map(|s| s.dim).sum();
            if total != f.dim {
                return Err(CliError::schema(
                    format!("{path}[{k}].sectors"),
                    format!("sector dims add up to {total}, factor has dim {}", f.dim),
                ));
            }
        }
    }
    Space::new(factors.iter().map(factor).collect()).map_err(|e| CliError::from_core(path, e))
}

impl ScenarioFile {
    /// Builds the lab, context and event, checking every invariant the
    /// library types enforce.
    pub fn build(&self) -> Result<Model, CliError> {
        let space = space(&self.factors, "factors")?;

        let r = &self.reference;
        let rdim = space
            .factor(&r.factor)
            .map_err(|_| CliError::schema("reference.factor", format!("no factor labelled `{}`", r.factor)))?
            .dim;
        let mut labels = vec![];
        let mut projectors = vec![];
        for (k, o) in r.outcomes.iter().enumerate() {
            labels.push(o.label.clone());
            projectors.push(matrix(
                &o.projector,
                rdim,
                rdim,
                &format!("reference.outcomes[{k}].projector"),
            )?);
        }
        let measurement = ReferenceMeasurement::new(r.factor.clone(), labels, projectors)
            .map_err(|e| CliError::from_core("reference.outcomes", e))?;

        self.check_partition(&space)?;
        let target_labels: Vec<&str> = self.target.iter().map(String::as_str).collect();
        let target = space
            .subspace(&target_labels)
            .map_err(|e| CliError::from_core("target", e))?;

        let n = space.dim();
        let initial = match &self.initial {
            InitialDoc::Pure(v) => {
                if v.len() != n {
                    return Err(CliError::schema(
                        "initial.pure",
                        format!("expected {n} amplitudes, found {}", v.len()),
                    ));
                }
                let psi = Vector::from_iterator(n, v.iter().map(|z| c(z[0], z[1])));
                let norm = psi.norm_squared();
                if (norm - 1.0).abs() > NORM_TOL {
                    return Err(CliError::Numeric(format!(
                        "initial.pure: state vector has squared norm {norm}, expected 1"
                    )));
                }
                DensityOperator::pure(space.clone(), &psi)
            }
            InitialDoc::Density(m) => DensityOperator::new(space.clone(), matrix(m, n, n, "initial.density")?),
        }
        .map_err(|e| CliError::from_core("initial", e))?;

        let event = self.event_from(&measurement, &target, rdim)?;
        let lab = Lab::new(measurement, target, vec![("event".into(), event.clone())])
            .map_err(|e| CliError::from_core("target", e))?;

        let context = match &self.continuation {
            None => Context::without_continuation(initial),
            Some(cont) => {
                let out = self::space(&cont.output, "continuation.output")?;
                let kraus = cont
                    .kraus
                    .iter()
                    .enumerate()
                    .map(|(k, m)| matrix(m, out.dim(), n, &format!("continuation.kraus[{k}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let ch = KrausChannel::new(space.clone(), out, kraus)
                    .map_err(|e| CliError::from_core("continuation.kraus", e))?;
                Context::new(initial, ch)
            }
        }
        .map_err(|e| CliError::from_core("continuation", e))?;
        Ok(Model { lab, context, event })
    }

    /// Every factor is the reference, a target or part of the environment,
    /// exactly once.
    fn check_partition(&self, space: &Space) -> Result<(), CliError> {
        if self.target.is_empty() {
            return Err(CliError::schema("target", "at least one target factor is required"));
        }
        let mut seen: Vec<&str> = vec![self.reference.factor.as_str()];
        let groups = [("target", &self.target), ("environment", &self.environment)];
        for (path, group) in groups {
            for (k, l) in group.iter().enumerate() {
                if !space.contains(l) {
                    return Err(CliError::schema(
                        format!("{path}[{k}]"),
                        format!("no factor labelled `{l}`"),
                    ));
                }
                if seen.contains(&l.as_str()) {
                    return Err(CliError::schema(
                        format!("{path}[{k}]"),
                        format!("factor `{l}` is assigned twice"),
                    ));
                }
                seen.push(l);
            }
        }
        let missing: Vec<&str> = space.labels().into_iter().filter(|l| !seen.contains(l)).collect();
        if !missing.is_empty() {
            return Err(CliError::schema(
                "environment",
                format!("factors {missing:?} are neither reference, target nor environment"),
            ));
        }
        Ok(())
    }

    fn event_from(&self, m: &ReferenceMeasurement, target: &Space, rdim: usize) -> Result<Event, CliError> {
        let dt = target.dim();
        let mut steps = vec![];
        for (i, s) in self.event.iter().enumerate() {
            match s {
                StepDoc::ReferenceDynamics(u) => {
                    let path = format!("event[{i}].reference_dynamics");
                    steps.push(Step::ReferenceDynamics(matrix(u, rdim, rdim, &path)?));
                }
                StepDoc::Conditioned(ops) => {
                    let mut channels = vec![];
                    for (j, op) in ops.iter().enumerate() {
                        let path = format!("event[{i}].conditioned[{j}]");
                        let ch = match (&op.unitary, &op.kraus) {
                            (Some(u), None) => {
                                let u = matrix(u, dt, dt, &format!("{path}.unitary"))?;
                                KrausChannel::unitary(target.clone(), u)
                                    .map_err(|e| CliError::from_core(&format!("{path}.unitary"), e))?
                            }
                            (None, Some(ks)) => {
                                let ks = ks
                                    .iter()
                                    .enumerate()
                                    .map(|(k, m)| matrix(m, dt, dt, &format!("{path}.kraus[{k}]")))
                                    .collect::<Result<Vec<_>, _>>()?;
                                KrausChannel::new(target.clone(), target.clone(), ks)
                                    .map_err(|e| CliError::from_core(&format!("{path}.kraus"), e))?
                            }
                            _ => {
                                return Err(CliError::schema(path, "give exactly one of `unitary` and `kraus`"));
                            }
                        };
                        channels.push((op.label.clone(), ch));
                    }
                    let step = ConditionedStep::new(m.clone(), channels)
                        .map_err(|e| CliError::from_core(&format!("event[{i}].conditioned"), e))?;
                    steps.push(Step::Conditioned(step));
                }
            }
        }
        Event::new(steps).map_err(|e| CliError::from_core("event", e))
    }

    /// The file describing an in-memory model.
    pub fn from_model(m: &Model, name: Option<String>) -> Self {
        let space = m.context.space();
        let lab = &m.lab;
        let reference = ReferenceDoc {
            factor: lab.reference_label().to_string(),
            outcomes: lab
                .reference()
                .iter()
                .map(|(l, p)| OutcomeDoc {
                    label: l.to_string(),
                    projector: matrix_doc(p),
                })
                .collect(),
        };
        let event = m
            .event
            .steps()
            .iter()
            .map(|s| match s {
                Step::ReferenceDynamics(u) => StepDoc::ReferenceDynamics(matrix_doc(u)),
                Step::Conditioned(c) => StepDoc::Conditioned(
                    c.channels()
                        .map(|(l, ch)| {
                            let (unitary, kraus) = if ch.is_unitary() {
                                (Some(matrix_doc(&ch.kraus()[0])), None)
                            } else {
                                (None, Some(ch.kraus().iter().map(matrix_doc).collect()))
                            };
                            OperationDoc {
                                label: l.to_string(),
                                unitary,
                                kraus,
                            }
                        })
                        .collect(),
                ),
            })
            .collect();
        let cont = m.context.continuation();
        let trivial =
            cont.output() == cont.input() && cont.kraus().len() == 1 && cont.kraus()[0] == identity(space.dim());
        let continuation = (!trivial).then(|| ContinuationDoc {
            kraus: cont.kraus().iter().map(matrix_doc).collect(),
            output: cont.output().factors().iter().map(factor_doc).collect(),
        });
        Self {
            version: SCHEMA_VERSION.into(),
            name,
            factors: space.factors().iter().map(factor_doc).collect(),
            reference,
            target: lab.target_labels().iter().map(|l| l.to_string()).collect(),
            environment: m
                .context
                .environment_labels(lab)
                .iter()
                .map(|l| l.to_string())
                .collect(),
            initial: InitialDoc::Density(matrix_doc(m.context.initial().matrix())),
            event,
            continuation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> serde_json::Value {
        serde_json::json!({
            "version": "1",
            "factors": [{"label": "R", "dim": 1}, {"label": "T", "dim": 2}],
            "reference": {"factor": "R", "outcomes": [{"label": "T_A", "projector": [[[1.0, 0.0]]]}]},
            "target": ["T"],
            "initial": {"pure": [[1.0, 0.0], [0.0, 0.0]]},
            "event": [{"conditioned": [{"label": "T_A", "unitary": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]}]}]
        })
    }

    #[test]
    fn minimal_file_builds() {
        let f = parse(&minimal().to_string()).unwrap();
        let m = f.build().unwrap();
        assert_eq!(m.lab.reference().len(), 1);
        assert!(m.context.environment_labels(&m.lab).is_empty());
    }

    #[test]
    fn unknown_field_reports_path() {
        let mut v = minimal();
        v["reference"]["outcomes"][0]["weight"] = serde_json::json!(1.0);
        match parse(&v.to_string()) {
            Err(CliError::Schema { path, .. }) => assert_eq!(path, "reference.outcomes[0].weight"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_version_rejected() {
        let mut v = minimal();
        v["version"] = serde_json::json!("2");
        assert!(matches!(parse(&v.to_string()), Err(CliError::Schema { path, .. }) if path == "version"));
    }

    #[test]
    fn ragged_matrix_reports_row() {
        let mut v = minimal();
        v["event"][0]["conditioned"][0]["unitary"][1] = serde_json::json!([[1.0, 0.0]]);
        let e = parse(&v.to_string()).unwrap().build().unwrap_err();
        assert_eq!(
            e,
            CliError::schema("event[0].conditioned[0].unitary[1]", "expected 2 entries, found 1")
        );
    }

    #[test]
    fn sector_dims_must_cover_the_factor() {
        let mut v = minimal();
        v["factors"][1]["sectors"] = serde_json::json!([{"label": "vac", "dim": 1}, {"label": "1p", "dim": 2}]);
        let e = parse(&v.to_string()).unwrap().build().unwrap_err();
        assert!(
            matches!(&e, CliError::Schema { path, .. } if path == "factors[1].sectors"),
            "{e:?}"
        );
        v["factors"][1]["sectors"] = serde_json::json!([{"label": "vac", "dim": 1}, {"label": "1p", "dim": 1}]);
        assert!(parse(&v.to_string()).unwrap().build().is_ok());
    }

    #[test]
    fn unnormalised_pure_state_is_numeric() {
        let mut v = minimal();
        v["initial"]["pure"][0] = serde_json::json!([0.5, 0.0]);
        let e = parse(&v.to_string()).unwrap().build().unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn unassigned_factor_rejected() {
        let mut v = minimal();
        v["factors"] =
            serde_json::json!([{"label": "R", "dim": 1}, {"label": "T", "dim": 2}, {"label": "E", "dim": 1}]);
        let e = parse(&v.to_string()).unwrap().build().unwrap_err();
        assert!(
            matches!(e, CliError::Schema { ref path, .. } if path == "environment"),
            "{e:?}"
        );
    }
}
