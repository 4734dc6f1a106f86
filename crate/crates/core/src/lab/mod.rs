//! Labs, relative events and contexts.
//!
//! A [`Lab`] fixes a reference factor with a projective measurement, a target
//! made of one or more factors, and a named set of events. An [`Event`] is a
//! sequence of steps: operations on the target conditioned on the reference
//! subspaces, or free dynamics of the reference itself (a clock ticking). A
//! [`Context`] supplies the initial state on reference, target and
//! environment, and the channel describing the rest of the protocol.

mod checks;

pub use checks::{
    check_localisation, check_relative_measurability, event_output, reference_occupation, CheckMode, CheckOptions,
    LabelComparison, Localisation, LocalisationVerdict, MeasurabilityVerdict, DEFAULT_TOLERANCE,
};

use crate::error::{Error, Result};
use crate::linalg::{
    identity, kron, max_abs, unitarity_deviation, zeros, DensityOperator, Factor, KrausChannel, Matrix,
    ReferenceMeasurement, Space, INVARIANT_TOL,
};

/// Per-label operations on the target, applied according to the reference
/// subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedStep {
    measurement: ReferenceMeasurement,
    channels: Vec<KrausChannel>,
}

impl ConditionedStep {
    /// `channels` pairs labels with target channels; every label of the
    /// measurement needs exactly one entry.
    pub fn new(measurement: ReferenceMeasurement, channels: Vec<(String, KrausChannel)>) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::InvalidEvent("conditioned step without operations".into()));
        }
        let mut ordered = Vec::with_capacity(measurement.len());
        for label in measurement.labels() {
            let ch = channels
                .iter()
                .find(|(l, _)| l == label)
                .map(|(_, c)| c.clone())
                .ok_or_else(|| Error::MissingLabel(label.clone()))?;
            ordered.push(ch);
        }
        if let Some((l, _)) = channels.iter().find(|(l, _)| !measurement.labels().contains(l)) {
            return Err(Error::MissingLabel(format!("{l} (not an outcome of the measurement)")));
        }
        let space = ordered[0].input().clone();
        for ch in &ordered {
            if ch.input().dim() != space.dim() || ch.output().dim() != space.dim() {
                return Err(Error::DimensionMismatch(
                    "conditioned operations must act on the same target space".into(),
                ));
            }
        }
        Ok(Self {
            measurement,
            channels: ordered,
        })
    }

    /// Unitary operations on the target space `target`, one per label.
    pub fn unitaries(measurement: ReferenceMeasurement, target: &Space, unitaries: &[(&str, Matrix)]) -> Result<Self> {
        let channels = unitaries
            .iter()
            .map(|(l, u)| Ok((l.to_string(), KrausChannel::unitary(target.clone(), u.clone())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(measurement, channels)
    }

    pub fn measurement(&self) -> &ReferenceMeasurement {
        &self.measurement
    }

    pub fn channels(&self) -> impl Iterator<Item = (&str, &KrausChannel)> {
        self.measurement
            .labels()
            .iter()
            .map(String::as_str)
            .zip(self.channels.iter())
    }

    pub fn target_space(&self) -> &Space {
        self.channels[0].input()
    }

    /// Kraus operators on reference (x) target, combining the per-label Kraus
    /// lists index by index: `K_i = sum_l P_l (x) K^l_i`, with missing entries
    /// taken as zero. For unitary operations this is the controlled unitary.
    fn kraus_on(&self, dt: usize) -> Vec<Matrix> {
        let n = self.measurement.dim() * dt;
        let count = self.channels.iter().map(|c| c.kraus().len()).max().unwrap_or(0);
        (0..count)
            .map(|i| {
                self.measurement
                    .projectors()
                    .iter()
                    .zip(&self.channels)
                    .filter_map(|(p, ch)| ch.kraus().get(i).map(|k| kron(p, k)))
                    .fold(zeros(n, n), |acc, m| acc + m)
            })
            .collect()
    }

    /// True when two labels carry operations with different Choi matrices.
    pub fn differs_between(&self, a: &str, b: &str) -> Result<bool> {
        let ia = self.measurement.index_of(a)?;
        let ib = self.measurement.index_of(b)?;
        Ok(max_abs(&(self.channels[ia].choi() - self.channels[ib].choi())) > INVARIANT_TOL)
    }

    fn conjugated(&self, v_ref: &Matrix, v_target: &Matrix) -> Self {
        Self {
            measurement: self.measurement.conjugated(v_ref),
            channels: self.channels.iter().map(|c| c.conjugated(v_target, v_target)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Conditioned(ConditionedStep),
    /// Unitary acting on the reference alone, e.g. a clock tick `t1 -> t2`.
    ReferenceDynamics(Matrix),
}

/// A relative event: a non-empty sequence of steps on reference and target.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    steps: Vec<Step>,
}

impl Event {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidEvent("an event needs at least one step".into()));
        }
        for s in &steps {
            match s {
                Step::ReferenceDynamics(u) => {
                    let dev = unitarity_deviation(u);
                    if !u.is_square() || dev > INVARIANT_TOL {
                        return Err(Error::NotUnitary(dev));
                    }
                }
                Step::Conditioned(c) if c.channels.is_empty() => {
                    return Err(Error::InvalidEvent("conditioned step without operations".into()));
                }
                Step::Conditioned(_) => {}
            }
        }
        Ok(Self { steps })
    }

    pub fn single(step: ConditionedStep) -> Self {
        Self {
            steps: vec![Step::Conditioned(step)],
        }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn has_reference_dynamics(&self) -> bool {
        self.steps.iter().any(|s| matches!(s, Step::ReferenceDynamics(_)))
    }

    pub fn conditioned_steps(&self) -> impl Iterator<Item = &ConditionedStep> {
        self.steps.iter().filter_map(|s| match s {
            Step::Conditioned(c) => Some(c),
            Step::ReferenceDynamics(_) => None,
        })
    }

    fn conjugated(&self, v_ref: &Matrix, v_target: &Matrix) -> Self {
        Self {
            steps: self
                .steps
                .iter()
                .map(|s| match s {
                    Step::Conditioned(c) => Step::Conditioned(c.conjugated(v_ref, v_target)),
                    Step::ReferenceDynamics(u) => Step::ReferenceDynamics(v_ref * u * v_ref.adjoint()),
                })
                .collect(),
        }
    }
}

/// Reference (with its measurement), target and allowed events.
#[derive(Debug, Clone, PartialEq)]
pub struct Lab {
    reference: ReferenceMeasurement,
    target: Space,
    operations: Vec<(String, Event)>,
}

impl Lab {
    pub fn new(reference: ReferenceMeasurement, target: Space, operations: Vec<(String, Event)>) -> Result<Self> {
        if target.factors().is_empty() {
            return Err(Error::InvalidLab("target has no factors".into()));
        }
        if target.contains(reference.factor()) {
            return Err(Error::InvalidLab(format!(
                "reference `{}` is also a target factor",
                reference.factor()
            )));
        }
        let lab = Self {
            reference,
            target,
            operations: vec![],
        };
        for (_, e) in &operations {
            lab.validate_event(e)?;
        }
        Ok(Self { operations, ..lab })
    }

    pub fn reference(&self) -> &ReferenceMeasurement {
        &self.reference
    }

    pub fn reference_label(&self) -> &str {
        self.reference.factor()
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn target_labels(&self) -> Vec<&str> {
        self.target.labels()
    }

    pub fn operations(&self) -> &[(String, Event)] {
        &self.operations
    }

    pub fn operation(&self, name: &str) -> Result<&Event> {
        self.operations
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
            .ok_or_else(|| Error::InvalidEvent(format!("lab has no operation `{name}`")))
    }

    /// Reference first, then target factors.
    pub fn local_space(&self) -> Space {
        let mut factors = vec![Factor::new(self.reference.factor(), self.reference.dim())];
        factors.extend(self.target.factors().iter().cloned());
        Space::new(factors).expect("reference label checked distinct from targets")
    }

    /// Every step must act on this lab's reference and target.
    pub fn validate_event(&self, e: &Event) -> Result<()> {
        for s in e.steps() {
            match s {
                Step::Conditioned(c) => {
                    let m = c.measurement();
                    if m.factor() != self.reference.factor() || m.dim() != self.reference.dim() {
                        return Err(Error::InvalidEvent(format!(
                            "step conditions on `{}` (dim {}), lab reference is `{}` (dim {})",
                            m.factor(),
                            m.dim(),
                            self.reference.factor(),
                            self.reference.dim()
                        )));
                    }
                    if c.target_space().dim() != self.target.dim() {
                        return Err(Error::InvalidEvent(format!(
                            "step acts on dim {}, lab target has dim {}",
                            c.target_space().dim(),
                            self.target.dim()
                        )));
                    }
                }
                Step::ReferenceDynamics(u) => {
                    if u.nrows() != self.reference.dim() {
                        return Err(Error::InvalidEvent(format!(
                            "reference dynamics of dim {}, reference has dim {}",
                            u.nrows(),
                            self.reference.dim()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Same lab in a rotated basis: projectors and reference dynamics
    /// conjugated by `v_ref`, target operations by `v_target`.
    pub fn conjugated(&self, v_ref: &Matrix, v_target: &Matrix) -> Self {
        Self {
            reference: self.reference.conjugated(v_ref),
            target: self.target.clone(),
            operations: self
                .operations
                .iter()
                .map(|(n, e)| (n.clone(), e.conjugated(v_ref, v_target)))
                .collect(),
        }
    }

    pub fn conjugate_event(&self, e: &Event, v_ref: &Matrix, v_target: &Matrix) -> Event {
        e.conjugated(v_ref, v_target)
    }
}

/// The sequential composition of an event's steps as a channel on the lab's
/// reference (x) target (see [`Lab::local_space`]). A single Kraus operator
/// means the event is unitary.
pub fn event_channel(lab: &Lab, e: &Event) -> Result<KrausChannel> {
    lab.validate_event(e)?;
    let space = lab.local_space();
    let dt = lab.target.dim();
    let mut acc = KrausChannel::identity(space.clone());
    for s in e.steps() {
        let kraus = match s {
            Step::Conditioned(c) => c.kraus_on(dt),
            Step::ReferenceDynamics(u) => vec![kron(u, &identity(dt))],
        };
        let step = KrausChannel::new(space.clone(), space.clone(), kraus)?;
        acc = acc.then(&step)?;
    }
    Ok(acc)
}

/// Initial condition on reference, target and environment, plus the channel
/// modelling the rest of the protocol after the event. The reference is only
/// discarded at comparison time, so the continuation may still act on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    initial: DensityOperator,
    continuation: KrausChannel,
}

impl Context {
    pub fn new(initial: DensityOperator, continuation: KrausChannel) -> Result<Self> {
        if (initial.trace() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("initial trace {}", initial.trace())));
        }
        if continuation.input() != initial.space() {
            return Err(Error::DimensionMismatch(format!(
                "continuation expects {:?}, initial state lives on {:?}",
                continuation.input().labels(),
                initial.space().labels()
            )));
        }
        let dev = continuation.trace_preservation_deviation();
        if dev > INVARIANT_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(Self { initial, continuation })
    }

    /// No continuation: the comparison happens right after the event.
    pub fn without_continuation(initial: DensityOperator) -> Result<Self> {
        let id = KrausChannel::identity(initial.space().clone());
        Self::new(initial, id)
    }

    pub fn initial(&self) -> &DensityOperator {
        &self.initial
    }

    pub fn continuation(&self) -> &KrausChannel {
        &self.continuation
    }

    pub fn space(&self) -> &Space {
        self.initial.space()
    }

    /// Factors that are neither the lab's reference nor its target.
    pub fn environment_labels<'a>(&'a self, lab: &Lab) -> Vec<&'a str> {
        let mut skip = lab.target_labels();
        skip.push(lab.reference_label());
        self.space()
            .labels()
            .into_iter()
            .filter(|l| !skip.contains(l))
            .collect()
    }

    /// Basis change by `v_in` on the initial space and `v_out` on the
    /// continuation's output space.
    pub fn conjugated(&self, v_in: &Matrix, v_out: &Matrix) -> Self {
        Self {
            initial: self.initial.conjugate(v_in),
            continuation: self.continuation.conjugated(v_in, v_out),
        }
    }

    /// Same context with factors listed in another order (both the initial
    /// space and the continuation output).
    pub fn reorder(&self, input_order: &[&str], output_order: &[&str]) -> Result<Self> {
        Ok(Self {
            initial: self.initial.reorder(input_order)?,
            continuation: self.continuation.reorder(input_order, output_order)?,
        })
    }
}
