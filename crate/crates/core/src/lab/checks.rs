use crate::error::{Error, Result};
use crate::lab::{event_channel, Context, Event, Lab};
use crate::linalg::{
    dephase, identity, kron, partial_trace, trace_distance, DensityOperator, KrausChannel, Matrix, INVARIANT_TOL,
};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Where the comparison happens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckMode {
    /// After the context's continuation, then discarding the reference.
    #[default]
    ContextInclusive,
    /// Right after the event, discarding the reference; the continuation is
    /// ignored.
    StrictLocal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub tolerance: f64,
    pub mode: CheckMode,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            mode: CheckMode::ContextInclusive,
        }
    }
}

impl CheckOptions {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }

    pub fn strict_local(self) -> Self {
        Self {
            mode: CheckMode::StrictLocal,
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurabilityVerdict {
    pub measurable: bool,
    pub distance: f64,
    pub tolerance: f64,
    pub mode: CheckMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Localisation {
    Localised(String),
    /// More than one label passed; all of them are listed.
    DegenerateLocalised(Vec<String>),
    NonLocalised,
}

impl Localisation {
    pub fn is_localised(&self) -> bool {
        !matches!(self, Localisation::NonLocalised)
    }

    pub fn labels(&self) -> Vec<&str> {
        match self {
            Localisation::Localised(l) => vec![l.as_str()],
            Localisation::DegenerateLocalised(ls) => ls.iter().map(String::as_str).collect(),
            Localisation::NonLocalised => vec![],
        }
    }
}

/// One projector-sandwich branch compared to the uninhibited run.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelComparison {
    pub label: String,
    pub distance: f64,
    /// Trace of the unnormalised branch.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalisationVerdict {
    pub outcome: Localisation,
    pub comparisons: Vec<LabelComparison>,
    pub tolerance: f64,
    pub mode: CheckMode,
}

impl LocalisationVerdict {
    pub fn min_distance(&self) -> f64 {
        self.comparisons
            .iter()
            .map(|c| c.distance)
            .fold(f64::INFINITY, f64::min)
    }
}

/// The event as a channel on the full context space.
fn embedded_event(lab: &Lab, ctx: &Context, e: &Event) -> Result<KrausChannel> {
    let local = event_channel(lab, e)?;
    let dev = local.trace_preservation_deviation();
    if dev > INVARIANT_TOL {
        return Err(Error::NotTracePreserving(dev));
    }
    let space = ctx.space();
    let labels = lab.local_space();
    let labels = labels.labels();
    for f in lab.local_space().factors() {
        let have = space.factor(&f.label)?;
        if have.dim != f.dim {
            return Err(Error::DimensionMismatch(format!(
                "factor `{}` has dim {} in the context, {} in the lab",
                f.label, have.dim, f.dim
            )));
        }
    }
    let kraus = local
        .kraus()
        .iter()
        .map(|k| space.embed(k, &labels))
        .collect::<Result<Vec<_>>>()?;
    KrausChannel::trace_preserving(space.clone(), space.clone(), kraus)
}

/// Continuation (unless strict) followed by discarding the reference.
fn finish(lab: &Lab, ctx: &Context, rho: &DensityOperator, mode: CheckMode) -> Result<DensityOperator> {
    let out = match mode {
        CheckMode::ContextInclusive => ctx.continuation().apply(rho)?,
        CheckMode::StrictLocal => rho.clone(),
    };
    let r = lab.reference_label();
    if !out.space().contains(r) {
        return Err(Error::UnknownLabel(format!(
            "{r} (missing from the continuation output)"
        )));
    }
    let keep: Vec<&str> = out.space().labels().into_iter().filter(|l| *l != r).collect();
    partial_trace(&out, &keep)
}

/// Final compared state of the uninhibited run.
pub fn event_output(lab: &Lab, ctx: &Context, e: &Event, opts: &CheckOptions) -> Result<DensityOperator> {
    let ch = embedded_event(lab, ctx, e)?;
    finish(lab, ctx, &ch.apply(ctx.initial())?, opts.mode)
}

/// Compares the run with and without a reference measurement just before the
/// event.
pub fn check_relative_measurability(
    lab: &Lab,
    ctx: &Context,
    e: &Event,
    opts: &CheckOptions,
) -> Result<MeasurabilityVerdict> {
    let ch = embedded_event(lab, ctx, e)?;
    let plain = finish(lab, ctx, &ch.apply(ctx.initial())?, opts.mode)?;
    let measured = dephase(ctx.initial(), lab.reference())?;
    let measured = finish(lab, ctx, &ch.apply(&measured)?, opts.mode)?;
    let distance = trace_distance(&plain, &measured)?;
    Ok(MeasurabilityVerdict {
        measurable: distance <= opts.tolerance,
        distance,
        tolerance: opts.tolerance,
        mode: opts.mode,
    })
}

/// For each label, sandwiches the event between the label's projector on the
/// reference and compares the (unnormalised) result with the uninhibited
/// run.
pub fn check_localisation(lab: &Lab, ctx: &Context, e: &Event, opts: &CheckOptions) -> Result<LocalisationVerdict> {
    let ch = embedded_event(lab, ctx, e)?;
    let full = finish(lab, ctx, &ch.apply(ctx.initial())?, opts.mode)?;
    let space = ctx.space();
    let dt = lab.target().dim();
    let mut comparisons = Vec::with_capacity(lab.reference().len());
    for (label, p) in lab.reference().iter() {
        let pi = space.embed(&kron(p, &identity(dt)), &lab.local_space().labels())?;
        let sandwiched: Vec<Matrix> = ch.kraus().iter().map(|k| &pi * k * &pi).collect();
        let branch = KrausChannel::new(space.clone(), space.clone(), sandwiched)?;
        let out = finish(lab, ctx, &branch.apply(ctx.initial())?, opts.mode)?;
        comparisons.push(LabelComparison {
            label: label.to_string(),
            distance: trace_distance(&out, &full)?,
            weight: out.trace(),
        });
    }
    let passing: Vec<String> = comparisons
        .iter()
        .filter(|c| c.distance <= opts.tolerance)
        .map(|c| c.label.clone())
        .collect();
    let outcome = match passing.len() {
        0 => Localisation::NonLocalised,
        1 => Localisation::Localised(passing.into_iter().next().unwrap()),
        _ => Localisation::DegenerateLocalised(passing),
    };
    Ok(LocalisationVerdict {
        outcome,
        comparisons,
        tolerance: opts.tolerance,
        mode: opts.mode,
    })
}

/// Weight of each reference label (columns, in measurement order) before the
/// event and after each of its steps (rows).
pub fn reference_occupation(lab: &Lab, ctx: &Context, e: &Event) -> Result<Vec<Vec<f64>>> {
    embedded_event(lab, ctx, e)?;
    let space = ctx.space();
    let local = lab.local_space();
    let local_labels = local.labels();
    let weights = |rho: &DensityOperator| -> Vec<f64> {
        let r = partial_trace(rho, &[lab.reference_label()]).expect("reference present");
        lab.reference()
            .projectors()
            .iter()
            .map(|p| (p * r.matrix()).trace().re)
            .collect()
    };
    let mut rho = ctx.initial().clone();
    let mut rows = vec![weights(&rho)];
    for step in e.steps() {
        let single = Event::new(vec![step.clone()])?;
        let ch = event_channel(lab, &single)?;
        let kraus = ch
            .kraus()
            .iter()
            .map(|k| space.embed(k, &local_labels))
            .collect::<Result<Vec<_>>>()?;
        rho = KrausChannel::new(space.clone(), space.clone(), kraus)?.apply(&rho)?;
        rows.push(weights(&rho));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::{ConditionedStep, Step};
    use crate::linalg::{
        basis, hadamard, kron_vec, pauli_x, random_state, random_unitary, rng_from_seed, ReferenceMeasurement, Space,
    };

    fn clock() -> ReferenceMeasurement {
        ReferenceMeasurement::computational("R", &["t1", "t2"])
    }

    fn lab() -> Lab {
        Lab::new(clock(), Space::from_dims(&[("T", 2)]).unwrap(), vec![]).unwrap()
    }

    fn rt() -> Space {
        Space::from_dims(&[("R", 2), ("T", 2)]).unwrap()
    }

    fn random_event(seed: u64) -> Event {
        let mut rng = rng_from_seed(seed);
        let t = Space::from_dims(&[("T", 2)]).unwrap();
        let (u1, u2) = (random_unitary(2, &mut rng), random_unitary(2, &mut rng));
        Event::single(ConditionedStep::unitaries(clock(), &t, &[("t1", u1), ("t2", u2)]).unwrap())
    }

    #[test]
    fn basis_reference_is_measurable() {
        let mut rng = rng_from_seed(3);
        let t = random_state(Space::from_dims(&[("T", 2)]).unwrap(), &mut rng);
        let r = DensityOperator::pure(Space::from_dims(&[("R", 2)]).unwrap(), &basis(2, 0)).unwrap();
        let ctx = Context::without_continuation(r.tensor(&t).unwrap()).unwrap();
        let v = check_relative_measurability(&lab(), &ctx, &random_event(4), &CheckOptions::default()).unwrap();
        assert!(v.measurable);
        assert!(v.distance <= 1e-12);
    }

    #[test]
    fn recombined_superposition_is_not_measurable() {
        // R in |+>, event copies R onto T, continuation uncopies, rotates R
        // and copies again: coherent runs end with T = |0>, dephased runs
        // with T = I/2
        let t = Space::from_dims(&[("T", 2)]).unwrap();
        let e =
            Event::single(ConditionedStep::unitaries(clock(), &t, &[("t1", identity(2)), ("t2", pauli_x())]).unwrap());
        let copy = crate::linalg::controlled_unitary(&clock(), &[("t1", identity(2)), ("t2", pauli_x())]).unwrap();
        let cont = &copy * kron(&hadamard(), &identity(2)) * &copy;
        let plus = hadamard() * basis(2, 0);
        let rho = DensityOperator::pure(rt(), &kron_vec(&plus, &basis(2, 0))).unwrap();
        let ctx = Context::new(rho, KrausChannel::unitary(rt(), cont).unwrap()).unwrap();
        let v = check_relative_measurability(&lab(), &ctx, &e, &CheckOptions::default()).unwrap();
        assert!(!v.measurable);
        assert!((v.distance - 0.5).abs() <= 1e-12);
        let strict = check_relative_measurability(&lab(), &ctx, &e, &CheckOptions::default().strict_local()).unwrap();
        assert!(strict.measurable);
    }

    #[test]
    fn supported_reference_is_localised() {
        let mut rng = rng_from_seed(5);
        let t = random_state(Space::from_dims(&[("T", 2)]).unwrap(), &mut rng);
        let r = DensityOperator::pure(Space::from_dims(&[("R", 2)]).unwrap(), &basis(2, 1)).unwrap();
        let ctx = Context::without_continuation(r.tensor(&t).unwrap()).unwrap();
        let v = check_localisation(&lab(), &ctx, &random_event(6), &CheckOptions::default()).unwrap();
        assert_eq!(v.outcome, Localisation::Localised("t2".into()));
        let branch = v.comparisons.iter().find(|c| c.label == "t2").unwrap();
        assert!((branch.weight - 1.0).abs() <= 1e-12);
        assert!(branch.distance <= 1e-12);
    }

    #[test]
    fn clock_tick_breaks_localisation() {
        let t = Space::from_dims(&[("T", 2)]).unwrap();
        let u = hadamard();
        let first = ConditionedStep::unitaries(clock(), &t, &[("t1", u.clone()), ("t2", identity(2))]).unwrap();
        let second = ConditionedStep::unitaries(clock(), &t, &[("t1", identity(2)), ("t2", u)]).unwrap();
        let e = Event::new(vec![
            Step::Conditioned(first.clone()),
            Step::ReferenceDynamics(pauli_x()),
            Step::Conditioned(second),
        ])
        .unwrap();
        let rho = DensityOperator::pure(rt(), &kron_vec(&basis(2, 0), &basis(2, 0))).unwrap();
        let ctx = Context::without_continuation(rho).unwrap();
        let opts = CheckOptions::default();
        let v = check_localisation(&lab(), &ctx, &e, &opts).unwrap();
        assert_eq!(v.outcome, Localisation::NonLocalised);
        let v = check_localisation(&lab(), &ctx, &Event::single(first), &opts).unwrap();
        assert_eq!(v.outcome, Localisation::Localised("t1".into()));
    }

    #[test]
    fn loose_tolerance_reports_every_passing_label() {
        let rho = DensityOperator::pure(rt(), &kron_vec(&basis(2, 0), &basis(2, 0))).unwrap();
        let ctx = Context::without_continuation(rho).unwrap();
        let v = check_localisation(&lab(), &ctx, &random_event(8), &CheckOptions::with_tolerance(1.0)).unwrap();
        assert_eq!(
            v.outcome,
            Localisation::DegenerateLocalised(vec!["t1".into(), "t2".into()])
        );
    }

    #[test]
    fn non_trace_preserving_step_rejected() {
        let t = Space::from_dims(&[("T", 2)]).unwrap();
        let lossy = KrausChannel::new(t.clone(), t.clone(), vec![crate::linalg::ketbra(2, 0, 0)]).unwrap();
        let step = ConditionedStep::new(
            clock(),
            vec![("t1".into(), lossy), ("t2".into(), KrausChannel::identity(t))],
        )
        .unwrap();
        let rho = DensityOperator::pure(rt(), &kron_vec(&basis(2, 0), &basis(2, 0))).unwrap();
        let ctx = Context::without_continuation(rho).unwrap();
        let r = check_relative_measurability(&lab(), &ctx, &Event::single(step), &CheckOptions::default());
        assert!(matches!(r, Err(Error::NotTracePreserving(_))));
    }

    #[test]
    fn occupation_tracks_clock() {
        let t = Space::from_dims(&[("T", 2)]).unwrap();
        let step = ConditionedStep::unitaries(clock(), &t, &[("t1", identity(2)), ("t2", identity(2))]).unwrap();
        let e = Event::new(vec![Step::Conditioned(step), Step::ReferenceDynamics(pauli_x())]).unwrap();
        let rho = DensityOperator::pure(rt(), &kron_vec(&basis(2, 0), &basis(2, 0))).unwrap();
        let ctx = Context::without_continuation(rho).unwrap();
        let w = reference_occupation(&lab(), &ctx, &e).unwrap();
        assert_eq!(w.len(), 3);
        assert!((w[0][0] - 1.0).abs() < 1e-15 && (w[2][1] - 1.0).abs() < 1e-15);
    }
}
