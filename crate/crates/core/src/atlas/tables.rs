use std::fmt;

use crate::error::{Error, Result};
use crate::lab::{
    check_relative_measurability, reference_occupation, CheckOptions, Context, Event, Lab, Localisation,
    LocalisationVerdict, MeasurabilityVerdict,
};
use crate::linalg::partial_trace;

use super::{analyze, build_context, Agent, EventKind, LabChoice, ModelParams, ReferenceKind, ScenarioId, VerdictRow};

/// `"<label>-localised"`, `"localised"` for a one-element reference set,
/// `"non-localised"`, or the list of labels for a degenerate verdict.
pub fn render_localisation(v: &LocalisationVerdict, reference_size: usize) -> String {
    match &v.outcome {
        Localisation::Localised(_) if reference_size == 1 => "localised".into(),
        Localisation::Localised(l) => format!("{l}-localised"),
        Localisation::DegenerateLocalised(ls) => format!("degenerate-localised({})", ls.join(",")),
        Localisation::NonLocalised => "non-localised".into(),
    }
}

fn render_measurable(measurable: bool) -> &'static str {
    if measurable {
        "Yes"
    } else {
        "No"
    }
}

/// One line of the main table: several analysed choices summarised together.
#[derive(Debug, Clone, PartialEq)]
pub struct MainRow {
    pub protocols: String,
    pub reference: String,
    pub event: String,
    pub rows: Vec<VerdictRow>,
}

impl MainRow {
    pub fn measurability(&self) -> String {
        let mut seen: Vec<&str> = vec![];
        for r in &self.rows {
            let m = render_measurable(r.measurability.measurable);
            if !seen.contains(&m) {
                seen.push(m);
            }
        }
        seen.join("/")
    }

    /// Common rendering, or distinct single labels merged as `t1/t2-localised`.
    pub fn localisation(&self) -> String {
        let mut seen: Vec<String> = vec![];
        for r in &self.rows {
            let s = render_localisation(&r.localisation, r.reference_labels.len());
            if !seen.contains(&s) {
                seen.push(s);
            }
        }
        if seen.len() == 1 {
            return seen.remove(0);
        }
        let singles: Option<Vec<&str>> = self
            .rows
            .iter()
            .map(|r| match &r.localisation.outcome {
                Localisation::Localised(l) if r.reference_labels.len() > 1 => Some(l.as_str()),
                _ => None,
            })
            .collect();
        match singles {
            Some(mut ls) => {
                ls.dedup();
                format!("{}-localised", ls.join("/"))
            }
            None => seen.join("; "),
        }
    }

    /// Smallest measurability distance over the summarised choices.
    pub fn min_measurability_distance(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.measurability.distance)
            .fold(f64::INFINITY, f64::min)
    }
}

type Members = Vec<(ScenarioId, LabChoice)>;

/// The seven lines of the main table, each computed from its member choices.
pub fn table_main(p: &ModelParams, opts: &CheckOptions) -> Result<Vec<MainRow>> {
    use Agent::Alice;
    use EventKind as E;
    use ReferenceKind as R;
    use ScenarioId::*;
    let layout: Vec<(&str, &str, &str, Members)> = vec![
        ("QS_CT", "{t}", "A", vec![(QsCt, LabChoice::new(Alice, R::T, E::A))]),
        (
            "QS_CT",
            "{t}",
            "A1, A2",
            vec![
                (QsCt, LabChoice::new(Alice, R::T, E::A1)),
                (QsCt, LabChoice::new(Alice, R::T, E::A2)),
            ],
        ),
        (
            "QS_CT",
            "{x}",
            "A, A1, A2",
            E::ALL
                .into_iter()
                .map(|e| (QsCt, LabChoice::new(Alice, R::X, e)))
                .collect(),
        ),
        (
            "QS_QT",
            "{(x,t)}",
            "A",
            vec![(QsQt, LabChoice::new(Alice, R::XT, E::A))],
        ),
        (
            "QS_QT, QS_G",
            "{a}",
            "A",
            vec![
                (QsQt, LabChoice::new(Alice, R::A, E::A)),
                (QsG, LabChoice::new(Alice, R::A, E::A)),
            ],
        ),
        (
            "QS_QT, QS_G",
            "{tau}",
            "A",
            vec![
                (QsQt, LabChoice::new(Alice, R::Tau, E::A)),
                (QsG, LabChoice::new(Alice, R::Tau, E::A)),
            ],
        ),
        (
            "All QS",
            "|P_A|=1",
            "A",
            [QsCt, QsQt, QsG]
                .into_iter()
                .map(|s| (s, LabChoice::new(Alice, R::Singleton, E::A)))
                .collect(),
        ),
    ];
    layout
        .into_iter()
        .map(|(protocols, reference, event, members)| {
            let rows = members
                .into_iter()
                .map(|(s, c)| analyze(s, c, p, opts))
                .collect::<Result<Vec<_>>>()?;
            Ok(MainRow {
                protocols: protocols.into(),
                reference: reference.into(),
                event: event.into(),
                rows,
            })
        })
        .collect()
}

/// Which theoretical description a lab's view of the switch calls for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssumptionClass {
    Fine,
    Effective,
    Coarse,
    /// No model is available to decide.
    Unresolved,
}

impl AssumptionClass {
    pub fn name(self) -> &'static str {
        match self {
            AssumptionClass::Fine => "Fine",
            AssumptionClass::Effective => "Effective",
            AssumptionClass::Coarse => "Coarse",
            AssumptionClass::Unresolved => "Unresolved",
        }
    }
}

impl fmt::Display for AssumptionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The structural facts a classification is read from.
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptionEvidence {
    /// Reference values occupied at some stage of the event.
    pub relevant_labels: usize,
    pub vacuum_target: bool,
    /// Purity of the reference marginal in the initial state.
    pub reference_purity: f64,
    pub measurability: MeasurabilityVerdict,
    /// Some conditioned step acts differently for two reference values.
    pub operations_differ: bool,
    pub tolerance: f64,
}

impl DescriptionEvidence {
    /// * Coarse: one operationally relevant reference value and no vacuum in
    ///   the target.
    /// * Effective: reference marginal impure, not measurable, no vacuum.
    /// * Fine: measurable, vacuum-extended target, operations differing
    ///   between reference values.
    pub fn class(&self) -> Result<AssumptionClass> {
        let vacuum = self.vacuum_target;
        if self.relevant_labels == 1 && !vacuum {
            return Ok(AssumptionClass::Coarse);
        }
        let measurable = self.measurability.measurable;
        let impure = self.reference_purity < 1.0 - self.tolerance;
        if impure && !measurable && !vacuum {
            return Ok(AssumptionClass::Effective);
        }
        if measurable && vacuum && self.operations_differ {
            return Ok(AssumptionClass::Fine);
        }
        Err(Error::Unclassifiable)
    }
}

pub fn describe(lab: &Lab, ctx: &Context, e: &Event, opts: &CheckOptions) -> Result<DescriptionEvidence> {
    let occupation = reference_occupation(lab, ctx, e)?;
    let relevant_labels = (0..lab.reference().len())
        .filter(|&k| occupation.iter().any(|row| row[k] > opts.tolerance))
        .count();
    let vacuum_target = lab.target().factors().iter().any(|f| f.is_vacuum_extended());
    let measurability = check_relative_measurability(lab, ctx, e, opts)?;
    let reference_purity = partial_trace(ctx.initial(), &[lab.reference_label()])?.purity();
    let labels = lab.reference().labels();
    let mut operations_differ = false;
    for step in e.conditioned_steps() {
        for (i, a) in labels.iter().enumerate() {
            for b in &labels[i + 1..] {
                operations_differ |= step.differs_between(a, b)?;
            }
        }
    }
    Ok(DescriptionEvidence {
        relevant_labels,
        vacuum_target,
        reference_purity,
        measurability,
        operations_differ,
        tolerance: opts.tolerance,
    })
}

/// Classification from structural predicates and the measurability verdict,
/// see [`DescriptionEvidence::class`].
pub fn classify_description(lab: &Lab, ctx: &Context, e: &Event, opts: &CheckOptions) -> Result<AssumptionClass> {
    describe(lab, ctx, e, opts)?.class()
}

fn unresolved(s: ScenarioId, c: LabChoice) -> bool {
    s == ScenarioId::QsG && c.agent == Agent::Claire
}

/// Classifies a choice by building its model. The distant observer of the
/// gravitational switch has no model here and is reported as unresolved.
pub fn classify_choice(s: ScenarioId, c: LabChoice, p: &ModelParams, opts: &CheckOptions) -> Result<AssumptionClass> {
    if unresolved(s, c) {
        return Ok(AssumptionClass::Unresolved);
    }
    let m = build_context(s, c, p)?;
    classify_description(&m.lab, &m.context, &m.event, opts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AppendixEntry {
    pub scenario: ScenarioId,
    pub choice: LabChoice,
    pub description: String,
    pub class: AssumptionClass,
    /// Absent for the unresolved cell.
    pub evidence: Option<DescriptionEvidence>,
}

/// Every lab placed in the description grid, with its computed class.
pub fn table_appendix(p: &ModelParams, opts: &CheckOptions) -> Result<Vec<AppendixEntry>> {
    use Agent::*;
    use ReferenceKind::*;
    use ScenarioId::*;
    const A: EventKind = EventKind::A;
    let labs = [
        (QsCt, LabChoice::new(Alice, XT, A), "Alice's Lab with (x,t)"),
        (QsQt, LabChoice::new(Claire, XT, A), "Claire's Lab with (x,t)"),
        (QsG, LabChoice::new(Claire, XT, A), "distant observer's Lab"),
        (QsCt, LabChoice::new(Alice, TArr, A), "Alice's Lab with t_arr"),
        (QsQt, LabChoice::new(Alice, XT, A), "Alice's Lab using (x,t)"),
        (QsQt, LabChoice::new(Alice, ReferenceKind::A, A), "Alice's Lab using a"),
        (QsG, LabChoice::new(Alice, ReferenceKind::A, A), "Alice's Lab using a"),
        (
            QsCt,
            LabChoice::new(Alice, Singleton, A),
            "any Lab with trivial reference",
        ),
        (QsQt, LabChoice::new(Alice, Tau, A), "Alice's Lab using tau"),
        (QsG, LabChoice::new(Alice, Tau, A), "Alice's Lab using tau"),
    ];
    labs.into_iter()
        .map(|(s, c, description)| {
            let evidence = if unresolved(s, c) {
                None
            } else {
                let m = build_context(s, c, p)?;
                Some(describe(&m.lab, &m.context, &m.event, opts)?)
            };
            Ok(AppendixEntry {
                scenario: s,
                choice: c,
                description: description.into(),
                class: match &evidence {
                    Some(ev) => ev.class()?,
                    None => AssumptionClass::Unresolved,
                },
                evidence,
            })
        })
        .collect()
}
