//! Concrete scenarios analysed with the lab checks.
//!
//! Every supported `(scenario, lab choice)` pair is turned into a finite
//! model ([`build_context`]) and analysed ([`analyze`]). Verdicts always
//! come from [`crate::lab`]; this module only builds models and arranges
//! rows.

mod double_slit;
mod models;
mod tables;

pub use double_slit::{double_slit, double_slit_model, Distribution, DoubleSlitReport, SLIT_LABELS};
pub use models::{coarse, effective, fine_grained, Instruments, Model, ModelParams, Window};
pub use tables::{
    classify_choice, classify_description, describe, render_localisation, table_appendix, table_main, AppendixEntry,
    AssumptionClass, DescriptionEvidence, MainRow,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::lab::{
    check_localisation, check_relative_measurability, CheckOptions, LocalisationVerdict, MeasurabilityVerdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioId {
    QsCt,
    QsQt,
    QsG,
    DoubleSlit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Agent {
    Alice,
    Claire,
    Quinn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceKind {
    /// Clock time.
    T,
    /// Position.
    X,
    /// Position and time together.
    XT,
    /// Acceleration.
    A,
    /// Proper time.
    Tau,
    /// Photon time of arrival.
    TArr,
    /// A one-element reference set.
    Singleton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// Alice's whole operation.
    A,
    /// Her operation at the first time only.
    A1,
    /// Her operation at the second time only.
    A2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LabChoice {
    pub agent: Agent,
    pub reference: ReferenceKind,
    pub event: EventKind,
}

impl LabChoice {
    pub fn new(agent: Agent, reference: ReferenceKind, event: EventKind) -> Self {
        Self {
            agent,
            reference,
            event,
        }
    }
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 4] = [
        ScenarioId::QsCt,
        ScenarioId::QsQt,
        ScenarioId::QsG,
        ScenarioId::DoubleSlit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::QsCt => "qs_ct",
            ScenarioId::QsQt => "qs_qt",
            ScenarioId::QsG => "qs_g",
            ScenarioId::DoubleSlit => "double-slit",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl Agent {
    pub const ALL: [Agent; 3] = [Agent::Alice, Agent::Claire, Agent::Quinn];

    pub fn name(self) -> &'static str {
        match self {
            Agent::Alice => "alice",
            Agent::Claire => "claire",
            Agent::Quinn => "quinn",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl ReferenceKind {
    pub const ALL: [ReferenceKind; 7] = [
        ReferenceKind::T,
        ReferenceKind::X,
        ReferenceKind::XT,
        ReferenceKind::A,
        ReferenceKind::Tau,
        ReferenceKind::TArr,
        ReferenceKind::Singleton,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReferenceKind::T => "t",
            ReferenceKind::X => "x",
            ReferenceKind::XT => "xt",
            ReferenceKind::A => "a",
            ReferenceKind::Tau => "tau",
            ReferenceKind::TArr => "t_arr",
            ReferenceKind::Singleton => "singleton",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl EventKind {
    pub const ALL: [EventKind; 3] = [EventKind::A, EventKind::A1, EventKind::A2];

    pub fn name(self) -> &'static str {
        match self {
            EventKind::A => "A",
            EventKind::A1 => "A1",
            EventKind::A2 => "A2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for LabChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{}",
            self.agent.name(),
            self.reference.name(),
            self.event.name()
        )
    }
}

/// Every `(scenario, choice)` pair [`build_context`] accepts.
pub fn supported() -> Vec<(ScenarioId, LabChoice)> {
    use Agent::*;
    use ReferenceKind::*;
    use ScenarioId::*;
    const A: EventKind = EventKind::A;
    let mut out = vec![];
    let timed = EventKind::ALL;
    for r in [T, X, XT] {
        for e in timed {
            out.push((QsCt, LabChoice::new(Alice, r, e)));
        }
    }
    out.push((QsCt, LabChoice::new(Alice, TArr, A)));
    out.push((QsCt, LabChoice::new(Alice, Singleton, A)));
    for r in [XT, ReferenceKind::A, Tau, Singleton] {
        out.push((QsQt, LabChoice::new(Alice, r, A)));
    }
    for r in [T, X, XT] {
        for e in timed {
            out.push((QsQt, LabChoice::new(Claire, r, e)));
        }
    }
    for r in [ReferenceKind::A, Tau, Singleton] {
        out.push((QsG, LabChoice::new(Alice, r, A)));
    }
    out.push((DoubleSlit, LabChoice::new(Claire, X, A)));
    out.push((DoubleSlit, LabChoice::new(Quinn, X, A)));
    out
}

pub fn is_supported(s: ScenarioId, c: LabChoice) -> bool {
    supported().contains(&(s, c))
}

/// Reference labels used by each model.
pub fn reference_labels(s: ScenarioId, c: LabChoice) -> Vec<&'static str> {
    match (s, c.reference) {
        (ScenarioId::DoubleSlit, _) => SLIT_LABELS.to_vec(),
        (_, ReferenceKind::T) => vec!["t1", "t2"],
        (_, ReferenceKind::X) => vec!["x_A", "x_B"],
        (ScenarioId::QsQt, ReferenceKind::XT) if c.agent == Agent::Alice => {
            vec!["(x,t)_1", "(x,t)_2"]
        }
        (_, ReferenceKind::XT) => vec!["(x_A,t1)", "(x_A,t2)"],
        (_, ReferenceKind::A) => vec!["a1", "a2"],
        (_, ReferenceKind::Tau) => vec!["tau_*", "tau_perp"],
        (_, ReferenceKind::TArr) => vec!["t_arr1", "t_arr2"],
        (_, ReferenceKind::Singleton) => vec!["T_A"],
    }
}

/// Builds the lab, context and event for a supported choice.
pub fn build_context(s: ScenarioId, c: LabChoice, p: &ModelParams) -> Result<Model> {
    if !is_supported(s, c) {
        return Err(Error::Unsupported(format!("{s} with {c}")));
    }
    let labels = reference_labels(s, c);
    let pair = [labels[0], labels.get(1).copied().unwrap_or(labels[0])];
    let window = match c.event {
        EventKind::A => Window::Both,
        EventKind::A1 => Window::First,
        EventKind::A2 => Window::Second,
    };
    match (s, c.agent, c.reference) {
        (ScenarioId::DoubleSlit, agent, _) => {
            let (lab, context, event) = double_slit_model(agent, std::f64::consts::PI)?;
            Ok(Model { lab, context, event })
        }
        (_, _, ReferenceKind::Singleton | ReferenceKind::Tau) => coarse(p, &labels),
        (ScenarioId::QsCt, Agent::Alice, ReferenceKind::TArr)
        | (ScenarioId::QsQt, Agent::Alice, ReferenceKind::XT | ReferenceKind::A)
        | (ScenarioId::QsG, Agent::Alice, ReferenceKind::A) => effective(p, pair),
        (_, _, ReferenceKind::X) => fine_grained(p, pair, false, window),
        (_, _, ReferenceKind::T | ReferenceKind::XT) => fine_grained(p, pair, true, window),
        _ => Err(Error::Unsupported(format!("{s} with {c}"))),
    }
}

/// Verdicts for one choice, with the reference labels they refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct VerdictRow {
    pub scenario: ScenarioId,
    pub choice: LabChoice,
    pub reference_labels: Vec<String>,
    pub measurability: MeasurabilityVerdict,
    pub localisation: LocalisationVerdict,
}

pub fn analyze(s: ScenarioId, c: LabChoice, p: &ModelParams, opts: &CheckOptions) -> Result<VerdictRow> {
    let m = build_context(s, c, p)?;
    analyze_model(s, c, &m, opts)
}

pub fn analyze_model(s: ScenarioId, c: LabChoice, m: &Model, opts: &CheckOptions) -> Result<VerdictRow> {
    Ok(VerdictRow {
        scenario: s,
        choice: c,
        reference_labels: m.lab.reference().labels().to_vec(),
        measurability: check_relative_measurability(&m.lab, &m.context, &m.event, opts)?,
        localisation: check_localisation(&m.lab, &m.context, &m.event, opts)?,
    })
}
