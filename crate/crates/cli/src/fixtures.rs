//! Expected labels for the two verdict tables.

use lablocus_core::atlas::{Agent, AssumptionClass, ReferenceKind, ScenarioId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MainExpectation {
    pub protocols: &'static str,
    pub reference: &'static str,
    pub event: &'static str,
    pub measurability: &'static str,
    pub localisation: &'static str,
}

const fn row(
    protocols: &'static str,
    reference: &'static str,
    event: &'static str,
    measurability: &'static str,
    localisation: &'static str,
) -> MainExpectation {
    MainExpectation {
        protocols,
        reference,
        event,
        measurability,
        localisation,
    }
}

pub const MAIN: [MainExpectation; 7] = [
    row("QS_CT", "{t}", "A", "Yes", "non-localised"),
    row("QS_CT", "{t}", "A1, A2", "Yes", "t1/t2-localised"),
    row("QS_CT", "{x}", "A, A1, A2", "Yes", "x_A-localised"),
    row("QS_QT", "{(x,t)}", "A", "No", "non-localised"),
    row("QS_QT, QS_G", "{a}", "A", "No", "non-localised"),
    row("QS_QT, QS_G", "{tau}", "A", "Yes", "tau_*-localised"),
    row("All QS", "|P_A|=1", "A", "Yes", "localised"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AppendixExpectation {
    pub scenario: ScenarioId,
    pub agent: Agent,
    pub reference: ReferenceKind,
    pub class: AssumptionClass,
}

const fn cell(
    scenario: ScenarioId,
    agent: Agent,
    reference: ReferenceKind,
    class: AssumptionClass,
) -> AppendixExpectation {
    AppendixExpectation {
        scenario,
        agent,
        reference,
        class,
    }
}

pub const APPENDIX: [AppendixExpectation; 10] = {
    use Agent::*;
    use AssumptionClass::*;
    use ReferenceKind as R;
    use ScenarioId::*;
    [
        cell(QsCt, Alice, R::XT, Fine),
        cell(QsQt, Claire, R::XT, Fine),
        cell(QsG, Claire, R::XT, Unresolved),
        cell(QsCt, Alice, R::TArr, Effective),
        cell(QsQt, Alice, R::XT, Effective),
        cell(QsQt, Alice, R::A, Effective),
        cell(QsG, Alice, R::A, Effective),
        cell(QsCt, Alice, R::Singleton, Coarse),
        cell(QsQt, Alice, R::Tau, Coarse),
        cell(QsG, Alice, R::Tau, Coarse),
    ]
};
