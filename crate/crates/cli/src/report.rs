//! Report structures. Each one serialises to JSON as is and has a markdown
//! rendering; both carry the run configuration and the witnessed distances.

use std::fmt::Write;

use lablocus_core::atlas::{render_localisation, DescriptionEvidence, Distribution, VerdictRow};
use lablocus_core::lab::{LocalisationVerdict, MeasurabilityVerdict};
use serde::Serialize;

use crate::config::{ConfigEcho, Format};

pub fn render<T: Serialize>(format: Format, report: &T, markdown: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports always serialise");
            s.push('\n');
            s
        }
        Format::Markdown => markdown(report),
    }
}

/// Escapes pipes inside a markdown table cell.
pub fn md(s: &str) -> String {
    s.replace('|', "\\|")
}

pub fn dist(x: f64) -> String {
    format!("{x:.3e}")
}

fn config_line(c: &ConfigEcho) -> String {
    format!(
        "tolerance {:e}, seed {}, d {}, mode {}\n\n",
        c.tolerance, c.seed, c.d, c.mode
    )
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Comparison {
    pub label: String,
    pub distance: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Verdicts {
    pub measurability: &'static str,
    pub measurability_distance: f64,
    pub localisation: String,
    pub localisation_distances: Vec<Comparison>,
}

impl Verdicts {
    pub fn new(m: &MeasurabilityVerdict, l: &LocalisationVerdict, reference_size: usize) -> Self {
        Self {
            measurability: if m.measurable { "Yes" } else { "No" },
            measurability_distance: m.distance,
            localisation: render_localisation(l, reference_size),
            localisation_distances: l
                .comparisons
                .iter()
                .map(|c| Comparison {
                    label: c.label.clone(),
                    distance: c.distance,
                    weight: c.weight,
                })
                .collect(),
        }
    }

    pub fn from_row(r: &VerdictRow) -> Self {
        Self::new(&r.measurability, &r.localisation, r.reference_labels.len())
    }

    fn localisation_distances(&self) -> String {
        self.localisation_distances
            .iter()
            .map(|c| format!("{}: {}", c.label, dist(c.distance)))
            .collect::<Vec<_>>()
            .join(", ")
    }

    fn markdown(&self, out: &mut String) {
        let _ = writeln!(out, "| Verdict | Value | Witnessed distance |");
        let _ = writeln!(out, "|---|---|---|");
        let _ = writeln!(
            out,
            "| Relative measurability | {} | {} |",
            self.measurability,
            dist(self.measurability_distance)
        );
        let _ = writeln!(
            out,
            "| Localisation | {} | {} |",
            self.localisation,
            self.localisation_distances()
        );
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Member {
    pub scenario: String,
    pub agent: String,
    pub reference: String,
    pub event: String,
    pub reference_labels: Vec<String>,
    pub verdicts: Verdicts,
}

impl From<&VerdictRow> for Member {
    fn from(r: &VerdictRow) -> Self {
        Self {
            scenario: r.scenario.name().into(),
            agent: r.choice.agent.name().into(),
            reference: r.choice.reference.name().into(),
            event: r.choice.event.name().into(),
            reference_labels: r.reference_labels.clone(),
            verdicts: Verdicts::from_row(r),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MainRowReport {
    pub row: usize,
    pub protocols: String,
    pub reference: String,
    pub event: String,
    pub measurability: String,
    pub localisation: String,
    pub expected_measurability: String,
    pub expected_localisation: String,
    pub matches: bool,
    pub members: Vec<Member>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TableReport<R> {
    pub command: &'static str,
    pub which: &'static str,
    pub config: ConfigEcho,
    pub rows: Vec<R>,
    pub matches: bool,
    pub diff: Vec<String>,
}

fn diff_markdown(diff: &[String], out: &mut String) {
    if diff.is_empty() {
        out.push_str("\nAll verdicts match the expected labels.\n");
    } else {
        out.push_str("\nMismatches:\n\n");
        for d in diff {
            let _ = writeln!(out, "- {d}");
        }
    }
}

pub fn main_table_markdown(r: &TableReport<MainRowReport>) -> String {
    let mut out = config_line(&r.config);
    out.push_str(
        "| Protocols | P_A of the Lab | O_A (relative event) | Rel. measurability of R_A | Localisation of O_A |\n",
    );
    out.push_str("|---|---|---|---|---|\n");
    for row in &r.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} |",
            md(&row.protocols),
            md(&row.reference),
            md(&row.event),
            row.measurability,
            md(&row.localisation)
        );
    }
    out.push_str("\n| Row | Scenario | Lab | Measurability distance | Localisation distances |\n");
    out.push_str("|---|---|---|---|---|\n");
    for row in &r.rows {
        for m in &row.members {
            let _ = writeln!(
                out,
                "| {} | {} | {}/{}/{} | {} | {} |",
                row.row,
                m.scenario,
                m.agent,
                m.reference,
                m.event,
                dist(m.verdicts.measurability_distance),
                m.verdicts.localisation_distances()
            );
        }
    }
    diff_markdown(&r.diff, &mut out);
    out
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Evidence {
    pub relevant_labels: usize,
    pub vacuum_target: bool,
    pub reference_purity: f64,
    pub measurability: &'static str,
    pub measurability_distance: f64,
    pub operations_differ: bool,
}

impl From<&DescriptionEvidence> for Evidence {
    fn from(e: &DescriptionEvidence) -> Self {
        Self {
            relevant_labels: e.relevant_labels,
            vacuum_target: e.vacuum_target,
            reference_purity: e.reference_purity,
            measurability: if e.measurability.measurable { "Yes" } else { "No" },
            measurability_distance: e.measurability.distance,
            operations_differ: e.operations_differ,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AppendixRowReport {
    pub scenario: String,
    pub agent: String,
    pub reference: String,
    pub lab: String,
    pub class: String,
    pub expected_class: String,
    pub matches: bool,
    pub evidence: Option<Evidence>,
}

const DESCRIPTIONS: [(&str, &str, &str, &str); 4] = [
    ("Fine", "Yes", "Yes", "Yes"),
    ("Effective", "Yes", "No", "No"),
    ("Coarse", "No", "No", "Yes"),
    ("Unresolved", "", "", ""),
];

pub fn appendix_markdown(r: &TableReport<AppendixRowReport>) -> String {
    let mut out = config_line(&r.config);
    out.push_str(
        "| Theoretical descriptions | Non-trivial reference? | Agent acts on vacuum? | Rel. measurability? | QS_CT | QS_QT | QS_G |\n",
    );
    out.push_str("|---|---|---|---|---|---|---|\n");
    for (class, nontrivial, vacuum, measurable) in DESCRIPTIONS {
        let cells: Vec<String> = ["qs_ct", "qs_qt", "qs_g"]
            .iter()
            .map(|s| {
                r.rows
                    .iter()
                    .filter(|e| e.scenario == *s && e.class == class)
                    .map(|e| e.lab.as_str())
                    .collect::<Vec<_>>()
                    .join("; ")
            })
            .collect();
        let _ = writeln!(
            out,
            "| {class} | {nontrivial} | {vacuum} | {measurable} | {} |",
            cells.join(" | ")
        );
    }
    out.push_str("\n| Scenario | Lab | Class | Relevant values | Vacuum | Reference purity | Measurable | Distance | Operations differ |\n");
    out.push_str("|---|---|---|---|---|---|---|---|---|\n");
    for e in &r.rows {
        let lab = format!("{}/{}", e.agent, e.reference);
        match &e.evidence {
            Some(ev) => {
                let _ = writeln!(
                    out,
                    "| {} | {lab} | {} | {} | {} | {:.6} | {} | {} | {} |",
                    e.scenario,
                    e.class,
                    ev.relevant_labels,
                    ev.vacuum_target,
                    ev.reference_purity,
                    ev.measurability,
                    dist(ev.measurability_distance),
                    ev.operations_differ
                );
            }
            None => {
                let _ = writeln!(out, "| {} | {lab} | {} | | | | | | |", e.scenario, e.class);
            }
        }
    }
    diff_markdown(&r.diff, &mut out);
    out
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Interference {
    pub baseline: Distribution,
    pub with_phase: Distribution,
    pub reference_measured: Distribution,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScenarioReport {
    pub command: &'static str,
    pub config: ConfigEcho,
    #[serde(flatten)]
    pub member: Member,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interference: Option<Interference>,
}

pub fn scenario_markdown(r: &ScenarioReport) -> String {
    let m = &r.member;
    let mut out = format!(
        "{} with {}/{}/{}, reference values {}\n\n",
        m.scenario,
        m.agent,
        m.reference,
        m.event,
        m.reference_labels.join(", ")
    );
    out.push_str(&config_line(&r.config));
    m.verdicts.markdown(&mut out);
    if let Some(i) = &r.interference {
        out.push_str("\n| Detector statistics | p(0) | p(1) |\n|---|---|---|\n");
        for (name, p) in [
            ("no phase", i.baseline),
            ("phase pi", i.with_phase),
            ("phase pi, reference measured", i.reference_measured),
        ] {
            let _ = writeln!(out, "| {name} | {:.6} | {:.6} |", p[0], p[1]);
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckReport {
    pub command: &'static str,
    pub config: ConfigEcho,
    pub file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub reference_labels: Vec<String>,
    pub verdicts: Verdicts,
}

pub fn check_markdown(r: &CheckReport) -> String {
    let mut out = format!(
        "{}{}, reference values {}\n\n",
        r.file,
        r.name.as_ref().map(|n| format!(" ({n})")).unwrap_or_default(),
        r.reference_labels.join(", ")
    );
    out.push_str(&config_line(&r.config));
    r.verdicts.markdown(&mut out);
    out
}
