use std::path::Path;

use lablocus_core::atlas::{
    analyze, analyze_model, build_context, double_slit, is_supported, supported, table_appendix, table_main, Agent,
    EventKind, LabChoice, ReferenceKind, ScenarioId,
};
use lablocus_core::lab::{check_localisation, check_relative_measurability};

use crate::cli::{Cli, Command, Which};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::fixtures::{APPENDIX, MAIN};
use crate::report::{
    appendix_markdown, check_markdown, dist, main_table_markdown, render, scenario_markdown, AppendixRowReport,
    CheckReport, Evidence, Interference, MainRowReport, Member, ScenarioReport, TableReport, Verdicts,
};
use crate::schema::{self, ScenarioFile};
use crate::verify;

/// What the binary prints, and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: 0,
        }
    }

    fn error(e: &CliError) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("{e}\n"),
            code: e.exit_code(),
        }
    }
}

pub fn run(cli: &Cli) -> Output {
    let cfg = cli.global.config();
    if let Err(e) = cfg.validate() {
        return Output::error(&e);
    }
    let result = match &cli.command {
        Command::Table { which } => table(*which, &cfg),
        Command::Scenario {
            name,
            agent,
            reference,
            event,
            emit_file,
        } => scenario(name, agent, reference.as_deref(), event, emit_file.as_deref(), &cfg),
        Command::Check { file } => check(file, &cfg),
        Command::Verify => Ok(verify(&cfg)),
    };
    result.unwrap_or_else(|e| Output::error(&e))
}

fn mismatch(stdout: String, diff: &[String]) -> Output {
    let mut stderr = String::from("verdict mismatch:\n");
    for d in diff {
        stderr.push_str(&format!("  {d}\n"));
    }
    Output {
        stdout,
        stderr,
        code: 1,
    }
}

pub fn table(which: Which, cfg: &RunConfig) -> Result<Output, CliError> {
    let p = cfg.model_params();
    let o = cfg.check_options();
    let (text, diff) = match which {
        Which::Main => {
            let report = main_table_report(cfg)?;
            (render(cfg.format, &report, main_table_markdown), report.diff)
        }
        Which::Appendix => {
            let entries = table_appendix(&p, &o).map_err(|e| CliError::from_core("appendix table", e))?;
            let mut diff = vec![];
            let mut rows = vec![];
            for e in &entries {
                let want = APPENDIX.iter().find(|w| {
                    w.scenario == e.scenario && w.agent == e.choice.agent && w.reference == e.choice.reference
                });
                let expected = want.map(|w| w.class.name()).unwrap_or("(none)");
                let matches = want.is_some_and(|w| w.class == e.class);
                if !matches {
                    diff.push(format!(
                        "{} {}: expected `{expected}`, computed `{}`",
                        e.scenario, e.description, e.class
                    ));
                }
                rows.push(AppendixRowReport {
                    scenario: e.scenario.name().into(),
                    agent: e.choice.agent.name().into(),
                    reference: e.choice.reference.name().into(),
                    lab: e.description.clone(),
                    class: e.class.name().into(),
                    expected_class: expected.into(),
                    matches,
                    evidence: e.evidence.as_ref().map(Evidence::from),
                });
            }
            if entries.len() != APPENDIX.len() {
                diff.push(format!(
                    "{} entries computed, {} expected",
                    entries.len(),
                    APPENDIX.len()
                ));
            }
            let report = TableReport {
                command: "table",
                which: "appendix",
                config: cfg.into(),
                rows,
                matches: diff.is_empty(),
                diff,
            };
            (render(cfg.format, &report, appendix_markdown), report.diff)
        }
    };
    Ok(if diff.is_empty() {
        Output::ok(text)
    } else {
        mismatch(text, &diff)
    })
}

pub fn main_table_report(cfg: &RunConfig) -> Result<TableReport<MainRowReport>, CliError> {
    let rows =
        table_main(&cfg.model_params(), &cfg.check_options()).map_err(|e| CliError::from_core("main table", e))?;
    let mut diff = vec![];
    let mut out = vec![];
    for (k, row) in rows.iter().enumerate() {
        let (m, l) = (row.measurability(), row.localisation());
        let (em, el) = MAIN
            .get(k)
            .map(|w| (w.measurability, w.localisation))
            .unwrap_or(("(none)", "(none)"));
        let distance = dist(row.min_measurability_distance());
        if m != em {
            diff.push(format!(
                "row {} measurability: expected `{em}`, computed `{m}` (distance {distance})",
                k + 1
            ));
        }
        if l != el {
            diff.push(format!("row {} localisation: expected `{el}`, computed `{l}`", k + 1));
        }
        out.push(MainRowReport {
            row: k + 1,
            protocols: row.protocols.clone(),
            reference: row.reference.clone(),
            event: row.event.clone(),
            matches: m == em && l == el,
            measurability: m,
            localisation: l,
            expected_measurability: em.into(),
            expected_localisation: el.into(),
            members: row.rows.iter().map(Member::from).collect(),
        });
    }
    if rows.len() != MAIN.len() {
        diff.push(format!("{} rows computed, {} expected", rows.len(), MAIN.len()));
    }
    Ok(TableReport {
        command: "table",
        which: "main",
        config: cfg.into(),
        rows: out,
        matches: diff.is_empty(),
        diff,
    })
}

/// Every accepted `scenario` invocation, one per line.
pub fn supported_matrix() -> String {
    let mut out = String::from("supported combinations:\n");
    for (s, c) in supported() {
        out.push_str(&format!(
            "  --name {} --agent {} --reference {} --event {}\n",
            s.name(),
            c.agent.name(),
            c.reference.name(),
            c.event.name()
        ));
    }
    out
}

fn unsupported(what: String) -> CliError {
    CliError::Usage(format!("{what}\n{}", supported_matrix().trim_end()))
}

pub fn parse_choice(
    name: &str,
    agent: &str,
    reference: Option<&str>,
    event: &str,
) -> Result<(ScenarioId, LabChoice), CliError> {
    let s = ScenarioId::parse(name).ok_or_else(|| unsupported(format!("unknown scenario `{name}`")))?;
    let a = Agent::parse(agent).ok_or_else(|| unsupported(format!("unknown agent `{agent}`")))?;
    let reference = reference.unwrap_or(if s == ScenarioId::DoubleSlit { "x" } else { "t" });
    let r = ReferenceKind::parse(reference).ok_or_else(|| unsupported(format!("unknown reference `{reference}`")))?;
    let e = EventKind::parse(event).ok_or_else(|| unsupported(format!("unknown event `{event}`")))?;
    let c = LabChoice::new(a, r, e);
    if !is_supported(s, c) {
        return Err(unsupported(format!("unsupported combination: {s} with {c}")));
    }
    Ok((s, c))
}

pub fn scenario(
    name: &str,
    agent: &str,
    reference: Option<&str>,
    event: &str,
    emit_file: Option<&Path>,
    cfg: &RunConfig,
) -> Result<Output, CliError> {
    let (s, c) = parse_choice(name, agent, reference, event)?;
    let p = cfg.model_params();
    let o = cfg.check_options();
    let at = format!("scenario {s} with {c}");
    let row = analyze(s, c, &p, &o).map_err(|e| CliError::from_core(&at, e))?;
    let interference = if s == ScenarioId::DoubleSlit {
        let r = double_slit(c.agent, &o).map_err(|e| CliError::from_core(&at, e))?;
        Some(Interference {
            baseline: r.baseline,
            with_phase: r.with_phase,
            reference_measured: r.reference_measured,
        })
    } else {
        None
    };
    if let Some(path) = emit_file {
        let m = build_context(s, c, &p).map_err(|e| CliError::from_core(&at, e))?;
        let file = ScenarioFile::from_model(&m, Some(format!("{s} {c}")));
        std::fs::write(path, schema::to_json(&file))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let report = ScenarioReport {
        command: "scenario",
        config: cfg.into(),
        member: Member::from(&row),
        interference,
    };
    Ok(Output::ok(render(cfg.format, &report, scenario_markdown)))
}

pub fn check(path: &Path, cfg: &RunConfig) -> Result<Output, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let file = schema::parse(&text)?;
    let m = file.build()?;
    let o = cfg.check_options();
    let measurability =
        check_relative_measurability(&m.lab, &m.context, &m.event, &o).map_err(|e| CliError::from_core("event", e))?;
    let localisation =
        check_localisation(&m.lab, &m.context, &m.event, &o).map_err(|e| CliError::from_core("event", e))?;
    let labels = m.lab.reference().labels().to_vec();
    let report = CheckReport {
        command: "check",
        config: cfg.into(),
        file: path.display().to_string(),
        name: file.name.clone(),
        verdicts: Verdicts::new(&measurability, &localisation, labels.len()),
        reference_labels: labels,
    };
    Ok(Output::ok(render(cfg.format, &report, check_markdown)))
}

pub fn verify(cfg: &RunConfig) -> Output {
    let report = verify::run(cfg);
    let text = render(cfg.format, &report, verify::verify_markdown);
    if report.passed {
        Output::ok(text)
    } else {
        let failed: Vec<String> = report
            .criteria
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.summary())
            .collect();
        mismatch(text, &failed)
    }
}

/// Verdicts of a built-in choice after a trip through the file format.
pub fn round_trip(s: ScenarioId, c: LabChoice, cfg: &RunConfig) -> Result<(Verdicts, Verdicts), CliError> {
    let p = cfg.model_params();
    let o = cfg.check_options();
    let m = build_context(s, c, &p).map_err(|e| CliError::from_core("model", e))?;
    let before = analyze_model(s, c, &m, &o).map_err(|e| CliError::from_core("model", e))?;
    let text = schema::to_json(&ScenarioFile::from_model(&m, None));
    let back = schema::parse(&text)?.build()?;
    let after = analyze_model(s, c, &back, &o).map_err(|e| CliError::from_core("event", e))?;
    Ok((Verdicts::from_row(&before), Verdicts::from_row(&after)))
}
