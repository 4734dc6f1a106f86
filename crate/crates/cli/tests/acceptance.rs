//! Criteria 1 to 9, one line each.

use std::io::Write;

use lablocus_cli::verify::{self, CriterionReport};
use lablocus_cli::RunConfig;

/// Written to the stdout handle directly so the lines survive output capture.
fn say(line: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
}

fn report(lines: &[CriterionReport]) {
    for c in lines {
        say(&c.summary());
    }
}

#[test]
fn acceptance_criteria() {
    let r = verify::run(&RunConfig::default());
    report(&r.criteria);
    assert_eq!(r.criteria.len(), 9);
    assert_eq!(
        r.criteria.iter().map(|c| c.id).collect::<Vec<_>>(),
        (1..=9).collect::<Vec<u8>>()
    );
    assert!(r.criteria[8].cases >= 500);
    for c in &r.criteria {
        assert!(c.passed, "{}", c.summary());
    }
    assert!(r.passed && r.within_budget);
}

#[test]
fn chain_criteria_at_larger_dimensions() {
    for d in [3, 4] {
        let r = verify::run(&RunConfig {
            d,
            seed: 7,
            ..Default::default()
        });
        assert!(r.passed, "d={d}");
        for c in r.criteria.iter().filter(|c| [3, 4].contains(&c.id)) {
            say(&format!("d={d} {}", c.summary()));
            assert!(c.passed, "{}", c.summary());
        }
    }
}
