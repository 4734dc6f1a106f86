use lablocus_core::atlas::ModelParams;
use lablocus_core::lab::{CheckMode, CheckOptions, DEFAULT_TOLERANCE};
use serde::Serialize;

use crate::error::CliError;

pub const MAX_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    #[default]
    Markdown,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub tolerance: f64,
    /// Target dimension of the switch models.
    pub d: usize,
    pub seed: u64,
    pub format: Format,
    pub strict_local: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            d: 2,
            seed: 0,
            format: Format::Markdown,
            strict_local: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        check_tolerance(self.tolerance).map_err(CliError::Usage)?;
        check_dimension(self.d).map_err(CliError::Usage)?;
        Ok(())
    }

    pub fn check_options(&self) -> CheckOptions {
        let o = CheckOptions::with_tolerance(self.tolerance);
        if self.strict_local {
            o.strict_local()
        } else {
            o
        }
    }

    pub fn model_params(&self) -> ModelParams {
        ModelParams {
            d: self.d,
            seed: self.seed,
            ..ModelParams::default()
        }
    }

    pub fn mode_name(&self) -> &'static str {
        mode_name(self.check_options().mode)
    }
}

pub fn mode_name(m: CheckMode) -> &'static str {
    match m {
        CheckMode::ContextInclusive => "context-inclusive",
        CheckMode::StrictLocal => "strict-local",
    }
}

pub fn check_tolerance(t: f64) -> Result<(), String> {
    if t > 0.0 && t <= MAX_TOLERANCE {
        Ok(())
    } else {
        Err(format!("tolerance must lie in (0, {MAX_TOLERANCE:e}], got {t:e}"))
    }
}

pub fn check_dimension(d: usize) -> Result<(), String> {
    if (2..=4).contains(&d) {
        Ok(())
    } else {
        Err(format!("d must be 2, 3 or 4, got {d}"))
    }
}

pub fn parse_tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    check_tolerance(t)?;
    Ok(t)
}

pub fn parse_dimension(s: &str) -> Result<usize, String> {
    let d: usize = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a positive integer"))?;
    check_dimension(d)?;
    Ok(d)
}

/// Echoed at the top of every report.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConfigEcho {
    pub tolerance: f64,
    pub seed: u64,
    pub d: usize,
    pub mode: &'static str,
}

impl From<&RunConfig> for ConfigEcho {
    fn from(c: &RunConfig) -> Self {
        Self {
            tolerance: c.tolerance,
            seed: c.seed,
            d: c.d,
            mode: c.mode_name(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_bounds() {
        assert!(parse_tolerance("1e-9").is_ok());
        assert!(parse_tolerance("1e-3").is_ok());
        assert!(parse_tolerance("1e-30").is_ok());
        assert!(parse_tolerance("0").is_err());
        assert!(parse_tolerance("-1e-9").is_err());
        assert!(parse_tolerance("0.01").is_err());
        assert!(parse_tolerance("abc").is_err());
    }

    #[test]
    fn dimension_bounds() {
        assert_eq!(parse_dimension("3"), Ok(3));
        assert!(parse_dimension("1").is_err());
        assert!(parse_dimension("5").is_err());
    }

    #[test]
    fn strict_flag_reaches_options() {
        let c = RunConfig {
            strict_local: true,
            ..Default::default()
        };
        assert_eq!(c.check_options().mode, CheckMode::StrictLocal);
        assert_eq!(c.mode_name(), "strict-local");
    }
}
