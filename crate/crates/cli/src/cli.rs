use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{parse_dimension, parse_tolerance, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "lablocus",
    version,
    about = "Relative measurability and localisation verdicts for switch labs"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Trace-distance threshold for every verdict, in (0, 1e-3].
    #[arg(long, global = true, env = "LABLOCUS_TOLERANCE", default_value = "1e-9", value_parser = parse_tolerance)]
    pub tolerance: f64,
    /// Target dimension of the switch models.
    #[arg(long, global = true, env = "LABLOCUS_D", default_value = "2", value_parser = parse_dimension)]
    pub d: usize,
    #[arg(long, global = true, env = "LABLOCUS_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, env = "LABLOCUS_FORMAT", value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
    /// Compare right after the event instead of after the continuation.
    #[arg(long, global = true, env = "LABLOCUS_STRICT_LOCAL")]
    pub strict_local: bool,
}

impl GlobalArgs {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            tolerance: self.tolerance,
            d: self.d,
            seed: self.seed,
            format: self.format,
            strict_local: self.strict_local,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Main,
    Appendix,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute a verdict table and compare it with the expected labels.
    Table {
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Verdicts for one built-in scenario and lab choice.
    Scenario {
        /// qs_ct, qs_qt, qs_g or double-slit.
        #[arg(long)]
        name: String,
        #[arg(long, default_value = "alice")]
        agent: String,
        /// Defaults to `x` for the double slit and `t` otherwise.
        #[arg(long)]
        reference: Option<String>,
        #[arg(long, default_value = "A")]
        event: String,
        /// Also write the model as a scenario file.
        #[arg(long, value_name = "PATH")]
        emit_file: Option<PathBuf>,
    },
    /// Verdicts for a lab, context and event read from a scenario file.
    Check { file: PathBuf },
    /// Run the acceptance suite.
    Verify,
}
