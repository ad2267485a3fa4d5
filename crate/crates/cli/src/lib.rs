//! The `capakb` command line: check, materialize, query, export and an
//! interactive session over one knowledge base.
//!
//! Everything is driven through [`run`], which takes the argument list and
//! the three standard streams explicitly so tests can run it in-process.

mod commands;
mod error;
mod output;
mod repl;
mod session;

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use capakb::reasoner::DEFAULT_ITERATION_CAP;
use clap::{Args, Parser, Subcommand};

pub use error::{exit, CliError};
pub use output::{Format, Printer};
pub use repl::Repl;
pub use session::{load_sources, Session, SessionConfig};

#[derive(Debug, Parser)]
#[command(name = "capakb", version, about = "Infer robot capabilities from their components")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Rule file; repeatable. Positional paths ending in `.rules` count too.
    #[arg(long = "rules", value_name = "PATH", global = true)]
    pub rules: Vec<PathBuf>,
    /// Root of the capability hierarchy (prefixed name or IRI).
    #[arg(long, value_name = "IRI", global = true, default_value = "http://ex.org/Capability")]
    pub capability_root: String,
    /// Give up after this many reasoning rounds.
    #[arg(long, value_name = "N", global = true, default_value_t = DEFAULT_ITERATION_CAP)]
    pub iteration_cap: usize,
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// File of `@prefix` declarations visible to every input and command.
    #[arg(long, value_name = "PATH", global = true, env = "CAPAKB_PREFIX_MAP")]
    pub prefix_map: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate only.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Materialize and print statistics.
    Materialize {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Write the closure as Turtle, derived triples marked `# derived`.
        #[arg(long, value_name = "PATH")]
        emit: Option<PathBuf>,
    },
    /// Materialize, then answer one question.
    #[command(subcommand_precedence_over_arg = true)]
    Query {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(subcommand)]
        query: Query,
    },
    /// Interactive session: assert, retract, query, explain, save.
    Repl {
        paths: Vec<PathBuf>,
        /// Make `save` include derived triples.
        #[arg(long)]
        with_derived: bool,
    },
    /// Export the instance/class graph as Graphviz DOT.
    Dot {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Only draw the neighbourhood of this term.
        #[arg(long, value_name = "TERM")]
        focus: Option<String>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Leave derived edges out.
        #[arg(long)]
        asserted_only: bool,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum Query {
    /// Capability classes of an agent's capability individual.
    Capabilities {
        agent: String,
        /// Include every class under the root, not only the defined ones.
        #[arg(long)]
        all: bool,
    },
    /// Every instance of a class.
    Instances { class: String },
    /// `(property, object)` pairs of an agent over affordance properties.
    Affordances {
        agent: String,
        /// Affordance property; repeatable. Defaults to the head properties
        /// of the loaded rules.
        #[arg(long = "property", value_name = "TERM")]
        properties: Vec<String>,
    },
    /// Exit 0 if the fact holds, 4 if not.
    Ask { s: String, p: String, o: String },
}

impl GlobalArgs {
    fn session_config(&self, paths: &[PathBuf]) -> SessionConfig {
        SessionConfig {
            ontology_paths: Vec::new(),
            rules_paths: self.rules.clone(),
            capability_root: self.capability_root.clone(),
            iteration_cap: self.iteration_cap,
            output_format: self.format,
            prefix_map: self.prefix_map.clone(),
        }
        .with_paths(paths)
    }
}

/// Runs one invocation and returns its exit code. `interactive` turns on
/// the REPL prompt.
pub fn run<I, T>(
    args: I,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
    interactive: bool,
) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                exit::ERROR
            } else {
                let _ = write!(out, "{text}");
                exit::OK
            };
        }
    };
    let format = cli.global.format;
    match commands::dispatch(&cli, input, out, err, interactive) {
        Ok(code) => code,
        Err(e) => {
            let printer = Printer::new(format, Default::default());
            let _ = printer.error(err, &e.to_string());
            e.exit_code()
        }
    }
}
