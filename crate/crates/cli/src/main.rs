//! `arcat`: reports on commutation classes, Q-data, their categories and
//! quantum Cartan matrices.

mod input;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};

use arcat::check::Scope;

const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(version, about, long_about = None)]
#[command(group(ArgGroup::new("format").args(["json", "dot", "tsv"])))]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Emit Graphviz DOT (quiver-valued commands only).
    #[arg(long, global = true)]
    dot: bool,

    /// Emit tab-separated values (table-valued commands only).
    #[arg(long, global = true)]
    tsv: bool,

    /// Write the output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// A commutation class or a Q-datum; exactly one is required.
#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Reduced word for the longest element, comma separated; needs --diagram.
    #[arg(long, requires = "diagram")]
    word: Option<String>,

    /// A Q-datum file, or a diagram such as `B3` or `D4^3'` for its standard datum.
    #[arg(long, value_name = "FILE|TYPE")]
    qdatum: Option<String>,
}

#[derive(Args, Clone)]
pub struct SourceArgs {
    #[command(flatten)]
    source: Source,

    /// Diagram for --word, e.g. `A3` or `D4`.
    #[arg(long)]
    diagram: Option<String>,
}

#[derive(Args, Clone, Copy)]
pub struct Window {
    /// First index of the window.
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<i64>,

    /// Last index of the window.
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form, roots, injectives, projectives and AR quiver of a class.
    Class {
        diagram: String,
        /// Comma separated reduced word.
        word: String,
    },
    /// Validate a Q-datum and report Γ_Q, its class and τ_Q.
    Qdatum {
        /// A Q-datum file, or a diagram such as `B3` or `D4^3'`.
        input: String,
    },
    /// Indecomposable objects with coordinates and modules.
    Objects {
        #[command(flatten)]
        src: SourceArgs,
        #[command(flatten)]
        window: Window,
    },
    /// The Euler form on a window of indecomposables.
    Euler {
        #[command(flatten)]
        src: SourceArgs,
        #[command(flatten)]
        window: Window,
    },
    /// Mesh additivity and mesh triangles over a window.
    Mesh {
        #[command(flatten)]
        src: SourceArgs,
        #[command(flatten)]
        window: Window,
    },
    /// The basis friezes ρ_v∘π and their checks.
    Frieze {
        #[command(flatten)]
        src: SourceArgs,
        #[command(flatten)]
        window: Window,
    },
    /// Three-way table of inverse quantum Cartan matrix entries.
    Qcm {
        /// Folded type such as `B3`, or a diagram such as `D4^3'`.
        ty: String,
        /// Truncation; defaults to 2rh^∨ + 10.
        #[arg(long = "U", value_name = "INT")]
        u: Option<i64>,
    },
    /// Run the seeded invariant suites.
    Check {
        /// all, rootsys, commclass, qdatum, preproj, cats or qcm.
        #[arg(default_value = "all")]
        scope: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// Output format chosen by the global flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Dot,
    Tsv,
}

/// Rendered output and whether every check it contains passed.
pub struct Output {
    pub body: String,
    pub ok: bool,
}

impl Output {
    pub fn ok(body: String) -> Self {
        Output { body, ok: true }
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let fmt = match (cli.json, cli.dot, cli.tsv) {
        (true, _, _) => Format::Json,
        (_, true, _) => Format::Dot,
        (_, _, true) => Format::Tsv,
        _ => Format::Text,
    };
    match &cli.command {
        Command::Class { diagram, word } => report::class(&input::class(diagram, word)?, fmt),
        Command::Qdatum { input } => report::qdatum(&input::qdatum(input)?, fmt),
        Command::Objects { src, window } => report::objects(&input::source(src)?, *window, fmt),
        Command::Euler { src, window } => report::euler(&input::source(src)?, *window, fmt),
        Command::Mesh { src, window } => report::mesh(&input::source(src)?, *window, fmt),
        Command::Frieze { src, window } => report::frieze(&input::source(src)?, *window, fmt),
        Command::Qcm { ty, u } => report::qcm(&input::qdatum_for_type(ty)?, *u, fmt),
        Command::Check { scope, seed } => report::check(scope.parse::<Scope>()?, *seed, fmt),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => {
            fs::write(path, &out.body).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{}", out.body);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
