//! The `pack` command line tool.
//!
//! Every subcommand produces a [`report::Report`]: canonical JSON with
//! sorted keys (or CSV rows, one per check) that echoes the configuration it
//! was run with. Exit status is 0 when every check passes, 1 when a check
//! fails or the computation refuses its input, and 2 for usage errors.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

mod commands;
pub mod config;
pub mod demo;
pub mod report;

use commands::{Failure, Outcome};
use report::{Check, Report};

#[derive(Parser, Debug)]
#[command(name = "pack", version, about = "Packing indices of subsets of abelian groups", args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Truncation depth for repeated cyclic and Prufer factors.
    #[arg(long, default_value_t = 4)]
    pub m: u32,
    /// Worker threads.
    #[arg(long, env = "PACK_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat key = value file; command line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Add wall-clock timings to the report.
    #[arg(long)]
    pub timing: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maximum packing family of a set read from a JSON set file.
    Index {
        #[arg(long)]
        set: PathBuf,
        /// Integer radius of the shift window.
        #[arg(long)]
        window: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Build a symmetric set with clique number kappa - 1.
    Bset {
        #[arg(long)]
        group: String,
        #[arg(long)]
        kappa: usize,
        /// Verify properties (1) and (2) exactly.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Greedy construction of a set with sharp packing index kappa.
    Witness {
        #[arg(long)]
        group: String,
        #[arg(long)]
        kappa: usize,
        /// Integer radius of the construction window.
        #[arg(long)]
        window: u64,
        /// Check the invariants and compute the windowed sharp index.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep subsets of a finite exceptional group.
    Obstruct {
        #[arg(long)]
        group: String,
        #[arg(long)]
        kappa: usize,
        /// Check this many seeded random subsets instead of all of them.
        #[arg(long)]
        sample: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Search for a separately injective, intersection preserving pair map.
    Pairmap {
        #[arg(long = "a")]
        a: usize,
        #[arg(long = "b")]
        b: usize,
        /// Give up after this many search nodes.
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the full acceptance matrix.
    Demo {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Index { common, .. }
            | Command::Bset { common, .. }
            | Command::Witness { common, .. }
            | Command::Obstruct { common, .. }
            | Command::Pairmap { common, .. }
            | Command::Demo { common } => common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Index { .. } => "index",
            Command::Bset { .. } => "bset",
            Command::Witness { .. } => "witness",
            Command::Obstruct { .. } => "obstruct",
            Command::Pairmap { .. } => "pairmap",
            Command::Demo { .. } => "demo",
        }
    }

    /// Everything that determines the report's content.
    fn echo(&self) -> Map<String, Value> {
        let c = self.common();
        let mut m = match self {
            Command::Index { set, window, .. } => json!({"set": set.display().to_string(), "window": window}),
            Command::Bset { group, kappa, check, .. } => json!({"group": group, "kappa": kappa, "check": check}),
            Command::Witness { group, kappa, window, verify, .. } => {
                json!({"group": group, "kappa": kappa, "window": window, "verify": verify})
            }
            Command::Obstruct { group, kappa, sample, .. } => json!({"group": group, "kappa": kappa, "sample": sample}),
            Command::Pairmap { a, b, budget, .. } => json!({"a": a, "b": b, "budget": budget}),
            Command::Demo { .. } => json!({}),
        };
        m["m"] = json!(c.m);
        m["seed"] = json!(c.seed);
        m["format"] = json!(match c.format {
            Format::Json => "json",
            Format::Csv => "csv",
        });
        match m {
            Value::Object(map) => map,
            _ => unreachable!("object literal"),
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exit {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn usage(message: String) -> Exit {
    Exit { code: 2, stdout: String::new(), stderr: format!("{message}\n\n{}\n", packing::dsl::grammar_help()) }
}

fn execute(cmd: &Command) -> Result<Outcome, Failure> {
    let m = cmd.common().m;
    match cmd {
        Command::Index { set, window, .. } => commands::index(set, *window, m),
        Command::Bset { group, kappa, check, .. } => commands::bset(group, *kappa, *check),
        Command::Witness { group, kappa, window, verify, .. } => commands::witness(group, *kappa, *window, m, *verify),
        Command::Obstruct { group, kappa, sample, common } => commands::obstruct(group, *kappa, *sample, common.seed),
        Command::Pairmap { a, b, budget, .. } => commands::pairmap(*a, *b, *budget),
        Command::Demo { .. } => Ok(demo::outcome(&demo::run_all())),
    }
}

/// Parses `argv` (including the program name), runs the command and renders
/// its report. Reports go to `--out` when given, else to `stdout`.
pub fn run<I, T>(argv: I) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let argv = match config::expand(argv) {
        Ok(a) => a,
        Err(e) => return usage(e),
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                return Exit { code, stdout: e.to_string(), stderr: String::new() };
            }
            return usage(e.to_string());
        }
    };
    let cmd = &cli.command;
    let common = cmd.common();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(common.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => return usage(format!("thread pool: {e}")),
    };

    let start = Instant::now();
    let outcome = pool.install(|| execute(cmd));
    let elapsed = start.elapsed().as_secs_f64();
    let mut extra = Map::new();
    let (results, checks) = match outcome {
        Ok(o) => {
            extra = o.timing;
            (o.results, o.checks)
        }
        Err(Failure::Usage(msg)) => return usage(msg),
        Err(Failure::Domain(e)) => {
            (json!({"error": {"kind": e.kind(), "message": e.to_string()}}), vec![Check::new("completed", false, e.to_string())])
        }
    };
    let timing = common.timing.then(|| {
        let mut t = extra;
        t.insert("seconds".into(), json!(elapsed));
        t
    });
    let report = Report { command: cmd.name().into(), config: cmd.echo(), results, checks, timing };
    let code = if report.passed() { 0 } else { 1 };
    let text = match common.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match &common.out {
        Some(path) => match fs::write(path, &text) {
            Ok(()) => Exit { code, stdout: String::new(), stderr: String::new() },
            Err(e) => Exit { code: 2, stdout: String::new(), stderr: format!("cannot write {}: {e}\n", path.display()) },
        },
        None => Exit { code, stdout: text, stderr: String::new() },
    }
}
