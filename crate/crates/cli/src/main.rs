//! `sharecheck`: analyse, run, or soundness-check a core program.

use std::fmt::Write as _;
use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use sharing::oracle::{self, parse_literals, Outcome, DEFAULT_STEP_LIMIT};
use sharing::report::Report;
use sharing::{analyze_function, AnalysisOptions, Domain, DomainMode, Program, Result};

#[derive(Parser, Debug)]
#[command(name = "sharecheck", version, about = "Sharing analysis for a core language with destructive update")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyse every function and report diagnostics.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Print the alias set at every program point.
        #[arg(long)]
        dump_points: bool,
    },
    /// Execute a function and print the variables at each point.
    Run {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        call: Call,
    },
    /// Execute a function and compare each reached state with the analysis.
    CheckSoundness {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        call: Call,
    },
}

#[derive(clap::Args, Debug)]
struct Common {
    #[arg(long, default_value = "new")]
    mode: DomainMode,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Treat saturated calls as calls only, without closure sharing.
    #[arg(long)]
    precise_app: bool,
}

#[derive(clap::Args, Debug)]
struct Call {
    #[arg(long)]
    entry: String,
    /// Comma separated argument literals, e.g. "Cons 2 (Cons 1 Nil), Ref TNil".
    #[arg(long, default_value = "")]
    args: String,
    #[arg(long, default_value_t = DEFAULT_STEP_LIMIT)]
    step_limit: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl Common {
    fn options(&self) -> AnalysisOptions {
        AnalysisOptions { mode: self.mode, precise_app: self.precise_app }
    }
}

fn load(path: &PathBuf) -> Result<Program> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| sharing::Error::Run(format!("cannot read {}: {e}", path.display())))?;
    sharing::load(&text)
}

fn analyze_parallel(prog: &Program, opts: AnalysisOptions) -> Result<(Domain, Report)> {
    let dom = Domain::new(prog, opts.mode);
    let results = prog.funcs.par_iter().map(|f| analyze_function(prog, f, &dom, opts)).collect::<Result<Vec<_>>>()?;
    Ok((dom, Report::new(prog, opts.mode, results)))
}

/// Runs a subcommand, returning its output and whether it succeeded.
fn execute(cmd: Command) -> Result<(String, bool)> {
    let mut out = String::new();
    match cmd {
        Command::Analyze { input, common, dump_points } => {
            let prog = load(&input)?;
            let (_, report) = analyze_parallel(&prog, common.options())?;
            match common.format {
                Format::Text => out.push_str(&report.to_text(dump_points)),
                Format::Json => out.push_str(&(report.to_json(dump_points) + "\n")),
            }
            Ok((out, report.is_clean()))
        }
        Command::Run { input, common, call } => {
            let prog = load(&input)?;
            let args = parse_literals(&call.args)?;
            let t = oracle::trace(&prog, &call.entry, &args, call.step_limit)?;
            match common.format {
                Format::Json => out.push_str(&(t.to_json() + "\n")),
                Format::Text => {
                    for e in &t.points {
                        let env: Vec<String> = e.env.iter().map(|(k, v)| format!("{k}={v}")).collect();
                        let _ = writeln!(out, "{}{}:{} {}", "  ".repeat(e.depth), e.func, e.point, env.join(" "));
                    }
                    let _ = writeln!(out, "outcome: {}", describe(&t.outcome));
                }
            }
            Ok((out, t.outcome.is_complete()))
        }
        Command::CheckSoundness { input, common, call } => {
            let prog = load(&input)?;
            let args = parse_literals(&call.args)?;
            let (dom, report) = analyze_parallel(&prog, common.options())?;
            let r = oracle::check_run(&prog, &dom, &report.results, &call.entry, &args, call.step_limit)?;
            match common.format {
                Format::Json => out.push_str(&(r.to_json() + "\n")),
                Format::Text => {
                    let _ = writeln!(out, "entry {} ({} mode): {}", r.entry, common.mode, describe(&r.outcome));
                    let _ = writeln!(out, "points checked: {}, skipped: {}", r.points_checked, r.points_skipped);
                    let _ = writeln!(out, "violations: {}", r.violations.len());
                    for v in &r.violations {
                        let _ = writeln!(out, "  {}:{} {{{}, {}}}", v.func, v.point, v.pair[0], v.pair[1]);
                    }
                }
            }
            Ok((out, r.is_sound()))
        }
    }
}

fn describe(o: &Outcome) -> String {
    match o {
        Outcome::Returned { value } => format!("returned {value}"),
        Outcome::Error { func, point } => format!("error at {func}:{point}"),
        Outcome::StepLimit { steps } => format!("step limit reached after {steps} steps"),
        Outcome::Fault { msg } => format!("fault: {msg}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok((out, ok)) => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != ErrorKind::BrokenPipe => {
                    eprintln!("sharecheck: {e}");
                    ExitCode::from(2)
                }
                _ if ok => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("sharecheck: {e}");
            ExitCode::from(2)
        }
    }
}
