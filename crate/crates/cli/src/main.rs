//! `coercion-forge`: check, run, translate and test λS and λSx programs.

use std::fmt;
use std::io::{self, BufWriter, Write};
use std::ops::Range;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use coercion_core::lam_s::step::DEFAULT_FUEL;
use coercion_core::lam_s::{self, run, typecheck_program, Outcome, Program};
use coercion_core::lam_sx::{self, run_x, typecheck_program_x, ProgramX};
use coercion_core::translate::{translate_program, Options};
use coercion_core::types::{CrcType, TypeX};
use coercion_harness::space::{even_odd_trace, space_run};
use coercion_harness::{json_line, run_corpus, simulation_check, Check, CorpusConfig, Fuel, Record, SpaceReport, Summary};
use coercion_surface::{parse_program_s, parse_program_x, print_program_x, print_term_s, print_term_x, trace_line};

#[derive(Parser)]
#[command(name = "coercion-forge", version, about = "Space-efficient coercion calculi: λS, λSx and the translation between them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Typecheck a program and print its type.
    Check(Source),
    /// Evaluate a program.
    Eval {
        #[command(flatten)]
        source: Source,
        /// Step budget; defaults to $COERCION_FORGE_FUEL or 1000000.
        #[arg(long)]
        fuel: Option<u64>,
        /// Print every step as `step <n> <e|c> <rule>: <term>`.
        #[arg(long)]
        trace: bool,
        /// Append a JSON space report line.
        #[arg(long)]
        metrics: bool,
    },
    /// Translate a λS program into λSx.
    Translate {
        #[command(flatten)]
        source: Source,
        /// Drop the identity continuation around operations.
        #[arg(long)]
        opt_trop: bool,
    },
    /// Check that the translation simulates every λS step.
    Simcheck {
        #[command(flatten)]
        source: Source,
        /// Maximum number of λS steps to check.
        #[arg(long)]
        fuel: Option<u64>,
        #[arg(long)]
        opt_trop: bool,
    },
    /// Run a check over generated programs, one JSON line per seed.
    Fuzz {
        /// Seed range `A..B` (B exclusive).
        #[arg(long, value_parser = parse_seeds)]
        seeds: Range<u64>,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = FuzzCheck::Differential)]
        check: FuzzCheck,
        /// λS step budget; λSx gets ten times as much.
        #[arg(long)]
        fuel: Option<u64>,
    },
    /// Run a benchmark program.
    Bench {
        #[arg(value_enum)]
        program: BenchProgram,
        n: u64,
        #[arg(long, value_enum, default_value_t = DialectArg::Lams)]
        dialect: DialectArg,
        /// Print only the space report.
        #[arg(long)]
        quiet: bool,
    },
}

#[derive(Args)]
struct Source {
    /// Program file; `.lams` is λS and `.lamsx` is λSx.
    file: Option<PathBuf>,
    /// Inline program text instead of a file.
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    expr: Option<String>,
    /// Dialect, overriding the file extension.
    #[arg(long, value_enum)]
    dialect: Option<DialectArg>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DialectArg {
    Lams,
    Lamsx,
}

#[derive(Clone, Copy, ValueEnum)]
enum FuzzCheck {
    Differential,
    Simulation,
    Invariants,
    Typing,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchProgram {
    Evenodd,
}

fn parse_seeds(s: &str) -> Result<Range<u64>, String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..b)
}

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Blame = 1,
    Input = 2,
    Violation = 3,
    Fuel = 4,
}

/// An error carrying the exit status it maps to.
#[derive(Debug)]
struct Failure {
    status: Status,
    error: anyhow::Error,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

fn input(error: anyhow::Error) -> Failure {
    Failure { status: Status::Input, error }
}

fn violation(error: anyhow::Error) -> Failure {
    Failure { status: Status::Violation, error }
}

type CliResult = Result<Status, Failure>;

enum Loaded {
    S(Program),
    X(ProgramX),
}

fn load(src: &Source) -> Result<Loaded, Failure> {
    let (text, name, dialect) = match (&src.file, &src.expr) {
        (_, Some(e)) => (e.clone(), "<expr>".to_string(), src.dialect.unwrap_or(DialectArg::Lams)),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(input)?;
            let dialect = match (src.dialect, coercion_surface::Dialect::from_path(path)) {
                (Some(d), _) => d,
                (None, Some(coercion_surface::Dialect::LamS)) => DialectArg::Lams,
                (None, Some(coercion_surface::Dialect::LamSx)) => DialectArg::Lamsx,
                (None, None) => {
                    return Err(input(anyhow!("{}: unknown extension; use .lams, .lamsx or --dialect", path.display())))
                }
            };
            (text, path.display().to_string(), dialect)
        }
        (None, None) => return Err(input(anyhow!("give a program file or -e EXPR"))),
    };
    let parsed = match dialect {
        DialectArg::Lams => parse_program_s(&text).map(Loaded::S),
        DialectArg::Lamsx => parse_program_x(&text).map(Loaded::X),
    };
    parsed.map_err(|e| input(anyhow!("{name}:{e}")))
}

fn load_s(src: &Source) -> Result<Program, Failure> {
    match load(src)? {
        Loaded::S(p) => Ok(p),
        Loaded::X(_) => Err(input(anyhow!("this command takes a λS (.lams) program"))),
    }
}

fn default_fuel() -> Result<u64, Failure> {
    match std::env::var("COERCION_FORGE_FUEL") {
        Ok(v) => v.trim().parse().map_err(|e| input(anyhow!("COERCION_FORGE_FUEL={v}: {e}"))),
        Err(_) => Ok(DEFAULT_FUEL),
    }
}

fn type_x(p: &ProgramX) -> Result<String, Failure> {
    let shape = typecheck_program_x(p).map_err(|e| input(e.into()))?;
    Ok(match TypeX::from_shape(&shape.fill()) {
        Some(t) => t.to_string(),
        None => shape.render(TypeX::ARROW),
    })
}

fn check(src: &Source, out: &mut impl Write) -> CliResult {
    let ty = match load(src)? {
        Loaded::S(p) => typecheck_program(&p).map_err(|e| input(e.into()))?.to_string(),
        Loaded::X(p) => type_x(&p)?,
    };
    writeln!(out, "{ty}").map_err(|e| input(e.into()))?;
    Ok(Status::Ok)
}

/// Largest sizes seen along a run.
#[derive(Default)]
struct Maxima {
    steps: u64,
    coercion: usize,
    term: usize,
    metric: usize,
}

impl Maxima {
    fn see(&mut self, coercion: usize, term: usize, metric: usize) {
        self.coercion = self.coercion.max(coercion);
        self.term = self.term.max(term);
        self.metric = self.metric.max(metric);
    }

    fn report(&self, dialect: coercion_harness::Dialect) -> SpaceReport {
        SpaceReport {
            dialect,
            n: 0,
            steps: self.steps,
            max_coercion_size: self.coercion,
            max_term_size: self.term,
            max_metric_f: self.metric,
        }
    }
}

fn finish<T>(out: &mut impl Write, outcome: &Outcome<T>, show: impl Fn(&T) -> String) -> CliResult {
    let (line, status) = match outcome {
        Outcome::Result(v) => (show(v), Status::Ok),
        Outcome::Blamed(p) => (format!("blame {p}"), Status::Blame),
        Outcome::OutOfFuel => ("out of fuel".to_string(), Status::Fuel),
    };
    writeln!(out, "{line}").map_err(|e| input(e.into()))?;
    Ok(status)
}

fn eval(src: &Source, fuel: Option<u64>, trace: bool, metrics: bool, out: &mut impl Write) -> CliResult {
    let fuel = match fuel {
        Some(f) => f,
        None => default_fuel()?,
    };
    let mut io_err = None;
    let mut emit = |line: String| {
        if io_err.is_none() {
            io_err = writeln!(out, "{line}").err();
        }
    };
    let mut m = Maxima::default();
    let (status_line, report) = match load(src)? {
        Loaded::S(p) => {
            typecheck_program(&p).map_err(|e| input(e.into()))?;
            let see = |m: &mut Maxima, t: &lam_s::TermS| {
                m.see(lam_s::metrics::max_coercion_size(t), lam_s::metrics::term_size(t), lam_s::metrics::metric_f(t))
            };
            see(&mut m, p.main());
            if trace {
                emit(format!("start: {}", print_term_s(p.main(), true)));
            }
            let o = run(&p, p.main(), fuel, |_, s| {
                m.steps += 1;
                see(&mut m, &s.next);
                if trace {
                    emit(trace_line(m.steps as usize, s.kind, s.rule.name(), &print_term_s(&s.next, true)));
                }
            })
            .map_err(|e| violation(anyhow!("progress: {e}")))?;
            (render(o, |v| print_term_s(v, true)), m.report(coercion_harness::Dialect::Lams))
        }
        Loaded::X(p) => {
            type_x(&p)?;
            let see = |m: &mut Maxima, t: &lam_sx::Tx| {
                m.see(lam_sx::metrics::max_coercion_size(t), lam_sx::metrics::term_size(t), lam_sx::metrics::metric_fx(t))
            };
            see(&mut m, p.main());
            if trace {
                emit(format!("start: {}", print_term_x(p.main(), true)));
            }
            let o = run_x(&p, p.main(), fuel, |_, s| {
                m.steps += 1;
                see(&mut m, &s.next);
                if trace {
                    emit(trace_line(m.steps as usize, s.kind, s.rule.name(), &print_term_x(&s.next, true)));
                }
            })
            .map_err(|e| violation(anyhow!("progress: {e}")))?;
            (render(o, |v| print_term_x(v, true)), m.report(coercion_harness::Dialect::Lamsx))
        }
    };
    if let Some(e) = io_err {
        return Err(input(e.into()));
    }
    let status = finish(out, &status_line, |s| s.clone())?;
    if metrics {
        writeln!(out, "{}", json_line(&report)).map_err(|e| input(e.into()))?;
    }
    Ok(status)
}

fn render<T>(o: Outcome<T>, show: impl Fn(&T) -> String) -> Outcome<String> {
    match o {
        Outcome::Result(v) => Outcome::Result(show(&v)),
        Outcome::Blamed(p) => Outcome::Blamed(p),
        Outcome::OutOfFuel => Outcome::OutOfFuel,
    }
}

fn translate(src: &Source, opt_trop: bool, out: &mut impl Write) -> CliResult {
    let p = load_s(src)?;
    let px = translate_program(&p, Options { opt_trop }).map_err(|e| input(e.into()))?;
    write!(out, "{}", print_program_x(&px, true)).map_err(|e| input(e.into()))?;
    Ok(Status::Ok)
}

fn simcheck(src: &Source, fuel: Option<u64>, opt_trop: bool, out: &mut impl Write) -> CliResult {
    let p = load_s(src)?;
    typecheck_program(&p).map_err(|e| input(e.into()))?;
    let fuel = match fuel {
        Some(f) => f,
        None => default_fuel()?,
    };
    let v = simulation_check(&p, fuel as usize, Options { opt_trop });
    writeln!(out, "{}", json_line(&v)).map_err(|e| input(e.into()))?;
    Ok(if v.is_failure() { Status::Violation } else { Status::Ok })
}

fn fuzz(seeds: Range<u64>, depth: u32, check: FuzzCheck, fuel: Option<u64>, out: &mut impl Write) -> CliResult {
    let check = match check {
        FuzzCheck::Differential => Check::Differential,
        FuzzCheck::Simulation => Check::Simulation,
        FuzzCheck::Invariants => Check::Invariants,
        FuzzCheck::Typing => Check::TypedTranslation,
    };
    let mut cfg = CorpusConfig { depth, ..CorpusConfig::default() };
    if let Some(f) = fuel {
        cfg.fuel = Fuel::scaled(f);
    }
    let records: Vec<Record> = run_corpus(seeds, check, &cfg);
    for r in &records {
        writeln!(out, "{}", json_line(r)).map_err(|e| input(e.into()))?;
    }
    let summary = Summary::of(&records);
    eprintln!("{summary}");
    Ok(if summary.disagree + summary.violations > 0 { Status::Violation } else { Status::Ok })
}

fn bench(n: u64, dialect: DialectArg, quiet: bool, out: &mut impl Write) -> CliResult {
    let d = match dialect {
        DialectArg::Lams => coercion_harness::Dialect::Lams,
        DialectArg::Lamsx => coercion_harness::Dialect::Lamsx,
    };
    let io = |e: io::Error| input(e.into());
    if !quiet {
        let trace = even_odd_trace(d, n, coercion_harness::space::fuel_for(n)).map_err(|e| violation(anyhow!(e)))?;
        for e in &trace {
            match e.kind {
                None => writeln!(out, "start: {}", e.term).map_err(io)?,
                Some(k) => writeln!(out, "{}", trace_line(e.step as usize, k, e.rule, &e.term)).map_err(io)?,
            }
        }
    }
    let report = space_run(d, n, |_| {}).map_err(|e| violation(anyhow!(e)))?;
    writeln!(out, "{}", json_line(&report)).map_err(io)?;
    Ok(Status::Ok)
}

fn dispatch(cli: Cli) -> CliResult {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let status = match cli.command {
        Command::Check(src) => check(&src, &mut out),
        Command::Eval { source, fuel, trace, metrics } => eval(&source, fuel, trace, metrics, &mut out),
        Command::Translate { source, opt_trop } => translate(&source, opt_trop, &mut out),
        Command::Simcheck { source, fuel, opt_trop } => simcheck(&source, fuel, opt_trop, &mut out),
        Command::Fuzz { seeds, depth, check, fuel } => fuzz(seeds, depth, check, fuel, &mut out),
        Command::Bench { program: BenchProgram::Evenodd, n, dialect, quiet } => bench(n, dialect, quiet, &mut out),
    };
    out.flush().map_err(|e| input(e.into()))?;
    status
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.status as u8)
        }
    }
}
