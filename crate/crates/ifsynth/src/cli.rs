//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::assembly::{ClosedVerdict, DecompositionMode, IfaVerdict};
use crate::automata::export::{dot_dfa, dot_monitor};
use crate::benchmarks::{generate_benchmark, Family};
use crate::classes::DEFAULT_CLASS_CAP;
use crate::error::{Error, Result};
use crate::obligations::GuaranteeKind;
use crate::pipeline::{self, render_trace, Artifacts, Options, Realizability, Run, REPORT_SCHEMA_VERSION};
use crate::spec::{load_problem, ComponentId, ProblemInstance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNREALIZABLE: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;
pub const EXIT_TIMEOUT: i32 = 4;
pub const EXIT_VERIFICATION: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "ifsynth", version, about = "Distributed safety synthesis through information classes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distinguishability automata and information classes.
    Analyze(AnalyzeArgs),
    /// Full pipeline down to verified local implementations.
    Synthesize(SynthesizeArgs),
    /// Re-verify stored local implementations.
    Verify(VerifyArgs),
    /// Benchmark table for the parametric families.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct Source {
    /// Problem file (JSON).
    #[arg(required_unless_present = "benchmark")]
    pub file: Option<PathBuf>,
    /// Built-in benchmark such as `delay:3`.
    #[arg(long, conflicts_with = "file")]
    pub benchmark: Option<String>,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = DEFAULT_CLASS_CAP)]
    pub class_cap: usize,
    /// Cross-check distinguishability against enumeration up to this length.
    #[arg(long, default_value_t = 0)]
    pub oracle_depth: usize,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Write Graphviz files into this directory.
    #[arg(long)]
    pub emit_dot: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyOpts {
    #[arg(long, default_value_t = 1000)]
    pub verify_depth: usize,
    #[arg(long, default_value_t = 4)]
    pub ifa_depth: usize,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub verify: VerifyOpts,
    /// Obligation of the transmitting component: `class` or `full`.
    #[arg(long, default_value = "class")]
    pub guarantee: GuaranteeKind,
    /// `knowledge` or `min`.
    #[arg(long, default_value = "knowledge")]
    pub decomposition: DecompositionMode,
    /// Write the problem and local implementations here.
    #[arg(long)]
    pub artifacts: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Artifact file written by `synthesize --artifacts`.
    pub artifacts: PathBuf,
    #[command(flatten)]
    pub verify: VerifyOpts,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Family to run; all families when omitted.
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long, default_value_t = 3)]
    pub max_param: usize,
    /// Per-instance limit in seconds.
    #[arg(long, default_value_t = 600.0)]
    pub timeout: f64,
    /// Also write the table as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Machine-readable failure.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub schema_version: u32,
    pub error: String,
    pub message: String,
    pub exit_code: i32,
}

impl ErrorReport {
    pub fn timeout(seconds: f64) -> Self {
        ErrorReport {
            schema_version: REPORT_SCHEMA_VERSION,
            error: "timeout".into(),
            message: format!("no result within {seconds} s"),
            exit_code: EXIT_TIMEOUT,
        }
    }
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        let (kind, code) = match e {
            Error::NotSafety(_) => ("rejected", EXIT_USAGE),
            Error::Parse { .. } | Error::UnknownVariable(_) | Error::Json(_) => ("parse", EXIT_USAGE),
            Error::Architecture(_) | Error::Problem(_) | Error::Vocabulary(_) | Error::Alphabet(_) => ("invalid", EXIT_USAGE),
            Error::Bidirectional => ("unsupported", EXIT_USAGE),
            Error::Io(_) => ("io", EXIT_USAGE),
            Error::LocallyUnrealizable | Error::ClassConflict(_) | Error::Budget(_) => ("unrealizable", EXIT_UNREALIZABLE),
            Error::Diverged(_) | Error::Limit(_) => ("diverged", EXIT_DIVERGED),
        };
        ErrorReport { schema_version: REPORT_SCHEMA_VERSION, error: kind.into(), message: e.to_string(), exit_code: code }
    }
}

/// Text written to standard output and standard error, and the exit code.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `family:n`.
pub fn parse_benchmark(spec: &str) -> Result<ProblemInstance> {
    let (f, n) = spec
        .split_once(':')
        .ok_or_else(|| Error::Problem(format!("benchmark `{spec}` is not of the form family:n")))?;
    let n: usize = n.parse().map_err(|_| Error::Problem(format!("bad benchmark parameter `{n}`")))?;
    generate_benchmark(f.parse()?, n)
}

fn load(source: &Source) -> Result<ProblemInstance> {
    match (&source.file, &source.benchmark) {
        (_, Some(b)) => parse_benchmark(b),
        (Some(f), None) => load_problem(f),
        (None, None) => Err(Error::Problem("no problem given".into())),
    }
}

/// Runs `f` on a worker thread; `None` when it does not finish in time.
/// A worker that times out is abandoned.
pub fn with_timeout<T: Send + 'static>(limit: Option<Duration>, f: impl FnOnce() -> T + Send + 'static) -> Option<T> {
    let Some(limit) = limit else { return Some(f()) };
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let _ = tx.send(f());
    });
    rx.recv_timeout(limit).ok()
}

fn seconds(s: Option<f64>) -> Option<Duration> {
    s.filter(|s| s.is_finite() && *s > 0.0).map(Duration::from_secs_f64)
}

fn options(common: &Common) -> Options {
    Options { class_cap: common.class_cap, oracle_depth: common.oracle_depth, ..Options::default() }
}

/// Graphviz files for every stage that ran.
pub fn emit_dot(run: &Run, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let p = &run.problem;
    let mut written = Vec::new();
    let mut put = |name: String, body: String| -> Result<()> {
        let path = dir.join(format!("{name}.dot"));
        fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    for c in ComponentId::BOTH {
        let n = p.component_name(c);
        put(format!("{n}_monitor"), dot_monitor(&p.spec(c).monitor()?, &p.vars, &format!("{n} monitor")))?;
        let a = &run.analysis[c.index()];
        put(format!("{n}_rho"), dot_dfa(&a.rho.minimized, &p.vars, &format!("{n} rho")))?;
        for cl in &a.classes.classes {
            put(format!("{n}_class{}", cl.id), dot_dfa(&cl.dfa, &p.vars, &format!("{n} class {}", cl.id)))?;
        }
        if let Some(h) = run.hyper(c) {
            put(format!("{n}_hyper"), h.to_dot(&format!("{n} hyper"), &p.vars))?;
        }
        if let Some(l) = run.local(c) {
            put(format!("{n}_local"), l.to_dot(&format!("{n} local"), &p.vars))?;
        }
    }
    Ok(written)
}

fn write_or_return(out: &Option<PathBuf>, body: String) -> Result<String> {
    match out {
        Some(path) => {
            fs::write(path, body)?;
            Ok(String::new())
        }
        None => Ok(body),
    }
}

fn failure(e: &Error) -> Outcome {
    let r = ErrorReport::from(e);
    Outcome { stdout: serde_json::to_string_pretty(&r).expect("error serializes") + "\n", stderr: format!("error: {e}\n"), code: r.exit_code }
}

fn timed_out(limit: Option<f64>) -> Outcome {
    let r = ErrorReport::timeout(limit.unwrap_or_default());
    Outcome { stdout: serde_json::to_string_pretty(&r).expect("error serializes") + "\n", stderr: "error: timeout\n".into(), code: r.exit_code }
}

fn finish(result: Result<Outcome>) -> Outcome {
    result.unwrap_or_else(|e| failure(&e))
}

pub fn cmd_analyze(problem: &ProblemInstance, options: &Options) -> Result<Run> {
    pipeline::analyze(problem, options)
}

pub fn cmd_synthesize(problem: &ProblemInstance, options: &Options) -> Result<Run> {
    pipeline::synthesize(problem, options)
}

pub fn cmd_verify(artifacts: &Path, options: &Options) -> Result<(ProblemInstance, ClosedVerdict, IfaVerdict)> {
    let a: Artifacts = serde_json::from_str(&fs::read_to_string(artifacts)?)?;
    pipeline::verify_artifacts(&a, options)
}

fn run_stage(args_common: &Common, problem: ProblemInstance, options: Options, synth: bool) -> Option<Result<Run>> {
    with_timeout(seconds(args_common.timeout), move || {
        if synth {
            cmd_synthesize(&problem, &options)
        } else {
            cmd_analyze(&problem, &options)
        }
    })
}

fn analyze_main(args: AnalyzeArgs) -> Result<Outcome> {
    let problem = load(&args.source)?;
    let Some(run) = run_stage(&args.common, problem, options(&args.common), false) else {
        return Ok(timed_out(args.common.timeout));
    };
    let run = run?;
    if let Some(dir) = &args.common.emit_dot {
        emit_dot(&run, dir)?;
    }
    Ok(Outcome { stdout: write_or_return(&args.common.out, run.report.to_json() + "\n")?, ..Outcome::default() })
}

fn synthesize_main(args: SynthesizeArgs) -> Result<Outcome> {
    let problem = load(&args.source)?;
    let opts = Options {
        guarantee: args.guarantee,
        decomposition: args.decomposition,
        verify_depth: args.verify.verify_depth,
        ifa_depth: args.verify.ifa_depth,
        ..options(&args.common)
    };
    let Some(run) = run_stage(&args.common, problem, opts, true) else {
        return Ok(timed_out(args.common.timeout));
    };
    let run = run?;
    if let Some(dir) = &args.common.emit_dot {
        emit_dot(&run, dir)?;
    }
    if let (Some(path), Some(a)) = (&args.artifacts, run.artifacts()) {
        fs::write(path, serde_json::to_string_pretty(&a)? + "\n")?;
    }
    let mut out = Outcome { stdout: write_or_return(&args.common.out, run.report.to_json() + "\n")?, ..Outcome::default() };
    match &run.report.realizability {
        Some(Realizability::Unrealizable(d)) => {
            out.stderr = format!("unrealizable ({:?} level, component {}): {}\n", d.level, d.component, d.message);
            out.code = EXIT_UNREALIZABLE;
        }
        _ if !run.is_verified() => {
            out.stderr = verdict_text(&run.problem, run.report.verification.as_ref(), run.report.information_flow.as_ref(), &run);
            out.code = EXIT_VERIFICATION;
        }
        _ => {}
    }
    Ok(out)
}

fn verdict_text(problem: &ProblemInstance, v: Option<&ClosedVerdict>, ifa: Option<&IfaVerdict>, run: &Run) -> String {
    let mut s = String::new();
    if let Some(ClosedVerdict::Counterexample { word, violated }) = v {
        writeln!(s, "counterexample violating {violated:?}:").unwrap();
        if let Some([tp, tq]) = &run.locals {
            if let Ok(lp) = crate::assembly::ClosedLoop::new(tp, tq, &problem.arch) {
                s.push_str(&render_trace(problem, &lp.trace(word)));
            }
        }
    }
    if let Some(IfaVerdict::Violated { u, w }) = ifa {
        let env = problem.arch.env;
        writeln!(
            s,
            "information flow violated by {} / {}",
            pipeline::show_word(problem, u, env),
            pipeline::show_word(problem, w, env)
        )
        .unwrap();
    }
    if let Some(ClosedVerdict::Verified { certifying: false, depth, .. }) = v {
        writeln!(s, "no violation up to depth {depth}, bound not certifying").unwrap();
    }
    s
}

#[derive(Clone, Debug, Serialize)]
struct VerifyReport {
    schema_version: u32,
    problem: String,
    verification: ClosedVerdict,
    information_flow: IfaVerdict,
}

fn verify_main(args: VerifyArgs) -> Result<Outcome> {
    let opts = Options { verify_depth: args.verify.verify_depth, ifa_depth: args.verify.ifa_depth, ..Options::default() };
    let (problem, v, ifa) = cmd_verify(&args.artifacts, &opts)?;
    let ok = v.is_certified() && ifa.holds();
    let mut stderr = String::new();
    if let ClosedVerdict::Counterexample { word, violated } = &v {
        let a: Artifacts = serde_json::from_str(&fs::read_to_string(&args.artifacts)?)?;
        let lp = crate::assembly::ClosedLoop::new(&a.locals[0], &a.locals[1], &problem.arch)?;
        writeln!(stderr, "counterexample violating {violated:?}:").unwrap();
        stderr.push_str(&render_trace(&problem, &lp.trace(word)));
    }
    let report = VerifyReport { schema_version: REPORT_SCHEMA_VERSION, problem: problem.name.clone(), verification: v, information_flow: ifa };
    Ok(Outcome {
        stdout: write_or_return(&args.out, serde_json::to_string_pretty(&report)? + "\n")?,
        stderr,
        code: if ok { EXIT_OK } else { EXIT_VERIFICATION },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub benchmark: String,
    pub family: Family,
    pub param: usize,
    pub phi_size: Option<usize>,
    pub rho_raw: Option<usize>,
    pub rho_min: Option<usize>,
    pub classes: Option<usize>,
    pub verified: Option<bool>,
    pub seconds: Option<f64>,
    /// `ok`, `timeout`, `unrealizable` or an error kind.
    pub status: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchTable {
    pub schema_version: u32,
    pub rows: Vec<BenchRow>,
}

impl BenchTable {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let cell = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
        writeln!(s, "{:<22} {:>4} {:>5} {:>10} {:>5} {:>9}  status", "Benchmark", "Par.", "|φ|", "|ρ| raw/min", "|C|", "time (s)").unwrap();
        let mut last = None;
        for r in &self.rows {
            let name = if last == Some(r.family) { "" } else { r.benchmark.as_str() };
            last = Some(r.family);
            let rho = match (r.rho_raw, r.rho_min) {
                (Some(a), Some(b)) => format!("{a}/{b}"),
                _ => "-".into(),
            };
            let time = r.seconds.map_or("TO".to_string(), |t| format!("{t:.3}"));
            writeln!(s, "{:<22} {:>4} {:>5} {:>11} {:>5} {:>9}  {}", name, r.param, cell(r.phi_size), rho, cell(r.classes), time, r.status).unwrap();
        }
        s
    }
}

/// Runs the full pipeline on every family member up to `max_param`. After a
/// timeout the larger members of that family are skipped.
pub fn cmd_bench(families: &[Family], max_param: usize, timeout: Option<Duration>, options: &Options) -> BenchTable {
    let mut rows = Vec::new();
    for &family in families {
        let mut timed_out = false;
        for n in family.min_param()..=max_param {
            let mut row = BenchRow {
                benchmark: family.title().to_string(),
                family,
                param: n,
                phi_size: None,
                rho_raw: None,
                rho_min: None,
                classes: None,
                verified: None,
                seconds: None,
                status: "timeout".into(),
            };
            if timed_out {
                rows.push(row);
                continue;
            }
            let opts = options.clone();
            let start = Instant::now();
            let result = with_timeout(timeout, move || generate_benchmark(family, n).and_then(|p| pipeline::synthesize(&p, &opts)));
            let elapsed = start.elapsed().as_secs_f64();
            match result {
                None => timed_out = true,
                Some(Err(e)) => row.status = ErrorReport::from(&e).error,
                Some(Ok(run)) => {
                    let r = &run.report.components[ComponentId::P.index()];
                    row.phi_size = Some(r.phi_size);
                    row.rho_raw = Some(r.rho.raw_states);
                    row.rho_min = Some(r.rho.minimized_states);
                    row.classes = Some(r.classes.count);
                    row.seconds = Some(elapsed);
                    row.verified = Some(run.is_verified());
                    row.status = match run.report.realizability {
                        Some(Realizability::Unrealizable(_)) => "unrealizable".into(),
                        _ if run.is_verified() => "ok".into(),
                        _ => "verification failed".into(),
                    };
                }
            }
            rows.push(row);
        }
    }
    BenchTable { schema_version: REPORT_SCHEMA_VERSION, rows }
}

fn bench_main(args: BenchArgs) -> Result<Outcome> {
    let families: Vec<Family> = match args.family {
        Some(f) => vec![f],
        None => Family::ALL.to_vec(),
    };
    let table = cmd_bench(&families, args.max_param, seconds(Some(args.timeout)), &Options::default());
    if let Some(path) = &args.json {
        fs::write(path, serde_json::to_string_pretty(&table)? + "\n")?;
    }
    Ok(Outcome { stdout: table.to_text(), ..Outcome::default() })
}

/// Parses arguments and runs the command without touching the process.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return Outcome { stdout: String::new(), stderr: e.render().to_string(), code };
        }
    };
    finish(match cli.command {
        Command::Analyze(a) => analyze_main(a),
        Command::Synthesize(a) => synthesize_main(a),
        Command::Verify(a) => verify_main(a),
        Command::Bench(a) => bench_main(a),
    })
}
