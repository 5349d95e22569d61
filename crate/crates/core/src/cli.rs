//! The `backtrack` command line.
//!
//! All output is assembled in memory and returned with the exit code, so a
//! run is a pure function of its arguments.

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::LawError;
use crate::laws::{self, FuzzConfig, LawId, LawReport};
use crate::queens::{run_counted, QueensRun, Variant};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "backtrack", version, about = "n-queens by generate-and-test or by fused backtracking, and a law checker")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve n-queens.
    Queens(QueensArgs),
    /// Check algebraic laws on random programs.
    Lawcheck(LawcheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Naive,
    Derived,
    Both,
}

#[derive(Debug, Args)]
pub struct QueensArgs {
    /// Board size.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Print only the number of solutions.
    #[arg(long)]
    pub count_only: bool,
    /// Also print how many list splits each variant performed.
    #[arg(long)]
    pub stats: bool,
    /// One JSON object per line.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("which").required(true).args(["all", "law"])))]
pub struct LawcheckArgs {
    /// Check every registered law.
    #[arg(long)]
    pub all: bool,
    /// Check one law; repeatable.
    #[arg(long = "law", value_name = "ID")]
    pub law: Vec<String>,
    #[arg(long, default_value_t = 500)]
    pub cases: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Maximum depth of generated programs.
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// One JSON object per line.
    #[arg(long)]
    pub json: bool,
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn usage(msg: impl Into<String>) -> Self {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: msg.into() }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            match e.exit_code() {
                0 => Outcome::ok(text),
                _ => Outcome::usage(text),
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Queens(a) => cmd_queens(a),
        Command::Lawcheck(a) => cmd_lawcheck(a),
    }
}

#[derive(Serialize)]
struct QueensJson<'a> {
    n: usize,
    mode: &'a str,
    count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    solutions: Option<&'a [Vec<i64>]>,
    expansions: usize,
}

#[derive(Serialize)]
struct MatchJson {
    n: usize,
    mode: &'static str,
    #[serde(rename = "match")]
    matched: bool,
}

pub fn cmd_queens(a: &QueensArgs) -> Outcome {
    let variants: &[Variant] = match a.mode {
        Mode::Naive => &[Variant::Naive],
        Mode::Derived => &[Variant::Derived],
        Mode::Both => &[Variant::Naive, Variant::Derived],
    };
    let mut runs: Vec<(Variant, QueensRun)> = Vec::new();
    for v in variants {
        match run_counted(a.n, *v) {
            Ok(r) => runs.push((*v, r)),
            Err(e) => return Outcome { code: EXIT_FAILURE, stdout: String::new(), stderr: format!("error: {e}\n") },
        }
    }
    let matched = runs.windows(2).all(|w| w[0].1.solutions == w[1].1.solutions);
    let mut out = String::new();

    if a.json {
        for (v, r) in &runs {
            let obj = QueensJson {
                n: a.n,
                mode: v.name(),
                count: r.solutions.len(),
                solutions: (!a.count_only).then_some(&r.solutions[..]),
                expansions: r.expansions,
            };
            out.push_str(&to_json_line(&obj));
        }
        if a.mode == Mode::Both {
            out.push_str(&to_json_line(&MatchJson { n: a.n, mode: "both", matched }));
        }
    } else {
        let (_, first) = &runs[0];
        if matched {
            if a.count_only {
                out.push_str(&format!("{}\n", first.solutions.len()));
            } else {
                for xs in &first.solutions {
                    out.push_str(&render_placement(xs));
                    out.push('\n');
                }
            }
        } else {
            for (v, r) in &runs {
                out.push_str(&format!("{} {}\n", v.name(), r.solutions.len()));
            }
        }
        if a.mode == Mode::Both {
            out.push_str(if matched { "match\n" } else { "mismatch\n" });
        }
        if a.stats {
            for (v, r) in &runs {
                out.push_str(&format!("expansions {} {}\n", v.name(), r.expansions));
            }
        }
    }
    Outcome { code: if matched { EXIT_OK } else { EXIT_FAILURE }, stdout: out, stderr: String::new() }
}

fn render_placement(xs: &[i64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct LawJson<'a> {
    id: &'static str,
    cases: usize,
    failures: &'a [laws::Failure],
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
}

pub fn cmd_lawcheck(a: &LawcheckArgs) -> Outcome {
    let ids: Vec<LawId> = if a.all {
        LawId::ALL.to_vec()
    } else {
        match a.law.iter().map(|n| LawId::parse(n)).collect::<Result<Vec<_>, LawError>>() {
            Ok(ids) => ids,
            Err(e) => return Outcome::usage(format!("error: {e}\n")),
        }
    };
    let cfg = FuzzConfig { max_depth: a.depth, cases: a.cases, seed: a.seed, ..FuzzConfig::default() };
    let reports = match laws::run_suite_with(&crate::handler::LocalState, &cfg, &ids) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let all_passed = reports.iter().all(LawReport::passed);
    let mut out = String::new();
    if a.json {
        for r in &reports {
            let note = (r.law_id == LawId::Thm2).then_some(laws::SUITE_NOTE);
            out.push_str(&to_json_line(&LawJson { id: r.law_id.name(), cases: r.cases_run, failures: &r.failures, note }));
        }
    } else {
        if ids.contains(&LawId::Thm2) {
            out.push_str(laws::SUITE_NOTE);
            out.push('\n');
        }
        for r in &reports {
            out.push_str(&render_report(r));
        }
    }
    Outcome { code: if all_passed { EXIT_OK } else { EXIT_FAILURE }, stdout: out, stderr: String::new() }
}

/// `<id> <cases> PASS|FAIL`, followed for a failing law by its shrunk first
/// counterexample.
pub fn render_report(r: &LawReport) -> String {
    let mut s = format!("{} {} {}\n", r.law_id.name(), r.cases_run, if r.passed() { "PASS" } else { "FAIL" });
    if let Some(f) = r.failures.first() {
        s.push_str(&format!("  failing cases: {}\n", r.failures.len()));
        s.push_str(&format!("  case {} (shrunk, depth {})\n", f.case, f.depth));
        s.push_str(&format!("    env:   {}\n", f.shrunk));
        s.push_str(&format!("    state: {}\n", f.state));
        s.push_str(&format!("    lhs:   {}\n", f.lhs));
        s.push_str(&format!("    rhs:   {}\n", f.rhs));
    }
    s
}

fn to_json_line<T: Serialize>(v: &T) -> String {
    let mut line = serde_json::to_string(v).expect("report types serialise");
    line.push('\n');
    line
}
