//! Command-line driver: reads system documents, runs library reports and
//! writes JSON.
//!
//! Exit status: 0 when every check holds, 1 on invalid input, 2 when a
//! check fails, 3 when an enumeration budget would be exceeded.

mod commands;
pub mod wire;

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use micromacro::{Budget, Error};
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable that overrides every enumeration budget.
pub const BUDGET_ENV: &str = "MICROMACRO_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "micromacro", version, about = "Exact analysis of finite micro-macro dynamical systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A system document path; `-` or nothing reads standard input.
#[derive(Debug, Args)]
struct Input {
    file: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a system and summarise its entropies and equilibrium.
    Inspect(Input),
    /// Generate a system document.
    Build {
        #[command(subcommand)]
        generator: BuildCmd,
    },
    /// Combine two systems.
    Combine {
        kind: CombineArg,
        first: String,
        second: String,
    },
    /// Derive a system from another.
    Derive {
        #[command(subcommand)]
        kind: DeriveCmd,
    },
    /// Reproducibility graph, its inverse and the eps-relaxed graph.
    Repro {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "1/4")]
        eps: String,
    },
    /// Coarse-grained transition kernel and its powers.
    Kernel {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        power: u64,
    },
    /// Communication classes, periods and limiting distributions.
    Chain {
        #[command(flatten)]
        input: Input,
        /// Initial macro weights, normalised; uniform by default.
        #[arg(long)]
        q: Option<String>,
    },
    /// Macro process checks: Markov property, stationarity, reversal.
    Process {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Initial macro weights; the equilibrium measure by default.
        #[arg(long)]
        q: Option<String>,
    },
    /// Entropy production and the decreasing/constant/increasing split.
    Produce {
        action: ProduceAction,
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Initial macro weights; uniform by default.
        #[arg(long)]
        q: Option<String>,
        /// Macrostate for the sub-equilibrium profile.
        #[arg(long)]
        c: Option<usize>,
    },
    /// Reaching-time structure of an E-bound system and its double cover.
    Ebound {
        #[command(flatten)]
        input: Input,
        /// Comma-separated microstates forming E.
        #[arg(long)]
        e: String,
    },
    /// Isomorphism-class counts, canonical forms and isomorphism tests.
    Census {
        #[arg(long)]
        n: Option<usize>,
        /// Count classes by the closed formula.
        #[arg(long)]
        formula: bool,
        /// Count classes by exhaustive orbit marking.
        #[arg(long)]
        brute: bool,
        /// Count labelled systems with this many macrostates.
        #[arg(long)]
        labeled: Option<usize>,
        /// Largest number of entropy-decreasing microstates.
        #[arg(long)]
        dmax: bool,
        /// One file: canonical form. Two files: isomorphism test.
        files: Vec<String>,
    },
    /// Finite-size large-deviation checks for independent copies.
    Ldev {
        mode: LdevMode,
        #[command(flatten)]
        input: Input,
        /// Comma-separated numbers of copies.
        #[arg(long, default_value = "1,2,3")]
        copies: String,
        /// Level width: a rational, or `ln:R` for the logarithm of a rational.
        #[arg(long, default_value = "1/2")]
        eps: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Run built-in reference examples.
    Selftest,
}

#[derive(Debug, Subcommand)]
enum BuildCmd {
    /// Single cycle maximising the decreasing set for given block sizes.
    MaxDecreasing {
        /// `size:count` pairs, comma separated.
        #[arg(long)]
        parts: String,
    },
    /// Bottom block of size n, top block of size n^2 on one cycle.
    Remark {
        #[arg(long)]
        n: usize,
    },
    /// Independent copies of a base system labelled by KL level.
    Empirical {
        #[arg(long)]
        base: String,
        #[arg(long)]
        copies: usize,
        #[arg(long, default_value = "1/2")]
        eps: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Group action base `X × V`, or its copies when `--copies` is given.
    GroupAction {
        /// JSON list of permutations.
        #[arg(long)]
        action: String,
        #[arg(long, value_enum, default_value_t = ActionArg::First)]
        mode: ActionArg,
        #[arg(long)]
        copies: Option<usize>,
        #[arg(long, default_value = "1/2")]
        eps: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Translations of Z_2d, or their copies when `--copies` is given.
    Z2d {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        copies: Option<usize>,
        #[arg(long, default_value = "1/2")]
        eps: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Reversible double cover of an E-bound system.
    DoubleCover {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        e: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ActionArg {
    Full,
    First,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CombineArg {
    DisjointUnion,
    Product,
    Reunion,
    ExtensiveJoint,
}

#[derive(Debug, Subcommand)]
enum DeriveCmd {
    Inverse(Input),
    Coarsen {
        /// Image of each label, comma separated.
        #[arg(long)]
        map: String,
        #[command(flatten)]
        input: Input,
    },
    Restrict {
        /// Microstates to keep, comma separated.
        #[arg(long)]
        keep: String,
        #[command(flatten)]
        input: Input,
    },
    Iterate {
        #[arg(long)]
        length: usize,
        #[command(flatten)]
        input: Input,
    },
    Zones(Input),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProduceAction {
    Classes,
    Density,
    Identities,
    Fluctuation,
    Subequilibrium,
    Positivity,
    ReturnTime,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LdevMode {
    Sanov,
    Rates,
    Dominance,
}

/// What a command produced.
enum Output {
    /// A system document, for piping into the next command.
    System(micromacro::System),
    /// A report; `passed` is false when some check failed.
    Report { body: Value, passed: bool },
}

struct Context<'a> {
    stdin: &'a mut dyn Read,
    budget: Budget,
}

impl Context<'_> {
    fn read(&mut self, input: &Input) -> Result<micromacro::System, Error> {
        self.read_path(input.file.as_deref())
    }

    fn read_path(&mut self, path: Option<&str>) -> Result<micromacro::System, Error> {
        let text = match path {
            None | Some("-") => {
                let mut buf = String::new();
                self.stdin
                    .read_to_string(&mut buf)
                    .map_err(|e| Error::InvalidArgument(format!("cannot read standard input: {e}")))?;
                buf
            }
            Some(p) => std::fs::read_to_string(p).map_err(|e| Error::InvalidArgument(format!("cannot read {p}: {e}")))?,
        };
        wire::parse_system(&text)
    }
}

fn budget_from_env() -> Result<Budget, Error> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .map(Budget::uniform)
            .map_err(|_| Error::InvalidArgument(format!("{BUDGET_ENV} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(Budget::default()),
    }
}

/// Runs one command line. `args` includes the program name.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let outcome = budget_from_env().and_then(|budget| {
        let mut ctx = Context { stdin, budget };
        commands::dispatch(cli.command, &mut ctx)
    });
    emit(outcome, &echo, stdout, stderr)
}

/// Writes the outcome of a command and maps it to an exit status.
fn emit(outcome: Result<Output, Error>, echo: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match outcome {
        Ok(Output::System(s)) => {
            let _ = writeln!(stdout, "{}", wire::emit_system(&s));
            EXIT_OK
        }
        Ok(Output::Report { body, passed }) => {
            let doc = serde_json::json!({
                "command": echo,
                "status": if passed { "ok" } else { "check-failed" },
                "report": body,
            });
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&doc).expect("reports serialize"));
            if !passed {
                let _ = writeln!(stderr, "error: at least one identity check failed; see the report's checks");
            }
            if passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_budget() {
                EXIT_BUDGET
            } else {
                EXIT_INVALID
            }
        }
    }
}
