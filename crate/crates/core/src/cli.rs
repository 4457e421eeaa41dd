//! The `hf` command line.
//!
//! Exit codes: 0 for success (or a true formula, or a passing report), 1
//! for a false formula or a failing report, 2 when only the budget stood in
//! the way, 64 for bad input, 65 for a formula in the wrong language.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::arith::ArithMode;
use crate::error::{Error, Result};
use crate::eval::{compile, EvalContext, Faults, Val};
use crate::interp::{translate, InterpMap};
use crate::logic::{parse, AnyFormula, Language};
use crate::set::{decode, encode, parse_set_literal, Budget, Code};
use crate::verify::{self, Corpus, Suite, SuiteParams};

pub const EXIT_FALSE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_MISMATCH: i32 = 65;

#[derive(Parser, Debug)]
#[command(
    name = "hf",
    version,
    about = "Hereditarily finite sets and their arithmetic"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the Ackermann code of a set literal such as `{{}, {{}}}`.
    Encode { set: String },
    /// Print the set with the given code.
    Decode { code: String },
    /// Translate a formula along one or more interpretations, applied in order.
    Translate {
        #[arg(long = "map", required = true, value_parser = parse_map)]
        maps: Vec<InterpMap>,
        formula: String,
    },
    /// Evaluate a formula under bindings.
    Eval(EvalArgs),
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct ContextArgs {
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    nat_cutoff: u64,
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    set_cutoff: u64,
    /// Largest code, in bits, any intermediate value may have.
    #[arg(long, default_value_t = crate::set::MEMO_CODE_BITS)]
    budget_bits: u64,
    #[arg(long, value_enum, default_value_t = Mode::Fast)]
    mode: Mode,
    /// Enumerate quantifier ranges instead of narrowing them.
    #[arg(long)]
    no_prune: bool,
}

impl ContextArgs {
    fn context(&self) -> EvalContext {
        EvalContext {
            nat_cutoff: self.nat_cutoff,
            set_cutoff: self.set_cutoff,
            budget: Budget {
                code_bits: self.budget_bits,
                ..Budget::default()
            },
            mode: match self.mode {
                Mode::Fast => ArithMode::Fast,
                Mode::Literal => ArithMode::Literal,
            },
            prune: !self.no_prune,
            ..EvalContext::default()
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Fast,
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Read the formula as arithmetic.
    #[arg(long, conflicts_with = "set", required_unless_present = "set")]
    arith: bool,
    /// Read the formula as a set formula.
    #[arg(long)]
    set: bool,
    formula: String,
    /// `name=value`, where the value is a number, `#n` or a set literal.
    #[arg(short = 'b', long = "bind", value_parser = parse_binding)]
    bindings: Vec<(String, String)>,
    #[command(flatten)]
    ctx: ContextArgs,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_parser = parse_suite)]
    suite: Suite,
    /// The `theorem6` suite checks all pairs of codes below this.
    #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    max_code: u64,
    /// ... and below this in literal mode.
    #[arg(long, default_value_t = 64)]
    literal_max: u64,
    /// Round trips check all assignments below this.
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    assignment_max: u64,
    /// Replace the suite's corpus with this file.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Make `S_a` skip a set after the one with this code.
    #[arg(long)]
    fault_successor: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Leave the timestamp out of the report.
    #[arg(long)]
    no_timestamp: bool,
    #[command(flatten)]
    ctx: ContextArgs,
}

fn parse_map(s: &str) -> std::result::Result<InterpMap, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_binding(s: &str) -> std::result::Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or("expected name=value")?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn code_value(s: &str) -> Result<Code> {
    if s.starts_with('{') || s.starts_with('#') {
        return encode(&parse_set_literal(s)?);
    }
    s.parse()
        .map_err(|_| Error::syntax(0, format!("`{s}` is not a code or set literal")))
}

/// Parses `src` in `lang`, or reports a language mismatch when it only
/// parses in the other language.
fn parse_in(lang: Language, src: &str) -> Result<AnyFormula> {
    parse(lang, src).map_err(|e| {
        let other = match lang {
            Language::Arith => Language::Set,
            Language::Set => Language::Arith,
        };
        match parse(other, src) {
            Ok(_) => Error::LanguageMismatch(format!(
                "expected a{} {lang} formula, got a{} {other} one",
                an(lang),
                an(other)
            )),
            Err(_) => e,
        }
    })
}

fn an(l: Language) -> &'static str {
    if l == Language::Arith {
        "n"
    } else {
        ""
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::LanguageMismatch(_) => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

/// Runs the command line on `args` (including the program name), writing
/// output to `out` and errors to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Unsupported(format!("cannot write output: {e}"));
    match cmd {
        Command::Encode { set } => {
            writeln!(out, "{}", encode(&parse_set_literal(&set)?)?).map_err(io)?;
            Ok(0)
        }
        Command::Decode { code } => {
            let n: Code = code
                .trim()
                .parse()
                .map_err(|_| Error::syntax(0, format!("`{code}` is not a natural number")))?;
            writeln!(out, "{}", decode(&n)?).map_err(io)?;
            Ok(0)
        }
        Command::Translate { maps, formula } => {
            let mut phi = parse_in(maps[0].source(), &formula)?;
            for m in maps {
                phi = translate(m, &phi)?;
            }
            writeln!(out, "{phi}").map_err(io)?;
            Ok(0)
        }
        Command::Eval(a) => eval(a, out),
        Command::Verify(a) => verify_cmd(a, out),
    }
}

fn eval(a: EvalArgs, out: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Unsupported(format!("cannot write output: {e}"));
    let lang = if a.arith {
        Language::Arith
    } else {
        Language::Set
    };
    let phi = parse_in(lang, &a.formula)?;
    let ctx = a.ctx.context();
    let env: BTreeMap<String, Code> = a
        .bindings
        .iter()
        .map(|(k, v)| Ok((k.clone(), code_value(v)?)))
        .collect::<Result<_>>()?;
    let vars: Vec<String> = env.keys().cloned().collect();
    let vals: Vec<Val> = env.values().cloned().map(Val::Code).collect();
    let c = compile(&phi, &vars, &ctx)?;
    let verdict = c.eval(&vals)?;
    let cutoff = (!c.is_bounded()).then_some(match lang {
        Language::Arith => ctx.nat_cutoff,
        Language::Set => ctx.set_cutoff,
    });
    match a.format {
        Format::Human => match cutoff {
            Some(n) => writeln!(out, "{verdict} at cutoff {n}"),
            None => writeln!(out, "{verdict}"),
        }
        .map_err(io)?,
        Format::Json => {
            let v = serde_json::json!({
                "formula": phi.to_string(),
                "language": lang,
                "verdict": verdict,
                "bounded": cutoff.is_none(),
                "context": ctx,
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&v).expect("serializable")
            )
            .map_err(io)?;
        }
    }
    Ok(if verdict { 0 } else { EXIT_FALSE })
}

fn verify_cmd(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Unsupported(format!("cannot write output: {e}"));
    let mut ctx = a.ctx.context();
    if let Some(c) = a.fault_successor {
        ctx = ctx.with_faults(Faults {
            successor_skip: Some(c),
        });
    }
    let params = SuiteParams {
        max_code: a.max_code,
        literal_max: a.literal_max,
        assignment_max: a.assignment_max,
        ..SuiteParams::default()
    };
    let corpus = a
        .corpus
        .as_deref()
        .map(|p| Corpus::with_file(a.suite, p))
        .transpose()?;
    let mut report = verify::run(a.suite, &ctx, &params, corpus.as_ref())?;
    if !a.no_timestamp {
        report = report.stamped();
    }
    match a.format {
        Format::Human => write!(out, "{}", report.human()),
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        ),
    }
    .map_err(io)?;
    Ok(report.exit_code())
}
