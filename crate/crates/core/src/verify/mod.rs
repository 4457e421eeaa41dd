//! Executable checks of the axioms and theorems over finite universes.
//!
//! Every suite returns a [`Report`]: one [`Case`] per check, each passing,
//! failing or running out of budget. A failing case carries a
//! [`Counterexample`] that can be re-checked on its own with
//! [`Counterexample::replay`].

mod axioms;
mod cardinal;
mod controls;
pub mod corpus;
mod opei;
mod roundtrip;
mod theorem6;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::ArithMode;
use crate::cardinal::{card_add, card_exp, product, FunctionGraph};
use crate::error::{Error, Result};
use crate::eval::{compile, EvalContext, Val};
use crate::logic::{parse, Language};
use crate::set::{decode, encode, Code};

pub use axioms::check_axioms;
pub use cardinal::{check_cardinal_model, representatives};
pub use controls::{check_controls, corrupted_bit_formula};
pub use corpus::{Corpus, OpeiBranch, OpeiEntry};
pub use opei::check_opei;
pub use roundtrip::check_roundtrip;
pub use theorem6::{check_theorem6, check_theorem6_with, membership_formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Budget,
}

/// A failure, stated so that it can be checked again from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Counterexample {
    /// `formula` should evaluate to `expected` under `env` (codes, in
    /// decimal) but does not.
    Formula {
        language: Language,
        formula: String,
        env: BTreeMap<String, String>,
        expected: bool,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        mode: Option<ArithMode>,
    },
    /// `map` is a one-one map from `set` to itself that is not onto.
    Dedekind { set: String, map: String },
    /// `level` is not the least level with `set` as a member.
    Hierarchy { set: String, level: String },
    /// The cardinal operation `op` on sets with codes `x` and `y` does not
    /// have `expected` members.
    Cardinal {
        op: String,
        x: String,
        y: String,
        expected: u64,
    },
}

fn code_arg(s: &str) -> Result<Code> {
    s.parse::<Code>()
        .map_err(|_| Error::Unsupported(format!("`{s}` is not a code")))
}

impl Counterexample {
    pub fn formula(
        language: Language,
        formula: impl ToString,
        env: &[(&str, &Code)],
        expected: bool,
    ) -> Self {
        Counterexample::Formula {
            language,
            formula: formula.to_string(),
            env: env
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            expected,
            mode: None,
        }
    }

    pub fn with_mode(mut self, m: ArithMode) -> Self {
        if let Counterexample::Formula { mode, .. } = &mut self {
            *mode = Some(m);
        }
        self
    }

    /// Whether the failure shows up again when checked under `ctx`. A
    /// non-budget error counts as the failure showing up.
    pub fn replay(&self, ctx: &EvalContext) -> bool {
        match self.check(ctx) {
            Ok(holds) => !holds,
            Err(e) => !e.is_budget(),
        }
    }

    /// Whether the claimed property holds after all.
    fn check(&self, ctx: &EvalContext) -> Result<bool> {
        match self {
            Counterexample::Formula {
                language,
                formula,
                env,
                expected,
                mode,
            } => {
                let phi = parse(*language, formula)?;
                let vars: Vec<String> = env.keys().cloned().collect();
                let vals = env
                    .values()
                    .map(|v| code_arg(v).map(Val::Code))
                    .collect::<Result<Vec<_>>>()?;
                let mut ctx = ctx.clone();
                if let Some(m) = mode {
                    ctx.mode = *m;
                }
                Ok(compile(&phi, &vars, &ctx)?.eval(&vals)? == *expected)
            }
            Counterexample::Dedekind { set, map } => {
                let x = decode(&code_arg(set)?)?;
                let f = FunctionGraph::from_set(&decode(&code_arg(map)?)?)
                    .ok_or_else(|| Error::Unsupported("not a function graph".into()))?;
                let is_self_map = f.domain() == x && f.range().is_subset(&x);
                Ok(!(is_self_map && f.is_injective()) || f.range() == x)
            }
            Counterexample::Hierarchy { set, level } => {
                let x = decode(&code_arg(set)?)?;
                let claimed = decode(&code_arg(level)?)?;
                Ok(axioms::least_level(&x, &ctx.budget)?.as_ref() == Some(&claimed))
            }
            Counterexample::Cardinal { op, x, y, expected } => {
                let (a, b) = (decode(&code_arg(x)?)?, decode(&code_arg(y)?)?);
                let s = match op.as_str() {
                    "cadd" => card_add(&a, &b)?,
                    "cprod" => product(&a, &b)?,
                    "cexp" => card_exp(&a, &b)?,
                    _ => {
                        return Err(Error::Unsupported(format!(
                            "unknown cardinal operation `{op}`"
                        )))
                    }
                };
                Ok(s.len() as u64 == *expected)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub id: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Counterexample>,
}

impl Case {
    pub fn pass(id: impl Into<String>) -> Case {
        Case {
            id: id.into(),
            verdict: Verdict::Pass,
            detail: None,
            counterexample: None,
        }
    }

    pub fn fail(id: impl Into<String>, cx: Counterexample) -> Case {
        Case {
            id: id.into(),
            verdict: Verdict::Fail,
            detail: None,
            counterexample: Some(cx),
        }
    }

    /// A failure or budget verdict from an evaluation error.
    pub fn error(id: impl Into<String>, e: &Error, cx: Counterexample) -> Case {
        let budget = e.is_budget();
        Case {
            id: id.into(),
            verdict: if budget {
                Verdict::Budget
            } else {
                Verdict::Fail
            },
            detail: Some(e.to_string()),
            counterexample: (!budget).then_some(cx),
        }
    }

    pub fn budget(id: impl Into<String>, e: &Error) -> Case {
        Case {
            id: id.into(),
            verdict: Verdict::Budget,
            detail: Some(e.to_string()),
            counterexample: None,
        }
    }

    pub fn detail(mut self, d: impl Into<String>) -> Case {
        self.detail = Some(d.into());
        self
    }
}

/// Parameters of the suites beyond the evaluation context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    /// The membership check runs over all pairs of codes below this in fast mode.
    pub max_code: u64,
    /// ... and below this in literal mode.
    pub literal_max: u64,
    /// Round trips run over all assignments of codes below this.
    pub assignment_max: u64,
    /// Cardinal checks use sets of at most this many members.
    pub card_max: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            max_code: 4096,
            literal_max: 64,
            assignment_max: 256,
            card_max: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportContext {
    #[serde(flatten)]
    pub eval: EvalContext,
    #[serde(flatten)]
    pub params: SuiteParams,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub pass: u64,
    pub fail: u64,
    pub budget: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub context: ReportContext,
    pub cases: Vec<Case>,
    pub totals: Totals,
    /// Counts of `_a` operations by how they were carried out.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stats: Option<crate::eval::EvalStats>,
    /// Seconds since the Unix epoch when the report was made.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<u64>,
}

impl Report {
    pub fn new(
        suite: impl Into<String>,
        ctx: &EvalContext,
        params: &SuiteParams,
        cases: Vec<Case>,
    ) -> Report {
        let mut totals = Totals::default();
        for c in &cases {
            match c.verdict {
                Verdict::Pass => totals.pass += 1,
                Verdict::Fail => totals.fail += 1,
                Verdict::Budget => totals.budget += 1,
            }
        }
        Report {
            suite: suite.into(),
            context: ReportContext {
                eval: ctx.clone(),
                params: params.clone(),
            },
            cases,
            totals,
            stats: None,
            timestamp: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.totals.fail == 0 && self.totals.budget == 0
    }

    /// 0 when every case passes, 1 when any fails, 2 when the only
    /// shortfalls are budget ones.
    pub fn exit_code(&self) -> i32 {
        if self.totals.fail > 0 {
            1
        } else if self.totals.budget > 0 {
            2
        } else {
            0
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    /// Whether every failing case carries a counterexample that fails
    /// again when checked on its own.
    pub fn replays(&self) -> bool {
        self.failures().all(|c| {
            c.counterexample
                .as_ref()
                .is_some_and(|cx| cx.replay(&self.context.eval))
        })
    }

    pub fn stamped(mut self) -> Report {
        self.timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
        self
    }

    /// Several reports as one, case ids prefixed by their suite.
    pub fn merge(
        suite: &str,
        reports: Vec<Report>,
        ctx: &EvalContext,
        params: &SuiteParams,
    ) -> Report {
        let mut cases = Vec::new();
        let mut stats: Option<crate::eval::EvalStats> = None;
        for r in reports {
            if let Some(s) = r.stats {
                let t = stats.get_or_insert_with(Default::default);
                t.literal_ops += s.literal_ops;
                t.fast_ops += s.fast_ops;
                t.literal_fallbacks += s.literal_fallbacks;
            }
            cases.extend(r.cases.into_iter().map(|mut c| {
                c.id = format!("{}/{}", r.suite, c.id);
                c
            }));
        }
        let mut out = Report::new(suite, ctx, params, cases);
        out.stats = stats;
        out
    }

    /// A short summary followed by the cases that did not pass.
    pub fn human(&self) -> String {
        use std::fmt::Write;
        let t = &self.totals;
        let mut s = format!(
            "{}: {} passed, {} failed, {} over budget\n",
            self.suite, t.pass, t.fail, t.budget
        );
        if let Some(st) = &self.stats {
            let _ = writeln!(
                s,
                "  _a operations: {} literal, {} fast, {} literal fallbacks",
                st.literal_ops, st.fast_ops, st.literal_fallbacks
            );
        }
        for c in self.cases.iter().filter(|c| c.verdict != Verdict::Pass) {
            let _ = write!(s, "  {:?} {}", c.verdict, c.id);
            if let Some(d) = &c.detail {
                let _ = write!(s, ": {d}");
            }
            s.push('\n');
            if let Some(cx) = &c.counterexample {
                let _ = writeln!(
                    s,
                    "    counterexample: {}",
                    serde_json::to_string(cx).unwrap_or_default()
                );
            }
        }
        s
    }
}

/// The suites that can be run by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Axioms,
    Opei,
    Theorem6,
    RoundtripAd,
    RoundtripDa,
    RoundtripOa,
    Cardinal,
    Controls,
    All,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Axioms,
        Suite::Opei,
        Suite::Theorem6,
        Suite::RoundtripAd,
        Suite::RoundtripDa,
        Suite::RoundtripOa,
        Suite::Cardinal,
        Suite::Controls,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Opei => "opei",
            Suite::Theorem6 => "theorem6",
            Suite::RoundtripAd => "roundtrip-ad",
            Suite::RoundtripDa => "roundtrip-da",
            Suite::RoundtripOa => "roundtrip-oa",
            Suite::Cardinal => "cardinal",
            Suite::Controls => "controls",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown suite `{s}`")))
    }
}

/// Runs a suite by name. `corpus` replaces the default corpus of the suites
/// that read one.
pub fn run(
    suite: Suite,
    ctx: &EvalContext,
    params: &SuiteParams,
    corpus: Option<&Corpus>,
) -> Result<Report> {
    use crate::interp::InterpMap;
    ctx.validate()?;
    let default = Corpus::default();
    let corpus = corpus.unwrap_or(&default);
    Ok(match suite {
        Suite::Axioms => check_axioms(&corpus.separation, ctx, params)?,
        Suite::Opei => check_opei(&corpus.opei, ctx, params)?,
        Suite::Theorem6 => check_theorem6(ctx, params),
        Suite::RoundtripAd => {
            check_roundtrip(&corpus.set, InterpMap::A, InterpMap::D, ctx, params)?
        }
        Suite::RoundtripDa => {
            check_roundtrip(&corpus.arith, InterpMap::D, InterpMap::A, ctx, params)?
        }
        Suite::RoundtripOa => {
            check_roundtrip(&corpus.arith, InterpMap::O, InterpMap::A, ctx, params)?
        }
        Suite::Cardinal => check_cardinal_model(&corpus.cardinal, ctx, params)?,
        Suite::Controls => check_controls(corpus, ctx, params)?,
        Suite::All => {
            let parts = [
                Suite::Axioms,
                Suite::Opei,
                Suite::Theorem6,
                Suite::RoundtripAd,
                Suite::RoundtripDa,
                Suite::Cardinal,
                Suite::Controls,
            ]
            .into_iter()
            .map(|s| run(s, ctx, params, Some(corpus)))
            .collect::<Result<Vec<_>>>()?;
            Report::merge("all", parts, ctx, params)
        }
    })
}

/// The code of a set, as reports print it.
pub(crate) fn code_str(s: &crate::set::HfSet) -> String {
    encode(s)
        .map(|c| c.to_string())
        .unwrap_or_else(|_| s.to_string())
}
