//! Finite-model evaluation of both languages.
//!
//! Arithmetic formulas are read over the naturals, set formulas over HF
//! sets. Bounded quantifiers range below (or over the members of) their
//! bound; unbounded ones range over a cutoff taken from [`EvalContext`], and
//! verdicts for such formulas only hold at that cutoff. An unbounded
//! quantifier nested under `k` others ranges over `cutoff · 2^k`, so
//! `forall x. exists y. x < y` holds at every cutoff.
//!
//! Formulas are compiled once into a small slot-indexed form. Blocks of
//! numeric quantifiers are searched by labeling with interval contraction,
//! which makes witnesses like the `n` and `m` of the membership formula
//! cheap to find. Setting `prune` to false gives plain enumeration.

mod compile;
pub mod interval;
mod machine;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{ArithMode, LiteralDomain};
use crate::error::{Error, Result};
use crate::logic::{AnyFormula, ArithFormula, Language, SetFormula, Syntax};
use crate::set::{decode_u64, decode_within, Budget, Code, HfSet};

pub(crate) use compile::Cond;
pub use machine::EvalStats;

/// Deliberate faults, for checking that the verification suites can fail.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Faults {
    /// `S_a` applied to the set with this code skips one set ahead.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub successor_skip: Option<u64>,
}

impl Faults {
    pub fn is_empty(&self) -> bool {
        self.successor_skip.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalContext {
    /// Outermost unbounded arithmetic quantifiers range over `0..nat_cutoff`.
    pub nat_cutoff: u64,
    /// Outermost unbounded set quantifiers range over `decode(0..set_cutoff)`.
    pub set_cutoff: u64,
    pub budget: Budget,
    /// Where `+_a`, `×_a` and `Exp_a` may run literally.
    pub literal: LiteralDomain,
    pub mode: ArithMode,
    pub prune: bool,
    #[serde(skip_serializing_if = "Faults::is_empty", default)]
    pub faults: Faults,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext {
            nat_cutoff: 256,
            set_cutoff: 256,
            budget: Budget::default(),
            literal: LiteralDomain::default(),
            mode: ArithMode::Fast,
            prune: true,
            faults: Faults::default(),
        }
    }
}

impl EvalContext {
    pub fn validate(&self) -> Result<()> {
        if self.nat_cutoff == 0 || self.set_cutoff == 0 {
            return Err(Error::Unsupported("cutoffs must be positive".into()));
        }
        Ok(())
    }

    pub fn with_mode(mut self, mode: ArithMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_faults(mut self, faults: Faults) -> Self {
        self.faults = faults;
        self
    }

    pub fn unpruned(mut self) -> Self {
        self.prune = false;
        self
    }
}

/// A value of either language. An arithmetic value is a natural; a set
/// value is a set, possibly held as its code until its members are needed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Val {
    Code(Code),
    Set(HfSet),
}

impl Val {
    pub fn code(&self) -> Result<Code> {
        match self {
            Val::Code(c) => Ok(c.clone()),
            Val::Set(s) => s
                .code()
                .cloned()
                .ok_or_else(|| Error::budget("code of a set", crate::set::MEMO_CODE_BITS)),
        }
    }

    pub fn to_set(&self, budget: &Budget) -> Result<HfSet> {
        match self {
            Val::Set(s) => Ok(s.clone()),
            Val::Code(c) => match c.to_u64() {
                Some(n) if n < 1 << 16 => Ok(decode_u64(n)),
                _ => decode_within(c, budget),
            },
        }
    }

    /// Equality of the denoted objects; the coding is a bijection, so a
    /// code and a set are equal exactly when the set has that code.
    pub fn same(&self, other: &Val) -> bool {
        match (self, other) {
            (Val::Code(a), Val::Code(b)) => a == b,
            (Val::Set(a), Val::Set(b)) => a == b,
            (Val::Code(c), Val::Set(s)) | (Val::Set(s), Val::Code(c)) => s.code() == Some(c),
        }
    }
}

impl fmt::Debug for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Code(c) => write!(f, "{c}"),
            Val::Set(s) => match s.code() {
                Some(c) => write!(f, "#{c}"),
                None => write!(f, "{s}"),
            },
        }
    }
}

impl From<HfSet> for Val {
    fn from(s: HfSet) -> Val {
        Val::Set(s)
    }
}

impl From<Code> for Val {
    fn from(c: Code) -> Val {
        Val::Code(c)
    }
}

impl From<u64> for Val {
    fn from(c: u64) -> Val {
        Val::Code(Code::from(c))
    }
}

/// A formula compiled against a fixed list of free variables.
#[derive(Clone, Debug)]
pub struct Compiled {
    cond: Cond,
    vars: Vec<String>,
    language: Language,
    bounded: bool,
    ctx: EvalContext,
}

impl Compiled {
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn language(&self) -> Language {
        self.language
    }

    /// Whether the verdict is independent of the cutoffs.
    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    pub fn context(&self) -> &EvalContext {
        &self.ctx
    }

    /// Truth value under an assignment in the order of [`Compiled::vars`].
    pub fn eval(&self, vals: &[Val]) -> Result<bool> {
        self.eval_with_stats(vals).map(|(b, _)| b)
    }

    pub fn eval_with_stats(&self, vals: &[Val]) -> Result<(bool, EvalStats)> {
        if vals.len() != self.vars.len() {
            return Err(Error::Unsupported(format!(
                "expected {} values, got {}",
                self.vars.len(),
                vals.len()
            )));
        }
        let m = machine::Machine::new(&self.ctx);
        let mut env = vals.to_vec();
        let b = m.cond(&self.cond, &mut env)?;
        Ok((b, m.stats()))
    }
}

fn check_vars(free: std::collections::BTreeSet<String>, vars: &[String]) -> Result<()> {
    match free.into_iter().find(|v| !vars.contains(v)) {
        Some(v) => Err(Error::Unbound(v)),
        None => Ok(()),
    }
}

pub fn compile_arith(phi: &ArithFormula, vars: &[String], ctx: &EvalContext) -> Result<Compiled> {
    ctx.validate()?;
    check_vars(phi.free_vars(), vars)?;
    Ok(Compiled {
        cond: compile::arith(phi, vars, ctx)?,
        vars: vars.to_vec(),
        language: Language::Arith,
        bounded: phi.is_bounded(),
        ctx: ctx.clone(),
    })
}

pub fn compile_set(psi: &SetFormula, vars: &[String], ctx: &EvalContext) -> Result<Compiled> {
    ctx.validate()?;
    check_vars(psi.free_vars(), vars)?;
    Ok(Compiled {
        cond: compile::set(psi, vars, ctx)?,
        vars: vars.to_vec(),
        language: Language::Set,
        bounded: psi.is_bounded(),
        ctx: ctx.clone(),
    })
}

pub fn compile(phi: &AnyFormula, vars: &[String], ctx: &EvalContext) -> Result<Compiled> {
    match phi {
        AnyFormula::Arith(f) => compile_arith(f, vars, ctx),
        AnyFormula::Set(f) => compile_set(f, vars, ctx),
    }
}

pub type Env<T> = BTreeMap<String, T>;

pub fn eval_arith(phi: &ArithFormula, env: &Env<Code>, ctx: &EvalContext) -> Result<bool> {
    let vars: Vec<String> = env.keys().cloned().collect();
    let vals: Vec<Val> = env.values().cloned().map(Val::Code).collect();
    compile_arith(phi, &vars, ctx)?.eval(&vals)
}

pub fn eval_set(psi: &SetFormula, env: &Env<HfSet>, ctx: &EvalContext) -> Result<bool> {
    let vars: Vec<String> = env.keys().cloned().collect();
    let vals: Vec<Val> = env.values().cloned().map(Val::Set).collect();
    compile_set(psi, &vars, ctx)?.eval(&vals)
}

/// Evaluates a formula of either language; arithmetic values must be
/// naturals and set values may be given either way.
pub fn eval_any(phi: &AnyFormula, env: &Env<Val>, ctx: &EvalContext) -> Result<bool> {
    let vars: Vec<String> = env.keys().cloned().collect();
    let mut vals: Vec<Val> = env.values().cloned().collect();
    if phi.language() == Language::Arith {
        for v in vals.iter_mut() {
            *v = Val::Code(v.code()?);
        }
    }
    compile(phi, &vars, ctx)?.eval(&vals)
}

#[cfg(test)]
mod tests;
