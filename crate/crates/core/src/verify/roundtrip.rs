use super::corpus::Line;
use super::{Case, Counterexample, Report, SuiteParams};
use crate::error::{Error, Result};
use crate::eval::{compile, EvalContext, Val};
use crate::interp::{compose, InterpMap};
use crate::logic::{AnyFormula, Formula};
use crate::set::Code;

/// `(a -> b) & (b -> a)` in the language of both.
pub(crate) fn iff(a: &AnyFormula, b: &AnyFormula) -> AnyFormula {
    fn both<A: Clone, B: Clone>(a: &Formula<A, B>, b: &Formula<A, B>) -> Formula<A, B> {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b.clone(), a.clone()),
        )
    }
    match (a, b) {
        (AnyFormula::Arith(a), AnyFormula::Arith(b)) => AnyFormula::Arith(both(a, b)),
        (AnyFormula::Set(a), AnyFormula::Set(b)) => AnyFormula::Set(both(a, b)),
        _ => unreachable!("round trips return to the source language"),
    }
}

/// Every assignment of values below `bound` to `k` variables, the last
/// variable varying fastest.
pub(crate) fn assignments(k: usize, bound: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = bound.checked_pow(k as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut i| {
        let mut v = vec![0; k];
        for slot in v.iter_mut().rev() {
            *slot = i % bound;
            i /= bound;
        }
        v
    })
}

/// For each corpus formula `φ`, checks `m2(m1(φ))` against `φ` under every
/// assignment of values below `params.assignment_max` to its free variables.
pub fn check_roundtrip(
    corpus: &[Line],
    m1: InterpMap,
    m2: InterpMap,
    ctx: &EvalContext,
    params: &SuiteParams,
) -> Result<Report> {
    if m2.target() != m1.source() {
        return Err(Error::LanguageMismatch(format!(
            "{m1} then {m2} does not return to {} formulas",
            m1.source()
        )));
    }
    let mut cases = Vec::new();
    for line in corpus {
        let phi = line.parse(m1.source())?;
        let back = match compose(m1, m2, &phi) {
            Ok(b) => b,
            Err(e) if e.is_budget() => {
                cases.push(Case::budget(line.id(), &e));
                continue;
            }
            Err(e) => return Err(line.locate(e)),
        };
        cases.push(round_trip(line, &phi, &back, ctx, params.assignment_max)?);
    }
    Ok(Report::new(
        format!("roundtrip-{m1}{m2}"),
        ctx,
        params,
        cases,
    ))
}

fn round_trip(
    line: &Line,
    phi: &AnyFormula,
    back: &AnyFormula,
    ctx: &EvalContext,
    bound: u64,
) -> Result<Case> {
    let vars: Vec<String> = phi.free_vars().into_iter().collect();
    let f = compile(phi, &vars, ctx)?;
    let g = compile(back, &vars, ctx)?;
    let claim = iff(phi, back);
    let cx = |vals: &[u64]| {
        let codes: Vec<Code> = vals.iter().map(|&v| v.into()).collect();
        let env: Vec<(&str, &Code)> = vars.iter().map(String::as_str).zip(&codes).collect();
        Counterexample::formula(phi.language(), &claim, &env, true)
    };
    for vals in assignments(vars.len(), bound) {
        let env: Vec<Val> = vals.iter().map(|&v| Val::from(v)).collect();
        match f.eval(&env).and_then(|a| Ok((a, g.eval(&env)?))) {
            Ok((a, b)) if a == b => {}
            Ok((a, _)) => {
                return Ok(Case::fail(line.id(), cx(&vals)).detail(format!(
                    "`{phi}` is {a} at {vals:?} but its round trip is {}",
                    !a
                )))
            }
            Err(e) => {
                return Ok(Case::error(line.id(), &e, cx(&vals)).detail(format!("{e} at {vals:?}")))
            }
        }
    }
    Ok(Case::pass(line.id()))
}
