use std::collections::HashMap;

use super::corpus::{opei_entries, Line, OpeiBranch, OpeiEntry};
use super::{Case, Counterexample, Report, SuiteParams};
use crate::error::{Error, Result};
use crate::eval::{compile_set, Compiled, EvalContext, Val};
use crate::logic::{parse_set, parse_set_term, Language, SetFormula, SetTerm, Syntax};
use crate::set::{decode_u64, HfSet};

/// Where one point extension induction was seen to go.
enum Outcome {
    /// `Φ(∅)` fails.
    Base,
    /// `Φ(x)` holds and `Φ(x ∪ {z})` does not.
    Step(u64, u64),
    /// The hypothesis holds below the cutoff and so does `Φ`.
    Holds,
    /// The hypothesis holds but `Φ(x)` fails: induction itself broke.
    Broken(u64),
}

/// For each predicate, finds which branch of one point extension induction
/// it takes: steps `x ↦ x ∪ {z}` are tried for `x` and `z` below the set
/// cutoff.
pub fn check_opei(corpus: &[Line], ctx: &EvalContext, params: &SuiteParams) -> Result<Report> {
    let mut cases = Vec::new();
    for e in opei_entries(corpus)? {
        let phi = parse_set(&e.formula).map_err(|err| e.line.locate(err))?;
        if phi.free_vars().into_iter().ne(["x".to_string()]) {
            return Err(e.line.locate(Error::syntax(
                0,
                "an induction predicate has exactly the free variable `x`",
            )));
        }
        cases.push(case(&e, &phi, ctx)?);
    }
    Ok(Report::new("opei", ctx, params, cases))
}

fn holds(c: &Compiled, x: &HfSet) -> Result<bool> {
    c.eval(&[Val::Set(x.clone())])
}

fn outcome(c: &Compiled, n: u64) -> Result<Outcome> {
    if !holds(c, &HfSet::empty())? {
        return Ok(Outcome::Base);
    }
    let below: Vec<bool> = (0..n)
        .map(|x| holds(c, &decode_u64(x)))
        .collect::<Result<_>>()?;
    let mut seen: HashMap<HfSet, bool> = HashMap::new();
    for x in 0..n {
        if !below[x as usize] {
            continue;
        }
        let sx = decode_u64(x);
        for z in 0..n {
            let sz = decode_u64(z);
            if sx.contains(&sz) {
                continue;
            }
            let y = sx.insert(&sz);
            let ok = match y.code_u64() {
                Some(c) if c < n => below[c as usize],
                _ => match seen.get(&y) {
                    Some(&b) => b,
                    None => {
                        let b = holds(c, &y)?;
                        seen.insert(y, b);
                        b
                    }
                },
            };
            if !ok {
                return Ok(Outcome::Step(x, z));
            }
        }
    }
    Ok(match below.iter().position(|b| !b) {
        Some(x) => Outcome::Broken(x as u64),
        None => Outcome::Holds,
    })
}

fn case(e: &OpeiEntry, phi: &SetFormula, ctx: &EvalContext) -> Result<Case> {
    let id = e.line.id();
    let c = compile_set(phi, &["x".to_string()], ctx)?;
    let step = format!("exists x. exists z. ({phi}) & !({})", extended(phi));
    let hyp_fails = format!("!({}) | {step}", at_empty(phi));
    let claim = |f: &str, expected| Counterexample::formula(Language::Set, f, &[], expected);
    let out = match outcome(&c, ctx.set_cutoff) {
        Ok(o) => o,
        Err(err) => return Ok(Case::error(id, &err, claim(&e.formula, true))),
    };
    Ok(match (out, e.expected) {
        (Outcome::Base, OpeiBranch::HypothesisFails) => {
            Case::pass(id).detail("hypothesis fails at 0e")
        }
        (Outcome::Step(x, z), OpeiBranch::HypothesisFails) => {
            Case::pass(id).detail(format!("hypothesis fails at x = #{x}, z = #{z}"))
        }
        (Outcome::Holds, OpeiBranch::Holds) => {
            Case::pass(id).detail("hypothesis and conclusion hold")
        }
        (Outcome::Base, OpeiBranch::Holds) => {
            Case::fail(id, claim(&at_empty(phi), true)).detail("hypothesis fails at 0e")
        }
        (Outcome::Step(x, z), OpeiBranch::Holds) => {
            let (cx, cz) = (x.into(), z.into());
            let f = format!("({phi}) -> ({})", extended(phi));
            Case::fail(
                id,
                Counterexample::formula(Language::Set, f, &[("x", &cx), ("z", &cz)], true),
            )
            .detail(format!("hypothesis fails at x = #{x}, z = #{z}"))
        }
        (Outcome::Holds, OpeiBranch::HypothesisFails) => {
            Case::fail(id, claim(&hyp_fails, true)).detail("hypothesis holds below the cutoff")
        }
        (Outcome::Broken(x), _) => {
            let cx = x.into();
            Case::fail(
                id,
                Counterexample::formula(Language::Set, phi, &[("x", &cx)], true),
            )
            .detail(format!("hypothesis holds but the predicate fails at #{x}"))
        }
    })
}

/// `Φ(x ∪ {z})`.
fn extended(phi: &SetFormula) -> SetFormula {
    let t = parse_set_term("U(pair(x, pair(z, z)))").expect("term parses");
    phi.substitute("x", &t)
}

/// `Φ(∅)`.
fn at_empty(phi: &SetFormula) -> String {
    phi.substitute("x", &SetTerm::Empty).to_string()
}
