//! The four interpretations between the languages, as formula translators.
//!
//! * `a` reads sets as their codes: membership becomes the bit formula, the
//!   set operations become their code-level counterparts (`P` ↦ `pow`,
//!   `S_a` ↦ `sa`, ...).
//! * `d` reads naturals along the Ackermann order: `S`, `+`, `*`, `exp`
//!   and `<` become `S_a`, `+_a`, `*_a`, `exp_a` and `<_a`.
//! * `c` reads naturals as cardinalities: `=` and `<` become `=_c` and
//!   `<_c`, the operations tagged union, product and function space.
//! * `o` reads naturals as von Neumann ordinals, relativizing every
//!   quantifier to `Ord`.
//!
//! `a` and `d` are mutually inverse up to equivalence; `o` is not inverse to
//! `a`, which the round-trip suite shows.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{
    fresh_var, AnyFormula, ArithAtom, ArithFormula, ArithTerm, Formula, Func, Language, Pred,
    Quantifier, SetAtom, SetBound, SetFormula, SetTerm, Syntax, TermSyntax,
};
use crate::set::ordinal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InterpMap {
    A,
    C,
    O,
    D,
}

impl InterpMap {
    pub const ALL: [InterpMap; 4] = [InterpMap::A, InterpMap::C, InterpMap::O, InterpMap::D];

    pub fn source(self) -> Language {
        match self {
            InterpMap::A => Language::Set,
            _ => Language::Arith,
        }
    }

    pub fn target(self) -> Language {
        match self {
            InterpMap::A => Language::Arith,
            _ => Language::Set,
        }
    }
}

impl fmt::Display for InterpMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InterpMap::A => "a",
            InterpMap::C => "c",
            InterpMap::O => "o",
            InterpMap::D => "d",
        })
    }
}

impl FromStr for InterpMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<InterpMap> {
        InterpMap::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown map `{s}` (expected a, c, o or d)")))
    }
}

/// Largest numeral expanded into `S_a` applications or built as an ordinal.
pub const MAX_NUMERAL: u64 = 1024;

/// Rebuilds a formula over new atoms and bounds; the connectives pass
/// through unchanged.
fn map_formula<A, B, C, D>(
    f: &Formula<A, B>,
    atom: &mut impl FnMut(&A) -> Result<Formula<C, D>>,
    quant: &mut impl FnMut(Quantifier, &str, &Option<B>, Formula<C, D>) -> Result<Formula<C, D>>,
    dom: &impl Fn(&str) -> Formula<C, D>,
) -> Result<Formula<C, D>> {
    Ok(match f {
        Formula::Atom(a) => atom(a)?,
        Formula::Not(a) => Formula::not(map_formula(a, atom, quant, dom)?),
        Formula::And(a, b) => Formula::and(
            map_formula(a, atom, quant, dom)?,
            map_formula(b, atom, quant, dom)?,
        ),
        Formula::Or(a, b) => Formula::or(
            map_formula(a, atom, quant, dom)?,
            map_formula(b, atom, quant, dom)?,
        ),
        Formula::Implies(a, b) => Formula::implies(
            map_formula(a, atom, quant, dom)?,
            map_formula(b, atom, quant, dom)?,
        ),
        Formula::Quant {
            q,
            var,
            bound,
            body,
        } => {
            let body = map_formula(body, atom, quant, dom)?;
            quant(*q, var, bound, body)?
        }
        Formula::Dom(v) => dom(v),
    })
}

/// `∀v (guard → body)` or `∃v (guard ∧ body)` with `v` ranging as given.
fn guarded<A, B>(
    q: Quantifier,
    var: String,
    bound: Option<B>,
    guard: Formula<A, B>,
    body: Formula<A, B>,
) -> Formula<A, B> {
    match q {
        Quantifier::Forall => Formula::forall(var, bound, Formula::implies(guard, body)),
        Quantifier::Exists => Formula::exists(var, bound, Formula::and(guard, body)),
    }
}

/// Renames `var` in `body` when the bound term mentions it, so that the
/// bound keeps referring to the outer variable once moved into a guard.
fn unclash<S: Syntax>(var: &str, bound_fv: &BTreeSet<String>, body: S) -> (String, S) {
    if !bound_fv.contains(var) {
        return (var.to_string(), body);
    }
    let mut avoid = bound_fv.clone();
    body.names_into(&mut avoid);
    let fresh = fresh_var(var, &avoid);
    let body = body.substitute(var, &S::Term::var(&fresh));
    (fresh, body)
}

fn small_numeral(n: &crate::set::Code) -> Result<u64> {
    n.to_u64().filter(|&k| k <= MAX_NUMERAL).ok_or_else(|| {
        Error::Unsupported(format!(
            "numeral {n} is too large to translate (limit {MAX_NUMERAL})"
        ))
    })
}

fn arity(f: Func, n: usize) -> Result<()> {
    if f.arity() == n {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{} takes {} arguments, got {n}",
            f.set_name(),
            f.arity()
        )))
    }
}

/// `(∃n < y)(∃m < 2^x)[y = 2^(x+1)·n + 2^x + m]`: bit `x` of `y` is set.
/// The witnesses are named to avoid the variables of `x` and `y`.
pub fn bit_formula(x: ArithTerm, y: ArithTerm) -> ArithFormula {
    let mut avoid = x.free_vars();
    avoid.extend(y.free_vars());
    let n = fresh_var("n", &avoid);
    avoid.insert(n.clone());
    let m = fresh_var("m", &avoid);
    let two = || ArithTerm::num(2u8);
    let pow = |e: ArithTerm| ArithTerm::Exp(Box::new(two()), Box::new(e));
    let rhs = ArithTerm::Add(
        Box::new(ArithTerm::Add(
            Box::new(ArithTerm::Mul(
                Box::new(pow(ArithTerm::Add(
                    Box::new(x.clone()),
                    Box::new(ArithTerm::num(1u8)),
                ))),
                Box::new(ArithTerm::Var(n.clone())),
            )),
            Box::new(pow(x.clone())),
        )),
        Box::new(ArithTerm::Var(m.clone())),
    );
    Formula::exists(
        n,
        Some(y.clone()),
        Formula::exists(m, Some(pow(x)), Formula::atom(ArithAtom::Eq(y, rhs))),
    )
}

fn term_a(t: &SetTerm) -> Result<ArithTerm> {
    Ok(match t {
        SetTerm::Var(v) => ArithTerm::Var(v.clone()),
        SetTerm::Empty => ArithTerm::Zero,
        SetTerm::Lit(s) => match s.code() {
            Some(c) if c.is_zero() => ArithTerm::Zero,
            Some(c) => ArithTerm::Lit(c.clone()),
            None => {
                return Err(Error::budget(
                    format!("the code of a {}-member literal", s.len()),
                    crate::set::MEMO_CODE_BITS,
                ))
            }
        },
        SetTerm::Call(f, args) => {
            arity(*f, args.len())?;
            ArithTerm::Call(*f, args.iter().map(term_a).collect::<Result<_>>()?)
        }
        SetTerm::Sep { var, bound, body } => ArithTerm::Sep {
            var: var.clone(),
            bound: Box::new(term_a(bound)?),
            body: Box::new(translate_a(body)?),
        },
    })
}

/// Sets to naturals through the Ackermann coding.
pub fn translate_a(psi: &SetFormula) -> Result<ArithFormula> {
    map_formula(
        psi,
        &mut |a| {
            Ok(match a {
                SetAtom::Mem(x, y) => bit_formula(term_a(x)?, term_a(y)?),
                SetAtom::Eq(x, y) => Formula::atom(ArithAtom::Eq(term_a(x)?, term_a(y)?)),
                SetAtom::Pred(p, args) => Formula::atom(ArithAtom::Pred(
                    *p,
                    args.iter().map(term_a).collect::<Result<_>>()?,
                )),
            })
        },
        &mut |q, var, bound, body| {
            Ok(match bound {
                None => Formula::Quant {
                    q,
                    var: var.to_string(),
                    bound: None,
                    body: Box::new(body),
                },
                Some(b) => {
                    let t = term_a(b.term())?;
                    let (var, body) = unclash(var, &t.free_vars(), body);
                    let v = ArithTerm::Var(var.clone());
                    let guard = match b {
                        SetBound::In(_) => bit_formula(v, t.clone()),
                        SetBound::BelowA(_) => {
                            Formula::atom(ArithAtom::Pred(Pred::LessA, vec![v, t.clone()]))
                        }
                    };
                    guarded(q, var, Some(t), guard, body)
                }
            })
        },
        &|v| Formula::Dom(v.to_string()),
    )
}

fn term_d(t: &ArithTerm) -> Result<SetTerm> {
    let call = |f: Func, args: Vec<SetTerm>| SetTerm::Call(f, args);
    Ok(match t {
        ArithTerm::Var(v) => SetTerm::Var(v.clone()),
        ArithTerm::Zero => SetTerm::Empty,
        ArithTerm::Lit(n) => {
            let k = small_numeral(n)?;
            (0..k).fold(SetTerm::Empty, |acc, _| call(Func::SuccA, vec![acc]))
        }
        ArithTerm::Succ(a) => call(Func::SuccA, vec![term_d(a)?]),
        ArithTerm::Add(a, b) => call(Func::AddA, vec![term_d(a)?, term_d(b)?]),
        ArithTerm::Mul(a, b) => call(Func::MulA, vec![term_d(a)?, term_d(b)?]),
        ArithTerm::Exp(a, b) => call(Func::ExpA, vec![term_d(a)?, term_d(b)?]),
        ArithTerm::Call(f, args) => {
            arity(*f, args.len())?;
            call(*f, args.iter().map(term_d).collect::<Result<_>>()?)
        }
        ArithTerm::Sep { var, bound, body } => SetTerm::Sep {
            var: var.clone(),
            bound: Box::new(term_d(bound)?),
            body: Box::new(translate_d(body)?),
        },
    })
}

/// Naturals to sets along the Ackermann order.
pub fn translate_d(phi: &ArithFormula) -> Result<SetFormula> {
    map_formula(
        phi,
        &mut |a| {
            Ok(Formula::atom(match a {
                ArithAtom::Eq(x, y) => SetAtom::Eq(term_d(x)?, term_d(y)?),
                ArithAtom::Lt(x, y) => SetAtom::Pred(Pred::LessA, vec![term_d(x)?, term_d(y)?]),
                ArithAtom::Pred(p, args) => {
                    SetAtom::Pred(*p, args.iter().map(term_d).collect::<Result<_>>()?)
                }
            }))
        },
        &mut |q, var, bound, body| {
            Ok(Formula::Quant {
                q,
                var: var.to_string(),
                bound: bound
                    .as_ref()
                    .map(term_d)
                    .transpose()?
                    .map(SetBound::BelowA),
                body: Box::new(body),
            })
        },
        &|v| Formula::Dom(v.to_string()),
    )
}

fn numeral_ordinal(t: &ArithTerm) -> Result<Option<SetTerm>> {
    match t.as_numeral() {
        Some(0) => Ok(Some(SetTerm::Empty)),
        Some(k) if k <= MAX_NUMERAL => Ok(Some(SetTerm::Lit(ordinal(k as usize)))),
        Some(k) => Err(Error::Unsupported(format!(
            "numeral {k} is too large to translate (limit {MAX_NUMERAL})"
        ))),
        None => Ok(None),
    }
}

fn extended(what: &str, map: InterpMap) -> Error {
    Error::Unsupported(format!("{what} has no translation under map {map}"))
}

/// `x ∪ {x}`.
fn union_successor(x: SetTerm) -> SetTerm {
    let single = SetTerm::Call(Func::Pair, vec![x.clone(), x.clone()]);
    SetTerm::Call(
        Func::SumSet,
        vec![SetTerm::Call(Func::Pair, vec![x, single])],
    )
}

fn term_c(t: &ArithTerm) -> Result<SetTerm> {
    if let Some(lit) = numeral_ordinal(t)? {
        return Ok(lit);
    }
    let bin = |f: Func, a: &ArithTerm, b: &ArithTerm| {
        Ok::<_, Error>(SetTerm::Call(f, vec![term_c(a)?, term_c(b)?]))
    };
    match t {
        ArithTerm::Var(v) => Ok(SetTerm::Var(v.clone())),
        ArithTerm::Succ(a) => Ok(union_successor(term_c(a)?)),
        ArithTerm::Add(a, b) => bin(Func::CardAdd, a, b),
        ArithTerm::Mul(a, b) => bin(Func::Product, a, b),
        ArithTerm::Exp(a, b) => bin(Func::FnSpace, a, b),
        ArithTerm::Call(f, _) => Err(extended(f.arith_name(), InterpMap::C)),
        ArithTerm::Sep { .. } => Err(extended("sepc", InterpMap::C)),
        ArithTerm::Zero | ArithTerm::Lit(_) => unreachable!("numerals handled above"),
    }
}

/// Naturals to sets as cardinalities.
pub fn translate_c(phi: &ArithFormula) -> Result<SetFormula> {
    map_formula(
        phi,
        &mut |a| {
            Ok(Formula::atom(match a {
                ArithAtom::Eq(x, y) => SetAtom::Pred(Pred::CardEq, vec![term_c(x)?, term_c(y)?]),
                ArithAtom::Lt(x, y) => SetAtom::Pred(Pred::CardLt, vec![term_c(x)?, term_c(y)?]),
                ArithAtom::Pred(p, _) => return Err(extended(p.arith_name(), InterpMap::C)),
            }))
        },
        &mut |q, var, bound, body| {
            Ok(match bound {
                None => Formula::Quant {
                    q,
                    var: var.to_string(),
                    bound: None,
                    body: Box::new(body),
                },
                // Every cardinal below |t| has a representative among the
                // subsets of t.
                Some(b) => {
                    let t = term_c(b)?;
                    let (var, body) = unclash(var, &t.free_vars(), body);
                    let guard = Formula::atom(SetAtom::Pred(
                        Pred::CardLt,
                        vec![SetTerm::Var(var.clone()), t.clone()],
                    ));
                    let range = SetBound::In(SetTerm::Call(Func::Power, vec![t]));
                    guarded(q, var, Some(range), guard, body)
                }
            })
        },
        &|v| Formula::Dom(v.to_string()),
    )
}

fn term_o(t: &ArithTerm) -> Result<SetTerm> {
    if let Some(lit) = numeral_ordinal(t)? {
        return Ok(lit);
    }
    let bin = |f: Func, a: &ArithTerm, b: &ArithTerm| {
        Ok::<_, Error>(SetTerm::Call(f, vec![term_o(a)?, term_o(b)?]))
    };
    match t {
        ArithTerm::Var(v) => Ok(SetTerm::Var(v.clone())),
        ArithTerm::Succ(a) => Ok(SetTerm::Call(
            Func::OrdAdd,
            vec![term_o(a)?, SetTerm::Lit(ordinal(1))],
        )),
        ArithTerm::Add(a, b) => bin(Func::OrdAdd, a, b),
        ArithTerm::Mul(a, b) => bin(Func::OrdMul, a, b),
        ArithTerm::Exp(a, b) => bin(Func::OrdExp, a, b),
        ArithTerm::Call(f, _) => Err(extended(f.arith_name(), InterpMap::O)),
        ArithTerm::Sep { .. } => Err(extended("sepc", InterpMap::O)),
        ArithTerm::Zero | ArithTerm::Lit(_) => unreachable!("numerals handled above"),
    }
}

fn is_ord(v: &str) -> SetFormula {
    Formula::atom(SetAtom::Pred(
        Pred::IsOrd,
        vec![SetTerm::Var(v.to_string())],
    ))
}

/// Naturals to sets as von Neumann ordinals.
pub fn translate_o(phi: &ArithFormula) -> Result<SetFormula> {
    map_formula(
        phi,
        &mut |a| {
            Ok(Formula::atom(match a {
                ArithAtom::Eq(x, y) => SetAtom::Eq(term_o(x)?, term_o(y)?),
                ArithAtom::Lt(x, y) => SetAtom::Mem(term_o(x)?, term_o(y)?),
                ArithAtom::Pred(p, _) => return Err(extended(p.arith_name(), InterpMap::O)),
            }))
        },
        &mut |q, var, bound, body| {
            Ok(match bound {
                None => guarded(q, var.to_string(), None, is_ord(var), body),
                // The members of an ordinal are ordinals.
                Some(t) => Formula::Quant {
                    q,
                    var: var.to_string(),
                    bound: Some(SetBound::In(term_o(t)?)),
                    body: Box::new(body),
                },
            })
        },
        &is_ord,
    )
}

pub fn translate(map: InterpMap, phi: &AnyFormula) -> Result<AnyFormula> {
    match (map, phi) {
        (InterpMap::A, AnyFormula::Set(f)) => translate_a(f).map(AnyFormula::Arith),
        (InterpMap::C, AnyFormula::Arith(f)) => translate_c(f).map(AnyFormula::Set),
        (InterpMap::O, AnyFormula::Arith(f)) => translate_o(f).map(AnyFormula::Set),
        (InterpMap::D, AnyFormula::Arith(f)) => translate_d(f).map(AnyFormula::Set),
        _ => Err(Error::LanguageMismatch(format!(
            "map {map} translates {} formulas, got a{} {} formula",
            map.source(),
            if phi.language() == Language::Arith {
                "n"
            } else {
                ""
            },
            phi.language()
        ))),
    }
}

/// `m2(m1(φ))`.
pub fn compose(m1: InterpMap, m2: InterpMap, phi: &AnyFormula) -> Result<AnyFormula> {
    if m1.target() != m2.source() {
        return Err(Error::LanguageMismatch(format!(
            "map {m1} produces {} formulas but map {m2} translates {} formulas",
            m1.target(),
            m2.source()
        )));
    }
    translate(m2, &translate(m1, phi)?)
}

#[cfg(test)]
mod tests;
