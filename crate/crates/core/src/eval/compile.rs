//! Lowering of both languages to one evaluation form. Variables become slot
//! indices (binding depth), closed subterms are folded to constants.

use super::machine::Machine;
use super::{EvalContext, Val};
use crate::error::{Error, Result};
use crate::logic::{
    ArithAtom, ArithFormula, ArithTerm, Formula, Func, Pred, Quantifier, SetAtom, SetBound,
    SetFormula, SetTerm,
};
use crate::set::{Code, HfSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Op {
    Succ,
    Add,
    Mul,
    Exp,
    /// A set operation read on codes.
    Code(Func),
    Set(Func),
}

#[derive(Clone, Debug)]
pub(crate) enum Term {
    Slot(usize),
    Const(Val),
    App {
        op: Op,
        args: Box<[Term]>,
        deps: u128,
    },
    Sep {
        on_sets: bool,
        slot: usize,
        bound: Box<Term>,
        body: Box<Cond>,
        deps: u128,
    },
}

impl Term {
    /// Bit mask of the free slots.
    pub fn deps(&self) -> u128 {
        match self {
            Term::Slot(i) => 1 << i,
            Term::Const(_) => 0,
            Term::App { deps, .. } | Term::Sep { deps, .. } => *deps,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Range {
    /// Naturals (or the sets so coded) below the value of the term.
    Below(Term),
    Members(Term),
    Cutoff(u64),
}

#[derive(Clone, Debug)]
pub(crate) enum Cond {
    True,
    Eq(Term, Term),
    /// Order of naturals.
    Lt(Term, Term),
    /// The Ackermann order, decided on the sets.
    LessA(Term, Term),
    Mem(Term, Term),
    Card(Pred, Term, Term),
    IsOrd(Term),
    Not(Box<Cond>),
    And(Box<Cond>, Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
    Implies(Box<Cond>, Box<Cond>),
    Quant {
        q: Quantifier,
        slot: usize,
        range: Range,
        body: Box<Cond>,
    },
}

fn free_slots(c: &Cond) -> u128 {
    match c {
        Cond::True => 0,
        Cond::Eq(a, b)
        | Cond::Lt(a, b)
        | Cond::LessA(a, b)
        | Cond::Mem(a, b)
        | Cond::Card(_, a, b) => a.deps() | b.deps(),
        Cond::IsOrd(a) => a.deps(),
        Cond::Not(a) => free_slots(a),
        Cond::And(a, b) | Cond::Or(a, b) | Cond::Implies(a, b) => free_slots(a) | free_slots(b),
        Cond::Quant {
            slot, range, body, ..
        } => {
            let r = match range {
                Range::Below(t) | Range::Members(t) => t.deps(),
                Range::Cutoff(_) => 0,
            };
            r | (free_slots(body) & !(1u128 << slot))
        }
    }
}

const MAX_DEPTH: usize = 127;

struct Lower<'c> {
    scope: Vec<String>,
    /// Unbounded quantifiers around the current position.
    unbounded: u32,
    ctx: &'c EvalContext,
    folder: Machine<'c>,
}

impl<'c> Lower<'c> {
    fn new(vars: &[String], ctx: &'c EvalContext) -> Result<Lower<'c>> {
        if vars.len() > MAX_DEPTH {
            return Err(Error::Unsupported("too many variables".into()));
        }
        Ok(Lower {
            scope: vars.to_vec(),
            unbounded: 0,
            ctx,
            folder: Machine::new(ctx),
        })
    }

    fn slot(&self, v: &str) -> Result<Term> {
        self.scope
            .iter()
            .rposition(|s| s == v)
            .map(Term::Slot)
            .ok_or_else(|| Error::Unbound(v.to_string()))
    }

    fn bind(&mut self, v: &str) -> Result<usize> {
        if self.scope.len() >= MAX_DEPTH {
            return Err(Error::Unsupported("quantifiers nested too deeply".into()));
        }
        self.scope.push(v.to_string());
        Ok(self.scope.len() - 1)
    }

    fn app(&self, op: Op, args: Vec<Term>) -> Term {
        if args.iter().all(|a| matches!(a, Term::Const(_))) {
            let vals: Vec<Val> = args
                .iter()
                .map(|a| match a {
                    Term::Const(v) => v.clone(),
                    _ => unreachable!(),
                })
                .collect();
            // Left in place on failure; the error resurfaces only if the
            // term is actually reached.
            if let Ok(v) = self.folder.apply(op, &vals) {
                return Term::Const(v);
            }
        }
        let deps = args.iter().fold(0, |m, a| m | a.deps());
        Term::App {
            op,
            args: args.into_boxed_slice(),
            deps,
        }
    }

    fn connective<A, B>(
        &mut self,
        f: &Formula<A, B>,
        atom: &mut impl FnMut(&mut Self, &A) -> Result<Cond>,
        range: &mut impl FnMut(&mut Self, &Option<B>) -> Result<Range>,
    ) -> Result<Cond> {
        Ok(match f {
            Formula::Atom(a) => atom(self, a)?,
            Formula::Dom(v) => {
                self.slot(v)?;
                Cond::True
            }
            Formula::Not(a) => Cond::Not(Box::new(self.connective(a, atom, range)?)),
            Formula::And(a, b) => Cond::And(
                Box::new(self.connective(a, atom, range)?),
                Box::new(self.connective(b, atom, range)?),
            ),
            Formula::Or(a, b) => Cond::Or(
                Box::new(self.connective(a, atom, range)?),
                Box::new(self.connective(b, atom, range)?),
            ),
            Formula::Implies(a, b) => Cond::Implies(
                Box::new(self.connective(a, atom, range)?),
                Box::new(self.connective(b, atom, range)?),
            ),
            Formula::Quant {
                q,
                var,
                bound,
                body,
            } => {
                let r = range(self, bound)?;
                let slot = self.bind(var)?;
                let nested = matches!(r, Range::Cutoff(_));
                self.unbounded += u32::from(nested);
                let body = self.connective(body, atom, range);
                self.unbounded -= u32::from(nested);
                self.scope.pop();
                Cond::Quant {
                    q: *q,
                    slot,
                    range: r,
                    body: Box::new(body?),
                }
            }
        })
    }

    fn sep(
        &mut self,
        on_sets: bool,
        bound: Term,
        var: &str,
        body: impl FnOnce(&mut Self) -> Result<Cond>,
    ) -> Result<Term> {
        let slot = self.bind(var)?;
        let body = body(self);
        self.scope.pop();
        let body = body?;
        let deps = bound.deps() | (free_slots(&body) & !(1u128 << slot));
        Ok(Term::Sep {
            on_sets,
            slot,
            bound: Box::new(bound),
            body: Box::new(body),
            deps,
        })
    }

    fn arith_term(&mut self, t: &ArithTerm) -> Result<Term> {
        Ok(match t {
            ArithTerm::Var(v) => self.slot(v)?,
            ArithTerm::Zero => Term::Const(Val::Code(Code::from(0u8))),
            ArithTerm::Lit(n) => Term::Const(Val::Code(n.clone())),
            ArithTerm::Succ(a) => {
                let a = self.arith_term(a)?;
                self.app(Op::Succ, vec![a])
            }
            ArithTerm::Add(a, b) => self.arith_bin(Op::Add, a, b)?,
            ArithTerm::Mul(a, b) => self.arith_bin(Op::Mul, a, b)?,
            ArithTerm::Exp(a, b) => self.arith_bin(Op::Exp, a, b)?,
            ArithTerm::Call(f, args) => {
                arity(f.arity(), args.len(), f.arith_name())?;
                let args = args
                    .iter()
                    .map(|a| self.arith_term(a))
                    .collect::<Result<Vec<_>>>()?;
                self.app(Op::Code(*f), args)
            }
            ArithTerm::Sep { var, bound, body } => {
                let bound = self.arith_term(bound)?;
                self.sep(false, bound, var, |l| l.arith_formula(body))?
            }
        })
    }

    fn arith_bin(&mut self, op: Op, a: &ArithTerm, b: &ArithTerm) -> Result<Term> {
        let a = self.arith_term(a)?;
        let b = self.arith_term(b)?;
        Ok(self.app(op, vec![a, b]))
    }

    /// The range of an unbounded quantifier: the cutoff, doubled for each
    /// unbounded quantifier it sits under, so that inner variables can
    /// reach past the values of outer ones.
    fn cutoff(&self, base: u64) -> Range {
        Range::Cutoff(
            base.checked_shl(self.unbounded)
                .filter(|c| c >> self.unbounded == base)
                .unwrap_or(u64::MAX),
        )
    }

    fn arith_formula(&mut self, f: &ArithFormula) -> Result<Cond> {
        let cutoff = self.ctx.nat_cutoff;
        self.connective(
            f,
            &mut |l: &mut Self, a: &ArithAtom| {
                Ok(match a {
                    ArithAtom::Eq(x, y) => Cond::Eq(l.arith_term(x)?, l.arith_term(y)?),
                    ArithAtom::Lt(x, y) => Cond::Lt(l.arith_term(x)?, l.arith_term(y)?),
                    ArithAtom::Pred(p, args) => {
                        arity(p.arity(), args.len(), p.arith_name())?;
                        let mut args = args
                            .iter()
                            .map(|t| l.arith_term(t))
                            .collect::<Result<Vec<_>>>()?;
                        pred(*p, &mut args)
                    }
                })
            },
            &mut |l: &mut Self, b: &Option<ArithTerm>| {
                Ok(match b {
                    Some(t) => Range::Below(l.arith_term(t)?),
                    None => l.cutoff(cutoff),
                })
            },
        )
    }

    fn set_term(&mut self, t: &SetTerm) -> Result<Term> {
        Ok(match t {
            SetTerm::Var(v) => self.slot(v)?,
            SetTerm::Empty => Term::Const(Val::Set(HfSet::empty())),
            SetTerm::Lit(s) => Term::Const(Val::Set(s.clone())),
            SetTerm::Call(f, args) => {
                arity(f.arity(), args.len(), f.set_name())?;
                let args = args
                    .iter()
                    .map(|a| self.set_term(a))
                    .collect::<Result<Vec<_>>>()?;
                self.app(Op::Set(*f), args)
            }
            SetTerm::Sep { var, bound, body } => {
                let bound = self.set_term(bound)?;
                self.sep(true, bound, var, |l| l.set_formula(body))?
            }
        })
    }

    fn set_formula(&mut self, f: &SetFormula) -> Result<Cond> {
        let cutoff = self.ctx.set_cutoff;
        self.connective(
            f,
            &mut |l: &mut Self, a: &SetAtom| {
                Ok(match a {
                    SetAtom::Mem(x, y) => Cond::Mem(l.set_term(x)?, l.set_term(y)?),
                    SetAtom::Eq(x, y) => Cond::Eq(l.set_term(x)?, l.set_term(y)?),
                    SetAtom::Pred(p, args) => {
                        arity(p.arity(), args.len(), p.set_name())?;
                        let mut args = args
                            .iter()
                            .map(|t| l.set_term(t))
                            .collect::<Result<Vec<_>>>()?;
                        pred(*p, &mut args)
                    }
                })
            },
            &mut |l: &mut Self, b: &Option<SetBound>| {
                Ok(match b {
                    Some(SetBound::In(t)) => Range::Members(l.set_term(t)?),
                    Some(SetBound::BelowA(t)) => Range::Below(l.set_term(t)?),
                    None => l.cutoff(cutoff),
                })
            },
        )
    }
}

fn arity(want: usize, got: usize, name: &str) -> Result<()> {
    if want == got {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "`{name}` takes {want} arguments, got {got}"
        )))
    }
}

fn pred(p: Pred, args: &mut Vec<Term>) -> Cond {
    let b = args.pop().expect("arity checked");
    if p == Pred::IsOrd {
        return Cond::IsOrd(b);
    }
    let a = args.pop().expect("arity checked");
    match p {
        Pred::LessA => Cond::LessA(a, b),
        _ => Cond::Card(p, a, b),
    }
}

pub(crate) fn arith(f: &ArithFormula, vars: &[String], ctx: &EvalContext) -> Result<Cond> {
    Lower::new(vars, ctx)?.arith_formula(f)
}

pub(crate) fn set(f: &SetFormula, vars: &[String], ctx: &EvalContext) -> Result<Cond> {
    Lower::new(vars, ctx)?.set_formula(f)
}
