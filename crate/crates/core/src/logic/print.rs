//! Canonical printing. The output parses back to the same tree.

use std::fmt::{self, Display, Formatter};

use super::{ArithAtom, ArithTerm, Formula, Func, Pred, Quantifier, SetAtom, SetBound, SetTerm};
use crate::set::HfSet;

/// How a quantifier bound is written after the bound variable.
pub trait BoundSyntax {
    fn fmt_bound(&self, f: &mut Formatter<'_>) -> fmt::Result;
}

impl BoundSyntax for ArithTerm {
    fn fmt_bound(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, " < {self}")
    }
}

impl BoundSyntax for SetBound {
    fn fmt_bound(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            SetBound::In(t) => write!(f, " in {t}"),
            SetBound::BelowA(t) => write!(f, " <_a {t}"),
        }
    }
}

fn formula_prec<A, B>(phi: &Formula<A, B>) -> u8 {
    match phi {
        Formula::Quant { .. } => 0,
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Not(_) | Formula::Atom(_) | Formula::Dom(_) => 4,
    }
}

fn fmt_formula<A: Display, B: BoundSyntax>(
    phi: &Formula<A, B>,
    min: u8,
    f: &mut Formatter<'_>,
) -> fmt::Result {
    let paren = formula_prec(phi) < min;
    if paren {
        f.write_str("(")?;
    }
    match phi {
        Formula::Atom(a) => a.fmt(f)?,
        Formula::Dom(v) => write!(f, "Dom({v})")?,
        Formula::Not(a) => {
            f.write_str("!")?;
            fmt_formula(a, 4, f)?;
        }
        Formula::And(a, b) => {
            fmt_formula(a, 3, f)?;
            f.write_str(" & ")?;
            fmt_formula(b, 4, f)?;
        }
        Formula::Or(a, b) => {
            fmt_formula(a, 2, f)?;
            f.write_str(" | ")?;
            fmt_formula(b, 3, f)?;
        }
        Formula::Implies(a, b) => {
            fmt_formula(a, 2, f)?;
            f.write_str(" -> ")?;
            fmt_formula(b, 1, f)?;
        }
        Formula::Quant {
            q,
            var,
            bound,
            body,
        } => {
            f.write_str(match q {
                Quantifier::Forall => "forall ",
                Quantifier::Exists => "exists ",
            })?;
            f.write_str(var)?;
            if let Some(b) = bound {
                b.fmt_bound(f)?;
            }
            f.write_str(". ")?;
            fmt_formula(body, 0, f)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

impl<A: Display, B: BoundSyntax> Display for Formula<A, B> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        fmt_formula(self, 0, f)
    }
}

fn arith_prec(t: &ArithTerm) -> u8 {
    match t {
        ArithTerm::Add(..) => 1,
        ArithTerm::Mul(..) => 2,
        _ => 3,
    }
}

fn fmt_arith(t: &ArithTerm, min: u8, f: &mut Formatter<'_>) -> fmt::Result {
    let paren = arith_prec(t) < min;
    if paren {
        f.write_str("(")?;
    }
    match t {
        ArithTerm::Var(v) => f.write_str(v)?,
        ArithTerm::Zero => f.write_str("0")?,
        ArithTerm::Lit(n) => write!(f, "{n}")?,
        ArithTerm::Succ(a) => write!(f, "S({a})")?,
        ArithTerm::Add(a, b) => {
            fmt_arith(a, 1, f)?;
            f.write_str(" + ")?;
            fmt_arith(b, 2, f)?;
        }
        ArithTerm::Mul(a, b) => {
            fmt_arith(a, 2, f)?;
            f.write_str(" * ")?;
            fmt_arith(b, 3, f)?;
        }
        ArithTerm::Exp(a, b) => write!(f, "exp({a}, {b})")?,
        ArithTerm::Call(func, args) => {
            f.write_str(func.arith_name())?;
            fmt_args(args, f)?;
        }
        ArithTerm::Sep { var, bound, body } => write!(f, "sepc({var}, {bound}, {body})")?,
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

fn fmt_args<T: Display>(args: &[T], f: &mut Formatter<'_>) -> fmt::Result {
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        a.fmt(f)?;
    }
    f.write_str(")")
}

impl Display for ArithTerm {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        fmt_arith(self, 0, f)
    }
}

impl Display for ArithAtom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            ArithAtom::Eq(a, b) => write!(f, "{a} = {b}"),
            ArithAtom::Lt(a, b) => write!(f, "{a} < {b}"),
            ArithAtom::Pred(p, args) => {
                f.write_str(p.arith_name())?;
                fmt_args(args, f)
            }
        }
    }
}

fn set_prec(t: &SetTerm) -> u8 {
    match t {
        SetTerm::Call(Func::AddA, _) => 1,
        SetTerm::Call(Func::MulA, _) => 2,
        _ => 3,
    }
}

fn fmt_literal(s: &HfSet, f: &mut Formatter<'_>) -> fmt::Result {
    match s.code() {
        Some(c) => write!(f, "#{c}"),
        None => write!(f, "{s}"),
    }
}

fn fmt_set(t: &SetTerm, min: u8, f: &mut Formatter<'_>) -> fmt::Result {
    let paren = set_prec(t) < min;
    if paren {
        f.write_str("(")?;
    }
    match t {
        SetTerm::Var(v) => f.write_str(v)?,
        SetTerm::Empty => f.write_str("0e")?,
        SetTerm::Lit(s) => fmt_literal(s, f)?,
        SetTerm::Call(Func::AddA, args) if args.len() == 2 => {
            fmt_set(&args[0], 1, f)?;
            f.write_str(" +_a ")?;
            fmt_set(&args[1], 2, f)?;
        }
        SetTerm::Call(Func::MulA, args) if args.len() == 2 => {
            fmt_set(&args[0], 2, f)?;
            f.write_str(" *_a ")?;
            fmt_set(&args[1], 3, f)?;
        }
        SetTerm::Call(func, args) => {
            f.write_str(func.set_name())?;
            fmt_args(args, f)?;
        }
        SetTerm::Sep { var, bound, body } => write!(f, "sep({var} in {bound}, {body})")?,
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

impl Display for SetTerm {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        fmt_set(self, 0, f)
    }
}

impl Display for SetAtom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            SetAtom::Mem(a, b) => write!(f, "{a} in {b}"),
            SetAtom::Eq(a, b) => write!(f, "{a} = {b}"),
            SetAtom::Pred(Pred::IsOrd, args) => write!(f, "{} in Ord", args[0]),
            SetAtom::Pred(p, args) => write!(f, "{} {} {}", args[0], p.set_name(), args[1]),
        }
    }
}
