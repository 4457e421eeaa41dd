//! Abstract syntax for the two first-order languages: arithmetic (`0`, `S`,
//! `+`, `*`, `exp`, `<`) and sets (`∈`, `∅`, pairs, power set, union, rank,
//! separation).
//!
//! Both share the connective and quantifier layer [`Formula`]; they differ in
//! their terms, atoms and quantifier bounds. Besides the base symbols, each
//! language carries a small set of extra function and predicate symbols
//! ([`Func`], [`Pred`]) so that the interpretations have somewhere to land.

mod parse;
mod print;

pub use parse::{parse_arith, parse_arith_term, parse_set, parse_set_term};

use std::collections::BTreeSet;

use crate::set::{Code, HfSet};

/// Function symbols beyond each language's base signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Pair,
    Power,
    SumSet,
    Rank,
    SuccA,
    AddA,
    MulA,
    ExpA,
    CardAdd,
    Product,
    FnSpace,
    OrdAdd,
    OrdMul,
    OrdExp,
}

impl Func {
    pub const ALL: [Func; 14] = [
        Func::Pair,
        Func::Power,
        Func::SumSet,
        Func::Rank,
        Func::SuccA,
        Func::AddA,
        Func::MulA,
        Func::ExpA,
        Func::CardAdd,
        Func::Product,
        Func::FnSpace,
        Func::OrdAdd,
        Func::OrdMul,
        Func::OrdExp,
    ];

    pub fn arity(self) -> usize {
        match self {
            Func::Power | Func::SumSet | Func::Rank | Func::SuccA => 1,
            _ => 2,
        }
    }

    /// Spelling in the set language (`+_a` and `*_a` are written infix).
    pub fn set_name(self) -> &'static str {
        match self {
            Func::Pair => "pair",
            Func::Power => "P",
            Func::SumSet => "U",
            Func::Rank => "R",
            Func::SuccA => "S_a",
            Func::AddA => "+_a",
            Func::MulA => "*_a",
            Func::ExpA => "exp_a",
            Func::CardAdd => "cadd",
            Func::Product => "cprod",
            Func::FnSpace => "cexp",
            Func::OrdAdd => "oadd",
            Func::OrdMul => "omul",
            Func::OrdExp => "oexp",
        }
    }

    /// Spelling in the arithmetic language, where each symbol denotes the
    /// corresponding operation on codes.
    pub fn arith_name(self) -> &'static str {
        match self {
            Func::Pair => "pairc",
            Func::Power => "pow",
            Func::SumSet => "uni",
            Func::Rank => "rankc",
            Func::SuccA => "sa",
            Func::AddA => "adda",
            Func::MulA => "mula",
            Func::ExpA => "expa",
            Func::CardAdd => "cadd",
            Func::Product => "cprod",
            Func::FnSpace => "cexp",
            Func::OrdAdd => "oadd",
            Func::OrdMul => "omul",
            Func::OrdExp => "oexp",
        }
    }

    pub fn from_set_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.set_name() == s)
    }

    pub fn from_arith_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.arith_name() == s)
    }

    /// Whether the symbol belongs to the plain set-theoretic signature.
    pub fn is_base_set(self) -> bool {
        matches!(self, Func::Pair | Func::Power | Func::SumSet | Func::Rank)
    }
}

/// Predicate symbols beyond `=`, `<` and `∈`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pred {
    LessA,
    CardEq,
    CardLt,
    CardLe,
    IsOrd,
}

impl Pred {
    pub const ALL: [Pred; 5] = [
        Pred::LessA,
        Pred::CardEq,
        Pred::CardLt,
        Pred::CardLe,
        Pred::IsOrd,
    ];

    pub fn arity(self) -> usize {
        match self {
            Pred::IsOrd => 1,
            _ => 2,
        }
    }

    /// Infix spelling in the set language; `IsOrd` is written `t in Ord`.
    pub fn set_name(self) -> &'static str {
        match self {
            Pred::LessA => "<_a",
            Pred::CardEq => "=_c",
            Pred::CardLt => "<_c",
            Pred::CardLe => "<=_c",
            Pred::IsOrd => "in Ord",
        }
    }

    pub fn arith_name(self) -> &'static str {
        match self {
            Pred::LessA => "lta",
            Pred::CardEq => "ceq",
            Pred::CardLt => "clt",
            Pred::CardLe => "cle",
            Pred::IsOrd => "isord",
        }
    }

    pub fn from_arith_name(s: &str) -> Option<Pred> {
        Pred::ALL.into_iter().find(|p| p.arith_name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// Connectives and quantifiers over atoms `A`, with quantifier bounds `B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula<A, B> {
    Atom(A),
    Not(Box<Formula<A, B>>),
    And(Box<Formula<A, B>>, Box<Formula<A, B>>),
    Or(Box<Formula<A, B>>, Box<Formula<A, B>>),
    Implies(Box<Formula<A, B>>, Box<Formula<A, B>>),
    Quant {
        q: Quantifier,
        var: String,
        bound: Option<B>,
        body: Box<Formula<A, B>>,
    },
    Dom(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArithTerm {
    Var(String),
    Zero,
    /// A numeral, short for iterated `S` applied to `0`.
    Lit(Code),
    Succ(Box<ArithTerm>),
    Add(Box<ArithTerm>, Box<ArithTerm>),
    Mul(Box<ArithTerm>, Box<ArithTerm>),
    Exp(Box<ArithTerm>, Box<ArithTerm>),
    Call(Func, Vec<ArithTerm>),
    /// `sepc(v, t, φ)`: the code of the members of `t` satisfying `φ`.
    Sep {
        var: String,
        bound: Box<ArithTerm>,
        body: Box<ArithFormula>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArithAtom {
    Eq(ArithTerm, ArithTerm),
    Lt(ArithTerm, ArithTerm),
    Pred(Pred, Vec<ArithTerm>),
}

/// Arithmetic formulas; quantifier bounds are `< t`.
pub type ArithFormula = Formula<ArithAtom, ArithTerm>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SetTerm {
    Var(String),
    Empty,
    /// `#n` or a brace literal.
    Lit(HfSet),
    Call(Func, Vec<SetTerm>),
    /// `sep(v in t, φ)`, that is `{v ∈ t : φ}`.
    Sep {
        var: String,
        bound: Box<SetTerm>,
        body: Box<SetFormula>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SetAtom {
    Mem(SetTerm, SetTerm),
    Eq(SetTerm, SetTerm),
    Pred(Pred, Vec<SetTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SetBound {
    /// `v in t`
    In(SetTerm),
    /// `v <_a t`
    BelowA(SetTerm),
}

pub type SetFormula = Formula<SetAtom, SetBound>;

/// Variable bookkeeping shared by terms, atoms, bounds and formulas.
pub trait Syntax: Clone {
    type Term: TermSyntax;

    fn free_vars_into(&self, out: &mut BTreeSet<String>);

    /// Every variable name occurring anywhere, bound or free.
    fn names_into(&self, out: &mut BTreeSet<String>);

    /// Replaces free occurrences of `v` by `t`, whose free variables are `fv`.
    fn subst_with(&self, v: &str, t: &Self::Term, fv: &BTreeSet<String>) -> Self;

    /// Every quantifier (and separation) carries a bound free of its variable.
    fn is_bounded(&self) -> bool;

    fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut out);
        out
    }

    fn substitute(&self, v: &str, t: &Self::Term) -> Self {
        self.subst_with(v, t, &t.free_vars())
    }

    fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }
}

pub trait TermSyntax: Syntax<Term = Self> {
    fn var(name: &str) -> Self;
    fn as_var(&self) -> Option<&str>;
}

/// A variable name based on `base` that is not in `avoid`.
pub fn fresh_var(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply of names")
}

/// Substitution under a binder of `var` with the given body. Renames the
/// binder first when `t` would otherwise be captured, or when the already
/// substituted bound mentions it.
fn subst_binder<S: Syntax>(
    var: &str,
    bound_fv: &BTreeSet<String>,
    body: &S,
    v: &str,
    t: &S::Term,
    fv: &BTreeSet<String>,
) -> (String, S) {
    let shadowed = var == v;
    let captures = !shadowed && fv.contains(var) && body.free_vars().contains(v);
    if !captures && !bound_fv.contains(var) {
        let body = if shadowed {
            body.clone()
        } else {
            body.subst_with(v, t, fv)
        };
        return (var.to_string(), body);
    }
    let mut avoid = fv.clone();
    avoid.extend(bound_fv.iter().cloned());
    body.names_into(&mut avoid);
    avoid.insert(v.to_string());
    let fresh = fresh_var(var, &avoid);
    let renamed = body.substitute(var, &S::Term::var(&fresh));
    let body = if shadowed {
        renamed
    } else {
        renamed.subst_with(v, t, fv)
    };
    (fresh, body)
}

fn binder_free_vars<S: Syntax>(var: &str, body: &S, out: &mut BTreeSet<String>) {
    let mut inner = body.free_vars();
    inner.remove(var);
    out.extend(inner);
}

impl<A, B, T> Syntax for Formula<A, B>
where
    A: Syntax<Term = T>,
    B: Syntax<Term = T>,
    T: TermSyntax,
{
    type Term = T;

    fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => a.free_vars_into(out),
            Formula::Not(a) => a.free_vars_into(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.free_vars_into(out);
                b.free_vars_into(out);
            }
            Formula::Quant {
                var, bound, body, ..
            } => {
                if let Some(b) = bound {
                    b.free_vars_into(out);
                }
                binder_free_vars(var, body.as_ref(), out);
            }
            Formula::Dom(v) => {
                out.insert(v.clone());
            }
        }
    }

    fn names_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => a.names_into(out),
            Formula::Not(a) => a.names_into(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.names_into(out);
                b.names_into(out);
            }
            Formula::Quant {
                var, bound, body, ..
            } => {
                out.insert(var.clone());
                if let Some(b) = bound {
                    b.names_into(out);
                }
                body.names_into(out);
            }
            Formula::Dom(v) => {
                out.insert(v.clone());
            }
        }
    }

    fn subst_with(&self, v: &str, t: &T, fv: &BTreeSet<String>) -> Self {
        match self {
            Formula::Atom(a) => Formula::Atom(a.subst_with(v, t, fv)),
            Formula::Not(a) => Formula::Not(Box::new(a.subst_with(v, t, fv))),
            Formula::And(a, b) => Formula::And(
                Box::new(a.subst_with(v, t, fv)),
                Box::new(b.subst_with(v, t, fv)),
            ),
            Formula::Or(a, b) => Formula::Or(
                Box::new(a.subst_with(v, t, fv)),
                Box::new(b.subst_with(v, t, fv)),
            ),
            Formula::Implies(a, b) => Formula::Implies(
                Box::new(a.subst_with(v, t, fv)),
                Box::new(b.subst_with(v, t, fv)),
            ),
            Formula::Quant {
                q,
                var,
                bound,
                body,
            } => {
                let bound = bound.as_ref().map(|b| b.subst_with(v, t, fv));
                let bound_fv = bound.as_ref().map(|b| b.free_vars()).unwrap_or_default();
                let (var, body) = subst_binder(var, &bound_fv, body.as_ref(), v, t, fv);
                Formula::Quant {
                    q: *q,
                    var,
                    bound,
                    body: Box::new(body),
                }
            }
            // Dom takes a variable, so only variable-for-variable
            // substitution can go through it.
            Formula::Dom(x) if x == v => Formula::Dom(t.as_var().unwrap_or(x).to_string()),
            Formula::Dom(x) => Formula::Dom(x.clone()),
        }
    }

    fn is_bounded(&self) -> bool {
        match self {
            Formula::Atom(a) => a.is_bounded(),
            Formula::Not(a) => a.is_bounded(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_bounded() && b.is_bounded()
            }
            Formula::Quant {
                var, bound, body, ..
            } => match bound {
                Some(b) => b.is_bounded() && !b.free_vars().contains(var) && body.is_bounded(),
                None => false,
            },
            Formula::Dom(_) => true,
        }
    }
}

impl<A, B> Formula<A, B> {
    pub fn atom(a: A) -> Self {
        Formula::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Self) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Self, b: Self) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(var: impl Into<String>, bound: Option<B>, body: Self) -> Self {
        Formula::Quant {
            q: Quantifier::Forall,
            var: var.into(),
            bound,
            body: Box::new(body),
        }
    }

    pub fn exists(var: impl Into<String>, bound: Option<B>, body: Self) -> Self {
        Formula::Quant {
            q: Quantifier::Exists,
            var: var.into(),
            bound,
            body: Box::new(body),
        }
    }

    /// Number of quantifier nodes.
    pub fn quantifier_count(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Dom(_) => 0,
            Formula::Not(a) => a.quantifier_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.quantifier_count() + b.quantifier_count()
            }
            Formula::Quant { body, .. } => 1 + body.quantifier_count(),
        }
    }
}

impl<A, B> Formula<A, B>
where
    Formula<A, B>: Syntax,
{
    /// The universal closure, with unbounded quantifiers in sorted order.
    pub fn universal_closure(&self) -> Self {
        let mut f = self.clone();
        for v in self.free_vars().into_iter().rev() {
            f = Formula::forall(v, None, f);
        }
        f
    }
}

impl Syntax for ArithTerm {
    type Term = ArithTerm;

    fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            ArithTerm::Var(v) => {
                out.insert(v.clone());
            }
            ArithTerm::Zero | ArithTerm::Lit(_) => {}
            ArithTerm::Succ(a) => a.free_vars_into(out),
            ArithTerm::Add(a, b) | ArithTerm::Mul(a, b) | ArithTerm::Exp(a, b) => {
                a.free_vars_into(out);
                b.free_vars_into(out);
            }
            ArithTerm::Call(_, args) => args.iter().for_each(|a| a.free_vars_into(out)),
            ArithTerm::Sep { var, bound, body } => {
                bound.free_vars_into(out);
                binder_free_vars(var, body.as_ref(), out);
            }
        }
    }

    fn names_into(&self, out: &mut BTreeSet<String>) {
        match self {
            ArithTerm::Sep { var, bound, body } => {
                out.insert(var.clone());
                bound.names_into(out);
                body.names_into(out);
            }
            ArithTerm::Succ(a) => a.names_into(out),
            ArithTerm::Add(a, b) | ArithTerm::Mul(a, b) | ArithTerm::Exp(a, b) => {
                a.names_into(out);
                b.names_into(out);
            }
            ArithTerm::Call(_, args) => args.iter().for_each(|a| a.names_into(out)),
            _ => self.free_vars_into(out),
        }
    }

    fn subst_with(&self, v: &str, t: &ArithTerm, fv: &BTreeSet<String>) -> Self {
        let s = |a: &ArithTerm| Box::new(a.subst_with(v, t, fv));
        match self {
            ArithTerm::Var(x) if x == v => t.clone(),
            ArithTerm::Var(_) | ArithTerm::Zero | ArithTerm::Lit(_) => self.clone(),
            ArithTerm::Succ(a) => ArithTerm::Succ(s(a)),
            ArithTerm::Add(a, b) => ArithTerm::Add(s(a), s(b)),
            ArithTerm::Mul(a, b) => ArithTerm::Mul(s(a), s(b)),
            ArithTerm::Exp(a, b) => ArithTerm::Exp(s(a), s(b)),
            ArithTerm::Call(f, args) => {
                ArithTerm::Call(*f, args.iter().map(|a| a.subst_with(v, t, fv)).collect())
            }
            ArithTerm::Sep { var, bound, body } => {
                let bound = s(bound);
                let (var, body) = subst_binder(var, &bound.free_vars(), body.as_ref(), v, t, fv);
                ArithTerm::Sep {
                    var,
                    bound,
                    body: Box::new(body),
                }
            }
        }
    }

    fn is_bounded(&self) -> bool {
        match self {
            ArithTerm::Var(_) | ArithTerm::Zero | ArithTerm::Lit(_) => true,
            ArithTerm::Succ(a) => a.is_bounded(),
            ArithTerm::Add(a, b) | ArithTerm::Mul(a, b) | ArithTerm::Exp(a, b) => {
                a.is_bounded() && b.is_bounded()
            }
            ArithTerm::Call(_, args) => args.iter().all(|a| a.is_bounded()),
            ArithTerm::Sep { var, bound, body } => {
                bound.is_bounded() && !bound.free_vars().contains(var) && body.is_bounded()
            }
        }
    }
}

impl TermSyntax for ArithTerm {
    fn var(name: &str) -> Self {
        ArithTerm::Var(name.to_string())
    }

    fn as_var(&self) -> Option<&str> {
        match self {
            ArithTerm::Var(v) => Some(v),
            _ => None,
        }
    }
}

impl Syntax for ArithAtom {
    type Term = ArithTerm;

    fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        self.terms().for_each(|t| t.free_vars_into(out));
    }

    fn names_into(&self, out: &mut BTreeSet<String>) {
        self.terms().for_each(|t| t.names_into(out));
    }

    fn subst_with(&self, v: &str, t: &ArithTerm, fv: &BTreeSet<String>) -> Self {
        let s = |a: &ArithTerm| a.subst_with(v, t, fv);
        match self {
            ArithAtom::Eq(a, b) => ArithAtom::Eq(s(a), s(b)),
            ArithAtom::Lt(a, b) => ArithAtom::Lt(s(a), s(b)),
            ArithAtom::Pred(p, args) => ArithAtom::Pred(*p, args.iter().map(s).collect()),
        }
    }

    fn is_bounded(&self) -> bool {
        self.terms().all(|t| t.is_bounded())
    }
}

impl ArithAtom {
    pub fn terms(&self) -> Box<dyn Iterator<Item = &ArithTerm> + '_> {
        match self {
            ArithAtom::Eq(a, b) | ArithAtom::Lt(a, b) => Box::new([a, b].into_iter()),
            ArithAtom::Pred(_, args) => Box::new(args.iter()),
        }
    }
}

impl Syntax for SetTerm {
    type Term = SetTerm;

    fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            SetTerm::Var(v) => {
                out.insert(v.clone());
            }
            SetTerm::Empty | SetTerm::Lit(_) => {}
            SetTerm::Call(_, args) => args.iter().for_each(|a| a.free_vars_into(out)),
            SetTerm::Sep { var, bound, body } => {
                bound.free_vars_into(out);
                binder_free_vars(var, body.as_ref(), out);
            }
        }
    }

    fn names_into(&self, out: &mut BTreeSet<String>) {
        match self {
            SetTerm::Sep { var, bound, body } => {
                out.insert(var.clone());
                bound.names_into(out);
                body.names_into(out);
            }
            SetTerm::Call(_, args) => args.iter().for_each(|a| a.names_into(out)),
            _ => self.free_vars_into(out),
        }
    }

    fn subst_with(&self, v: &str, t: &SetTerm, fv: &BTreeSet<String>) -> Self {
        match self {
            SetTerm::Var(x) if x == v => t.clone(),
            SetTerm::Var(_) | SetTerm::Empty | SetTerm::Lit(_) => self.clone(),
            SetTerm::Call(f, args) => {
                SetTerm::Call(*f, args.iter().map(|a| a.subst_with(v, t, fv)).collect())
            }
            SetTerm::Sep { var, bound, body } => {
                let bound = Box::new(bound.subst_with(v, t, fv));
                let (var, body) = subst_binder(var, &bound.free_vars(), body.as_ref(), v, t, fv);
                SetTerm::Sep {
                    var,
                    bound,
                    body: Box::new(body),
                }
            }
        }
    }

    fn is_bounded(&self) -> bool {
        match self {
            SetTerm::Var(_) | SetTerm::Empty | SetTerm::Lit(_) => true,
            SetTerm::Call(_, args) => args.iter().all(|a| a.is_bounded()),
            SetTerm::Sep { var, bound, body } => {
                bound.is_bounded() && !bound.free_vars().contains(var) && body.is_bounded()
            }
        }
    }
}

impl TermSyntax for SetTerm {
    fn var(name: &str) -> Self {
        SetTerm::Var(name.to_string())
    }

    fn as_var(&self) -> Option<&str> {
        match self {
            SetTerm::Var(v) => Some(v),
            _ => None,
        }
    }
}

impl SetAtom {
    pub fn terms(&self) -> Box<dyn Iterator<Item = &SetTerm> + '_> {
        match self {
            SetAtom::Mem(a, b) | SetAtom::Eq(a, b) => Box::new([a, b].into_iter()),
            SetAtom::Pred(_, args) => Box::new(args.iter()),
        }
    }
}

impl Syntax for SetAtom {
    type Term = SetTerm;

    fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        self.terms().for_each(|t| t.free_vars_into(out));
    }

    fn names_into(&self, out: &mut BTreeSet<String>) {
        self.terms().for_each(|t| t.names_into(out));
    }

    fn subst_with(&self, v: &str, t: &SetTerm, fv: &BTreeSet<String>) -> Self {
        let s = |a: &SetTerm| a.subst_with(v, t, fv);
        match self {
            SetAtom::Mem(a, b) => SetAtom::Mem(s(a), s(b)),
            SetAtom::Eq(a, b) => SetAtom::Eq(s(a), s(b)),
            SetAtom::Pred(p, args) => SetAtom::Pred(*p, args.iter().map(s).collect()),
        }
    }

    fn is_bounded(&self) -> bool {
        self.terms().all(|t| t.is_bounded())
    }
}

impl SetBound {
    pub fn term(&self) -> &SetTerm {
        match self {
            SetBound::In(t) | SetBound::BelowA(t) => t,
        }
    }
}

impl Syntax for SetBound {
    type Term = SetTerm;

    fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        self.term().free_vars_into(out);
    }

    fn names_into(&self, out: &mut BTreeSet<String>) {
        self.term().names_into(out);
    }

    fn subst_with(&self, v: &str, t: &SetTerm, fv: &BTreeSet<String>) -> Self {
        match self {
            SetBound::In(b) => SetBound::In(b.subst_with(v, t, fv)),
            SetBound::BelowA(b) => SetBound::BelowA(b.subst_with(v, t, fv)),
        }
    }

    fn is_bounded(&self) -> bool {
        self.term().is_bounded()
    }
}

pub fn is_bounded_arith(f: &ArithFormula) -> bool {
    f.is_bounded()
}

pub fn is_bounded_set(f: &SetFormula) -> bool {
    f.is_bounded()
}

/// Which of the two languages a formula belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Arith,
    Set,
}

impl std::fmt::Display for Language {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Language::Arith => "arith",
            Language::Set => "set",
        })
    }
}

/// A formula of either language.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AnyFormula {
    Arith(ArithFormula),
    Set(SetFormula),
}

impl AnyFormula {
    pub fn language(&self) -> Language {
        match self {
            AnyFormula::Arith(_) => Language::Arith,
            AnyFormula::Set(_) => Language::Set,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            AnyFormula::Arith(f) => f.free_vars(),
            AnyFormula::Set(f) => f.free_vars(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            AnyFormula::Arith(f) => f.is_bounded(),
            AnyFormula::Set(f) => f.is_bounded(),
        }
    }
}

impl std::fmt::Display for AnyFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnyFormula::Arith(x) => x.fmt(f),
            AnyFormula::Set(x) => x.fmt(f),
        }
    }
}

pub fn parse(lang: Language, src: &str) -> crate::Result<AnyFormula> {
    Ok(match lang {
        Language::Arith => AnyFormula::Arith(parse_arith(src)?),
        Language::Set => AnyFormula::Set(parse_set(src)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> ArithFormula {
        parse_arith(s).unwrap()
    }

    fn s(src: &str) -> SetFormula {
        parse_set(src).unwrap()
    }

    #[test]
    fn free_vars_examples() {
        let fv: Vec<String> = a("x < y").free_vars().into_iter().collect();
        assert_eq!(fv, ["x", "y"]);
        assert!(a("forall x. x = x").is_closed());
        let fv: Vec<String> = s("exists u in y. u in z").free_vars().into_iter().collect();
        assert_eq!(fv, ["y", "z"]);
        let fv: Vec<String> = s("sep(v in x, v in w) = y")
            .free_vars()
            .into_iter()
            .collect();
        assert_eq!(fv, ["w", "x", "y"]);
    }

    #[test]
    fn substitution_avoids_capture() {
        let f = s("exists y in z. x = y");
        let g = f.substitute("x", &SetTerm::var("y"));
        assert_eq!(g.to_string(), "exists y1 in z. y = y1");
        assert_eq!(
            g.free_vars(),
            ["y", "z"].iter().map(|v| v.to_string()).collect()
        );
    }

    #[test]
    fn substitution_stops_at_binder() {
        let f = a("forall x < 5. x < y");
        assert_eq!(f.substitute("x", &ArithTerm::Zero), f);
        let g = f.substitute("y", &a_term("x + 1"));
        assert_eq!(g.to_string(), "forall x1 < 5. x1 < x + 1");
    }

    #[test]
    fn substitution_into_bounds() {
        let f = a("exists x < y. x = y");
        assert_eq!(
            f.substitute("y", &a_term("S(z)")).to_string(),
            "exists x < S(z). x = S(z)"
        );
    }

    #[test]
    fn closed_formulas_are_fixed() {
        let f = a("forall x < 3. exists y < S(x). y = x");
        assert_eq!(f.substitute("v", &a_term("7")), f);
    }

    fn a_term(src: &str) -> ArithTerm {
        parse_arith_term(src).unwrap()
    }

    #[test]
    fn boundedness() {
        assert!(a("x < S(0)").is_bounded());
        assert!(s("exists y in pair(x, x). y = x").is_bounded());
        assert!(!a("forall y. y = y").is_bounded());
        assert!(!s("exists y in y. y = y").is_bounded());
        assert!(s("forall u <_a x. u in x").is_bounded());
        assert!(!s("sep(v in P(v), v = v) = x").is_bounded());
    }

    #[test]
    fn substitution_preserves_boundedness() {
        let f = s("forall u in x. exists v in u. v = y");
        let g = f.substitute("y", &parse_set_term("P(U(u))").unwrap());
        assert!(g.is_bounded());
        assert_eq!(g.to_string(), "forall u1 in x. exists v in u1. v = P(U(u))");
    }

    #[test]
    fn closure() {
        assert_eq!(
            a("x < y").universal_closure().to_string(),
            "forall x. forall y. x < y"
        );
    }

    #[test]
    fn fresh_names() {
        let avoid: BTreeSet<String> = ["x", "x1", "n"].iter().map(|v| v.to_string()).collect();
        assert_eq!(fresh_var("x", &avoid), "x2");
        assert_eq!(fresh_var("m", &avoid), "m");
        assert_eq!(fresh_var("n", &avoid), "n1");
    }
}
