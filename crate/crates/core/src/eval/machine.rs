use std::cell::{Cell, RefCell};
use std::collections::HashMap;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::compile::{Cond, Op, Range, Term};
use super::interval::{self, Iv};
use super::{EvalContext, Val};
use crate::arith::{apply_literal, code_op, ArithMode, ArithOp};
use crate::cardinal::{card_add_within, card_exp_within, product_within};
use crate::error::{Error, Result};
use crate::logic::{Func, Pred, Quantifier};
use crate::order::{ack_less, successor_a};
use crate::set::{
    encode, is_ordinal, level_size, ord_add_within, ord_exp_within, ord_mul_within, pair,
    powerset_within, sumset, Code, HfSet, LevelRef,
};

/// How the `_a` operations were carried out during an evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalStats {
    pub literal_ops: u64,
    pub fast_ops: u64,
    /// Literal mode was asked for but the operands lay outside its domain.
    pub literal_fallbacks: u64,
}

pub(crate) struct Machine<'c> {
    ctx: &'c EvalContext,
    stats: Cell<EvalStats>,
    /// The last value of each member range term, with the slot values it
    /// was computed from.
    ranges: RefCell<HashMap<*const Term, (Vec<Val>, HfSet)>>,
}

/// Positions of the set bits.
pub(crate) fn bit_positions(c: &Code) -> impl Iterator<Item = u64> + '_ {
    c.iter_u64_digits().enumerate().flat_map(|(i, mut d)| {
        std::iter::from_fn(move || {
            if d == 0 {
                return None;
            }
            let t = d.trailing_zeros() as u64;
            d &= d - 1;
            Some(i as u64 * 64 + t)
        })
    })
}

fn card(v: &Val) -> u64 {
    match v {
        Val::Code(c) => c.count_ones(),
        Val::Set(s) => s.len() as u64,
    }
}

fn num_op_term(t: &Term) -> bool {
    matches!(t, Term::App { op, .. } if num_op(*op).is_some())
}

fn power_arg(t: &Term) -> Option<&Term> {
    match t {
        Term::App {
            op: Op::Set(Func::Power) | Op::Code(Func::Power),
            args,
            ..
        } => Some(&args[0]),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug)]
enum NumOp {
    Add,
    Mul,
    Exp,
}

#[derive(Clone, Debug)]
enum Node {
    Const(Iv),
    Var(usize),
    Top,
    Succ(usize),
    Bin(NumOp, usize, usize),
}

#[derive(Clone, Copy, Debug)]
enum Rel {
    Eq,
    Lt,
    Le,
}

/// Numeric constraints a block of quantified variables must satisfy.
struct Net {
    nodes: Vec<Node>,
    rels: Vec<(Rel, usize, usize)>,
    /// For block variables whose bound is fixed but too large to compute,
    /// the node of that bound.
    over: Vec<Option<usize>>,
}

fn num_op(op: Op) -> Option<Option<NumOp>> {
    match op {
        Op::Succ | Op::Set(Func::SuccA) | Op::Code(Func::SuccA) => Some(None),
        Op::Add | Op::Set(Func::AddA) | Op::Code(Func::AddA) => Some(Some(NumOp::Add)),
        Op::Mul | Op::Set(Func::MulA) | Op::Code(Func::MulA) => Some(Some(NumOp::Mul)),
        Op::Exp | Op::Set(Func::ExpA) | Op::Code(Func::ExpA) => Some(Some(NumOp::Exp)),
        _ => None,
    }
}

fn arith_op(f: Func) -> ArithOp {
    match f {
        Func::AddA => ArithOp::Add,
        Func::MulA => ArithOp::Mul,
        _ => ArithOp::Exp,
    }
}

/// Constraints found in a block body. Existential witnesses met on the way
/// (of the body when it must hold, of universals in its negation) become
/// auxiliary variables; `scopes[i]` lists the auxiliaries visible to atoms
/// tagged `i`, innermost last.
#[derive(Default)]
struct Found<'a> {
    atoms: Vec<(Rel, &'a Term, &'a Term, usize)>,
    aux: Vec<(&'a Range, usize)>,
    scopes: Vec<Vec<usize>>,
}

/// Atoms that hold in every witness: of the body itself when `pos`, of its
/// negation otherwise.
fn extract<'a>(c: &'a Cond, pos: bool, scope: usize, out: &mut Found<'a>) {
    match (c, pos) {
        (Cond::And(a, b), true) | (Cond::Or(a, b), false) => {
            extract(a, pos, scope, out);
            extract(b, pos, scope, out);
        }
        (Cond::Implies(a, b), false) => {
            extract(a, true, scope, out);
            extract(b, false, scope, out);
        }
        (Cond::Not(a), _) => extract(a, !pos, scope, out),
        (Cond::Eq(a, b), true) => out.atoms.push((Rel::Eq, a, b, scope)),
        (Cond::Lt(a, b) | Cond::LessA(a, b), true) => out.atoms.push((Rel::Lt, a, b, scope)),
        (Cond::Lt(a, b) | Cond::LessA(a, b), false) => out.atoms.push((Rel::Le, b, a, scope)),
        (Cond::Quant { q, range, body, .. }, _)
            if (*q == Quantifier::Exists) == pos && !matches!(range, Range::Members(_)) =>
        {
            let id = out.aux.len();
            out.aux.push((range, scope));
            let mut inner = out.scopes[scope].clone();
            inner.push(id);
            out.scopes.push(inner);
            extract(body, pos, out.scopes.len() - 1, out);
        }
        _ => {}
    }
}

const MAX_ROUNDS: usize = 8;

/// Where a block sits: its first slot and how many variables it binds.
#[derive(Clone, Copy)]
struct Frame {
    depth: usize,
    block: usize,
}

impl<'c> Machine<'c> {
    pub fn new(ctx: &'c EvalContext) -> Machine<'c> {
        Machine {
            ctx,
            stats: Cell::new(EvalStats::default()),
            ranges: RefCell::new(HashMap::new()),
        }
    }

    pub fn stats(&self) -> EvalStats {
        self.stats.get()
    }

    fn bump(&self, f: impl FnOnce(&mut EvalStats)) {
        let mut s = self.stats.get();
        f(&mut s);
        self.stats.set(s);
    }

    fn set(&self, v: &Val) -> Result<HfSet> {
        v.to_set(&self.ctx.budget)
    }

    pub fn term(&self, t: &Term, env: &mut Vec<Val>) -> Result<Val> {
        match t {
            Term::Slot(i) => Ok(env[*i].clone()),
            Term::Const(v) => Ok(v.clone()),
            Term::App { op, args, .. } => {
                let vals = args
                    .iter()
                    .map(|a| self.term(a, env))
                    .collect::<Result<Vec<_>>>()?;
                self.apply(*op, &vals)
            }
            Term::Sep {
                on_sets,
                slot,
                bound,
                body,
                ..
            } => {
                let b = self.term(bound, env)?;
                debug_assert_eq!(env.len(), *slot);
                if *on_sets {
                    let s = self.set(&b)?;
                    let mut keep = Vec::new();
                    for m in s.members() {
                        env.push(Val::Set(m.clone()));
                        let r = self.cond(body, env);
                        env.pop();
                        if r? {
                            keep.push(m.clone());
                        }
                    }
                    Ok(Val::Set(HfSet::from_children(keep)))
                } else {
                    let c = b.code()?;
                    let mut out = Code::zero();
                    for i in bit_positions(&c) {
                        env.push(Val::Code(Code::from(i)));
                        let r = self.cond(body, env);
                        env.pop();
                        if r? {
                            out.set_bit(i, true);
                        }
                    }
                    Ok(Val::Code(out))
                }
            }
        }
    }

    pub fn apply(&self, op: Op, args: &[Val]) -> Result<Val> {
        let budget = &self.ctx.budget;
        match op {
            Op::Succ => {
                let c = args[0].code()? + 1u8;
                budget.check_bits("successor", c.bits())?;
                Ok(Val::Code(c))
            }
            Op::Add => self
                .code_arith(ArithOp::Add, &args[0], &args[1])
                .map(Val::Code),
            Op::Mul => self
                .code_arith(ArithOp::Mul, &args[0], &args[1])
                .map(Val::Code),
            Op::Exp => self
                .code_arith(ArithOp::Exp, &args[0], &args[1])
                .map(Val::Code),
            Op::Code(f) => self.code_func(f, args).map(Val::Code),
            Op::Set(f) => self.set_func(f, args),
        }
    }

    fn code_arith(&self, op: ArithOp, a: &Val, b: &Val) -> Result<Code> {
        code_op(op, &a.code()?, &b.code()?, &self.ctx.budget)
    }

    fn succ_a(&self, v: &Val) -> Result<Val> {
        let x = self.set(v)?;
        let mut s = successor_a(&x)?;
        if let Some(k) = self.ctx.faults.successor_skip {
            if x.code_u64() == Some(k) {
                s = successor_a(&s)?;
            }
        }
        Ok(Val::Set(s))
    }

    /// `+_a`, `×_a` or `Exp_a`, literally when the mode asks for it and the
    /// operands allow it.
    fn arith_a(&self, op: ArithOp, a: &Val, b: &Val) -> Result<Val> {
        if self.ctx.mode == ArithMode::Literal {
            let (x, y) = (self.set(a)?, self.set(b)?);
            if self.ctx.literal.admits(op, &x, &y) {
                self.bump(|s| s.literal_ops += 1);
                return apply_literal(op, &x, &y, &self.ctx.budget).map(Val::Set);
            }
            self.bump(|s| s.literal_fallbacks += 1);
        } else {
            self.bump(|s| s.fast_ops += 1);
        }
        self.code_arith(op, a, b).map(Val::Code)
    }

    fn set_func(&self, f: Func, args: &[Val]) -> Result<Val> {
        let budget = &self.ctx.budget;
        if matches!(f, Func::AddA | Func::MulA | Func::ExpA) {
            return self.arith_a(arith_op(f), &args[0], &args[1]);
        }
        if f == Func::SuccA {
            return self.succ_a(&args[0]);
        }
        let s = args
            .iter()
            .map(|a| self.set(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(Val::Set(match f {
            Func::Pair => pair(&s[0], &s[1]),
            Func::Power => powerset_within(&s[0], budget)?,
            Func::SumSet => sumset(&s[0]),
            Func::Rank => LevelRef::new(s[0].rank() + 1).materialize(budget)?,
            Func::CardAdd => card_add_within(&s[0], &s[1], budget)?,
            Func::Product => product_within(&s[0], &s[1], budget)?,
            Func::FnSpace => card_exp_within(&s[0], &s[1], budget)?,
            Func::OrdAdd => ord_add_within(&s[0], &s[1], budget)?,
            Func::OrdMul => ord_mul_within(&s[0], &s[1], budget)?,
            Func::OrdExp => ord_exp_within(&s[0], &s[1], budget)?,
            Func::SuccA | Func::AddA | Func::MulA | Func::ExpA => unreachable!(),
        }))
    }

    fn small(&self, c: &Code, what: &str) -> Result<u64> {
        c.to_u64()
            .filter(|&n| n < self.ctx.budget.code_bits)
            .ok_or_else(|| Error::budget(what, self.ctx.budget.code_bits))
    }

    /// The set operations carried out directly on codes.
    fn code_func(&self, f: Func, args: &[Val]) -> Result<Code> {
        let budget = &self.ctx.budget;
        match f {
            Func::Pair => {
                let a = self.small(&args[0].code()?, "pair")?;
                let b = self.small(&args[1].code()?, "pair")?;
                let mut out = Code::zero();
                out.set_bit(a, true);
                out.set_bit(b, true);
                Ok(out)
            }
            Func::Power => {
                let x = args[0].code()?;
                let top = self.small(&x, "power set")?;
                let bits: Vec<u64> = bit_positions(&x).collect();
                budget.check_members("power set", 1u128 << bits.len().min(127))?;
                let mut out = Code::zero();
                out.set_bit(top, true);
                for mask in 0u64..1 << bits.len() {
                    let sub = bits
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .fold(0u64, |acc, (_, &p)| acc | 1 << p);
                    out.set_bit(sub, true);
                }
                Ok(out)
            }
            Func::SumSet => Ok(Code::from(
                bit_positions(&args[0].code()?).fold(0u64, |acc, p| acc | p),
            )),
            Func::Rank => {
                let x = args[0].code()?;
                let mut k = 0;
                let size = loop {
                    match level_size(k) {
                        Some(s) if x < s => break s,
                        Some(_) => k += 1,
                        None => return Err(Error::budget("rank level", budget.code_bits)),
                    }
                };
                let n = self.small(&size, "rank level")?;
                budget.check_bits("rank level", n)?;
                Ok((Code::one() << n) - 1u8)
            }
            Func::SuccA => encode(&self.set(&self.succ_a(&args[0])?)?),
            _ => {
                let v = self.set_func(f, args)?;
                v.code()
            }
        }
    }

    pub fn cond(&self, c: &Cond, env: &mut Vec<Val>) -> Result<bool> {
        Ok(match c {
            Cond::True => true,
            Cond::Eq(a, b) => self.term(a, env)?.same(&self.term(b, env)?),
            Cond::Lt(a, b) => self.term(a, env)?.code()? < self.term(b, env)?.code()?,
            Cond::LessA(a, b) => {
                let (x, y) = (self.term(a, env)?, self.term(b, env)?);
                ack_less(&self.set(&x)?, &self.set(&y)?)
            }
            Cond::Mem(a, b) => {
                let x = self.set(&self.term(a, env)?)?;
                if let Some(t) = power_arg(b) {
                    let t = self.set(&self.term(t, env)?)?;
                    return Ok(x.members().iter().all(|m| t.contains(m)));
                }
                self.set(&self.term(b, env)?)?.contains(&x)
            }
            Cond::Card(p, a, b) => {
                let (x, y) = (self.card(a, env)?, self.card(b, env)?);
                match p {
                    Pred::CardEq => x == y,
                    Pred::CardLt => x < y,
                    Pred::CardLe => x <= y,
                    _ => unreachable!("not a cardinal predicate"),
                }
            }
            Cond::IsOrd(a) => {
                let x = self.term(a, env)?;
                is_ordinal(&self.set(&x)?)
            }
            Cond::Not(a) => !self.cond(a, env)?,
            Cond::And(a, b) => self.cond(a, env)? && self.cond(b, env)?,
            Cond::Or(a, b) => self.cond(a, env)? || self.cond(b, env)?,
            Cond::Implies(a, b) => !self.cond(a, env)? || self.cond(b, env)?,
            Cond::Quant { q, range, body, .. } => match range {
                Range::Members(t) => {
                    let s = self.members_of(t, env)?;
                    let want = *q == Quantifier::Exists;
                    for m in s.members() {
                        env.push(Val::Set(m.clone()));
                        let r = self.cond(body, env);
                        env.pop();
                        if r? == want {
                            return Ok(want);
                        }
                    }
                    !want
                }
                _ => self.block(c, env)?,
            },
        })
    }

    fn members_of(&self, t: &Term, env: &mut Vec<Val>) -> Result<HfSet> {
        if !matches!(t, Term::App { .. }) {
            return self.set(&self.term(t, env)?);
        }
        let key: Vec<Val> = (0..env.len())
            .filter(|i| t.deps() >> i & 1 == 1)
            .map(|i| env[i].clone())
            .collect();
        if let Some((k, s)) = self.ranges.borrow().get(&(t as *const Term)) {
            if *k == key {
                return Ok(s.clone());
            }
        }
        let s = self.set(&self.term(t, env)?)?;
        self.ranges.borrow_mut().insert(t, (key, s.clone()));
        Ok(s)
    }

    /// `|t|`, without building `t` when it is a power set.
    fn card(&self, t: &Term, env: &mut Vec<Val>) -> Result<u64> {
        match power_arg(t) {
            Some(a) => Ok(1u64
                .checked_shl(self.card(a, env)? as u32)
                .unwrap_or(u64::MAX)),
            None => Ok(card(&self.term(t, env)?)),
        }
    }

    fn range_bound(&self, r: &Range, env: &mut Vec<Val>) -> Result<Code> {
        match r {
            Range::Below(t) => self.term(t, env)?.code(),
            Range::Cutoff(n) => Ok(Code::from(*n)),
            Range::Members(_) => unreachable!("member ranges are not numeric"),
        }
    }

    fn cap(&self, count: &Code) -> Result<()> {
        let cap = self.ctx.budget.members;
        if *count > Code::from(cap) {
            return Err(Error::budget("quantifier range", cap));
        }
        Ok(())
    }

    /// A run of like numeric quantifiers, decided together.
    fn block(&self, c: &Cond, env: &mut Vec<Val>) -> Result<bool> {
        let Cond::Quant { q, .. } = c else {
            unreachable!()
        };
        let mut ranges = Vec::new();
        let mut cur = c;
        while let Cond::Quant {
            q: q2, range, body, ..
        } = cur
        {
            if q2 != q || matches!(range, Range::Members(_)) {
                break;
            }
            ranges.push(range);
            cur = body;
        }
        let want = *q == Quantifier::Exists;
        let found = if self.ctx.prune {
            match self.build_net(&ranges, cur, want, env)? {
                Some((net, boxes)) => self.label(0, boxes, &net, &ranges, cur, want, env)?,
                None => self.enumerate(0, &ranges, cur, want, env)?,
            }
        } else {
            self.enumerate(0, &ranges, cur, want, env)?
        };
        Ok(found == want)
    }

    /// Whether some assignment to the block makes the body equal `want`.
    fn enumerate(
        &self,
        i: usize,
        ranges: &[&Range],
        body: &Cond,
        want: bool,
        env: &mut Vec<Val>,
    ) -> Result<bool> {
        if i == ranges.len() {
            return Ok(self.cond(body, env)? == want);
        }
        let n = self.range_bound(ranges[i], env)?;
        self.cap(&n)?;
        let n = n.to_u64().expect("capped");
        for v in 0..n {
            env.push(Val::Code(Code::from(v)));
            let r = self.enumerate(i + 1, ranges, body, want, env);
            env.pop();
            if r? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    #[allow(clippy::too_many_arguments)]
    fn node(
        &self,
        t: &Term,
        at: Frame,
        scope: &[usize],
        env: &mut Vec<Val>,
        nodes: &mut Vec<Node>,
        vars: &mut usize,
    ) -> usize {
        let fixed = if t.deps() >> at.depth == 0 {
            // Fixed for the whole block. Past the budget a numeric term is
            // still bounded through its parts; other failures give no
            // information.
            match self.term(t, env).and_then(|v| v.code()) {
                Ok(c) => Some(Node::Const(Iv::point(c))),
                Err(e) if e.is_budget() && num_op_term(t) => None,
                Err(_) => Some(Node::Top),
            }
        } else {
            None
        };
        let n = if let Some(n) = fixed {
            n
        } else {
            match t {
                Term::Slot(i) => {
                    let i = i - at.depth;
                    if i < at.block {
                        *vars += 1;
                        Node::Var(i)
                    } else {
                        match scope.get(i - at.block) {
                            Some(id) => Node::Var(at.block + id),
                            None => Node::Top,
                        }
                    }
                }
                Term::App { op, args, .. } => match num_op(*op) {
                    Some(None) => Node::Succ(self.node(&args[0], at, scope, env, nodes, vars)),
                    Some(Some(k)) => {
                        let a = self.node(&args[0], at, scope, env, nodes, vars);
                        let b = self.node(&args[1], at, scope, env, nodes, vars);
                        Node::Bin(k, a, b)
                    }
                    None => Node::Top,
                },
                _ => Node::Top,
            }
        };
        nodes.push(n);
        nodes.len() - 1
    }

    /// Initial box of a quantified variable, with a constraint tying it to
    /// its bound when that is not fixed yet.
    #[allow(clippy::too_many_arguments)]
    fn bounded(
        &self,
        r: &Range,
        var: usize,
        at: Frame,
        scope: &[usize],
        env: &mut Vec<Val>,
        net: &mut Net,
        vars: &mut usize,
    ) -> Result<Option<Iv>> {
        let tie = |net: &mut Net, env: &mut Vec<Val>, vars: &mut usize, t: &Term| {
            let b = self.node(t, at, scope, env, &mut net.nodes, vars);
            net.nodes.push(Node::Var(var));
            net.rels.push((Rel::Lt, net.nodes.len() - 1, b));
            b
        };
        match r {
            Range::Below(t) if t.deps() >> at.depth != 0 => {
                tie(net, env, vars, t);
                Ok(Some(Iv::top()))
            }
            Range::Below(t) => match self.range_bound(r, env) {
                Ok(b) => Ok(Iv::below(b)),
                Err(e) if e.is_budget() && var < at.block && num_op_term(t) => {
                    let b = tie(net, env, vars, t);
                    net.over[var] = Some(b);
                    Ok(Some(Iv::top()))
                }
                Err(e) => Err(e),
            },
            _ => Ok(Iv::below(self.range_bound(r, env)?)),
        }
    }

    fn build_net(
        &self,
        ranges: &[&Range],
        body: &Cond,
        want: bool,
        env: &mut Vec<Val>,
    ) -> Result<Option<(Net, Vec<Iv>)>> {
        let at = Frame {
            depth: env.len(),
            block: ranges.len(),
        };
        let mut found = Found {
            scopes: vec![vec![]],
            ..Found::default()
        };
        extract(body, want, 0, &mut found);
        if found.atoms.is_empty() {
            return Ok(None);
        }
        let mut net = Net {
            nodes: vec![],
            rels: vec![],
            over: vec![None; ranges.len()],
        };
        let empty = || {
            let net = Net {
                nodes: vec![],
                rels: vec![],
                over: vec![],
            };
            Some((net, vec![]))
        };
        let mut vars = 0;
        let mut boxes = Vec::with_capacity(ranges.len() + found.aux.len());
        for (i, r) in ranges.iter().enumerate() {
            match self.bounded(r, i, at, &[], env, &mut net, &mut vars)? {
                Some(b) => boxes.push(b),
                // An empty range: no assignment at all.
                None => return Ok(empty()),
            }
        }
        for (id, &(r, scope)) in found.aux.iter().enumerate() {
            let scope = &found.scopes[scope];
            match self.bounded(r, at.block + id, at, scope, env, &mut net, &mut vars)? {
                Some(b) => boxes.push(b),
                // A witness every solution needs cannot exist.
                None => return Ok(empty()),
            }
        }
        let before = vars;
        for &(rel, a, b, scope) in &found.atoms {
            let scope = &found.scopes[scope];
            let a = self.node(a, at, scope, env, &mut net.nodes, &mut vars);
            let b = self.node(b, at, scope, env, &mut net.nodes, &mut vars);
            net.rels.push((rel, a, b));
        }
        if vars == before {
            return Ok(None);
        }
        Ok(Some((net, boxes)))
    }

    #[allow(clippy::too_many_arguments)]
    fn label(
        &self,
        i: usize,
        boxes: Vec<Iv>,
        net: &Net,
        ranges: &[&Range],
        body: &Cond,
        want: bool,
        env: &mut Vec<Val>,
    ) -> Result<bool> {
        if boxes.len() < ranges.len() {
            return Ok(false);
        }
        let Some(boxes) = self.contract(net, boxes) else {
            return Ok(false);
        };
        if i == ranges.len() {
            return Ok(self.cond(body, env)? == want);
        }
        let bound = match (self.range_bound(ranges[i], env), net.over[i]) {
            (Ok(b), _) => b,
            // Only values known to lie below the bound can be tried.
            (Err(e), Some(node)) if e.is_budget() => {
                let least = self.forward(net, &boxes)[node].lo.clone();
                if boxes[i].hi.as_ref().is_none_or(|h| *h >= least) {
                    return Err(e);
                }
                least
            }
            (Err(e), _) => return Err(e),
        };
        let Some(dom) = Iv::below(bound).and_then(|r| r.meet(&boxes[i])) else {
            return Ok(false);
        };
        self.cap(&dom.count().expect("bounded"))?;
        let hi = dom.hi.clone().expect("bounded");
        let mut v = dom.lo;
        while v <= hi {
            env.push(Val::Code(v.clone()));
            let mut next = boxes.clone();
            next[i] = Iv::point(v.clone());
            let r = self.label(i + 1, next, net, ranges, body, want, env);
            env.pop();
            if r? {
                return Ok(true);
            }
            v += 1u8;
        }
        Ok(false)
    }

    fn forward(&self, net: &Net, boxes: &[Iv]) -> Vec<Iv> {
        let bits = self.ctx.budget.code_bits;
        let mut ivs: Vec<Iv> = Vec::with_capacity(net.nodes.len());
        for n in &net.nodes {
            let iv = match n {
                Node::Const(c) => c.clone(),
                Node::Var(i) => boxes[*i].clone(),
                Node::Top => Iv::top(),
                Node::Succ(a) => interval::succ(&ivs[*a]),
                Node::Bin(NumOp::Add, a, b) => interval::add(&ivs[*a], &ivs[*b]),
                Node::Bin(NumOp::Mul, a, b) => interval::mul(&ivs[*a], &ivs[*b], bits),
                Node::Bin(NumOp::Exp, a, b) => interval::pow(&ivs[*a], &ivs[*b], bits),
            };
            ivs.push(iv);
        }
        ivs
    }

    /// Narrows the boxes until nothing changes; `None` if some box empties.
    fn contract(&self, net: &Net, mut boxes: Vec<Iv>) -> Option<Vec<Iv>> {
        for _ in 0..MAX_ROUNDS {
            let mut ivs = self.forward(net, &boxes);
            let mut changed = false;
            for &(rel, a, b) in &net.rels {
                let mut ctx = Narrow {
                    net,
                    ivs: &mut ivs,
                    boxes: &mut boxes,
                    changed: &mut changed,
                };
                match rel {
                    Rel::Eq => {
                        let t = ctx.ivs[a].meet(&ctx.ivs[b])?;
                        ctx.narrow(a, &t)?;
                        ctx.narrow(b, &t)?;
                    }
                    Rel::Lt | Rel::Le => {
                        let strict = matches!(rel, Rel::Lt);
                        let upper = match (&ctx.ivs[b].hi, strict) {
                            (Some(h), true) => Iv::below(h.clone())?,
                            (Some(h), false) => Iv::new(Code::zero(), Some(h.clone()))?,
                            (None, _) => Iv::top(),
                        };
                        ctx.narrow(a, &upper)?;
                        let lo = &ctx.ivs[a].lo + u8::from(strict);
                        ctx.narrow(b, &Iv { lo, hi: None })?;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Some(boxes)
    }
}

struct Narrow<'a> {
    net: &'a Net,
    ivs: &'a mut Vec<Iv>,
    boxes: &'a mut Vec<Iv>,
    changed: &'a mut bool,
}

impl Narrow<'_> {
    fn narrow(&mut self, node: usize, target: &Iv) -> Option<()> {
        let new = self.ivs[node].meet(target)?;
        if new == self.ivs[node] {
            return Some(());
        }
        self.ivs[node] = new.clone();
        match self.net.nodes[node] {
            Node::Const(_) | Node::Top => {}
            Node::Var(i) => {
                let b = self.boxes[i].meet(&new)?;
                if b != self.boxes[i] {
                    self.boxes[i] = b;
                    *self.changed = true;
                }
            }
            Node::Succ(a) => {
                let t = interval::sub_from(&new, &Iv::point(Code::one()))?;
                self.narrow(a, &t)?;
            }
            Node::Bin(NumOp::Add, a, b) => {
                let ta = interval::sub_from(&new, &self.ivs[b])?;
                self.narrow(a, &ta)?;
                let tb = interval::sub_from(&new, &self.ivs[a])?;
                self.narrow(b, &tb)?;
            }
            Node::Bin(NumOp::Mul, a, b) => {
                let ta = interval::div_from(&new, &self.ivs[b])?;
                self.narrow(a, &ta)?;
                let tb = interval::div_from(&new, &self.ivs[a])?;
                self.narrow(b, &tb)?;
            }
            Node::Bin(NumOp::Exp, a, b) => {
                if let Some(base) = self.ivs[a].as_point().cloned() {
                    let t = interval::log_from(&base, &new)?;
                    self.narrow(b, &t)?;
                }
                if let Some(k) = self.ivs[b]
                    .as_point()
                    .and_then(|e| e.to_u32())
                    .filter(|&k| k >= 1)
                {
                    let t = interval::root_from(k, &new)?;
                    self.narrow(a, &t)?;
                }
            }
        }
        Some(())
    }
}
