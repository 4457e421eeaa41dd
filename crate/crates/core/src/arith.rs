//! The arithmetic structure `⟨V, 0_a, <_a, S_a, +_a, ×_a, Exp_a⟩` on sets.
//!
//! `Literal` mode follows the set-theoretic definitions: it lays out the
//! segments `[{∅}, ..., x]` of the Ackermann ordering, combines their fields
//! with the cardinal operations, and scans the ordering for the set whose
//! segment has the resulting size. `Fast` mode does the same arithmetic on
//! codes. The two are compared in the tests.

use std::sync::LazyLock;

use dashmap::DashMap;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cardinal::{card_add_within, card_eq, card_exp_within, product_within};
use crate::error::{Error, Result};
use crate::order::{ack_iter, ack_less, segment, successor_a};
use crate::set::{decode_within, encode, Budget, Code, HfSet};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithMode {
    Literal,
    #[default]
    Fast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithOp {
    Add,
    Mul,
    Exp,
}

impl ArithOp {
    pub fn name(self) -> &'static str {
        match self {
            ArithOp::Add => "+_a",
            ArithOp::Mul => "×_a",
            ArithOp::Exp => "Exp_a",
        }
    }
}

/// Largest operand codes (inclusive) that literal mode will take on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiteralDomain {
    pub add: u64,
    pub mul: u64,
    pub exp_base: u64,
    pub exp_exponent: u64,
}

impl Default for LiteralDomain {
    fn default() -> Self {
        LiteralDomain {
            add: 64,
            mul: 16,
            exp_base: 7,
            exp_exponent: 5,
        }
    }
}

impl LiteralDomain {
    pub fn admits(&self, op: ArithOp, x: &HfSet, y: &HfSet) -> bool {
        let (Some(a), Some(b)) = (x.code_u64(), y.code_u64()) else {
            return false;
        };
        match op {
            ArithOp::Add => a <= self.add && b <= self.add,
            ArithOp::Mul => a <= self.mul && b <= self.mul,
            ArithOp::Exp => a <= self.exp_base && b <= self.exp_exponent,
        }
    }
}

/// `0_a = ∅`.
pub fn zero_a() -> HfSet {
    HfSet::empty()
}

pub fn less_a(x: &HfSet, y: &HfSet) -> bool {
    ack_less(x, y)
}

pub fn succ_a(x: &HfSet) -> Result<HfSet> {
    successor_a(x)
}

pub fn add_a(x: &HfSet, y: &HfSet, mode: ArithMode) -> Result<HfSet> {
    apply(
        ArithOp::Add,
        x,
        y,
        mode,
        &Budget::default(),
        &LiteralDomain::default(),
    )
}

pub fn mul_a(x: &HfSet, y: &HfSet, mode: ArithMode) -> Result<HfSet> {
    apply(
        ArithOp::Mul,
        x,
        y,
        mode,
        &Budget::default(),
        &LiteralDomain::default(),
    )
}

pub fn exp_a(x: &HfSet, y: &HfSet, mode: ArithMode) -> Result<HfSet> {
    apply(
        ArithOp::Exp,
        x,
        y,
        mode,
        &Budget::default(),
        &LiteralDomain::default(),
    )
}

pub fn apply(
    op: ArithOp,
    x: &HfSet,
    y: &HfSet,
    mode: ArithMode,
    budget: &Budget,
    domain: &LiteralDomain,
) -> Result<HfSet> {
    match mode {
        ArithMode::Fast => apply_fast(op, x, y, budget),
        ArithMode::Literal => {
            if !domain.admits(op, x, y) {
                return Err(Error::OutsideLiteralDomain {
                    op: op.name(),
                    detail: format!("operands {x} and {y}"),
                });
            }
            apply_literal(op, x, y, budget)
        }
    }
}

/// The operation carried out on codes.
pub fn apply_fast(op: ArithOp, x: &HfSet, y: &HfSet, budget: &Budget) -> Result<HfSet> {
    let (a, b) = (encode(x)?, encode(y)?);
    decode_within(&code_op(op, &a, &b, budget)?, budget)
}

/// `+`, `·` or `^` on naturals, refusing results longer than the budget.
pub fn code_op(op: ArithOp, a: &Code, b: &Code, budget: &Budget) -> Result<Code> {
    let out = match op {
        ArithOp::Add => a + b,
        ArithOp::Mul => {
            budget.check_bits("product", (a.bits() + b.bits()).saturating_sub(1))?;
            a * b
        }
        ArithOp::Exp => code_pow(a, b, budget)?,
    };
    budget.check_bits(op.name(), out.bits())?;
    Ok(out)
}

fn code_pow(a: &Code, b: &Code, budget: &Budget) -> Result<Code> {
    if b.is_zero() || a.is_one() {
        return Ok(Code::one());
    }
    if a.is_zero() {
        return Ok(Code::zero());
    }
    let e = b
        .to_u32()
        .ok_or_else(|| Error::budget("exponent", budget.code_bits))?;
    let least_bits = (a.bits() - 1) * e as u64 + 1;
    budget.check_bits("power", least_bits)?;
    Ok(a.pow(e))
}

static LITERAL_CACHE: LazyLock<DashMap<(ArithOp, u64, u64), HfSet>> = LazyLock::new(DashMap::new);

/// The unique `z` whose segment `[{∅}, ..., z]` is cardinally equivalent to
/// the cardinal combination of the segments of `x` and `y`.
pub fn apply_literal(op: ArithOp, x: &HfSet, y: &HfSet, budget: &Budget) -> Result<HfSet> {
    let key = match (x.code_u64(), y.code_u64()) {
        (Some(a), Some(b)) => Some((op, a, b)),
        _ => None,
    };
    if let Some(hit) = key.and_then(|k| LITERAL_CACHE.get(&k).map(|v| v.clone())) {
        return Ok(hit);
    }
    let fx = segment(x, budget)?.field();
    let fy = segment(y, budget)?.field();
    let target = match op {
        ArithOp::Add => card_add_within(&fx, &fy, budget)?,
        ArithOp::Mul => product_within(&fx, &fy, budget)?,
        ArithOp::Exp => card_exp_within(&fx, &fy, budget)?,
    };
    let want = target.len();
    let mut seen = Vec::with_capacity(want);
    let mut z = HfSet::empty();
    for s in ack_iter() {
        if s.is_empty() {
            if want == 0 {
                break;
            }
            continue;
        }
        seen.push(s.clone());
        if seen.len() as u64 > budget.members {
            return Err(Error::budget("order segment", budget.members));
        }
        if seen.len() == want {
            z = s;
            break;
        }
    }
    debug_assert!(card_eq(&HfSet::from_children(seen), &target));
    if let Some(k) = key {
        LITERAL_CACHE.insert(k, z.clone());
    }
    Ok(z)
}
