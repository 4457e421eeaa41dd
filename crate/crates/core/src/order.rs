//! Lexicographic orderings of power sets, the Ackermann ordering of the
//! universe, successor, binary numerals and order segments.
//!
//! Nothing here reads the memoized codes: orderings are built from the Lex
//! comparator, and `ack_less` recurses on symmetric differences. Agreement
//! with code order is checked in the tests, not assumed.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::set::{level_size, Budget, Code, HfSet};

/// A duplicate-free finite sequence of sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearOrder {
    items: Vec<HfSet>,
    index: HashMap<HfSet, usize>,
}

impl LinearOrder {
    /// Fails with the first repeated item.
    pub fn new(items: Vec<HfSet>) -> Result<LinearOrder, HfSet> {
        let mut index = HashMap::with_capacity(items.len());
        for (i, x) in items.iter().enumerate() {
            if index.insert(x.clone(), i).is_some() {
                return Err(x.clone());
            }
        }
        Ok(LinearOrder { items, index })
    }

    pub fn empty() -> LinearOrder {
        LinearOrder {
            items: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn items(&self) -> &[HfSet] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn index_of(&self, x: &HfSet) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.index.contains_key(x)
    }

    pub fn first(&self) -> Option<&HfSet> {
        self.items.first()
    }

    pub fn last(&self) -> Option<&HfSet> {
        self.items.last()
    }

    pub fn field(&self) -> HfSet {
        HfSet::from_children(self.items.iter().cloned())
    }

    /// The closed segment `[from, ..., to]`, if both are present in order.
    pub fn segment(&self, from: &HfSet, to: &HfSet) -> Option<LinearOrder> {
        let (i, j) = (self.index_of(from)?, self.index_of(to)?);
        (i <= j).then(|| LinearOrder::new(self.items[i..=j].to_vec()).expect("sub-slice"))
    }

    /// Whether `self` is an initial segment of `other`.
    pub fn is_prefix_of(&self, other: &LinearOrder) -> bool {
        self.len() <= other.len() && self.items[..] == other.items[..self.len()]
    }

    pub fn less(&self, x: &HfSet, y: &HfSet) -> Option<bool> {
        Some(self.index_of(x)? < self.index_of(y)?)
    }
}

impl fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

/// `X <_{Lex(L)} Y`: the `L`-greatest element of `X △ Y` lies in `Y`.
pub fn lex_less(l: &LinearOrder, x: &HfSet, y: &HfSet) -> Result<bool> {
    let mut top: Option<(usize, bool)> = None;
    for (set, other, in_y) in [(x, y, false), (y, x, true)] {
        for m in set.members() {
            let i = l.index_of(m).ok_or(Error::NotASubset)?;
            if !other.contains(m) && top.is_none_or(|(t, _)| i > t) {
                top = Some((i, in_y));
            }
        }
    }
    Ok(top.is_some_and(|(_, in_y)| in_y))
}

/// All subsets of `field(L)` sorted by `lex_less`.
pub fn lex(l: &LinearOrder, budget: &Budget) -> Result<LinearOrder> {
    let n = l.len();
    if n >= 64 {
        return Err(Error::budget(
            format!("Lex of a {n}-item order"),
            budget.members,
        ));
    }
    budget.check_members("Lex ordering", 1u128 << n)?;
    let items = l.items();
    let mut subsets: Vec<HfSet> = (0u64..1 << n)
        .rev()
        .map(|mask| {
            HfSet::from_children(
                (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| items[i].clone()),
            )
        })
        .collect();
    let mut failure = None;
    subsets.sort_by(|a, b| {
        if a == b {
            return std::cmp::Ordering::Equal;
        }
        match lex_less(l, a, b) {
            Ok(true) => std::cmp::Ordering::Less,
            Ok(false) => std::cmp::Ordering::Greater,
            Err(e) => {
                failure.get_or_insert(e);
                std::cmp::Ordering::Equal
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(LinearOrder::new(subsets).expect("subsets are distinct"))
}

const CACHED_LEVELS: usize = 6;

/// `Ack(V_0) = []`, `Ack(V_{k+1}) = Lex(Ack(V_k))`.
pub fn ack_order(m: u64) -> Result<Arc<LinearOrder>> {
    ack_order_within(m, &Budget::default())
}

pub fn ack_order_within(m: u64, budget: &Budget) -> Result<Arc<LinearOrder>> {
    static CACHE: [OnceLock<Arc<LinearOrder>>; CACHED_LEVELS] =
        [const { OnceLock::new() }; CACHED_LEVELS];
    match level_size(m) {
        Some(n) if n <= Code::from(budget.members) => {}
        _ => return Err(Error::budget(format!("Ack(V_{m})"), budget.members)),
    }
    if m == 0 {
        return Ok(Arc::new(LinearOrder::empty()));
    }
    if let Some(hit) = CACHE.get(m as usize).and_then(|c| c.get()) {
        return Ok(hit.clone());
    }
    let below = ack_order_within(m - 1, budget)?;
    let order = Arc::new(lex(&below, budget)?);
    if let Some(cell) = CACHE.get(m as usize) {
        let _ = cell.set(order.clone());
    }
    Ok(order)
}

/// `x <_a y`, by rank and then by the Lex rule on `x △ y`, recursively.
pub fn ack_less(x: &HfSet, y: &HfSet) -> bool {
    if x == y {
        return false;
    }
    if x.rank() != y.rank() {
        return x.rank() < y.rank();
    }
    let mut top: Option<(&HfSet, bool)> = None;
    for (set, other, in_y) in [(x, y, false), (y, x, true)] {
        for m in set.members() {
            if !other.contains(m) && top.is_none_or(|(t, _)| ack_less(t, m)) {
                top = Some((m, in_y));
            }
        }
    }
    top.is_some_and(|(_, in_y)| in_y)
}

/// `x <_a y` read straight off the materialized ordering `Ack(R(y))`.
pub fn ack_less_literal(x: &HfSet, y: &HfSet) -> Result<bool> {
    if x.rank() > y.rank() {
        return Ok(false);
    }
    let order = ack_order(y.rank() + 1)?;
    let (i, j) = (order.index_of(x), order.index_of(y));
    Ok(i.expect("x ∈ R(x) ⊆ R(y)") < j.expect("y ∈ R(y)"))
}

/// The number of sets `<_a x`.
///
/// Sets of lower rank come first; among subsets of a level, the number of
/// Lex predecessors of `x` is `Σ 2^i` over the indices `i` of its members.
pub fn position(x: &HfSet) -> Result<Code> {
    position_within(x, &Budget::default())
}

pub fn position_within(x: &HfSet, budget: &Budget) -> Result<Code> {
    let mut n = Code::zero();
    for m in x.members() {
        let p = position_within(m, budget)?;
        let p = u64::try_from(&p).map_err(|_| Error::budget("position", budget.code_bits))?;
        budget.check_bits("position", p + 1)?;
        n.set_bit(p, true);
    }
    Ok(n)
}

/// The set immediately after `x` in Ackermann order. Reads it off a
/// materialized ordering when one contains both `x` and its successor, and
/// uses the carry rule otherwise.
pub fn successor_a(x: &HfSet) -> Result<HfSet> {
    if x.rank() < CACHED_LEVELS as u64 - 1 {
        match successor_literal(x) {
            Err(e) if e.is_budget() => {}
            other => return other,
        }
    }
    Ok(successor_carry(x))
}

/// The element after `x` in `Ack(P(R(x)))`. When `x` is not the last element
/// of `Ack(R(x))`, that ordering is an initial segment of `Ack(P(R(x)))` and
/// is used instead.
pub fn successor_literal(x: &HfSet) -> Result<HfSet> {
    let level = ack_order(x.rank() + 1)?;
    let i = level.index_of(x).expect("x ∈ R(x)");
    if i + 1 < level.len() {
        return Ok(level.items()[i + 1].clone());
    }
    let order = ack_order(x.rank() + 2)?;
    let i = order.index_of(x).expect("x ∈ R(x) ⊆ P(R(x))");
    Ok(order.items()[i + 1].clone())
}

/// Carry rule on numerals: the leading run of members `x_0, ..., x_{k-1}` is
/// cleared and `x_k` is added.
pub fn successor_carry(x: &HfSet) -> HfSet {
    let mut t = HfSet::empty();
    let mut cleared = Vec::new();
    while x.contains(&t) {
        let next = successor_carry(&t);
        cleared.push(t);
        t = next;
    }
    HfSet::from_children(
        x.members()
            .iter()
            .filter(|m| !cleared.contains(m))
            .cloned()
            .chain(std::iter::once(t)),
    )
}

/// Lazily enumerates the universe in Ackermann order.
#[derive(Clone, Debug)]
pub struct AckIter {
    next: HfSet,
}

impl Iterator for AckIter {
    type Item = HfSet;

    fn next(&mut self) -> Option<HfSet> {
        let out = self.next.clone();
        self.next = successor_carry(&out);
        Some(out)
    }
}

pub fn ack_iter() -> AckIter {
    ack_iter_from(HfSet::empty())
}

pub fn ack_iter_from(x: HfSet) -> AckIter {
    AckIter { next: x }
}

/// The first `n` sets in Ackermann order.
pub fn ack_prefix(n: usize) -> Vec<HfSet> {
    match ack_order(5) {
        Ok(v5) if n <= v5.len() => v5.items()[..n].to_vec(),
        _ => ack_iter().take(n).collect(),
    }
}

/// A little-endian binary numeral: bit `i` says whether the `i`-th set in
/// Ackermann order is a member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Numeral {
    pub bits: Vec<bool>,
}

impl Numeral {
    pub fn parse(s: &str) -> Option<Numeral> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(|bits| Numeral { bits })
    }
}

impl fmt::Display for Numeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `Num(x)`, over `[x_0, ..., x_n]` with `x_n = x`.
pub fn numeral(x: &HfSet) -> Result<Numeral> {
    numeral_within(x, &Budget::default())
}

pub fn numeral_within(x: &HfSet, budget: &Budget) -> Result<Numeral> {
    let pos = position_within(x, budget)?;
    if pos >= Code::from(budget.members) {
        return Err(Error::budget(
            format!("numeral of length {pos} + 1"),
            budget.members,
        ));
    }
    let len = u64::try_from(&pos).expect("below budget") as usize + 1;
    let prefix = ack_prefix(len);
    debug_assert_eq!(prefix.last(), Some(x));
    Ok(Numeral {
        bits: prefix.iter().map(|s| x.contains(s)).collect(),
    })
}

/// `Σ s_i 2^i`.
pub fn numeral_value(n: &Numeral) -> Code {
    let mut v = Code::zero();
    for (i, &b) in n.bits.iter().enumerate() {
        if b {
            v.set_bit(i as u64, true);
        }
    }
    v
}

/// The segment `[{∅}, ..., x]` of the Ackermann ordering; empty for `x = ∅`.
pub fn segment(x: &HfSet, budget: &Budget) -> Result<LinearOrder> {
    let mut items = Vec::new();
    if x.is_empty() {
        return Ok(LinearOrder::empty());
    }
    for s in ack_iter_from(HfSet::singleton(HfSet::empty())) {
        if items.len() as u64 >= budget.members {
            return Err(Error::budget("order segment", budget.members));
        }
        let done = &s == x;
        items.push(s);
        if done {
            break;
        }
    }
    Ok(LinearOrder::new(items).expect("enumeration has no repeats"))
}

/// `|[{∅}, ..., x]|`, which is the position of `x`.
pub fn segment_card(x: &HfSet) -> Result<Code> {
    position(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{decode_u64, empty, materialize_level};

    fn d(n: u64) -> HfSet {
        decode_u64(n)
    }

    fn order(ns: &[u64]) -> LinearOrder {
        LinearOrder::new(ns.iter().map(|&n| d(n)).collect()).unwrap()
    }

    #[test]
    fn lex_examples() {
        let l = order(&[0]);
        assert!(lex_less(&l, &d(0), &d(1)).unwrap());
        assert!(!lex_less(&l, &d(1), &d(1)).unwrap());
        let l = order(&[0, 1]);
        // X = {{∅}}, Y = {∅, {∅}}: the symmetric difference is {∅} ⊆ Y.
        assert!(lex_less(&l, &d(2), &d(3)).unwrap());
        assert_eq!(lex_less(&l, &d(4), &d(3)), Err(Error::NotASubset));
    }

    #[test]
    fn lex_of_two_items_matches_brute_force() {
        let l = order(&[0, 1]);
        let subsets = [d(0), d(1), d(2), d(3)];
        for (i, a) in subsets.iter().enumerate() {
            for (j, b) in subsets.iter().enumerate() {
                assert_eq!(lex_less(&l, a, b).unwrap(), i < j);
            }
        }
    }

    #[test]
    fn small_ack_orders() {
        assert!(ack_order(0).unwrap().is_empty());
        assert_eq!(*ack_order(2).unwrap(), order(&[0, 1]));
        assert_eq!(*ack_order(3).unwrap(), order(&[0, 1, 2, 3]));
        assert_eq!(
            ack_order(3).unwrap().to_string(),
            "[{}, {{}}, {{{}}}, {{}, {{}}}]"
        );
    }

    #[test]
    fn ack_orders_enumerate_levels() {
        for m in 0..=4 {
            let o = ack_order(m).unwrap();
            assert_eq!(o.field(), materialize_level(m).unwrap());
            assert!(o.is_prefix_of(&ack_order(m + 1).unwrap()));
        }
    }

    #[test]
    fn ack_less_examples() {
        assert!(ack_less(&d(0), &d(1)));
        assert!(!ack_less(&d(9), &d(9)));
        assert!(ack_less(&d(5), &d(6)));
        assert!(!ack_less(&d(6), &d(5)));
    }

    #[test]
    fn literal_comparator_small() {
        for a in 0..64 {
            for b in 0..64 {
                assert_eq!(ack_less_literal(&d(a), &d(b)).unwrap(), a < b);
            }
        }
    }

    #[test]
    fn position_examples() {
        assert_eq!(position(&empty()).unwrap(), Code::from(0u8));
        assert_eq!(position(&d(3)).unwrap(), Code::from(3u8));
        assert_eq!(position(&d(100)).unwrap(), Code::from(100u8));
    }

    #[test]
    fn position_counts_predecessors() {
        let v4 = ack_order(4).unwrap();
        for (i, x) in v4.items().iter().enumerate() {
            let below = v4.items().iter().filter(|y| ack_less(y, x)).count();
            assert_eq!(below, i);
            assert_eq!(position(x).unwrap(), Code::from(i));
        }
    }

    #[test]
    fn successor_examples() {
        assert_eq!(successor_a(&empty()).unwrap(), d(1));
        assert_eq!(successor_a(&d(3)).unwrap(), d(4));
        let top = d(65535);
        assert_eq!(top.rank(), 4);
        let next = successor_a(&top).unwrap();
        assert_eq!(next, d(65536));
        assert_eq!(next.rank(), 5);
    }

    #[test]
    fn carry_and_literal_successor_agree() {
        for n in (0..4096).chain(65000..65535) {
            assert_eq!(
                successor_carry(&d(n)),
                successor_literal(&d(n)).unwrap(),
                "{n}"
            );
        }
        assert!(successor_literal(&d(65535)).unwrap_err().is_budget());
    }

    #[test]
    fn enumeration() {
        let first: Vec<HfSet> = ack_iter().take(300).collect();
        assert_eq!(first, (0..300).map(d).collect::<Vec<_>>());
        assert_eq!(ack_prefix(70000).len(), 70000);
        assert_eq!(ack_prefix(70000)[69999], d(69999));
    }

    #[test]
    fn numeral_examples() {
        assert_eq!(numeral(&empty()).unwrap().to_string(), "0");
        assert_eq!(numeral(&d(1)).unwrap().to_string(), "10");
        assert_eq!(numeral(&d(6)).unwrap().to_string(), "0110000");
        assert_eq!(
            numeral_value(&Numeral::parse("0").unwrap()),
            Code::from(0u8)
        );
        assert_eq!(
            numeral_value(&Numeral::parse("10").unwrap()),
            Code::from(1u8)
        );
        assert_eq!(
            numeral_value(&Numeral::parse("0110").unwrap()),
            Code::from(6u8)
        );
    }

    #[test]
    fn segments() {
        assert_eq!(segment(&d(1), &Budget::default()).unwrap(), order(&[1]));
        assert!(segment(&empty(), &Budget::default()).unwrap().is_empty());
        assert_eq!(
            segment(&d(5), &Budget::default()).unwrap(),
            order(&[1, 2, 3, 4, 5])
        );
        assert_eq!(segment_card(&d(1)).unwrap(), Code::from(1u8));
        assert_eq!(segment_card(&empty()).unwrap(), Code::from(0u8));
        assert_eq!(segment_card(&d(5)).unwrap(), Code::from(5u8));
    }

    #[test]
    fn linear_order_basics() {
        assert_eq!(LinearOrder::new(vec![d(1), d(1)]).unwrap_err(), d(1));
        let o = order(&[4, 2, 7]);
        assert_eq!(o.index_of(&d(7)), Some(2));
        assert_eq!(o.segment(&d(2), &d(7)).unwrap(), order(&[2, 7]));
        assert!(o.segment(&d(7), &d(2)).is_none());
        assert_eq!(o.less(&d(4), &d(7)), Some(true));
        assert_eq!(o.first(), Some(&d(4)));
    }
}
