//! Hereditarily finite sets.
//!
//! Every set is interned: two structurally equal sets are always the same
//! node, so equality and hashing are pointer operations. Children are kept
//! sorted in Ackermann order and each node memoizes its rank and, when it is
//! small enough, its Ackermann code `Σ 2^code(child)`.

mod level;
mod literal;
mod ordinal;

pub use level::{level_of, level_size, materialize_level, materialize_level_within, LevelRef};
pub use literal::parse_set_literal;
pub use ordinal::{
    is_ordinal, ord_add, ord_add_within, ord_exp, ord_exp_within, ord_mul, ord_mul_within, ordinal,
    ordinal_value,
};

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering as AtomicOrdering};
use std::sync::{Arc, LazyLock, OnceLock, Weak};

use dashmap::mapref::entry::Entry;
use dashmap::DashMap;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An Ackermann code, which doubles as a natural number of the arithmetic side.
pub type Code = BigUint;

/// Largest code bit-length a node will memoize. Sets beyond it still exist
/// (big ordinals, large function spaces) but have no cached code.
pub const MEMO_CODE_BITS: u64 = 1 << 20;

/// Limits on materialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Maximum bit-length of any code produced.
    pub code_bits: u64,
    /// Maximum number of members of any set built by enumeration
    /// (power sets, levels, products, function spaces).
    pub members: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            code_bits: MEMO_CODE_BITS,
            members: 1 << 20,
        }
    }
}

impl Budget {
    pub(crate) fn check_members(&self, what: &str, count: u128) -> Result<()> {
        if count > self.members as u128 {
            return Err(Error::budget(
                format!("{what} would have {count} members"),
                self.members,
            ));
        }
        Ok(())
    }

    pub(crate) fn check_bits(&self, what: &str, bits: u64) -> Result<()> {
        if bits > self.code_bits {
            return Err(Error::budget(
                format!("{what} needs a {bits}-bit code"),
                self.code_bits,
            ));
        }
        Ok(())
    }
}

struct Node {
    id: u64,
    rank: u64,
    code: Option<Code>,
    children: Box<[HfSet]>,
}

/// A canonical hereditarily finite set.
#[derive(Clone)]
pub struct HfSet(Arc<Node>);

struct Interner {
    table: DashMap<Box<[u64]>, Weak<Node>>,
    inserts: AtomicUsize,
    purge_at: AtomicUsize,
}

const MIN_PURGE: usize = 1 << 16;

static INTERNER: LazyLock<Interner> = LazyLock::new(|| Interner {
    table: DashMap::new(),
    inserts: AtomicUsize::new(0),
    purge_at: AtomicUsize::new(MIN_PURGE),
});

static NEXT_ID: AtomicU64 = AtomicU64::new(0);

fn make_node(children: Vec<HfSet>) -> Arc<Node> {
    let rank = children.iter().map(|c| c.rank() + 1).max().unwrap_or(0);
    let code = match children.last() {
        None => Some(Code::zero()),
        Some(top) => match top.code_u64() {
            Some(t) if t < MEMO_CODE_BITS => {
                let mut n = Code::zero();
                for c in &children {
                    n.set_bit(c.code_u64().expect("children below top have codes"), true);
                }
                Some(n)
            }
            _ => None,
        },
    };
    Arc::new(Node {
        id: NEXT_ID.fetch_add(1, AtomicOrdering::Relaxed),
        rank,
        code,
        children: children.into_boxed_slice(),
    })
}

impl Interner {
    fn intern(&self, children: Vec<HfSet>) -> HfSet {
        let key: Box<[u64]> = children.iter().map(|c| c.0.id).collect();
        let node = match self.table.entry(key) {
            Entry::Occupied(mut e) => {
                if let Some(live) = e.get().upgrade() {
                    return HfSet(live);
                }
                let node = make_node(children);
                e.insert(Arc::downgrade(&node));
                node
            }
            Entry::Vacant(e) => {
                let node = make_node(children);
                e.insert(Arc::downgrade(&node));
                node
            }
        };
        if self.inserts.fetch_add(1, AtomicOrdering::Relaxed) + 1
            >= self.purge_at.load(AtomicOrdering::Relaxed)
        {
            self.purge();
        }
        HfSet(node)
    }

    fn purge(&self) {
        self.table.retain(|_, w| w.strong_count() > 0);
        let live = self.table.len();
        self.purge_at
            .store(live.max(MIN_PURGE), AtomicOrdering::Relaxed);
        self.inserts.store(0, AtomicOrdering::Relaxed);
    }
}

/// Number of distinct sets currently alive in the interning table.
pub fn interned_count() -> usize {
    INTERNER.table.len()
}

impl HfSet {
    pub fn empty() -> HfSet {
        static EMPTY: OnceLock<HfSet> = OnceLock::new();
        EMPTY.get_or_init(|| INTERNER.intern(Vec::new())).clone()
    }

    /// Builds the set with the given members, removing duplicates.
    pub fn from_children<I: IntoIterator<Item = HfSet>>(cs: I) -> HfSet {
        let mut children: Vec<HfSet> = cs.into_iter().collect();
        children.sort();
        children.dedup();
        INTERNER.intern(children)
    }

    /// Builds a set from members already sorted and duplicate-free.
    pub(crate) fn from_sorted(children: Vec<HfSet>) -> HfSet {
        debug_assert!(children.windows(2).all(|w| w[0] < w[1]));
        INTERNER.intern(children)
    }

    pub fn singleton(x: HfSet) -> HfSet {
        HfSet::from_sorted(vec![x])
    }

    /// Members in ascending Ackermann order.
    pub fn members(&self) -> &[HfSet] {
        &self.0.children
    }

    pub fn len(&self) -> usize {
        self.0.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.children.is_empty()
    }

    pub fn rank(&self) -> u64 {
        self.0.rank
    }

    /// The memoized code, if it was small enough to keep.
    pub fn code(&self) -> Option<&Code> {
        self.0.code.as_ref()
    }

    pub fn code_u64(&self) -> Option<u64> {
        self.0.code.as_ref().and_then(|c| c.to_u64())
    }

    #[cfg(test)]
    fn id(&self) -> u64 {
        self.0.id
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.0.children.binary_search(x).is_ok()
    }

    /// `self ∪ {z}`.
    pub fn insert(&self, z: &HfSet) -> HfSet {
        match self.0.children.binary_search(z) {
            Ok(_) => self.clone(),
            Err(at) => {
                let mut cs = self.0.children.to_vec();
                cs.insert(at, z.clone());
                HfSet::from_sorted(cs)
            }
        }
    }

    pub fn remove(&self, z: &HfSet) -> HfSet {
        match self.0.children.binary_search(z) {
            Err(_) => self.clone(),
            Ok(at) => {
                let mut cs = self.0.children.to_vec();
                cs.remove(at);
                HfSet::from_sorted(cs)
            }
        }
    }

    pub fn union(&self, other: &HfSet) -> HfSet {
        HfSet::from_children(self.members().iter().chain(other.members()).cloned())
    }

    pub fn intersection(&self, other: &HfSet) -> HfSet {
        HfSet::from_sorted(
            self.members()
                .iter()
                .filter(|m| other.contains(m))
                .cloned()
                .collect(),
        )
    }

    pub fn is_subset(&self, other: &HfSet) -> bool {
        self.len() <= other.len() && self.members().iter().all(|m| other.contains(m))
    }

    /// The von Neumann successor `x ∪ {x}`.
    pub fn successor(&self) -> HfSet {
        let mut cs = self.0.children.to_vec();
        cs.push(self.clone());
        HfSet::from_sorted(cs)
    }
}

impl PartialEq for HfSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for HfSet {}

impl Hash for HfSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

/// Ackermann order. Uses the memoized codes when both are present and
/// otherwise compares members from the top down, which is the same order.
impl Ord for HfSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match (&self.0.code, &other.0.code) {
            (Some(a), Some(b)) => a.cmp(b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => {
                let mut xs = self.members().iter().rev();
                let mut ys = other.members().iter().rev();
                loop {
                    match (xs.next(), ys.next()) {
                        (Some(a), Some(b)) => match a.cmp(b) {
                            Ordering::Equal => continue,
                            o => return o,
                        },
                        (Some(_), None) => return Ordering::Greater,
                        (None, Some(_)) => return Ordering::Less,
                        (None, None) => return Ordering::Equal,
                    }
                }
            }
        }
    }
}

impl PartialOrd for HfSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn empty() -> HfSet {
    HfSet::empty()
}

pub fn encode(x: &HfSet) -> Result<Code> {
    x.code()
        .cloned()
        .ok_or_else(|| Error::budget("code of set", MEMO_CODE_BITS))
}

pub fn encode_within(x: &HfSet, budget: &Budget) -> Result<Code> {
    let n = encode(x)?;
    budget.check_bits("code of set", n.bits())?;
    Ok(n)
}

const SMALL: usize = 1 << 16;

fn small_table() -> &'static [HfSet] {
    static TABLE: OnceLock<Box<[HfSet]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t: Vec<HfSet> = Vec::with_capacity(SMALL);
        for n in 0..SMALL {
            let cs = (0..16)
                .filter(|i| n >> i & 1 == 1)
                .map(|i| t[i].clone())
                .collect();
            let x = HfSet::from_sorted(cs);
            t.push(x);
        }
        t.into_boxed_slice()
    })
}

pub fn decode_u64(n: u64) -> HfSet {
    if n < SMALL as u64 {
        return small_table()[n as usize].clone();
    }
    let cs = (0..64)
        .filter(|i| n >> i & 1 == 1)
        .map(|i| decode_u64(i as u64))
        .collect();
    HfSet::from_sorted(cs)
}

pub fn decode(n: &Code) -> Result<HfSet> {
    decode_within(n, &Budget::default())
}

pub fn decode_within(n: &Code, budget: &Budget) -> Result<HfSet> {
    budget.check_bits("decoded code", n.bits())?;
    if let Some(small) = n.to_u64() {
        return Ok(decode_u64(small));
    }
    let mut cs = Vec::with_capacity(n.count_ones() as usize);
    for (word, digit) in n.iter_u64_digits().enumerate() {
        let mut d = digit;
        while d != 0 {
            let bit = d.trailing_zeros() as u64;
            cs.push(decode_u64(word as u64 * 64 + bit));
            d &= d - 1;
        }
    }
    Ok(HfSet::from_sorted(cs))
}

/// `x ∈ y`.
pub fn mem(x: &HfSet, y: &HfSet) -> bool {
    y.contains(x)
}

pub fn pair(x: &HfSet, y: &HfSet) -> HfSet {
    HfSet::from_children([x.clone(), y.clone()])
}

pub fn sumset(x: &HfSet) -> HfSet {
    HfSet::from_children(x.members().iter().flat_map(|m| m.members().iter().cloned()))
}

pub fn powerset(x: &HfSet) -> Result<HfSet> {
    powerset_within(x, &Budget::default())
}

pub fn powerset_within(x: &HfSet, budget: &Budget) -> Result<HfSet> {
    let n = x.len();
    if n >= 64 {
        return Err(Error::budget(
            format!("power set of a {n}-member set"),
            budget.members,
        ));
    }
    budget.check_members("power set", 1u128 << n)?;
    let ms = x.members();
    // Counting through bit masks in order visits subsets in ascending
    // Ackermann order, since the members are already sorted.
    let subsets = (0u64..1 << n)
        .map(|mask| {
            HfSet::from_sorted(
                (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| ms[i].clone())
                    .collect(),
            )
        })
        .collect();
    Ok(HfSet::from_sorted(subsets))
}

pub fn rank(x: &HfSet) -> u64 {
    x.rank()
}

/// `{u ∈ y : pred(u)}`.
pub fn separate<E>(
    y: &HfSet,
    mut pred: impl FnMut(&HfSet) -> std::result::Result<bool, E>,
) -> std::result::Result<HfSet, E> {
    let mut kept = Vec::new();
    for m in y.members() {
        if pred(m)? {
            kept.push(m.clone());
        }
    }
    Ok(HfSet::from_sorted(kept))
}

pub fn is_transitive(x: &HfSet) -> bool {
    x.members()
        .iter()
        .all(|m| m.members().iter().all(|z| x.contains(z)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: u64) -> Code {
        Code::from(n)
    }

    #[test]
    fn empty_has_code_zero() {
        assert_eq!(encode(&empty()).unwrap(), c(0));
        assert_eq!(rank(&empty()), 0);
        assert!(empty().is_empty());
    }

    #[test]
    fn from_children_dedups_and_sorts() {
        let e = empty();
        let one = HfSet::singleton(e.clone());
        assert_eq!(HfSet::from_children([e.clone(), e.clone()]), one);
        let s = HfSet::from_children([one.clone(), e.clone()]);
        assert_eq!(s.members(), &[e.clone(), one.clone()]);
        assert_eq!(HfSet::from_children([]), e);
    }

    #[test]
    fn small_codes() {
        let e = empty();
        let one = HfSet::singleton(e.clone());
        assert_eq!(encode(&one).unwrap(), c(1));
        assert_eq!(encode(&pair(&e, &one)).unwrap(), c(3));
        assert_eq!(decode_u64(2), HfSet::singleton(one.clone()));
        assert_eq!(decode_u64(3), pair(&e, &one));
    }

    #[test]
    fn membership_examples() {
        let e = empty();
        let one = HfSet::singleton(e.clone());
        let two = HfSet::singleton(one.clone());
        assert!(mem(&e, &one));
        assert!(!mem(&one, &one));
        assert!(mem(&two, &decode_u64(6)));
    }

    #[test]
    fn pair_examples() {
        let e = empty();
        let one = decode_u64(1);
        assert_eq!(pair(&e, &e), one);
        assert_eq!(encode(&pair(&e, &one)).unwrap(), c(3));
        assert_eq!(pair(&one, &decode_u64(2)), decode_u64(6));
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(sumset(&empty()), empty());
        assert_eq!(sumset(&decode_u64(2)), decode_u64(1));
        assert_eq!(sumset(&decode_u64(3)), decode_u64(1));
    }

    #[test]
    fn powerset_examples() {
        assert_eq!(powerset(&empty()).unwrap(), decode_u64(1));
        assert_eq!(powerset(&decode_u64(1)).unwrap(), decode_u64(3));
        assert_eq!(powerset(&decode_u64(3)).unwrap(), decode_u64(15));
    }

    #[test]
    fn powerset_over_budget() {
        let tight = Budget {
            code_bits: 64,
            members: 8,
        };
        let err = powerset_within(&decode_u64(15), &tight).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&decode_u64(3)), 2);
        assert_eq!(rank(&decode_u64(65535)), 4);
    }

    #[test]
    fn decode_big() {
        let n = (Code::from(1u8) << 70u32) + Code::from(5u8);
        let x = decode(&n).unwrap();
        assert_eq!(encode(&x).unwrap(), n);
        assert_eq!(x.len(), 3);
        assert!(x.contains(&decode_u64(70)));
    }

    #[test]
    fn decode_over_budget() {
        let tight = Budget {
            code_bits: 10,
            members: 8,
        };
        assert!(decode_within(&c(5000), &tight).unwrap_err().is_budget());
    }

    #[test]
    fn uncoded_sets_still_compare() {
        // A code of 2^(2^20) is one bit past the memo cap.
        let big = HfSet::singleton(decode_u64(MEMO_CODE_BITS - 1));
        assert!(big.code().is_some());
        let bigger = HfSet::singleton(decode_u64(MEMO_CODE_BITS));
        assert!(bigger.code().is_none());
        assert!(encode(&bigger).unwrap_err().is_budget());
        let with_more = bigger.insert(&empty());
        assert!(bigger < with_more);
        assert!(decode_u64(12345) < bigger);
    }

    #[test]
    fn separate_examples() {
        let v3 = decode_u64(15);
        let ords = separate(&v3, |z| Ok::<_, ()>(is_ordinal(z))).unwrap();
        assert_eq!(
            ords,
            HfSet::from_children([ordinal(0), ordinal(1), ordinal(2)])
        );
        assert_eq!(separate(&v3, |_| Ok::<_, ()>(false)).unwrap(), empty());
        assert_eq!(separate(&v3, |_| Ok::<_, ()>(true)).unwrap(), v3);
    }

    #[test]
    fn transitivity_examples() {
        assert!(is_transitive(&empty()));
        assert!(!is_transitive(&decode_u64(2)));
        assert!(is_transitive(&decode_u64(15)));
    }

    #[test]
    fn insert_remove_union() {
        let x = decode_u64(5);
        assert_eq!(x.insert(&decode_u64(1)), decode_u64(7));
        assert_eq!(x.remove(&decode_u64(0)), decode_u64(4));
        assert_eq!(decode_u64(9).union(&decode_u64(6)), decode_u64(15));
        assert_eq!(decode_u64(9).intersection(&decode_u64(12)), decode_u64(8));
        assert!(decode_u64(4).is_subset(&decode_u64(6)));
    }

    #[test]
    fn concurrent_interning_gives_one_node() {
        let codes: Vec<u64> = (0u64..2000).map(|n| n * 7919 + (1 << 20)).collect();
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let codes = codes.clone();
                std::thread::spawn(move || codes.iter().map(|&n| decode_u64(n)).collect::<Vec<_>>())
            })
            .collect();
        let sets: Vec<Vec<HfSet>> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for i in 0..codes.len() {
            for t in 1..sets.len() {
                assert_eq!(sets[0][i].id(), sets[t][i].id());
            }
            assert_eq!(encode(&sets[0][i]).unwrap(), c(codes[i]));
        }
    }
}
