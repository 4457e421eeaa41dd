//! Kuratowski pairs, products, function spaces and cardinal comparison.

use num_traits::One;

use crate::error::{Error, Result};
use crate::set::{Budget, Code, HfSet};

/// `{{a}, {a, b}}`.
pub fn kpair(a: &HfSet, b: &HfSet) -> HfSet {
    let left = HfSet::singleton(a.clone());
    HfSet::from_children([left, HfSet::from_children([a.clone(), b.clone()])])
}

/// Inverse of `kpair`, or `None` if `p` is not a Kuratowski pair.
pub fn unpair(p: &HfSet) -> Option<(HfSet, HfSet)> {
    match p.members() {
        [only] if only.len() == 1 => {
            let a = only.members()[0].clone();
            Some((a.clone(), a))
        }
        [u, v] => {
            let (single, double) = match (u.len(), v.len()) {
                (1, 2) => (u, v),
                (2, 1) => (v, u),
                _ => return None,
            };
            let a = &single.members()[0];
            if !double.contains(a) {
                return None;
            }
            let b = double.members().iter().find(|m| *m != a)?;
            Some((a.clone(), b.clone()))
        }
        _ => None,
    }
}

pub fn product(x: &HfSet, y: &HfSet) -> Result<HfSet> {
    product_within(x, y, &Budget::default())
}

/// `x × y` as a set of Kuratowski pairs.
pub fn product_within(x: &HfSet, y: &HfSet, budget: &Budget) -> Result<HfSet> {
    budget.check_members("product", x.len() as u128 * y.len() as u128)?;
    Ok(HfSet::from_children(x.members().iter().flat_map(|a| {
        y.members().iter().map(move |b| kpair(a, b))
    })))
}

/// Number of members.
pub fn card(x: &HfSet) -> Code {
    Code::from(x.len())
}

/// `x ≤_c y`, decided by counting members.
pub fn inj_exists(x: &HfSet, y: &HfSet) -> bool {
    x.len() <= y.len()
}

pub fn card_le(x: &HfSet, y: &HfSet) -> bool {
    inj_exists(x, y)
}

/// `x ≃_c y`: injections both ways.
pub fn card_eq(x: &HfSet, y: &HfSet) -> bool {
    inj_exists(x, y) && inj_exists(y, x)
}

/// `x <_c y`: an injection one way but not the other.
pub fn card_lt(x: &HfSet, y: &HfSet) -> bool {
    inj_exists(x, y) && !inj_exists(y, x)
}

/// Searches for an injection from `x` into `y` by backtracking.
pub fn injection_search(x: &HfSet, y: &HfSet) -> Option<FunctionGraph> {
    fn go(xs: &[HfSet], y: &[HfSet], used: &mut Vec<bool>, acc: &mut Vec<(HfSet, HfSet)>) -> bool {
        let Some((a, rest)) = xs.split_first() else {
            return true;
        };
        for (i, b) in y.iter().enumerate() {
            if used[i] {
                continue;
            }
            used[i] = true;
            acc.push((a.clone(), b.clone()));
            if go(rest, y, used, acc) {
                return true;
            }
            acc.pop();
            used[i] = false;
        }
        false
    }
    let mut acc = Vec::new();
    let mut used = vec![false; y.len()];
    go(x.members(), y.members(), &mut used, &mut acc)
        .then(|| FunctionGraph::from_pairs(acc).expect("one value per argument"))
}

pub fn card_add(x: &HfSet, y: &HfSet) -> Result<HfSet> {
    card_add_within(x, y, &Budget::default())
}

/// `(x × {∅}) ∪ (y × {{∅}})`.
pub fn card_add_within(x: &HfSet, y: &HfSet, budget: &Budget) -> Result<HfSet> {
    budget.check_members("tagged union", x.len() as u128 + y.len() as u128)?;
    let left = HfSet::singleton(HfSet::empty());
    let right = HfSet::singleton(left.clone());
    Ok(product_within(x, &left, budget)?.union(&product_within(y, &right, budget)?))
}

pub fn card_exp(x: &HfSet, y: &HfSet) -> Result<HfSet> {
    card_exp_within(x, y, &Budget::default())
}

/// `{f : y → x}`, every total function from `y` to `x` as a set of pairs.
pub fn card_exp_within(x: &HfSet, y: &HfSet, budget: &Budget) -> Result<HfSet> {
    let (n, k) = (x.len() as u128, y.len());
    let count = u32::try_from(k)
        .ok()
        .and_then(|k| n.checked_pow(k))
        .ok_or_else(|| Error::budget("function space overflows", budget.members))?;
    budget.check_members("function space", count)?;
    let (xs, ys) = (x.members(), y.members());
    let mut out = Vec::with_capacity(count as usize);
    let mut digits = vec![0usize; k];
    for _ in 0..count {
        out.push(HfSet::from_children(
            ys.iter().zip(&digits).map(|(b, &i)| kpair(b, &xs[i])),
        ));
        for d in digits.iter_mut() {
            *d += 1;
            if *d < xs.len() {
                break;
            }
            *d = 0;
        }
    }
    Ok(HfSet::from_children(out))
}

/// Cardinality of `card_exp(x, y)` without building it.
pub fn card_exp_count(x: &HfSet, y: &HfSet) -> Code {
    let mut c = Code::one();
    for _ in y.members() {
        c *= x.len();
    }
    c
}

/// A function given by its graph, a set of Kuratowski pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionGraph {
    graph: HfSet,
    pairs: Vec<(HfSet, HfSet)>,
}

impl FunctionGraph {
    /// Fails if some argument is given two values.
    pub fn from_pairs(pairs: Vec<(HfSet, HfSet)>) -> Option<FunctionGraph> {
        let mut sorted = pairs;
        sorted.sort();
        sorted.dedup();
        if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        let graph = HfSet::from_children(sorted.iter().map(|(a, b)| kpair(a, b)));
        Some(FunctionGraph {
            graph,
            pairs: sorted,
        })
    }

    /// Reads a set as a function graph.
    pub fn from_set(graph: &HfSet) -> Option<FunctionGraph> {
        let pairs = graph
            .members()
            .iter()
            .map(unpair)
            .collect::<Option<Vec<_>>>()?;
        FunctionGraph::from_pairs(pairs)
    }

    pub fn as_set(&self) -> &HfSet {
        &self.graph
    }

    pub fn pairs(&self) -> &[(HfSet, HfSet)] {
        &self.pairs
    }

    pub fn domain(&self) -> HfSet {
        HfSet::from_children(self.pairs.iter().map(|(a, _)| a.clone()))
    }

    pub fn range(&self) -> HfSet {
        HfSet::from_children(self.pairs.iter().map(|(_, b)| b.clone()))
    }

    pub fn apply(&self, a: &HfSet) -> Option<&HfSet> {
        self.pairs.iter().find(|(x, _)| x == a).map(|(_, b)| b)
    }

    pub fn is_injective(&self) -> bool {
        self.range().len() == self.pairs.len()
    }

    pub fn is_total_on(&self, x: &HfSet) -> bool {
        self.domain() == *x
    }

    pub fn is_onto(&self, x: &HfSet) -> bool {
        self.range() == *x
    }

    pub fn maps_into(&self, x: &HfSet) -> bool {
        self.range().is_subset(x)
    }
}
