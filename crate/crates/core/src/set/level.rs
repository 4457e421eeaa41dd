use std::sync::OnceLock;

use num_traits::{One, ToPrimitive, Zero};

use super::{powerset_within, Budget, Code, HfSet};
use crate::error::{Error, Result};

/// A level `V_m` of the cumulative hierarchy, named by its index and
/// materialized only when it is small enough to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelRef {
    pub index: u64,
    pub materialized: Option<HfSet>,
}

impl LevelRef {
    pub fn new(index: u64) -> LevelRef {
        LevelRef {
            index,
            materialized: None,
        }
    }

    /// `|V_m|`, when it is representable.
    pub fn size(&self) -> Option<Code> {
        level_size(self.index)
    }

    pub fn is_materializable(&self, budget: &Budget) -> bool {
        self.size().is_some_and(|n| n <= Code::from(budget.members))
    }

    pub fn materialize(&self, budget: &Budget) -> Result<HfSet> {
        match &self.materialized {
            Some(v) => Ok(v.clone()),
            None => materialize_level_within(self.index, budget),
        }
    }
}

/// `|V_m|`: 0, 1, 2, 4, 16, 65536, 2^65536, and `None` from `V_7` on.
pub fn level_size(m: u64) -> Option<Code> {
    let mut size = Code::zero();
    for _ in 0..m {
        let exp = size.to_u64().filter(|&e| e <= 1 << 24)?;
        size = Code::one() << exp;
    }
    Some(size)
}

/// The least level containing `x` as a member, `V_{rank(x)+1}`.
pub fn level_of(x: &HfSet) -> LevelRef {
    let mut level = LevelRef::new(x.rank() + 1);
    let budget = Budget::default();
    if level.is_materializable(&budget) {
        level.materialized = materialize_level_within(level.index, &budget).ok();
    }
    level
}

pub fn materialize_level(m: u64) -> Result<HfSet> {
    materialize_level_within(m, &Budget::default())
}

const CACHED: usize = 6;

pub fn materialize_level_within(m: u64, budget: &Budget) -> Result<HfSet> {
    static LEVELS: [OnceLock<HfSet>; CACHED] = [const { OnceLock::new() }; CACHED];
    match level_size(m) {
        Some(n) if n <= Code::from(budget.members) => {}
        Some(n) => {
            return Err(Error::budget(
                format!("V_{m} has {n} members"),
                budget.members,
            ))
        }
        None => return Err(Error::budget(format!("V_{m} is too large"), budget.members)),
    }
    if (m as usize) < CACHED {
        if let Some(v) = LEVELS[m as usize].get() {
            return Ok(v.clone());
        }
    }
    let mut v = HfSet::empty();
    for k in 0..m {
        v = match LEVELS.get(k as usize + 1).and_then(|c| c.get()) {
            Some(cached) => cached.clone(),
            None => powerset_within(&v, budget)?,
        };
        if let Some(cell) = LEVELS.get(k as usize + 1) {
            let _ = cell.set(v.clone());
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{decode_u64, empty};

    #[test]
    fn sizes() {
        let sizes: Vec<u64> = (0..6)
            .map(|m| level_size(m).unwrap().to_u64().unwrap())
            .collect();
        assert_eq!(sizes, [0, 1, 2, 4, 16, 65536]);
        assert_eq!(level_size(6).unwrap().bits(), 65537);
        assert!(level_size(7).is_none());
    }

    #[test]
    fn small_levels() {
        assert_eq!(materialize_level(0).unwrap(), empty());
        assert_eq!(materialize_level(3).unwrap(), decode_u64(15));
        assert_eq!(materialize_level(3).unwrap().len(), 4);
    }

    #[test]
    fn level_of_examples() {
        let l = level_of(&empty());
        assert_eq!(l.index, 1);
        assert_eq!(l.materialized, Some(decode_u64(1)));
        assert_eq!(level_of(&decode_u64(1)).materialized, Some(decode_u64(3)));
        let deep = crate::set::ordinal(5);
        let l = level_of(&deep);
        assert_eq!(l.index, 6);
        assert!(l.materialized.is_none());
        assert!(l.materialize(&Budget::default()).unwrap_err().is_budget());
    }
}
