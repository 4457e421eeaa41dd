use std::sync::RwLock;

use super::{is_transitive, Budget, HfSet};
use crate::error::{Error, Result};

const CACHE_LIMIT: usize = 4096;

/// The von Neumann ordinal `n = {0, 1, ..., n-1}`.
pub fn ordinal(n: usize) -> HfSet {
    static CACHE: RwLock<Vec<HfSet>> = RwLock::new(Vec::new());
    if let Some(o) = CACHE.read().unwrap().get(n) {
        return o.clone();
    }
    let mut cache = CACHE.write().unwrap();
    if cache.is_empty() {
        cache.push(HfSet::empty());
    }
    while cache.len() <= n.min(CACHE_LIMIT) {
        let next = cache.last().unwrap().successor();
        cache.push(next);
    }
    if n < cache.len() {
        return cache[n].clone();
    }
    let mut o = cache.last().unwrap().clone();
    for _ in cache.len() - 1..n {
        o = o.successor();
    }
    o
}

/// Transitive and linearly ordered by membership.
pub fn is_ordinal(x: &HfSet) -> bool {
    if !is_transitive(x) {
        return false;
    }
    let ms = x.members();
    ms.iter()
        .enumerate()
        .all(|(i, a)| ms[i + 1..].iter().all(|b| a.contains(b) || b.contains(a)))
}

pub fn ordinal_value(x: &HfSet) -> Option<usize> {
    is_ordinal(x).then(|| x.len())
}

fn check(x: &HfSet) -> Result<()> {
    if is_ordinal(x) {
        Ok(())
    } else {
        Err(Error::NotAnOrdinal(x.to_string()))
    }
}

pub fn ord_add(x: &HfSet, y: &HfSet) -> Result<HfSet> {
    ord_add_within(x, y, &Budget::default())
}

pub fn ord_mul(x: &HfSet, y: &HfSet) -> Result<HfSet> {
    ord_mul_within(x, y, &Budget::default())
}

pub fn ord_exp(x: &HfSet, y: &HfSet) -> Result<HfSet> {
    ord_exp_within(x, y, &Budget::default())
}

/// `x + 0 = x`, `x + S(z) = S(x + z)`.
pub fn ord_add_within(x: &HfSet, y: &HfSet, budget: &Budget) -> Result<HfSet> {
    check(x)?;
    check(y)?;
    budget.check_members("ordinal sum", x.len() as u128 + y.len() as u128)?;
    let mut acc = x.clone();
    for _ in y.members() {
        acc = acc.successor();
    }
    Ok(acc)
}

/// `x · 0 = 0`, `x · S(z) = x · z + x`.
pub fn ord_mul_within(x: &HfSet, y: &HfSet, budget: &Budget) -> Result<HfSet> {
    check(x)?;
    check(y)?;
    budget.check_members("ordinal product", x.len() as u128 * y.len() as u128)?;
    let mut acc = HfSet::empty();
    for _ in y.members() {
        acc = ord_add_within(&acc, x, budget)?;
    }
    Ok(acc)
}

/// `x ^ 0 = 1`, `x ^ S(z) = x ^ z · x`.
pub fn ord_exp_within(x: &HfSet, y: &HfSet, budget: &Budget) -> Result<HfSet> {
    check(x)?;
    check(y)?;
    let size = (x.len() as u128)
        .checked_pow(y.len() as u32)
        .filter(|_| y.len() <= u32::MAX as usize);
    match size {
        Some(n) => budget.check_members("ordinal power", n)?,
        None => {
            return Err(Error::budget("ordinal power overflows", budget.members));
        }
    }
    let mut acc = ordinal(1);
    for _ in y.members() {
        acc = ord_mul_within(&acc, x, budget)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{decode_u64, empty};

    #[test]
    fn first_ordinals() {
        assert_eq!(ordinal(0), empty());
        assert_eq!(ordinal(1), decode_u64(1));
        assert_eq!(ordinal(2), decode_u64(3));
        assert_eq!(ordinal(3), decode_u64(11));
        assert_eq!(ordinal(4).code_u64(), Some(2059));
    }

    #[test]
    fn recognizer() {
        assert!(is_ordinal(&empty()));
        assert!(is_ordinal(&decode_u64(3)));
        assert!(!is_ordinal(&decode_u64(2)));
        // {∅, {{∅}}} is not transitive; {∅, {∅}, {{∅}}} is transitive but
        // {∅} and {{∅}} are incomparable under membership.
        assert!(!is_ordinal(&decode_u64(5)));
        assert!(!is_ordinal(&decode_u64(7)));
    }

    #[test]
    fn recognizer_matches_characterization() {
        for n in 0..1u64 << 12 {
            let x = decode_u64(n);
            assert_eq!(is_ordinal(&x), x == ordinal(x.len()), "code {n}");
        }
    }

    #[test]
    fn arithmetic() {
        assert_eq!(ord_add(&ordinal(0), &ordinal(0)).unwrap(), ordinal(0));
        assert_eq!(ord_add(&ordinal(1), &ordinal(2)).unwrap(), ordinal(3));
        assert_eq!(ord_mul(&ordinal(2), &ordinal(2)).unwrap(), ordinal(4));
        assert_eq!(ord_exp(&ordinal(2), &ordinal(3)).unwrap(), ordinal(8));
        assert_eq!(ord_exp(&ordinal(0), &ordinal(0)).unwrap(), ordinal(1));
        for a in 0..7 {
            for b in 0..7 {
                assert_eq!(ord_add(&ordinal(a), &ordinal(b)).unwrap(), ordinal(a + b));
                assert_eq!(ord_mul(&ordinal(a), &ordinal(b)).unwrap(), ordinal(a * b));
            }
        }
    }

    #[test]
    fn rejects_non_ordinals() {
        let err = ord_add(&decode_u64(2), &ordinal(1)).unwrap_err();
        assert!(matches!(err, Error::NotAnOrdinal(_)));
    }

    #[test]
    fn budget() {
        let tight = Budget {
            code_bits: 64,
            members: 10,
        };
        assert!(ord_mul_within(&ordinal(4), &ordinal(3), &tight)
            .unwrap_err()
            .is_budget());
        assert!(ord_exp(&ordinal(40), &ordinal(40)).unwrap_err().is_budget());
    }
}
