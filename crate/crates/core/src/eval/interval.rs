//! Intervals of naturals and the forward/backward projections of `S`, `+`,
//! `·` and `^` used to narrow quantifier ranges.

use num_traits::{One, ToPrimitive, Zero};

use crate::set::Code;

/// `[lo, hi]`, with `hi = None` meaning unbounded above. Never empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iv {
    pub lo: Code,
    pub hi: Option<Code>,
}

fn le_hi(a: &Code, hi: &Option<Code>) -> bool {
    hi.as_ref().is_none_or(|h| a <= h)
}

impl Iv {
    pub fn point(c: Code) -> Iv {
        Iv {
            lo: c.clone(),
            hi: Some(c),
        }
    }

    pub fn top() -> Iv {
        Iv {
            lo: Code::zero(),
            hi: None,
        }
    }

    pub fn new(lo: Code, hi: Option<Code>) -> Option<Iv> {
        le_hi(&lo, &hi).then_some(Iv { lo, hi })
    }

    pub fn below(n: Code) -> Option<Iv> {
        if n.is_zero() {
            None
        } else {
            Some(Iv {
                lo: Code::zero(),
                hi: Some(n - 1u8),
            })
        }
    }

    pub fn as_point(&self) -> Option<&Code> {
        match &self.hi {
            Some(h) if *h == self.lo => Some(h),
            _ => None,
        }
    }

    /// Number of members, `None` when unbounded.
    pub fn count(&self) -> Option<Code> {
        self.hi.as_ref().map(|h| h - &self.lo + 1u8)
    }

    pub fn meet(&self, other: &Iv) -> Option<Iv> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        Iv::new(lo, hi)
    }

    pub fn contains(&self, c: &Code) -> bool {
        self.lo <= *c && le_hi(c, &self.hi)
    }
}

pub fn succ(a: &Iv) -> Iv {
    Iv {
        lo: &a.lo + 1u8,
        hi: a.hi.as_ref().map(|h| h + 1u8),
    }
}

pub fn add(a: &Iv, b: &Iv) -> Iv {
    Iv {
        lo: &a.lo + &b.lo,
        hi: match (&a.hi, &b.hi) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        },
    }
}

fn mul_hi(a: &Code, b: &Code, max_bits: u64) -> Option<Code> {
    (a.bits() + b.bits() <= max_bits + 1).then(|| a * b)
}

pub fn mul(a: &Iv, b: &Iv, max_bits: u64) -> Iv {
    let zero_hi = |h: &Option<Code>| h.as_ref().is_some_and(|h| h.is_zero());
    let hi = if zero_hi(&a.hi) || zero_hi(&b.hi) {
        Some(Code::zero())
    } else {
        match (&a.hi, &b.hi) {
            (Some(x), Some(y)) => mul_hi(x, y, max_bits),
            _ => None,
        }
    };
    let lo = mul_hi(&a.lo, &b.lo, max_bits).unwrap_or_else(Code::zero);
    Iv { lo, hi }
}

const WEAK_BITS: u64 = 1 << 16;

fn pow_bounded(a: &Code, e: &Code, max_bits: u64) -> Option<Code> {
    if e.is_zero() || a.is_one() {
        return Some(Code::one());
    }
    if a.is_zero() {
        return Some(Code::zero());
    }
    let e = e.to_u64()?;
    let least = (a.bits() - 1).checked_mul(e)?;
    let e = u32::try_from(e).ok()?;
    (least < max_bits).then(|| a.pow(e))
}

/// `x^y` over boxes. Monotone in the base; in the exponent only for bases
/// of at least 2, so the small bases are handled apart.
pub fn pow(a: &Iv, b: &Iv, max_bits: u64) -> Iv {
    let b_all_zero = b.hi.as_ref().is_some_and(|h| h.is_zero());
    let lo = if a.lo.is_zero() && !b_all_zero {
        Code::zero()
    } else if a.lo <= Code::one() || b.lo.is_zero() {
        Code::one()
    } else {
        pow_bounded(&a.lo, &b.lo, max_bits).unwrap_or_else(|| {
            // a^e ≥ 2^((bits(a) - 1)·e), which may already pass the budget;
            // a weaker bound keeps the numbers small.
            let least = Code::from(a.lo.bits() - 1) * &b.lo;
            if least >= Code::from(max_bits) {
                Code::one() << max_bits.min(WEAK_BITS)
            } else {
                Code::one()
            }
        })
    };
    let hi = match (&a.hi, &b.hi) {
        (Some(x), _) if x <= &Code::one() => Some(Code::one()),
        (_, Some(y)) if y.is_zero() => Some(Code::one()),
        (Some(x), Some(y)) => pow_bounded(x, y, max_bits),
        _ => None,
    };
    Iv { lo, hi }
}

/// Values of `x` with `x + y ∈ z` for some `y` in `y`.
pub fn sub_from(z: &Iv, y: &Iv) -> Option<Iv> {
    let lo = match &y.hi {
        Some(h) if &z.lo > h => &z.lo - h,
        _ => Code::zero(),
    };
    let hi = match &z.hi {
        Some(h) if h < &y.lo => return None,
        Some(h) => Some(h - &y.lo),
        None => None,
    };
    Iv::new(lo, hi)
}

/// Values of `x` with `x · y ∈ z` for some `y` in `y`.
pub fn div_from(z: &Iv, y: &Iv) -> Option<Iv> {
    if z.lo.is_zero() {
        // x = 0 always works; otherwise y ≥ 1 bounds x by z.hi.
        return Some(match (&z.hi, y.lo.is_zero()) {
            (Some(h), false) => Iv {
                lo: Code::zero(),
                hi: Some(h / &y.lo),
            },
            _ => Iv::top(),
        });
    }
    if y.hi.as_ref().is_some_and(|h| h.is_zero()) {
        return None;
    }
    let lo = match &y.hi {
        Some(h) => z.lo.div_ceil_(h),
        None => Code::one(),
    };
    let hi = z.hi.as_ref().map(|h| h / (&y.lo).max(&Code::one()));
    Iv::new(lo, hi)
}

trait DivCeil {
    fn div_ceil_(&self, d: &Code) -> Code;
}

impl DivCeil for Code {
    fn div_ceil_(&self, d: &Code) -> Code {
        (self + d - 1u8) / d
    }
}

/// Largest `e` with `b^e ≤ n`, for `b ≥ 2` and `n ≥ 1`.
fn floor_log(b: &Code, n: &Code) -> u64 {
    if *b == Code::from(2u8) {
        return n.bits() - 1;
    }
    let mut e = (n.bits() - 1) / b.bits();
    while b.pow((e + 1) as u32) <= *n {
        e += 1;
    }
    while e > 0 && b.pow(e as u32) > *n {
        e -= 1;
    }
    e
}

/// Values of `y` with `b^y ∈ z`, for a fixed base `b`.
pub fn log_from(b: &Code, z: &Iv) -> Option<Iv> {
    if *b <= Code::one() {
        let v = if b.is_zero() { None } else { Some(Code::one()) };
        return match v {
            Some(one) if !z.contains(&one) => None,
            _ => Some(Iv::top()),
        };
    }
    let lo = if z.lo <= Code::one() {
        0
    } else {
        let f = floor_log(b, &(&z.lo - 1u8));
        f + 1
    };
    let hi = match &z.hi {
        Some(h) if h.is_zero() => return None,
        Some(h) => Some(Code::from(floor_log(b, h))),
        None => None,
    };
    Iv::new(Code::from(lo), hi)
}

/// Values of `x` with `x^k ∈ z`, for a fixed exponent `k ≥ 1`.
pub fn root_from(k: u32, z: &Iv) -> Option<Iv> {
    debug_assert!(k >= 1);
    let lo = {
        let r = z.lo.nth_root(k);
        if r.pow(k) < z.lo {
            r + 1u8
        } else {
            r
        }
    };
    let hi = z.hi.as_ref().map(|h| h.nth_root(k));
    Iv::new(lo, hi)
}
