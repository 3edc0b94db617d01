//! Binary necklaces: rotation classes of 0/1 strings of length `i` with `k`
//! ones, and their periods.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::combinat::{binomial, divisors, gcd_u64, mobius, totient};

/// `N_{i,k}`, `L_{i,k}` and the split of `N_{i,k}` by period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecklaceCounts {
    pub total: BigUint,
    pub aperiodic: BigUint,
    pub by_period: BTreeMap<u64, BigUint>,
}

/// Number of aperiodic necklaces `L_{i,k}` (Lyndon words when nonempty).
pub fn aperiodic_necklaces(i: u64, k: u64) -> BigUint {
    assert!(i >= 1 && k <= i, "need 0 <= k <= i, i >= 1");
    let g = gcd_u64(i, k);
    let mut acc = BigInt::zero();
    for d in divisors(g) {
        let mu = mobius(d);
        if mu != 0 {
            acc += BigInt::from(mu) * BigInt::from(binomial(i / d, k / d));
        }
    }
    debug_assert!(!acc.is_negative());
    let acc = acc.magnitude() / BigUint::from(i);
    acc
}

/// Number of necklaces `N_{i,k}`.
pub fn necklaces(i: u64, k: u64) -> BigUint {
    assert!(i >= 1 && k <= i, "need 0 <= k <= i, i >= 1");
    let g = gcd_u64(i, k);
    let acc: BigUint = divisors(g)
        .into_iter()
        .map(|d| BigUint::from(totient(d)) * binomial(i / d, k / d))
        .sum();
    acc / BigUint::from(i)
}

/// Number of necklaces of length `i`, weight `k` and period exactly `d`.
pub fn necklaces_with_period(i: u64, k: u64, d: u64) -> BigUint {
    if d == 0 || i % d != 0 || (k * d) % i != 0 {
        return BigUint::zero();
    }
    aperiodic_necklaces(d, k * d / i)
}

/// All three necklace statistics at once.
pub fn necklace_counts(i: u64, k: u64) -> NecklaceCounts {
    let by_period = divisors(i)
        .into_iter()
        .map(|d| (d, necklaces_with_period(i, k, d)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    NecklaceCounts {
        total: necklaces(i, k),
        aperiodic: aperiodic_necklaces(i, k),
        by_period,
    }
}

/// Exhaustive rotation-class enumeration of all `2^i` strings, returning
/// `necklace_counts(i, k)` for every `k` in `0..=i`.
pub fn enumerate_necklaces(i: u32) -> Vec<NecklaceCounts> {
    assert!((1..=24).contains(&i), "enumeration supports 1 <= i <= 24");
    let mask: u32 = (1u32 << i) - 1;
    let rot = |x: u32| ((x << 1) | (x >> (i - 1))) & mask;
    let mut out: Vec<NecklaceCounts> = (0..=i)
        .map(|_| NecklaceCounts {
            total: BigUint::zero(),
            aperiodic: BigUint::zero(),
            by_period: BTreeMap::new(),
        })
        .collect();
    for x in 0..=mask {
        let mut y = rot(x);
        let mut period = 1u64;
        let mut canonical = true;
        while y != x {
            if y < x {
                canonical = false;
                break;
            }
            y = rot(y);
            period += 1;
        }
        if !canonical {
            continue;
        }
        let entry = &mut out[x.count_ones() as usize];
        entry.total += 1u32;
        if period == i as u64 {
            entry.aperiodic += 1u32;
        }
        *entry.by_period.entry(period).or_default() += 1u32;
    }
    out
}
