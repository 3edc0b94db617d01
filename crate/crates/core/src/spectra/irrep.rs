use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::Interval;
use crate::combinat::{binomial, factorial, integer_partitions, lcm_u64};
use crate::perm::CycleType;
use crate::{Error, Result};

/// Largest number of angles `hook_irrep_angle_index` will enumerate.
pub const IRREP_ENUMERATION_BOUND: u64 = 10_000_000;

/// Eigenangle vector of the defining representation listed by cycle, longest
/// cycles first: a cycle of length `L` contributes `1/L, 2/L, ..., L/L`.
/// Entry `(a, L)` stands for `a / L` reduced mod 1, so the last entry of each
/// cycle is `(0, L)`.
pub fn defining_angles(ct: &CycleType) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(ct.n());
    for len in ct.lengths_desc() {
        let len = len as u64;
        out.extend((1..=len).map(|a| (a % len, len)));
    }
    out
}

/// Eigenangles of the hook irrep `S^(n-k, 1^k)` as a multiset of reduced
/// fractions `num / den`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HookAngles {
    total: BigUint,
    angles: BTreeMap<(u64, u64), u64>,
}

impl HookAngles {
    /// Number of angles, `C(n-1, k)`.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// Multiplicity of each reduced fraction `(num, den)`.
    pub fn angles(&self) -> &BTreeMap<(u64, u64), u64> {
        &self.angles
    }

    pub fn count_in_interval(&self, interval: &Interval) -> BigUint {
        self.angles
            .iter()
            .filter(|((p, q), _)| {
                let x = num_rational::BigRational::new(BigInt::from(*p), BigInt::from(*q));
                interval.contains(&x)
            })
            .map(|(_, &c)| BigUint::from(c))
            .sum()
    }
}

/// Enumerates the `C(n-1, k)` eigenangles `sum_{i in S} b(i)` over
/// k-subsets `S` of `[n-1]`.
pub fn hook_irrep_angle_index(ct: &CycleType, k: usize) -> Result<HookAngles> {
    hook_irrep_angle_index_bounded(ct, k, IRREP_ENUMERATION_BOUND)
}

pub fn hook_irrep_angle_index_bounded(ct: &CycleType, k: usize, bound: u64) -> Result<HookAngles> {
    let n = ct.n();
    if k >= n {
        return Err(Error::InvalidParameter(format!("hook shape needs 0 <= k < n = {n}, got k = {k}")));
    }
    let total = binomial(n as u64 - 1, k as u64);
    if total > BigUint::from(bound) {
        return Err(Error::bound("C(n-1, k)", total.to_string(), bound.to_string()));
    }
    let b: Vec<(u128, u128)> = defining_angles(ct)[..n - 1]
        .iter()
        .map(|&(a, l)| (a as u128, l as u128))
        .collect();
    let mut acc: HashMap<(u64, u64), u64> = HashMap::new();
    let mut stack: Vec<(u128, u128)> = vec![(0, 1)];
    subsets(&b, 0, k, &mut stack, &mut acc);
    Ok(HookAngles {
        total,
        angles: acc.into_iter().collect(),
    })
}

fn subsets(b: &[(u128, u128)], from: usize, left: usize, stack: &mut Vec<(u128, u128)>, acc: &mut HashMap<(u64, u64), u64>) {
    let &(num, den) = stack.last().expect("stack seeded");
    if left == 0 {
        let g = num.gcd(&den);
        let key = ((num / g) as u64, (den / g) as u64);
        *acc.entry(key).or_insert(0) += 1;
        return;
    }
    for i in from..=b.len() - left {
        let (a, l) = b[i];
        let g = den.gcd(&l);
        let new_den = den / g * l;
        let new_num = (num * (l / g) + a * (den / g)) % new_den;
        stack.push((new_num, new_den));
        subsets(b, i + 1, left - 1, stack, acc);
        stack.pop();
    }
}

/// Number of hook-irrep eigenangles in `interval`, without enumerating them.
///
/// Counts `j`-subset sums over all of `[n]` through the power-sum expansion
/// `e_j = sum_lambda eps_lambda p_lambda / z_lambda`, then removes the
/// contribution of the index `n` (whose angle is 0) by alternating summation.
pub fn hook_irrep_count(ct: &CycleType, k: usize, interval: &Interval) -> Result<BigUint> {
    let n = ct.n();
    if k >= n {
        return Err(Error::InvalidParameter(format!("hook shape needs 0 <= k < n = {n}, got k = {k}")));
    }
    if !interval.endpoints_interior() {
        return Err(Error::InvalidParameter("interval endpoints must lie in (0, 1)".into()));
    }
    let lengths: Vec<(u64, u64)> = ct.counts().iter().map(|(&l, &c)| (l as u64, c as u64)).collect();
    let mut total = BigInt::zero();
    for i in 0..=k {
        let j = k - i;
        let x = subset_sum_count(&lengths, j, interval);
        if i % 2 == 0 {
            total += x;
        } else {
            total -= x;
        }
    }
    debug_assert!(!total.is_negative());
    Ok(total.magnitude().clone())
}

/// Number of j-subsets of `[n]` whose angle sum lies in `interval`.
fn subset_sum_count(lengths: &[(u64, u64)], j: usize, interval: &Interval) -> BigInt {
    if j == 0 {
        return BigInt::zero();
    }
    let jf = BigInt::from(factorial(j as u64));
    let mut acc = BigInt::zero();
    for lambda in integer_partitions(j) {
        let class = BigInt::from(class_size_of_partition(&lambda));
        let mut s = BigInt::zero();
        let mut idx = vec![0usize; lambda.len()];
        loop {
            let mut weight = BigUint::from(1u32);
            let mut q = 1u64;
            for (&part, &li) in lambda.iter().zip(&idx) {
                let (len, c) = lengths[li];
                weight *= c * len;
                q = lcm_u64(q, len / (part as u64).gcd(&len));
            }
            let cnt = interval.count_full_cycle(&BigUint::from(q));
            s += BigInt::from(weight / q * cnt);
            let mut pos = 0;
            while pos < idx.len() {
                idx[pos] += 1;
                if idx[pos] < lengths.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
        if (j - lambda.len()) % 2 == 0 {
            acc += class * s;
        } else {
            acc -= class * s;
        }
    }
    let (quo, rem) = acc.div_rem(&jf);
    debug_assert!(rem.is_zero());
    quo
}

fn class_size_of_partition(lambda: &[usize]) -> BigUint {
    let mut z = BigUint::from(1u32);
    let mut mult: BTreeMap<usize, u64> = BTreeMap::new();
    for &p in lambda {
        *mult.entry(p).or_insert(0) += 1;
    }
    for (&p, &m) in &mult {
        z *= num_traits::pow(BigUint::from(p), m as usize) * factorial(m);
    }
    factorial(lambda.iter().sum::<usize>() as u64) / z
}

impl HookAngles {
    /// Angles as `f64`, sorted, each repeated by multiplicity.
    pub fn to_f64_sorted(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (&(p, q), &c) in &self.angles {
            let x = p as f64 / q as f64;
            out.extend(std::iter::repeat(x).take(c.to_usize().unwrap_or(0)));
        }
        out.sort_by(f64::total_cmp);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    #[test]
    fn single_cycle_k1() {
        let h = hook_irrep_angle_index(&ct("7"), 1).unwrap();
        let expected: BTreeMap<(u64, u64), u64> = (1..7u64).map(|a| ((a, 7), 1)).collect();
        assert_eq!(h.angles(), &expected);
    }

    #[test]
    fn identity_all_zero() {
        let h = hook_irrep_angle_index(&CycleType::identity(8), 3).unwrap();
        assert_eq!(h.total(), &BigUint::from(35u32));
        assert_eq!(h.angles().len(), 1);
        assert_eq!(h.angles()[&(0, 1)], 35);
    }

    #[test]
    fn angle_count_is_binomial() {
        for t in ["5,3,2", "4,4,1,1", "6,3"] {
            let c = ct(t);
            for k in 0..c.n() {
                let h = hook_irrep_angle_index(&c, k).unwrap();
                let s: u64 = h.angles().values().sum();
                assert_eq!(BigUint::from(s), binomial(c.n() as u64 - 1, k as u64));
            }
        }
    }

    #[test]
    fn fast_count_matches_enumeration() {
        let i = Interval::standard();
        let j = Interval::parse("0.05", "0.95").unwrap();
        for t in ["5,3,2", "4,4,1,1", "6,3", "7,5,2,2,1", "12", "3,3,3,2"] {
            let c = ct(t);
            for k in 1..c.n().min(6) {
                let h = hook_irrep_angle_index(&c, k).unwrap();
                for iv in [&i, &j] {
                    assert_eq!(hook_irrep_count(&c, k, iv).unwrap(), h.count_in_interval(iv), "{t} k={k}");
                }
            }
        }
    }

    #[test]
    fn bound_enforced() {
        let c = CycleType::identity(400);
        assert!(matches!(
            hook_irrep_angle_index(&c, 4),
            Err(Error::BoundExceeded { .. })
        ));
    }
}
