//! Cycle types, the Ewens measure on the symmetric group, and exact
//! factorial moments of cycle counts.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::combinat::{factorial, integer_partitions, parse_rational, rational_to_f64, rising};
use crate::{rng, Error, Result};

/// Largest `n` accepted by [`enumerate_cycle_types`] unless a larger bound is
/// passed explicitly.
pub const DEFAULT_ENUMERATION_BOUND: usize = 12;

/// Multiset of cycle lengths of a permutation of `[n]`.
///
/// `counts[j]` is the number of cycles of length `j`; zero counts are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleType {
    n: usize,
    counts: BTreeMap<usize, usize>,
}

impl CycleType {
    /// Builds a cycle type from a map length -> count, dropping zero counts.
    pub fn from_counts(counts: BTreeMap<usize, usize>) -> Result<Self> {
        let counts: BTreeMap<usize, usize> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        if counts.contains_key(&0) {
            return Err(Error::InvalidCycleType("cycle length 0".into()));
        }
        let n: usize = counts.iter().map(|(j, c)| j * c).sum();
        if n == 0 {
            return Err(Error::InvalidCycleType("empty cycle type".into()));
        }
        Ok(CycleType { n, counts })
    }

    pub fn from_lengths(lengths: &[usize]) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for &l in lengths {
            *counts.entry(l).or_insert(0) += 1;
        }
        Self::from_counts(counts)
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "identity on an empty set");
        CycleType {
            n,
            counts: BTreeMap::from([(1, n)]),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    /// `C_j`, zero for absent lengths.
    pub fn count(&self, j: usize) -> usize {
        self.counts.get(&j).copied().unwrap_or(0)
    }

    pub fn num_cycles(&self) -> usize {
        self.counts.values().sum()
    }

    /// Cycle lengths in non-increasing order, with repetition.
    pub fn lengths_desc(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.num_cycles());
        for (&j, &c) in self.counts.iter().rev() {
            out.extend(std::iter::repeat(j).take(c));
        }
        out
    }

    /// A representative permutation in one-line notation (0-based images),
    /// with cycles laid out consecutively in non-increasing length.
    pub fn representative(&self) -> Vec<usize> {
        let mut perm = Vec::with_capacity(self.n);
        let mut start = 0;
        for len in self.lengths_desc() {
            for i in 0..len {
                perm.push(start + (i + 1) % len);
            }
            start += len;
        }
        perm
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lengths_desc().iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for CycleType {
    type Err = Error;

    /// Parses a list of cycle lengths such as `"4,2,1"` or `"3 3"`.
    fn from_str(s: &str) -> Result<Self> {
        let lengths = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidCycleType(format!("bad cycle length {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_lengths(&lengths)
    }
}

/// Parameters of the Ewens(θ) measure on `S_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EwensParams {
    n: usize,
    theta: BigRational,
}

impl EwensParams {
    pub fn new(n: usize, theta: BigRational) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        check_theta(&theta)?;
        Ok(EwensParams { n, theta })
    }

    pub fn parse(n: usize, theta: &str) -> Result<Self> {
        Self::new(n, parse_rational(theta)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> &BigRational {
        &self.theta
    }
}

fn check_theta(theta: &BigRational) -> Result<()> {
    if !theta.is_positive() {
        return Err(Error::InvalidParameter(format!("theta must be positive, got {theta}")));
    }
    Ok(())
}

/// Cycle type of a permutation given in one-line notation.
///
/// Accepts either 0-based (`[1, 2, 0]`) or 1-based (`[2, 3, 1]`) images; the
/// base is inferred from whether `0` occurs.
pub fn cycle_type_of(perm: &[usize]) -> Result<CycleType> {
    let n = perm.len();
    if n == 0 {
        return Err(Error::InvalidPermutation("empty permutation".into()));
    }
    let zero_based = perm.contains(&0);
    let images: Vec<usize> = if zero_based {
        perm.to_vec()
    } else {
        perm.iter().map(|&x| x.wrapping_sub(1)).collect()
    };
    let mut seen = vec![false; n];
    for &x in &images {
        if x >= n || seen[x] {
            return Err(Error::InvalidPermutation(format!("{perm:?} is not a bijection on [{n}]")));
        }
        seen[x] = true;
    }
    let mut visited = vec![false; n];
    let mut counts = BTreeMap::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !visited[x] {
            visited[x] = true;
            x = images[x];
            len += 1;
        }
        *counts.entry(len).or_insert(0) += 1;
    }
    CycleType::from_counts(counts)
}

/// Draws a cycle type from Ewens(θ) with a generator seeded by `seed`.
pub fn sample_ewens(params: &EwensParams, seed: u64) -> CycleType {
    let mut rng = rng::rng_from_seed(seed);
    sample_ewens_with(params, &mut rng)
}

/// Chinese-restaurant construction: element `i` (1-based) opens a new cycle
/// with probability θ/(θ+i−1), otherwise joins the cycle of a uniformly chosen
/// earlier element, i.e. a cycle chosen proportionally to its size.
pub fn sample_ewens_with<R: Rng + ?Sized>(params: &EwensParams, rng: &mut R) -> CycleType {
    let theta = rational_to_f64(&params.theta);
    let n = params.n;
    let mut table_of: Vec<u32> = Vec::with_capacity(n);
    let mut sizes: Vec<usize> = Vec::new();
    for i in 0..n {
        let open = i == 0 || rng.gen::<f64>() * (theta + i as f64) < theta;
        let table = if open {
            sizes.push(0);
            sizes.len() - 1
        } else {
            table_of[rng.gen_range(0..i)] as usize
        };
        sizes[table] += 1;
        table_of.push(table as u32);
    }
    let mut counts = BTreeMap::new();
    for s in sizes {
        *counts.entry(s).or_insert(0) += 1;
    }
    CycleType { n, counts }
}

/// Exact Ewens(θ) probability of the conjugacy class with cycle type `ct`.
pub fn ewens_class_probability(ct: &CycleType, theta: &BigRational) -> Result<BigRational> {
    check_theta(theta)?;
    let size = class_size(ct);
    let k = ct.num_cycles();
    let theta_pow = num_traits::pow(theta.clone(), k);
    Ok(BigRational::from_integer(BigInt::from(size)) * theta_pow / rising(theta, ct.n as u64))
}

/// Number of permutations with cycle type `ct`: `n! / prod_j j^{C_j} C_j!`.
pub fn class_size(ct: &CycleType) -> BigUint {
    let mut denom = BigUint::one();
    for (&j, &c) in &ct.counts {
        denom *= num_traits::pow(BigUint::from(j), c) * factorial(c as u64);
    }
    factorial(ct.n as u64) / denom
}

/// `E[prod_j (C_j)_{b_j}]` under Ewens(θ), exact.
pub fn watterson_factorial_moment(
    n: usize,
    theta: &BigRational,
    b: &BTreeMap<usize, usize>,
) -> Result<BigRational> {
    check_theta(theta)?;
    let l: usize = b.iter().map(|(j, e)| j * e).sum();
    if l > n {
        return Ok(BigRational::zero());
    }
    let mut acc = BigRational::one();
    for (&j, &e) in b {
        if j == 0 && e > 0 {
            return Err(Error::InvalidParameter("cycle length 0 in exponent map".into()));
        }
        if e > 0 {
            let base = theta / BigRational::from_integer(BigInt::from(j));
            acc *= num_traits::pow(base, e);
        }
    }
    Ok(acc * watterson_size_factor(n, theta, l))
}

/// `prod_{i=0}^{l-1} (n-i)/(θ+n-i-1)`.
pub fn watterson_size_factor(n: usize, theta: &BigRational, l: usize) -> BigRational {
    if l > n {
        return BigRational::zero();
    }
    let mut acc = BigRational::one();
    for i in 0..l {
        let num = BigRational::from_integer(BigInt::from(n - i));
        let den = theta + BigRational::from_integer(BigInt::from(n - i - 1));
        acc *= num / den;
    }
    acc
}

/// All cycle types of `S_n` with their class sizes, largest part first.
pub fn enumerate_cycle_types(n: usize) -> Result<Vec<(CycleType, BigUint)>> {
    enumerate_cycle_types_bounded(n, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_cycle_types_bounded(n: usize, bound: usize) -> Result<Vec<(CycleType, BigUint)>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if n > bound {
        return Err(Error::bound("n", n, bound));
    }
    Ok(integer_partitions(n)
        .into_iter()
        .map(|parts| {
            let ct = CycleType::from_lengths(&parts).expect("partition of n > 0");
            let size = class_size(&ct);
            (ct, size)
        })
        .collect())
}

/// `theta` as an `f64`, for Monte Carlo code paths.
pub fn theta_f64(theta: &BigRational) -> f64 {
    theta.to_f64().unwrap_or_else(|| rational_to_f64(theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::falling;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn ct(lengths: &[usize]) -> CycleType {
        CycleType::from_lengths(lengths).unwrap()
    }

    #[test]
    fn cycle_types_of_small_permutations() {
        assert_eq!(cycle_type_of(&[1, 2, 3, 4]).unwrap(), CycleType::identity(4));
        assert_eq!(cycle_type_of(&[2, 3, 1]).unwrap(), ct(&[3]));
        assert_eq!(cycle_type_of(&[2, 1, 3]).unwrap(), ct(&[2, 1]));
        assert_eq!(cycle_type_of(&[1, 0, 2]).unwrap(), ct(&[2, 1]));
    }

    #[test]
    fn non_bijections_are_rejected() {
        assert!(cycle_type_of(&[1, 1, 2]).is_err());
        assert!(cycle_type_of(&[2, 3, 4]).is_err());
        assert!(cycle_type_of(&[]).is_err());
    }

    #[test]
    fn representative_has_the_right_type() {
        for (c, _) in enumerate_cycle_types(7).unwrap() {
            assert_eq!(cycle_type_of(&c.representative()).unwrap(), c);
        }
    }

    #[test]
    fn parse_and_display() {
        let c: CycleType = "4, 2 1".parse().unwrap();
        assert_eq!(c, ct(&[4, 2, 1]));
        assert_eq!(c.to_string(), "4,2,1");
        assert!("0,3".parse::<CycleType>().is_err());
    }

    #[test]
    fn class_probabilities() {
        let one = q(1, 1);
        assert_eq!(ewens_class_probability(&ct(&[1, 1, 1]), &one).unwrap(), q(1, 6));
        assert_eq!(ewens_class_probability(&ct(&[3]), &one).unwrap(), q(1, 3));
        assert_eq!(ewens_class_probability(&ct(&[1, 1]), &q(2, 1)).unwrap(), q(2, 3));
        assert!(ewens_class_probability(&ct(&[3]), &q(0, 1)).is_err());
        assert!(ewens_class_probability(&ct(&[3]), &q(-1, 2)).is_err());
    }

    #[test]
    fn class_probabilities_sum_to_one() {
        for theta in [q(1, 2), q(1, 1), q(2, 1)] {
            for n in 1..=8 {
                let total: BigRational = enumerate_cycle_types(n)
                    .unwrap()
                    .iter()
                    .map(|(c, _)| ewens_class_probability(c, &theta).unwrap())
                    .sum();
                assert_eq!(total, q(1, 1), "n={n} theta={theta}");
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        let three = enumerate_cycle_types(3).unwrap();
        let sizes: Vec<u32> = three.iter().map(|(_, s)| s.try_into().unwrap()).collect();
        assert_eq!(sizes, vec![2, 3, 1]);
        let four = enumerate_cycle_types(4).unwrap();
        assert_eq!(four.len(), 5);
        assert_eq!(four.iter().map(|(_, s)| s.clone()).sum::<BigUint>(), BigUint::from(24u32));
        assert_eq!(enumerate_cycle_types(8).unwrap().len(), 22);
        assert!(matches!(enumerate_cycle_types(13), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn watterson_examples() {
        let b = BTreeMap::from([(1, 1)]);
        let theta = q(3, 2);
        // θn/(θ+n−1)
        assert_eq!(watterson_factorial_moment(5, &theta, &b).unwrap(), q(3, 2) * q(5, 1) / (q(3, 2) + q(4, 1)));
        for n in 1..=10 {
            for j in 1..=n {
                let b = BTreeMap::from([(j, 1)]);
                assert_eq!(watterson_factorial_moment(n, &q(1, 1), &b).unwrap(), q(1, j as i64));
            }
        }
        let b = BTreeMap::from([(3, 2)]);
        assert_eq!(watterson_factorial_moment(5, &q(1, 1), &b).unwrap(), q(0, 1));
    }

    fn enumerated_factorial_moment(n: usize, theta: &BigRational, b: &BTreeMap<usize, usize>) -> BigRational {
        enumerate_cycle_types(n)
            .unwrap()
            .iter()
            .map(|(c, _)| {
                let mut prod = BigRational::one();
                for (&j, &e) in b {
                    prod *= BigRational::from_integer(BigInt::from(falling(c.count(j) as u64, e as u64)));
                }
                ewens_class_probability(c, theta).unwrap() * prod
            })
            .sum()
    }

    #[test]
    fn watterson_matches_enumeration() {
        for theta in [q(1, 2), q(1, 1), q(2, 1)] {
            for n in 1..=8 {
                for j1 in 1..=n {
                    for e1 in 1..=n / j1 {
                        let b = BTreeMap::from([(j1, e1)]);
                        assert_eq!(
                            watterson_factorial_moment(n, &theta, &b).unwrap(),
                            enumerated_factorial_moment(n, &theta, &b)
                        );
                        for j2 in (j1 + 1)..=n {
                            for e2 in 1..=((n - j1 * e1) / j2).max(1) {
                                let b = BTreeMap::from([(j1, e1), (j2, e2)]);
                                assert_eq!(
                                    watterson_factorial_moment(n, &theta, &b).unwrap(),
                                    enumerated_factorial_moment(n, &theta, &b),
                                    "n={n} b={b:?}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn expected_size_is_n() {
        for theta in [q(1, 2), q(1, 1), q(2, 1)] {
            for n in [1usize, 7, 100, 1000] {
                let total: BigRational = (1..=n)
                    .map(|j| {
                        BigRational::from_integer(j.into())
                            * watterson_factorial_moment(n, &theta, &BTreeMap::from([(j, 1)])).unwrap()
                    })
                    .sum();
                assert_eq!(total, BigRational::from_integer(n.into()));
            }
        }
    }

    #[test]
    fn sampling_small_cases() {
        let p = EwensParams::parse(1, "5/2").unwrap();
        for seed in 0..20 {
            assert_eq!(sample_ewens(&p, seed), CycleType::identity(1));
        }
        let p = EwensParams::parse(30, "1").unwrap();
        assert_eq!(sample_ewens(&p, 99), sample_ewens(&p, 99));
    }

    #[test]
    fn sampling_frequencies_match_class_probabilities() {
        let samples = 200_000u64;
        for (n, theta, target, expected) in [(3usize, "1", ct(&[3]), 1.0 / 3.0), (2, "2", ct(&[1, 1]), 2.0 / 3.0)] {
            let p = EwensParams::parse(n, theta).unwrap();
            let hits = (0..samples).filter(|&s| sample_ewens(&p, rng::derive_seed(11, s)) == target).count();
            let freq = hits as f64 / samples as f64;
            let se = (expected * (1.0 - expected) / samples as f64).sqrt();
            assert!((freq - expected).abs() < 4.0 * se, "n={n}: {freq} vs {expected}");
        }
    }

    proptest! {
        #[test]
        fn samples_are_valid_cycle_types(n in 1usize..300, theta_num in 1i64..20, seed in any::<u64>()) {
            let p = EwensParams::new(n, q(theta_num, 4)).unwrap();
            let c = sample_ewens(&p, seed);
            prop_assert_eq!(c.counts().iter().map(|(j, k)| j * k).sum::<usize>(), n);
            prop_assert!(c.counts().values().all(|&k| k > 0));
            prop_assert_eq!(c.clone(), sample_ewens(&p, seed));
        }
    }
}
