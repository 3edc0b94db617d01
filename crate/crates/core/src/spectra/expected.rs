use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::necklace::necklaces_with_period;
use super::{Interval, Mode};
use crate::combinat::{divisors, factorial, falling, integer_partitions, lcm_u64, set_partitions, stirling2_table};
use crate::perm::watterson_size_factor;
use crate::{Error, Result};

/// Largest `n` for which exact centering is offered.
pub const EXACT_CENTERING_MAX_N: usize = 300;

/// Cost cap on the number of cycle-length vectors visited.
const MAX_VECTORS: f64 = 5e7;

/// Accumulates `sum theta^T F(l) num / den` with every `den` dividing a fixed
/// common denominator, so the running sums stay integral.
struct Buckets {
    common: BigUint,
    sums: BTreeMap<(usize, usize), BigInt>,
}

impl Buckets {
    fn new(common: BigUint) -> Self {
        Buckets {
            common,
            sums: BTreeMap::new(),
        }
    }

    fn add(&mut self, l: usize, t: usize, num: BigInt, den: u128) {
        let scaled = &self.common / BigUint::from(den);
        *self.sums.entry((l, t)).or_insert_with(BigInt::zero) += num * BigInt::from(scaled);
    }

    fn finish(self, n: usize, theta: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for ((l, t), s) in self.sums {
            if s.is_zero() {
                continue;
            }
            acc += num_traits::pow(theta.clone(), t) * watterson_size_factor(n, theta, l) * BigRational::from_integer(s);
        }
        acc / BigRational::from_integer(BigInt::from(self.common))
    }
}

fn lcm_upto(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, j| {
        let g = num_integer::Integer::gcd(&acc, &BigUint::from(j));
        acc * j / g
    })
}

/// Exact Ewens(θ) expectation of the number of eigenangles in `interval` for
/// the chosen representation.
pub fn expected_count(n: usize, k: usize, theta: &BigRational, interval: &Interval, mode: Mode) -> Result<BigRational> {
    if n == 0 || k == 0 || k > n || (mode == Mode::Irrep && k >= n) {
        return Err(Error::InvalidParameter(format!("invalid (n, k) = ({n}, {k}) for {mode} mode")));
    }
    if n > EXACT_CENTERING_MAX_N {
        return Err(Error::bound("n", n, EXACT_CENTERING_MAX_N));
    }
    let cost = (n as f64).powi(k as i32) / factorial(k as u64).to_string().parse::<f64>().unwrap_or(1.0);
    if cost > MAX_VECTORS {
        return Err(Error::bound("n^k / k!", format!("{cost:.3e}"), format!("{MAX_VECTORS:e}")));
    }
    if !interval.endpoints_interior() {
        return Err(Error::InvalidParameter("interval endpoints must lie in (0, 1)".into()));
    }
    Ok(match mode {
        Mode::Tuple => expected_tuple(n, k, theta, interval),
        Mode::Set => expected_subset(n, k, theta, interval),
        Mode::Irrep => {
            let mut acc = BigRational::zero();
            for i in 0..=k {
                let x = expected_power_sum_count(n, k - i, theta, interval);
                if i % 2 == 0 {
                    acc += x;
                } else {
                    acc -= x;
                }
            }
            acc
        }
    })
}

/// Visits every vector of `m` positive lengths with sum at most `n`.
fn for_length_vectors<F: FnMut(&[u64])>(n: u64, m: usize, f: &mut F) {
    fn go<F: FnMut(&[u64])>(n: u64, m: usize, used: u64, cur: &mut Vec<u64>, f: &mut F) {
        if cur.len() == m {
            f(cur);
            return;
        }
        let left = (m - cur.len() - 1) as u64;
        let mut len = 1;
        while used + len + left <= n {
            cur.push(len);
            go(n, m, used + len, cur, f);
            cur.pop();
            len += 1;
        }
    }
    go(n, m, 0, &mut Vec::with_capacity(m), f);
}

fn expected_tuple(n: usize, k: usize, theta: &BigRational, interval: &Interval) -> BigRational {
    let mut buckets = Buckets::new(lcm_upto(n));
    for blocks in set_partitions(k) {
        let sizes: Vec<u64> = blocks.iter().map(|b| b.len() as u64).collect();
        let m = sizes.len();
        for_length_vectors(n as u64, m, &mut |lens: &[u64]| {
            let mut weight = BigUint::one();
            let mut q = 1u64;
            for (&len, &s) in lens.iter().zip(&sizes) {
                if s > len {
                    return;
                }
                weight *= falling(len - 1, s - 1);
                q = lcm_u64(q, len);
            }
            let cnt = interval.count_full_cycle(&BigUint::from(q));
            if cnt.is_zero() {
                return;
            }
            let l: u64 = lens.iter().sum();
            buckets.add(l as usize, m, BigInt::from(weight * cnt), q as u128);
        });
    }
    buckets.finish(n, theta)
}

fn compositions(k: usize) -> Vec<Vec<u64>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=k {
        for mut rest in compositions(k - first) {
            rest.insert(0, first as u64);
            out.push(rest);
        }
    }
    out
}

fn expected_subset(n: usize, k: usize, theta: &BigRational, interval: &Interval) -> BigRational {
    let nn = n as u64;
    let base = lcm_upto(n);
    let mut common = base.clone();
    for _ in 0..k {
        common *= &base;
    }
    common *= factorial(k as u64);
    let mut buckets = Buckets::new(common);
    let mut periods: BTreeMap<(u64, u64), Vec<(u64, BigUint)>> = BTreeMap::new();
    for comp in compositions(k) {
        let s = comp.len();
        let s_fact = factorial(s as u64).to_u128_lossless();
        for_length_vectors(nn, s, &mut |lens: &[u64]| {
            if lens.iter().zip(&comp).any(|(&len, &kk)| kk > len) {
                return;
            }
            let options: Vec<Vec<(u64, BigUint)>> = lens
                .iter()
                .zip(&comp)
                .map(|(&len, &kk)| {
                    periods
                        .entry((len, kk))
                        .or_insert_with(|| {
                            divisors(len)
                                .into_iter()
                                .map(|d| (d, BigUint::from(d) * necklaces_with_period(len, kk, d)))
                                .filter(|(_, c)| !c.is_zero())
                                .collect()
                        })
                        .clone()
                })
                .collect();
            let prod_len: u128 = lens.iter().map(|&x| x as u128).product();
            let l: u64 = lens.iter().sum();
            let mut idx = vec![0usize; s];
            loop {
                let mut w = BigUint::one();
                let mut q = 1u64;
                for (opts, &i) in options.iter().zip(&idx) {
                    w *= &opts[i].1;
                    q = lcm_u64(q, opts[i].0);
                }
                let cnt = interval.count_full_cycle(&BigUint::from(q));
                if !cnt.is_zero() {
                    buckets.add(l as usize, s, BigInt::from(w * cnt), prod_len * q as u128 * s_fact);
                }
                let mut pos = 0;
                while pos < s {
                    idx[pos] += 1;
                    if idx[pos] < options[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == s {
                    break;
                }
            }
        });
    }
    buckets.finish(n, theta)
}

trait ToU128 {
    fn to_u128_lossless(&self) -> u128;
}

impl ToU128 for BigUint {
    fn to_u128_lossless(&self) -> u128 {
        num_traits::ToPrimitive::to_u128(self).expect("small factorial")
    }
}

/// Expected number of `j`-subsets of `[n]` whose defining-angle sum lies in
/// `interval`, through the power-sum expansion of `e_j`.
fn expected_power_sum_count(n: usize, j: usize, theta: &BigRational, interval: &Interval) -> BigRational {
    if j == 0 {
        return BigRational::zero();
    }
    let stirling = stirling2_table(j);
    let base = lcm_upto(n);
    let mut common = BigUint::one();
    for _ in 0..j {
        common *= &base;
    }
    let jf = factorial(j as u64);
    common *= &jf;
    let mut buckets = Buckets::new(common);
    for lambda in integer_partitions(j) {
        let mut mult: BTreeMap<usize, u64> = BTreeMap::new();
        for &p in &lambda {
            *mult.entry(p).or_insert(0) += 1;
        }
        let z: BigUint = mult
            .iter()
            .map(|(&p, &m)| num_traits::pow(BigUint::from(p), m as usize) * factorial(m))
            .product();
        let class = BigInt::from(&jf / z);
        let sign = if (j - lambda.len()) % 2 == 0 { 1 } else { -1 };
        let ell = lambda.len();
        let mut lens = vec![1u64; ell];
        loop {
            // Group equal lengths: E[prod C_L^{m_L}] via Stirling numbers.
            let mut q = 1u64;
            let mut prod_len = BigUint::one();
            for (&part, &len) in lambda.iter().zip(&lens) {
                q = lcm_u64(q, len / num_integer::Integer::gcd(&(part as u64), &len));
                prod_len *= len;
            }
            let cnt = interval.count_full_cycle(&BigUint::from(q));
            if !cnt.is_zero() {
                let weight = BigInt::from(prod_len / q * cnt) * &class * sign;
                let mut groups: BTreeMap<u64, usize> = BTreeMap::new();
                for &len in &lens {
                    *groups.entry(len).or_insert(0) += 1;
                }
                let groups: Vec<(u64, usize)> = groups.into_iter().collect();
                let mut t = vec![1usize; groups.len()];
                loop {
                    let l: u64 = groups.iter().zip(&t).map(|(&(len, _), &ti)| len * ti as u64).sum();
                    if l <= n as u64 {
                        let mut coef = BigUint::one();
                        let mut den: u128 = 1;
                        for (&(len, m), &ti) in groups.iter().zip(&t) {
                            coef *= &stirling[m][ti];
                            den *= (len as u128).pow(ti as u32);
                        }
                        let total_t: usize = t.iter().sum();
                        buckets.add(l as usize, total_t, &weight * BigInt::from(coef), den * jf_u128(j));
                    }
                    let mut pos = 0;
                    while pos < t.len() {
                        t[pos] += 1;
                        if t[pos] <= groups[pos].1 {
                            break;
                        }
                        t[pos] = 1;
                        pos += 1;
                    }
                    if pos == t.len() {
                        break;
                    }
                }
            }
            let mut pos = 0;
            while pos < ell {
                lens[pos] += 1;
                if lens[pos] <= n as u64 {
                    break;
                }
                lens[pos] = 1;
                pos += 1;
            }
            if pos == ell {
                break;
            }
        }
    }
    buckets.finish(n, theta)
}

fn jf_u128(j: usize) -> u128 {
    (1..=j as u128).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::biguint_to_f64;
    use crate::perm::{enumerate_cycle_types, ewens_class_probability};
    use crate::spectra::stats::rep_count;

    fn by_enumeration(n: usize, k: usize, theta: &BigRational, interval: &Interval, mode: Mode) -> BigRational {
        enumerate_cycle_types(n)
            .unwrap()
            .into_iter()
            .map(|(ct, _)| {
                let p = ewens_class_probability(&ct, theta).unwrap();
                let x = rep_count(&ct, k, interval, mode).unwrap();
                p * BigRational::from_integer(BigInt::from(x))
            })
            .sum()
    }

    #[test]
    fn matches_enumeration() {
        let i = Interval::standard();
        let j = Interval::parse("0.05", "0.95").unwrap();
        for theta in ["1/2", "1", "2"] {
            let th = crate::combinat::parse_rational(theta).unwrap();
            for n in 3..=7 {
                for k in 1..=3.min(n - 1) {
                    for iv in [&i, &j] {
                        for mode in [Mode::Tuple, Mode::Set, Mode::Irrep] {
                            let exact = expected_count(n, k, &th, iv, mode).unwrap();
                            let enumerated = by_enumeration(n, k, &th, iv, mode);
                            assert_eq!(exact, enumerated, "n={n} k={k} theta={theta} {mode}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn moderate_n_is_fast_and_sane() {
        let i = Interval::standard();
        let th = BigRational::one();
        let e = expected_count(300, 2, &th, &i, Mode::Tuple).unwrap();
        let width = i.beta().to_f64() - i.alpha().to_f64();
        let approx = crate::combinat::rational_to_f64(&e) / (300.0 * 299.0);
        assert!((approx - width).abs() < 0.05, "{approx}");
        let _ = biguint_to_f64;
    }

    #[test]
    fn bounds() {
        let th = BigRational::one();
        let i = Interval::standard();
        assert!(matches!(expected_count(301, 2, &th, &i, Mode::Tuple), Err(Error::BoundExceeded { .. })));
        assert!(expected_count(5, 5, &th, &i, Mode::Irrep).is_err());
    }
}
