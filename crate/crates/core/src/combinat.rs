//! Small exact-arithmetic and enumeration helpers shared across modules.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `x (x-1) ... (x-r+1)`, zero when `r > x`.
pub fn falling(x: u64, r: u64) -> BigUint {
    if r > x {
        return BigUint::zero();
    }
    (0..r).fold(BigUint::one(), |acc, i| acc * (x - i))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Rising factorial `theta (theta+1) ... (theta+r-1)` of a rational.
pub fn rising(theta: &BigRational, r: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut t = theta.clone();
    for _ in 0..r {
        acc *= &t;
        t += BigRational::one();
    }
    acc
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

pub fn lcm_big(a: &BigUint, b: &BigUint) -> BigUint {
    a.lcm(b)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Stirling numbers of the second kind `S(n, r)` for `0 <= r <= n <= max`.
pub fn stirling2_table(max: usize) -> Vec<Vec<BigUint>> {
    let mut table = vec![vec![BigUint::zero(); max + 1]; max + 1];
    table[0][0] = BigUint::one();
    for n in 1..=max {
        for r in 1..=n {
            table[n][r] = &table[n - 1][r - 1] + &table[n - 1][r] * r;
        }
    }
    table
}

/// Integer partitions of `n` as non-increasing part lists, in reverse
/// lexicographic order (`[n]` first).
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(rem)).rev() {
            cur.push(part);
            rec(rem - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Set partitions of `{0, .., n-1}` as lists of blocks; each block is sorted
/// and blocks are ordered by their smallest element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// Parses an exact rational from `"p/q"`, an integer, or a plain decimal
/// literal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse {text:?} as a rational"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    parse_decimal(s).ok_or_else(bad)
}

/// Exact value of a decimal literal (optional sign, optional fraction).
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let value = BigRational::new(numer, denom);
    Some(if neg { -value } else { value })
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    // Scale to keep ~64 significant bits before the float division.
    let numer = r.numer();
    let denom = r.denom();
    if numer.is_zero() {
        return 0.0;
    }
    let nb = numer.bits() as i64;
    let db = denom.bits() as i64;
    let shift = 64 - (nb - db);
    let scaled = if shift >= 0 {
        (numer.abs() << shift as usize) / denom
    } else {
        (numer.abs() >> (-shift) as usize) / denom
    };
    let mag = big_to_f64(&scaled) * 2f64.powi(-shift as i32);
    if numer.is_negative() {
        -mag
    } else {
        mag
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    let (_, digits) = x.to_u64_digits();
    digits
        .iter()
        .rev()
        .fold(0.0, |acc, &d| acc * 18446744073709551616.0 + d as f64)
}

pub fn biguint_to_f64(x: &BigUint) -> f64 {
    x.to_u64_digits()
        .iter()
        .rev()
        .fold(0.0, |acc, &d| acc * 18446744073709551616.0 + d as f64)
}

/// Floor of a rational as a big integer.
pub fn floor_big(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=10).map(|n| integer_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..=6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(7), -1);
        assert_eq!(totient(12), 4);
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(falling(5, 3), BigUint::from(60u32));
        assert_eq!(falling(2, 3), BigUint::zero());
        let s = stirling2_table(5);
        assert_eq!(s[4][2], BigUint::from(7u32));
        assert_eq!(s[5][3], BigUint::from(25u32));
    }

    #[test]
    fn parse_rationals() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(parse_rational("1/2").unwrap(), half);
        assert_eq!(parse_rational("0.5").unwrap(), half);
        assert_eq!(parse_rational("2").unwrap(), BigRational::from_integer(2.into()));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!((rational_to_f64(&parse_rational("-1/3").unwrap()) + 1.0 / 3.0).abs() < 1e-16);
    }
}
