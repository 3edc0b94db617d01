//! Exact limiting moments and cumulants of `Y_{infinity,k}`, the `k = 1`
//! Gaussian limit, the Poissonized limit, and exact finite-n moments.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::{factorial, integer_partitions, rising, set_partitions, stirling2_table};
use crate::series::{factorial_q, moments_from_cumulants, series_exp, RationalSeries};
use crate::spectra::{FracTable, Interval};
use crate::{Error, Result};

/// Default truncation order of the cumulant series.
pub const DEFAULT_ORDER: usize = 20;

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

fn check_k_theta(k: usize, theta: &BigRational) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    if !theta.is_positive() {
        return Err(Error::InvalidParameter(format!("theta must be positive, got {theta}")));
    }
    Ok(())
}

/// `kappa_{2m} = 2 theta (2m(k-1) - 1)! / (2m+2)!`.
fn kappa(k: usize, theta: &BigRational, even: usize) -> BigRational {
    let num = factorial((even * (k - 1) - 1) as u64);
    let den = factorial(even as u64 + 2);
    int(2) * theta * BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `K(z) = sum_m kappa_{2m} z^{2m}` truncated at order `order`.
pub fn cumulant_series(k: usize, theta: &BigRational, order: usize) -> Result<RationalSeries> {
    check_k_theta(k, theta)?;
    if order < 2 {
        return Err(Error::InvalidParameter("truncation order must be at least 2".into()));
    }
    let mut s = RationalSeries::zero(order);
    for even in (2..=order).step_by(2) {
        s.set(even, kappa(k, theta, even));
    }
    Ok(s)
}

/// Exact moments `E[Y^m]`, `m = 0..=M`, of the limit law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentTable {
    pub k: usize,
    #[serde(serialize_with = "ser_rational")]
    pub theta: BigRational,
    #[serde(serialize_with = "ser_rationals")]
    pub moments: Vec<BigRational>,
}

fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_rationals<S: serde::Serializer>(x: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|r| r.to_string()))
}

impl MomentTable {
    pub fn moment(&self, m: usize) -> Result<&BigRational> {
        self.moments
            .get(m)
            .ok_or_else(|| Error::bound("moment order", m, self.moments.len() - 1))
    }
}

/// Moments through `E[Y^m] = [z^m] exp(K(z)) m! / (theta)_{m(k-1)}`.
pub fn limiting_moments(k: usize, theta: &BigRational, order: usize) -> Result<MomentTable> {
    let order = order.max(2);
    let e = series_exp(&cumulant_series(k, theta, order)?)?;
    let moments = (0..=order)
        .map(|m| e.coeffs()[m].clone() * factorial_q(m) / rising(theta, (m * (k - 1)) as u64))
        .collect();
    Ok(MomentTable {
        k,
        theta: theta.clone(),
        moments,
    })
}

/// Largest moment order accepted by [`limiting_moments_direct`].
pub const DIRECT_MAX_ORDER: usize = 30;

/// `E[Y^m]` as a sum over partitions of `m` into even parts, independent of
/// the series code path.
pub fn limiting_moments_direct(k: usize, theta: &BigRational, m: usize) -> Result<BigRational> {
    check_k_theta(k, theta)?;
    if m > DIRECT_MAX_ORDER {
        return Err(Error::bound("m", m, DIRECT_MAX_ORDER));
    }
    if m == 0 {
        return Ok(BigRational::one());
    }
    if m % 2 == 1 {
        return Ok(BigRational::zero());
    }
    let mut acc = BigRational::zero();
    for parts in integer_partitions(m) {
        if parts.iter().any(|p| p % 2 == 1) {
            continue;
        }
        let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
        for &p in &parts {
            *mult.entry(p).or_insert(0) += 1;
        }
        let mut term = factorial_q(m);
        for (&p, &c) in &mult {
            let gamma = int(factorial((p * (k - 1) - 1) as u64));
            let kap = int(2) * theta * gamma / factorial_q(p + 2);
            term *= num_traits::pow(kap, c) / factorial_q(c);
        }
        acc += term;
    }
    Ok(acc / rising(theta, (m * (k - 1)) as u64))
}

/// Limit moments of `Z_n` for `k = 1`: Gaussian with variance `theta / 6`.
pub fn gaussian_moments_k1(theta: &BigRational, m: usize) -> Result<BigRational> {
    if !theta.is_positive() {
        return Err(Error::InvalidParameter(format!("theta must be positive, got {theta}")));
    }
    if m % 2 == 1 {
        return Ok(BigRational::zero());
    }
    let h = m / 2;
    let dbl = factorial_q(m) / (int(num_traits::pow(BigInt::from(2), h)) * factorial_q(h));
    Ok(dbl * num_traits::pow(theta / int(6), h))
}

/// `m`-th cumulant of the Poissonized limit `Y*`: `2 theta / ((k-1) m (m+1) (m+2))`
/// for even `m >= 2`, zero otherwise.
pub fn poissonized_cumulants(k: usize, theta: &BigRational, m: usize) -> Result<BigRational> {
    check_k_theta(k, theta)?;
    if m == 0 || m % 2 == 1 {
        return Ok(BigRational::zero());
    }
    let m = m as i64;
    Ok(int(2) * theta / int((k as i64 - 1) * m * (m + 1) * (m + 2)))
}

/// Moments `E[Y*^m]`, `m = 0..=order`, from the cumulants via `exp`.
pub fn poissonized_moments(k: usize, theta: &BigRational, order: usize) -> Result<Vec<BigRational>> {
    let mut s = RationalSeries::zero(order.max(1));
    for m in 1..=order {
        s.set(m, poissonized_cumulants(k, theta, m)? / factorial_q(m));
    }
    let e = series_exp(&s)?;
    let via_exp: Vec<BigRational> = (0..=order).map(|m| &e.coeffs()[m] * factorial_q(m)).collect();
    debug_assert_eq!(
        via_exp,
        moments_from_cumulants(
            &(0..=order)
                .map(|m| poissonized_cumulants(k, theta, m).unwrap())
                .collect::<Vec<_>>()
        )
    );
    Ok(via_exp)
}

/// Exact moments `E[Y*^m]`, `m = 0..=order`, of the Poissonized statistic
/// `Y* = sum_{j<=n} j^{k-1} W_j ({j alpha} - {j beta}) / n^{k-1}` at finite
/// `n`, where `W_j ~ Poisson(theta / j)` independently. Its cumulants are
/// `theta sum_j j^{m(k-1)-1} ({j alpha} - {j beta})^m / n^{m(k-1)}`.
pub fn poissonized_finite_n_moments(
    n: usize,
    k: usize,
    theta: &BigRational,
    interval: &Interval,
    order: usize,
) -> Result<Vec<BigRational>> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter("n and k must be at least 1".into()));
    }
    if !theta.is_positive() {
        return Err(Error::InvalidParameter(format!("theta must be positive, got {theta}")));
    }
    let table = FracTable::new(interval, n);
    let delta: Vec<BigInt> = (0..=n).map(|j| table.delta_numer(j)).collect();
    let d = BigInt::from(table.denom().clone());
    let mut kappa = vec![BigRational::zero(); order + 1];
    for (m, slot) in kappa.iter_mut().enumerate().skip(1) {
        let w = m * (k - 1);
        let value = if w >= 1 {
            let num: BigInt = (1..=n)
                .into_par_iter()
                .map(|j| num_traits::pow(delta[j].clone(), m) * num_traits::pow(BigInt::from(j), w - 1))
                .sum();
            BigRational::new(num, num_traits::pow(d.clone(), m) * num_traits::pow(BigInt::from(n), w))
        } else {
            (1..=n)
                .map(|j| BigRational::new(num_traits::pow(delta[j].clone(), m), BigInt::from(j)))
                .fold(BigRational::zero(), |a, b| a + b)
                / BigRational::from_integer(num_traits::pow(d.clone(), m))
        };
        *slot = theta * value;
    }
    Ok(moments_from_cumulants(&kappa))
}

/// Limits of the cross moments for `k = 2`, `theta = 1` and two arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossMomentTargets {
    /// `lim E[(Y^{I1})^2 (Y^{I2})^2]`.
    pub joint: BigRational,
    /// `lim E[(Y^{I1})^2] E[(Y^{I2})^2]`.
    pub product: BigRational,
}

pub fn cross_moment_targets() -> CrossMomentTargets {
    CrossMomentTargets {
        joint: BigRational::new(7.into(), 864.into()),
        product: BigRational::new(1.into(), 144.into()),
    }
}

/// Whether `finite_n_moment` accepts `(n, m)`.
pub fn finite_n_moment_supported(n: usize, m: usize) -> bool {
    (m <= 2 && n <= 5000) || (m <= 4 && n <= 150) || (m <= 8 && n <= 40)
}

/// A group of merged index blocks: exponent `e` on `a_j` and `t` on `1/j`,
/// contributing `j t` to the total cycle mass.
type Signature = Vec<(usize, usize)>;

/// Integer coefficients of `E[Y^m]` grouped by index-group signature.
///
/// Expands `(sum_j a_j C_j)^m` over equality patterns of the `m` indices,
/// converts each power `C^s` to falling factorials with Stirling numbers, and
/// lifts the distinct-index constraint by Moebius inversion on set partitions.
fn signature_coefficients(m: usize) -> HashMap<Signature, BigInt> {
    let stirling = stirling2_table(m);
    let mut out: HashMap<Signature, BigInt> = HashMap::new();
    for pattern in set_partitions(m) {
        let sizes: Vec<usize> = pattern.iter().map(Vec::len).collect();
        let nb = sizes.len();
        let mut t = vec![1usize; nb];
        loop {
            let mut coef = BigInt::one();
            for (&s, &ti) in sizes.iter().zip(&t) {
                coef *= BigInt::from(stirling[s][ti].clone());
            }
            for merge in set_partitions(nb) {
                let mut mu = BigInt::one();
                let mut sig: Signature = Vec::with_capacity(merge.len());
                for group in &merge {
                    let g = group.len();
                    let f = BigInt::from(factorial(g as u64 - 1));
                    mu *= if g % 2 == 1 { f } else { -f };
                    let e: usize = group.iter().map(|&b| sizes[b]).sum();
                    let tt: usize = group.iter().map(|&b| t[b]).sum();
                    sig.push((e, tt));
                }
                sig.sort_unstable();
                *out.entry(sig).or_insert_with(BigInt::zero) += &coef * mu;
            }
            let mut pos = 0;
            while pos < nb {
                t[pos] += 1;
                if t[pos] <= sizes[pos] {
                    break;
                }
                t[pos] = 1;
                pos += 1;
            }
            if pos == nb {
                break;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Truncated convolution of two arrays indexed by cycle mass `0..=n`.
fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len() - 1;
    (0..=n)
        .into_par_iter()
        .map(|l| {
            let mut acc = BigInt::zero();
            for i in 0..=l {
                if a[i].is_zero() || b[l - i].is_zero() {
                    continue;
                }
                acc += &a[i] * &b[l - i];
            }
            acc
        })
        .collect()
}

/// Exact `E[(Y_{n,k})^m]` under Ewens(theta), for `k >= 2`.
///
/// With `a_j = j^{k-1} ({j alpha} - {j beta}) / n^{k-1}` and the Watterson
/// formula `E[prod_j C_j^{(t_j)}] = prod_j (theta/j)^{t_j} F(sum_j j t_j)`,
/// every term reduces to a convolution in the cycle mass `L` followed by a
/// single pass against `F(L)`. All arithmetic is on integers over the common
/// denominators of the interval endpoints, `n` and `theta`.
pub fn finite_n_moment(n: usize, k: usize, theta: &BigRational, interval: &Interval, m: usize) -> Result<BigRational> {
    check_k_theta(k, theta)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if m == 0 {
        return Ok(BigRational::one());
    }
    if !finite_n_moment_supported(n, m) {
        return Err(Error::bound(
            "(n, m)",
            format!("({n}, {m})"),
            "m <= 2 with n <= 5000, m <= 4 with n <= 150, or m <= 8 with n <= 40",
        ));
    }
    let table = FracTable::new(interval, n);
    let delta: Vec<BigInt> = (0..=n).map(|j| table.delta_numer(j)).collect();

    let mut by_t: BTreeMap<usize, Vec<BigInt>> = BTreeMap::new();
    let mut cache: HashMap<(usize, usize), Vec<BigInt>> = HashMap::new();
    let mut sigs: Vec<(Signature, BigInt)> = signature_coefficients(m).into_iter().collect();
    sigs.sort();
    for (sig, coef) in sigs {
        let mut acc: Option<Vec<BigInt>> = None;
        for &(e, t) in &sig {
            let g = cache
                .entry((e, t))
                .or_insert_with(|| group_array(n, k, e, t, &delta))
                .clone();
            acc = Some(match acc {
                None => g,
                Some(a) => convolve(&a, &g),
            });
        }
        let arr = acc.expect("nonempty signature");
        let tt: usize = sig.iter().map(|&(_, t)| t).sum();
        let slot = by_t.entry(tt).or_insert_with(|| vec![BigInt::zero(); n + 1]);
        for (s, x) in slot.iter_mut().zip(arr) {
            *s += &coef * x;
        }
    }

    let p = theta.numer().magnitude().clone();
    let q = theta.denom().magnitude().clone();
    // V(L) = prod_{i<L} q (n-i) * prod_{u<n-L} (p + q u); F(L) = V(L) / V_full.
    let mut v = BigUint::one();
    for u in 0..n {
        v *= &p + &q * BigUint::from(u);
    }
    let den_full = v.clone();
    let mut totals: BTreeMap<usize, BigInt> = by_t.keys().map(|&t| (t, BigInt::zero())).collect();
    for l in 0..=n {
        let vl = BigInt::from(v.clone());
        for (t, arr) in &by_t {
            if !arr[l].is_zero() {
                *totals.get_mut(t).expect("key") += &arr[l] * &vl;
            }
        }
        if l < n {
            let up = &q * BigUint::from(n - l);
            let down = &p + &q * BigUint::from(n - l - 1);
            let (quo, rem) = (v * up).div_rem(&down);
            debug_assert!(rem.is_zero());
            v = quo;
        }
    }
    let mut acc = BigRational::zero();
    for (t, total) in totals {
        acc += num_traits::pow(theta.clone(), t) * int(total);
    }
    let d = BigInt::from(table.denom().clone());
    let scale = num_traits::pow(d, m)
        * num_traits::pow(BigInt::from(n), m * (k - 1))
        * BigInt::from(den_full);
    Ok(acc / int(scale))
}

/// `g(L) = sum_{j t = L} j^{e(k-1) - t} delta_j^e` as an array over `L`.
fn group_array(n: usize, k: usize, e: usize, t: usize, delta: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n + 1];
    let power = e * (k - 1) - t;
    let mut j = 1;
    while j * t <= n {
        out[j * t] = num_traits::pow(BigInt::from(j), power) * num_traits::pow(delta[j].clone(), e);
        j += 1;
    }
    out
}
