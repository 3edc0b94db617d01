//! Fractional-part sequences `{j alpha}`, Weyl sums, discrepancy and the
//! deterministic limits behind the moment method.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::{biguint_to_f64, rational_to_f64};
use crate::spectra::Angle;
use crate::{Error, Result};

const CHUNK: usize = 1 << 15;

/// The sequence `{alpha}, {2 alpha}, ..., {n alpha}` with exact terms.
#[derive(Debug, Clone)]
pub struct FracSequence {
    alpha: Angle,
    n: usize,
}

impl FracSequence {
    pub fn new(alpha: Angle, n: usize) -> Self {
        FracSequence { alpha, n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `{j alpha}` for `1 <= j <= n`.
    pub fn value(&self, j: usize) -> BigRational {
        self.alpha.frac_mul(&BigUint::from(j))
    }

    /// All terms rounded to `f64`, computed by exact incremental addition.
    pub fn to_f64(&self) -> Vec<f64> {
        let num = self.alpha.value().numer().magnitude().clone();
        let den = self.alpha.value().denom().magnitude().clone();
        let den_f = biguint_to_f64(&den);
        let mut x = BigUint::zero();
        (1..=self.n)
            .map(|_| {
                x += &num;
                if x >= den {
                    x -= &den;
                }
                exact_ratio(&x, &den, den_f)
            })
            .collect()
    }
}

fn exact_ratio(x: &BigUint, den: &BigUint, den_f: f64) -> f64 {
    if den_f.is_finite() && den.bits() < 1000 {
        rational_to_f64(&BigRational::new(BigInt::from(x.clone()), BigInt::from(den.clone())))
    } else {
        biguint_to_f64(x) / den_f
    }
}

/// `(1/n) sum_{j<=n} exp(2 pi i h . ({j alpha_1}, ..., {j alpha_d}))`.
pub fn weyl_sum(h: &[i64], alphas: &[Angle], n: usize) -> Result<Complex64> {
    if h.len() != alphas.len() || h.is_empty() {
        return Err(Error::InvalidParameter("h and alphas must have the same positive length".into()));
    }
    if h.iter().all(|&x| x == 0) {
        return Err(Error::InvalidParameter("h must be nonzero".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let gamma: BigRational = h
        .iter()
        .zip(alphas)
        .map(|(&hi, a)| a.value() * BigRational::from_integer(BigInt::from(hi)))
        .sum();
    let den = gamma.denom().magnitude().clone();
    let num = gamma.numer().mod_floor(gamma.denom()).magnitude().clone();
    let den_f = biguint_to_f64(&den);
    let chunks: Vec<(usize, usize)> = (1..=n).step_by(CHUNK).map(|s| (s, (s + CHUNK - 1).min(n))).collect();
    let partial: Vec<Complex64> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut x = (&num * BigUint::from(lo)) % &den;
            let mut acc = Complex64::new(0.0, 0.0);
            for _ in lo..=hi {
                let phase = 2.0 * std::f64::consts::PI * exact_ratio(&x, &den, den_f);
                acc += Complex64::from_polar(1.0, phase);
                x += &num;
                if x >= den {
                    x -= &den;
                }
            }
            acc
        })
        .collect();
    Ok(partial.into_iter().sum::<Complex64>() / n as f64)
}

/// Star discrepancy of points in `[0, 1)`, exact via sorting.
pub fn discrepancy_1d(points: &[f64]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("discrepancy of an empty point set".into()));
    }
    if points.iter().any(|x| !(0.0..1.0).contains(x)) {
        return Err(Error::InvalidParameter("points must lie in [0, 1)".into()));
    }
    let mut xs = points.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    Ok(xs
        .iter()
        .enumerate()
        .map(|(i, &x)| ((i as f64 + 1.0) / n - x).max(x - i as f64 / n))
        .fold(0.0, f64::max))
}

/// Grid estimate of the 2D star discrepancy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discrepancy2d {
    /// Largest deviation over anchored boxes with corners on the grid.
    pub grid_max: f64,
    /// Rigorous upper bound for the true star discrepancy: `grid_max + 2/g`.
    pub upper_bound: f64,
    pub resolution: usize,
}

/// Star discrepancy of points in `[0, 1)^2`, evaluated on anchored boxes
/// `[0, i/g) x [0, j/g)`. Any anchored box lies between two grid boxes whose
/// areas differ by at most `2/g`, which gives the reported upper bound.
pub fn discrepancy_2d(points: &[(f64, f64)], resolution: usize) -> Result<Discrepancy2d> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("discrepancy of an empty point set".into()));
    }
    if resolution == 0 {
        return Err(Error::InvalidParameter("grid resolution must be positive".into()));
    }
    let g = resolution;
    let mut cells = vec![0u64; g * g];
    for &(x, y) in points {
        if !(0.0..1.0).contains(&x) || !(0.0..1.0).contains(&y) {
            return Err(Error::InvalidParameter("points must lie in [0, 1)^2".into()));
        }
        let i = ((x * g as f64) as usize).min(g - 1);
        let j = ((y * g as f64) as usize).min(g - 1);
        cells[i * g + j] += 1;
    }
    let n = points.len() as f64;
    let mut prefix = vec![0u64; (g + 1) * (g + 1)];
    let mut worst: f64 = 0.0;
    for i in 1..=g {
        for j in 1..=g {
            let v = cells[(i - 1) * g + (j - 1)] + prefix[(i - 1) * (g + 1) + j] + prefix[i * (g + 1) + j - 1]
                - prefix[(i - 1) * (g + 1) + j - 1];
            prefix[i * (g + 1) + j] = v;
            let area = (i * j) as f64 / (g * g) as f64;
            worst = worst.max((v as f64 / n - area).abs());
        }
    }
    Ok(Discrepancy2d {
        grid_max: worst,
        upper_bound: worst + 2.0 / g as f64,
        resolution: g,
    })
}

/// `sum_{j<=n} j^p delta_j^m` with `delta_j = ({j alpha} - {j beta}) D`,
/// summed exactly.
fn exact_power_sum(alpha: &Angle, beta: &Angle, m: usize, p: usize, n: usize) -> BigInt {
    let (a, b, d) = common_numerators(alpha, beta);
    let (a, b, d) = (&a, &b, &d);
    let chunks: Vec<(usize, usize)> = (1..=n).step_by(CHUNK).map(|s| (s, (s + CHUNK - 1).min(n))).collect();
    chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut xa = (a * BigUint::from(lo)) % d;
            let mut xb = (b * BigUint::from(lo)) % d;
            let mut acc = BigInt::zero();
            for j in lo..=hi {
                let delta = BigInt::from(xa.clone()) - BigInt::from(xb.clone());
                let mut term = num_traits::pow(delta, m);
                if p > 0 {
                    term *= num_traits::pow(BigInt::from(j), p);
                }
                acc += term;
                xa += a;
                if &xa >= d {
                    xa -= d;
                }
                xb += b;
                if &xb >= d {
                    xb -= d;
                }
            }
            acc
        })
        .reduce(BigInt::zero, |x, y| x + y)
}

/// Numerators of `alpha` and `beta` over their common denominator.
fn common_numerators(alpha: &Angle, beta: &Angle) -> (BigUint, BigUint, BigUint) {
    let da = alpha.value().denom().magnitude();
    let db = beta.value().denom().magnitude();
    let d = da.lcm(db);
    let a = alpha.value().numer().magnitude() * (&d / da);
    let b = beta.value().numer().magnitude() * (&d / db);
    (a, b, d)
}

/// `(1/n) sum_{j<=n} ({j alpha} - {j beta})^m`, exact until the final
/// rounding. Tends to `2/((m+1)(m+2))` for even `m` and 0 for odd `m`.
pub fn empirical_power_mean(alpha: &Angle, beta: &Angle, m: usize, n: usize) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("m and n must be positive".into()));
    }
    let s = exact_power_sum(alpha, beta, m, 0, n);
    let d = common_numerators(alpha, beta).2;
    let den = num_traits::pow(BigInt::from(d), m) * BigInt::from(n);
    Ok(rational_to_f64(&BigRational::new(s, den)))
}

/// `n^{-m(k-1)} sum_{j<=n} j^{m(k-1)-1} ({j alpha} - {j beta})^m`, exact
/// until the final rounding. Tends to `2/((k-1) m (m+1) (m+2))` for even `m`.
pub fn weighted_power_mean(alpha: &Angle, beta: &Angle, m: usize, k: usize, n: usize) -> Result<f64> {
    if m == 0 || n == 0 || k < 2 {
        return Err(Error::InvalidParameter("need m >= 1, n >= 1 and k >= 2".into()));
    }
    let p = m * (k - 1) - 1;
    let s = exact_power_sum(alpha, beta, m, p, n);
    let d = common_numerators(alpha, beta).2;
    let den = num_traits::pow(BigInt::from(d), m)
        * num_traits::pow(BigInt::from(n), m * (k - 1));
    Ok(rational_to_f64(&BigRational::new(s, den)))
}

/// Partial sums of `sum_j ({j alpha} - {j beta}) / j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicSum {
    pub n: usize,
    pub value: f64,
    /// `max_{j<=n} |partial sum up to j|`.
    pub running_max: f64,
    /// `(j, partial sum, running max)` at `j = 10, 100, ..., n`.
    pub checkpoints: Vec<(usize, f64, f64)>,
}

/// `sum_{j<=n} ({j alpha} - {j beta}) / j` with compensated summation of
/// exactly computed terms, and the running maximum of its modulus.
pub fn bounded_harmonic_sum(alpha: &Angle, beta: &Angle, n: usize) -> HarmonicSum {
    let (a, b, d) = common_numerators(alpha, beta);
    let d_int = BigInt::from(d.clone());
    let (mut xa, mut xb) = (BigUint::zero(), BigUint::zero());
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut running_max: f64 = 0.0;
    let mut checkpoints = Vec::new();
    let mut next_check = 10;
    for j in 1..=n {
        xa += &a;
        if xa >= d {
            xa -= &d;
        }
        xb += &b;
        if xb >= d {
            xb -= &d;
        }
        let delta = BigInt::from(xa.clone()) - BigInt::from(xb.clone());
        let term = if delta.is_zero() {
            0.0
        } else {
            rational_to_f64(&BigRational::new(delta, &d_int * BigInt::from(j)))
        };
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        let value = sum + comp;
        running_max = running_max.max(value.abs());
        if j == next_check || j == n {
            checkpoints.push((j, value, running_max));
            if j == next_check {
                next_check *= 10;
            }
        }
    }
    HarmonicSum {
        n,
        value: sum + comp,
        running_max,
        checkpoints,
    }
}

/// `2 / ((m+1)(m+2))` for even `m`, 0 for odd `m`.
pub fn power_mean_limit(m: usize) -> f64 {
    if m % 2 == 1 {
        0.0
    } else {
        2.0 / ((m + 1) * (m + 2)) as f64
    }
}

/// `2 / ((k-1) m (m+1) (m+2))` for even `m`, 0 for odd `m`.
pub fn weighted_power_mean_limit(m: usize, k: usize) -> f64 {
    if m % 2 == 1 {
        0.0
    } else {
        2.0 / ((k - 1) * m * (m + 1) * (m + 2)) as f64
    }
}

/// Largest denominator among the terms of a fractional-part sequence; it
/// never exceeds the denominator of `alpha`.
pub fn max_term_denominator(seq: &FracSequence, upto: usize) -> BigUint {
    (1..=upto.min(seq.len()))
        .map(|j| seq.value(j).denom().magnitude().clone())
        .max()
        .unwrap_or_default()
}
