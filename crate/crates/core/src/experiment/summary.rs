use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::record::Histogram;
use crate::combinat::rational_to_f64;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut s = Compensated::default();
    for x in xs {
        s.add(x);
    }
    s.value()
}

pub(crate) fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| compensated_sum(xs.iter().copied()) / xs.len() as f64)
}

/// Sample mean and its standard error `s / sqrt(N)`.
pub(crate) fn mean_se(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    let Some(m) = mean(xs) else {
        return (None, None);
    };
    if xs.len() < 2 {
        return (Some(m), None);
    }
    let var = compensated_sum(xs.iter().map(|x| (x - m) * (x - m))) / (xs.len() - 1) as f64;
    (Some(m), Some((var / xs.len() as f64).sqrt()))
}

/// `(mean of x^m, standard error)` for `m = 1..=max_m`.
pub(crate) fn power_moments(xs: &[f64], max_m: usize) -> Vec<(Option<f64>, Option<f64>)> {
    (1..=max_m)
        .map(|m| {
            let p: Vec<f64> = xs.iter().map(|x| x.powi(m as i32)).collect();
            mean_se(&p)
        })
        .collect()
}

/// Exact `mean of (numer / denom)^m` for `m = 1..=max_m`, from integer
/// numerators. The reduction is exact, so the result does not depend on how
/// the work is split.
pub(crate) fn exact_power_means(numers: &[BigInt], denom: &BigInt, max_m: usize) -> Vec<BigRational> {
    if numers.is_empty() {
        return Vec::new();
    }
    let sums = numers
        .par_iter()
        .fold(
            || vec![BigInt::zero(); max_m],
            |mut acc, x| {
                let mut p = BigInt::one();
                for slot in acc.iter_mut() {
                    p *= x;
                    *slot += &p;
                }
                acc
            },
        )
        .reduce(
            || vec![BigInt::zero(); max_m],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let count = BigInt::from(numers.len());
    sums.into_iter()
        .enumerate()
        .map(|(i, s)| BigRational::new(s, &count * num_traits::pow(denom.clone(), i + 1)))
        .collect()
}

pub(crate) fn exact_to_f64(xs: &[BigRational]) -> Vec<f64> {
    xs.iter().map(rational_to_f64).collect()
}

/// Histogram of `xs` on `[-r, r]`, `r = max(1, max |x|)`, so every value
/// lands in a bin.
pub(crate) fn histogram(xs: &[f64], bins: usize) -> Histogram {
    let r = xs.iter().fold(1.0f64, |r, x| r.max(x.abs()));
    let mut counts = vec![0u64; bins];
    let width = 2.0 * r / bins as f64;
    for &x in xs {
        let i = (((x + r) / width).floor() as usize).min(bins - 1);
        counts[i] += 1;
    }
    Histogram { lo: -r, hi: r, counts }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_beats_naive() {
        let xs: Vec<f64> = std::iter::once(1e16).chain(std::iter::repeat(1.0).take(1000)).collect();
        assert_eq!(compensated_sum(xs.iter().copied()), 1e16 + 1000.0);
    }

    #[test]
    fn mean_and_se() {
        let (m, se) = mean_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, Some(2.5));
        assert!((se.unwrap() - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_se(&[]), (None, None));
        assert_eq!(mean_se(&[3.0]), (Some(3.0), None));
    }

    #[test]
    fn exact_means() {
        let xs = [BigInt::from(1), BigInt::from(-2), BigInt::from(4)];
        let m = exact_power_means(&xs, &BigInt::from(2), 3);
        assert_eq!(m[0], BigRational::new(3.into(), 6.into()));
        assert_eq!(m[1], BigRational::new(21.into(), 12.into()));
        assert_eq!(m[2], BigRational::new(57.into(), 24.into()));
    }

    #[test]
    fn histogram_mass() {
        let xs = [-1.0, -0.5, 0.0, 0.99, 1.0, 2.5];
        let h = histogram(&xs, 7);
        assert_eq!(h.total(), 6);
        assert_eq!(h.hi, 2.5);
        assert_eq!(histogram(&[], 3).counts, vec![0, 0, 0]);
    }
}
