use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use super::{
    hook_irrep_count, induced_subset_cycle_type, induced_tuple_cycle_type, FracTable, Interval, Mode,
};
use crate::combinat::{biguint_to_f64, factorial, rational_to_f64};
use crate::perm::CycleType;
use crate::{Error, Result};

/// `Y_{n,k} = sum_j j^{k-1} C_j ({j alpha} - {j beta}) / n^{k-1}`, exact.
pub fn y_statistic_exact(ct: &CycleType, k: usize, interval: &Interval) -> BigRational {
    let n = ct.n() as u64;
    let mut acc = BigRational::zero();
    for (&j, &c) in ct.counts() {
        let jb = BigUint::from(j);
        let weight = BigInt::from(num_traits::pow(jb.clone(), k.saturating_sub(1)) * BigUint::from(c));
        acc += interval.frac_difference(&jb) * BigRational::from_integer(weight);
    }
    acc / BigRational::from_integer(num_traits::pow(BigInt::from(n), k.saturating_sub(1)))
}

/// `Y_{n,k}` rounded once from its exact value.
pub fn y_statistic(ct: &CycleType, k: usize, interval: &Interval) -> f64 {
    rational_to_f64(&y_statistic_exact(ct, k, interval))
}

/// `Y_{n,k}` from a precomputed fractional-part table; the fast path used
/// inside sampling loops.
pub fn y_statistic_table(ct: &CycleType, k: usize, table: &FracTable) -> f64 {
    let n = ct.n() as f64;
    let e = k.saturating_sub(1) as i32;
    let mut acc = 0.0;
    for (&j, &c) in ct.counts() {
        acc += (j as f64 / n).powi(e) * c as f64 * table.delta(j);
    }
    acc
}

/// Exact eigenangle count of the chosen representation inside `interval`.
pub fn rep_count(ct: &CycleType, k: usize, interval: &Interval, mode: Mode) -> Result<BigUint> {
    match mode {
        Mode::Tuple => Ok(induced_tuple_cycle_type(ct, k)?.count_in_interval(interval)),
        Mode::Set => Ok(induced_subset_cycle_type(ct, k)?.count_in_interval(interval)),
        Mode::Irrep => hook_irrep_count(ct, k, interval),
    }
}

/// `(X - centering) / n^{k-1}`, multiplied by `k!` in set and irrep modes.
pub fn y_rep_statistic(ct: &CycleType, k: usize, interval: &Interval, mode: Mode, centering: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let x = biguint_to_f64(&rep_count(ct, k, interval, mode)?);
    let scale = match mode {
        Mode::Tuple => 1.0,
        Mode::Set | Mode::Irrep => biguint_to_f64(&factorial(k as u64)),
    };
    Ok((x - centering) * scale / (ct.n() as f64).powi(k as i32 - 1))
}

/// A function on the circle `[0, 1)` with known mean.
pub trait PeriodicFn: Sync {
    fn eval(&self, x: f64) -> f64;
    fn integral(&self) -> f64;
}

/// Indicator of the open arc `(alpha, beta)`.
#[derive(Debug, Clone)]
pub struct Indicator {
    a: f64,
    b: f64,
}

impl Indicator {
    pub fn new(interval: &Interval) -> Self {
        Indicator {
            a: interval.alpha().to_f64(),
            b: interval.beta().to_f64(),
        }
    }
}

impl PeriodicFn for Indicator {
    fn eval(&self, x: f64) -> f64 {
        if x > self.a && x < self.b {
            1.0
        } else {
            0.0
        }
    }

    fn integral(&self) -> f64 {
        self.b - self.a
    }
}

/// A periodic closure together with its integral over one period.
pub struct WithIntegral<F> {
    pub f: F,
    pub integral: f64,
}

impl<F: Fn(f64) -> f64 + Sync> WithIntegral<F> {
    /// Computes the integral by adaptive quadrature.
    pub fn new(f: F) -> Result<Self> {
        let integral = crate::quad::integrate(&f, 0.0, 1.0, 1e-12)?.value;
        Ok(WithIntegral { f, integral })
    }
}

impl<F: Fn(f64) -> f64 + Sync> PeriodicFn for WithIntegral<F> {
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn integral(&self) -> f64 {
        self.integral
    }
}

/// Error of the `j`-point trapezoidal rule for `f` on `[0, 1]`.
pub fn trapezoid_error(f: &dyn PeriodicFn, j: usize) -> f64 {
    assert!(j >= 1, "j must be positive");
    let jf = j as f64;
    let mut sum = 0.5 * (f.eval(0.0) + f.eval(1.0));
    for i in 1..j {
        sum += f.eval(i as f64 / jf);
    }
    sum / jf - f.integral()
}

/// `Y_{n,k,f} = sum_j C_j j^k R_j(f) / n^{k-1}`.
pub fn y_statistic_f(ct: &CycleType, k: usize, f: &dyn PeriodicFn) -> f64 {
    let n = ct.n() as f64;
    let e = k.saturating_sub(1) as i32;
    ct.counts()
        .iter()
        .map(|(&j, &c)| c as f64 * (j as f64 / n).powi(e) * j as f64 * trapezoid_error(f, j))
        .sum()
}
