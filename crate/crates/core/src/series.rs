//! Truncated formal power series with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinat::{binomial, factorial};
use crate::{Error, Result};

/// `c_0 + c_1 z + ... + c_M z^M`, truncated at order `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<BigRational>,
}

impl RationalSeries {
    /// Series from its coefficients `c_0..=c_M`; at least one is required.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        RationalSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        RationalSeries {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// The series `z` truncated at `order`.
    pub fn z(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = BigRational::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `z^m`; asking beyond the truncation order is an error.
    pub fn coeff(&self, m: usize) -> Result<&BigRational> {
        self.coeffs.get(m).ok_or_else(|| {
            Error::bound("series coefficient index", m, self.order())
        })
    }

    pub fn set(&mut self, m: usize, value: BigRational) {
        self.coeffs[m] = value;
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RationalSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Truncates or zero-pads to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, BigRational::zero());
        RationalSeries { coeffs }
    }

    /// Evaluates the truncated polynomial at a floating-point argument.
    pub fn eval_f64(&self, z: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * z + crate::combinat::rational_to_f64(c))
    }
}

impl Add for &RationalSeries {
    type Output = RationalSeries;

    fn add(self, rhs: &RationalSeries) -> RationalSeries {
        let order = self.order().min(rhs.order());
        RationalSeries {
            coeffs: (0..=order).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        }
    }
}

impl Mul for &RationalSeries {
    type Output = RationalSeries;

    fn mul(self, rhs: &RationalSeries) -> RationalSeries {
        let order = self.order().min(rhs.order());
        let mut out = RationalSeries::zero(order);
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                out.coeffs[i + j] += &self.coeffs[i] * &rhs.coeffs[j];
            }
        }
        out
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c}) z")?,
                _ => write!(f, "({c}) z^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

/// `exp(s)` to the order of `s`; `s` must have zero constant term.
///
/// Uses `E' = s' E`, i.e. `e_m = (1/m) sum_{i=1}^m i s_i e_{m-i}`.
pub fn series_exp(s: &RationalSeries) -> Result<RationalSeries> {
    if !s.coeffs[0].is_zero() {
        return Err(Error::InvalidParameter(
            "series_exp needs a series with zero constant term".into(),
        ));
    }
    let order = s.order();
    let mut e = vec![BigRational::zero(); order + 1];
    e[0] = BigRational::one();
    for m in 1..=order {
        let mut acc = BigRational::zero();
        for i in 1..=m {
            if s.coeffs[i].is_zero() {
                continue;
            }
            acc += BigRational::from_integer(BigInt::from(i)) * &s.coeffs[i] * &e[m - i];
        }
        e[m] = acc / BigRational::from_integer(BigInt::from(m));
    }
    Ok(RationalSeries { coeffs: e })
}

/// Complete Bell polynomials `B_0..=B_n` evaluated at `a_1..a_n`
/// (`a[0]` is ignored), via `B_{m+1} = sum_i C(m, i) B_{m-i} a_{i+1}`.
pub fn complete_bell(a: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().saturating_sub(1);
    let mut b = vec![BigRational::zero(); n + 1];
    b[0] = BigRational::one();
    for m in 0..n {
        let mut acc = BigRational::zero();
        for i in 0..=m {
            let c = BigRational::from_integer(BigInt::from(binomial(m as u64, i as u64)));
            acc += c * &b[m - i] * &a[i + 1];
        }
        b[m + 1] = acc;
    }
    b
}

/// Moments from cumulants: `mu_m = B_m(kappa_1, ..., kappa_m)`.
pub fn moments_from_cumulants(kappa: &[BigRational]) -> Vec<BigRational> {
    complete_bell(kappa)
}

/// `m!` as a rational.
pub(crate) fn factorial_q(m: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(factorial(m as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn exp_of_zero_and_z() {
        let e = series_exp(&RationalSeries::zero(6)).unwrap();
        assert_eq!(e, RationalSeries::one(6));
        let e = series_exp(&RationalSeries::z(8)).unwrap();
        for m in 0..=8 {
            assert_eq!(e.coeff(m).unwrap(), &(BigRational::one() / factorial_q(m)));
        }
    }

    #[test]
    fn exp_of_two_term_cumulants() {
        let mut s = RationalSeries::zero(4);
        s.set(2, q(1, 12));
        s.set(4, q(1, 60));
        let e = series_exp(&s).unwrap();
        assert_eq!(e.coeff(4).unwrap(), &q(29, 1440));
    }

    #[test]
    fn rejects_constant_term_and_overreach() {
        assert!(series_exp(&RationalSeries::one(3)).is_err());
        assert!(RationalSeries::zero(3).coeff(4).is_err());
    }

    #[test]
    fn exp_matches_bell_polynomials() {
        let s = RationalSeries::new((0..=20).map(|i| if i == 0 { q(0, 1) } else { q(i as i64 % 5 - 2, (i * i) as i64 + 1) }).collect());
        let e = series_exp(&s).unwrap();
        let a: Vec<BigRational> = (0..=20).map(|m| &s.coeffs()[m] * factorial_q(m)).collect();
        let b = complete_bell(&a);
        for m in 0..=20 {
            assert_eq!(e.coeff(m).unwrap(), &(&b[m] / factorial_q(m)), "m={m}");
        }
    }

    #[test]
    fn exp_is_multiplicative() {
        let mut a = RationalSeries::zero(10);
        a.set(1, q(1, 3));
        a.set(4, q(-2, 7));
        let mut b = RationalSeries::zero(10);
        b.set(2, q(5, 2));
        let lhs = series_exp(&(&a + &b)).unwrap();
        let rhs = &series_exp(&a).unwrap() * &series_exp(&b).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gaussian_cumulants_give_double_factorials() {
        let kappa = vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1)];
        let mu = moments_from_cumulants(&kappa);
        assert_eq!(mu[4], q(3, 1));
        assert_eq!(mu[6], q(15, 1));
        assert!(mu[5].is_zero());
    }
}
