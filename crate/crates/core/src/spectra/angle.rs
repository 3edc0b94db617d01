//! Exact angles in `[0, 1)`, open arcs `(alpha, beta)` and fractional-part
//! tables.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::{parse_rational, rational_to_f64};
use crate::{Error, Result};

/// Fractional parts of √2, √3, √5, √7 and the golden ratio, truncated to 60
/// decimal digits.
pub const FRAC_SQRT2: &str = "0.414213562373095048801688724209698078569671875376948073176679";
pub const FRAC_SQRT3: &str = "0.732050807568877293527446341505872366942805253810380628055806";
pub const FRAC_SQRT5: &str = "0.236067977499789696409173668731276235440618359611525724270897";
pub const FRAC_SQRT7: &str = "0.645751311064590590501615753639260425710259183082450180368334";
pub const FRAC_PHI: &str = "0.618033988749894848204586834365638117720309179805762862135448";

/// Named constants accepted wherever an angle literal is expected.
pub const NAMED_ANGLES: [(&str, &str); 5] = [
    ("sqrt2", FRAC_SQRT2),
    ("sqrt3", FRAC_SQRT3),
    ("sqrt5", FRAC_SQRT5),
    ("sqrt7", FRAC_SQRT7),
    ("phi", FRAC_PHI),
];

/// An exact rational angle in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle {
    value: BigRational,
    /// Number of decimal digits of the literal this angle was read from, when
    /// it came from a truncated irrational. Governs the near-lattice check.
    digits: Option<u32>,
}

impl Angle {
    pub fn new(value: BigRational) -> Result<Self> {
        if value.is_negative() || value >= BigRational::one() {
            return Err(Error::InvalidParameter(format!("angle {value} is outside [0, 1)")));
        }
        Ok(Angle { value, digits: None })
    }

    /// Parses a named constant (`sqrt2`, `sqrt3`, `sqrt5`, `sqrt7`, `phi`), a
    /// decimal literal, or a fraction `p/q`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let literal = NAMED_ANGLES
            .iter()
            .find(|(name, _)| name.eq_ignore_ascii_case(t))
            .map(|(_, lit)| *lit)
            .unwrap_or(t);
        let value = parse_rational(literal)?;
        let digits = literal
            .split_once('.')
            .filter(|_| !literal.contains('/'))
            .map(|(_, frac)| frac.len() as u32);
        let mut angle = Angle::new(value)?;
        angle.digits = digits;
        Ok(angle)
    }

    pub fn sqrt2() -> Self {
        Angle::parse(FRAC_SQRT2).expect("constant")
    }

    pub fn sqrt3() -> Self {
        Angle::parse(FRAC_SQRT3).expect("constant")
    }

    pub fn sqrt5() -> Self {
        Angle::parse(FRAC_SQRT5).expect("constant")
    }

    pub fn sqrt7() -> Self {
        Angle::parse(FRAC_SQRT7).expect("constant")
    }

    pub fn phi() -> Self {
        Angle::parse(FRAC_PHI).expect("constant")
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }

    pub fn digits(&self) -> Option<u32> {
        self.digits
    }

    /// `{j * self}` as an exact rational.
    pub fn frac_mul(&self, j: &BigUint) -> BigRational {
        let numer = self.value.numer() * BigInt::from(j.clone());
        let denom = self.value.denom();
        BigRational::new(numer.mod_floor(denom), denom.clone())
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for Angle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.value.to_string())
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Angle::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Open arc `(alpha, beta)` of the circle `[0, 1)`, with `alpha < beta`.
///
/// Both endpoints are stored over a common denominator so that
/// `floor(L * alpha)` reduces to integer arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    alpha: Angle,
    beta: Angle,
    denom: BigUint,
    alpha_num: BigUint,
    beta_num: BigUint,
}

impl Interval {
    pub fn new(alpha: Angle, beta: Angle) -> Result<Self> {
        if alpha >= beta {
            return Err(Error::InvalidParameter(format!("interval needs alpha < beta, got ({alpha}, {beta})")));
        }
        let da = alpha.value.denom().magnitude();
        let db = beta.value.denom().magnitude();
        let denom = da.lcm(db);
        let alpha_num = alpha.value.numer().magnitude() * (&denom / da);
        let beta_num = beta.value.numer().magnitude() * (&denom / db);
        Ok(Interval {
            alpha,
            beta,
            denom,
            alpha_num,
            beta_num,
        })
    }

    pub fn parse(alpha: &str, beta: &str) -> Result<Self> {
        Self::new(Angle::parse(alpha)?, Angle::parse(beta)?)
    }

    /// `(frac √2, frac √3)`, the default arc.
    pub fn standard() -> Self {
        Self::new(Angle::sqrt2(), Angle::sqrt3()).expect("ordered constants")
    }

    pub fn alpha(&self) -> &Angle {
        &self.alpha
    }

    pub fn beta(&self) -> &Angle {
        &self.beta
    }

    /// Common denominator `D` of both endpoints.
    pub fn denom(&self) -> &BigUint {
        &self.denom
    }

    /// Numerators of `alpha` and `beta` over [`Interval::denom`].
    pub fn numerators(&self) -> (&BigUint, &BigUint) {
        (&self.alpha_num, &self.beta_num)
    }

    pub fn endpoints_interior(&self) -> bool {
        !self.alpha.value.is_zero()
    }

    /// Number of angles `{0, 1/L, ..., (L-1)/L}` inside the open arc:
    /// `floor(L beta) - floor(L alpha)`, valid when `0 < alpha < beta < 1`
    /// and no `a/L` equals an endpoint.
    pub fn count_full_cycle(&self, len: &BigUint) -> BigUint {
        let hi = (len * &self.beta_num) / &self.denom;
        let lo = (len * &self.alpha_num) / &self.denom;
        hi - lo
    }

    pub fn count_full_cycle_u64(&self, len: u64) -> u64 {
        self.count_full_cycle(&BigUint::from(len))
            .to_u64()
            .expect("count bounded by cycle length")
    }

    /// `{L alpha} - {L beta}` as an exact rational.
    pub fn frac_difference(&self, len: &BigUint) -> BigRational {
        self.alpha.frac_mul(len) - self.beta.frac_mul(len)
    }

    /// Whether `L * alpha` or `L * beta` lies so close to an integer that
    /// replacing a truncated irrational endpoint by its decimal literal could
    /// change the floor. Always `false` for endpoints given exactly.
    pub fn near_lattice(&self, len: &BigUint) -> bool {
        [&self.alpha, &self.beta].iter().any(|a| match a.digits {
            None => false,
            Some(d) => {
                let frac = a.frac_mul(len);
                let tol = BigRational::new(
                    BigInt::from(len.clone()),
                    num_traits::pow(BigInt::from(10u32), d as usize),
                );
                frac < tol || BigRational::one() - frac < tol
            }
        })
    }

    /// Whether the exact rational `x` (taken mod 1) lies strictly inside.
    pub fn contains(&self, x: &BigRational) -> bool {
        let r = x - BigRational::from_integer(x.floor().to_integer());
        &r > self.alpha.value() && &r < self.beta.value()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha.to_f64(), self.beta.to_f64())
    }
}

/// Exact fractional parts `{j alpha}`, `{j beta}` for `j = 1..=n`, stored as
/// integer numerators over the interval's common denominator.
#[derive(Debug, Clone)]
pub struct FracTable {
    denom: BigUint,
    alpha: Vec<BigUint>,
    beta: Vec<BigUint>,
    delta: Vec<f64>,
}

impl FracTable {
    pub fn new(interval: &Interval, n: usize) -> Self {
        let denom = interval.denom.clone();
        let mut alpha = Vec::with_capacity(n + 1);
        let mut beta = Vec::with_capacity(n + 1);
        let (mut xa, mut xb) = (BigUint::zero(), BigUint::zero());
        alpha.push(xa.clone());
        beta.push(xb.clone());
        for _ in 1..=n {
            xa += &interval.alpha_num;
            if xa >= denom {
                xa -= &denom;
            }
            xb += &interval.beta_num;
            if xb >= denom {
                xb -= &denom;
            }
            alpha.push(xa.clone());
            beta.push(xb.clone());
        }
        let delta = (0..=n)
            .map(|j| {
                let d = BigInt::from(alpha[j].clone()) - BigInt::from(beta[j].clone());
                rational_to_f64(&BigRational::new(d, BigInt::from(denom.clone())))
            })
            .collect();
        FracTable {
            denom,
            alpha,
            beta,
            delta,
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn denom(&self) -> &BigUint {
        &self.denom
    }

    /// Integer numerator of `{j alpha} - {j beta}` over [`FracTable::denom`].
    pub fn delta_numer(&self, j: usize) -> BigInt {
        BigInt::from(self.alpha[j].clone()) - BigInt::from(self.beta[j].clone())
    }

    pub fn delta_exact(&self, j: usize) -> BigRational {
        BigRational::new(self.delta_numer(j), BigInt::from(self.denom.clone()))
    }

    /// `{j alpha} - {j beta}` rounded once from its exact value.
    pub fn delta(&self, j: usize) -> f64 {
        self.delta[j]
    }

    pub fn frac_alpha_numer(&self, j: usize) -> &BigUint {
        &self.alpha[j]
    }

    pub fn frac_beta_numer(&self, j: usize) -> &BigUint {
        &self.beta[j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_named_and_literal() {
        let a = Angle::parse("sqrt2").unwrap();
        assert_eq!(a, Angle::sqrt2());
        assert_eq!(a.digits(), Some(60));
        assert!((a.to_f64() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!(Angle::parse("1.5").is_err());
        assert!(Angle::parse("-0.1").is_err());
        assert_eq!(Angle::parse("1/4").unwrap().digits(), None);
    }

    #[test]
    fn interval_ordering_is_checked() {
        assert!(Interval::new(Angle::sqrt3(), Angle::sqrt2()).is_err());
        let i = Interval::standard();
        assert!(i.endpoints_interior());
    }

    #[test]
    fn full_cycle_counts() {
        let i = Interval::parse("0.1", "0.6").unwrap();
        assert_eq!(i.count_full_cycle_u64(4), 2);
        assert_eq!(i.count_full_cycle_u64(1), 0);
        let s = Interval::standard();
        assert_eq!(s.count_full_cycle_u64(2), 1);
        assert_eq!(s.count_full_cycle_u64(4), 1);
    }

    #[test]
    fn frac_table_matches_direct_computation() {
        let s = Interval::standard();
        let t = FracTable::new(&s, 50);
        for j in 1..=50usize {
            let direct = s.frac_difference(&BigUint::from(j));
            assert_eq!(t.delta_exact(j), direct);
            assert!((t.delta(j) - rational_to_f64(&direct)).abs() < 1e-15);
        }
    }

    #[test]
    fn near_lattice_flags_only_tiny_distances() {
        let s = Interval::standard();
        assert!(!s.near_lattice(&BigUint::from(1000u32)));
        let exact = Interval::parse("1/3", "1/2").unwrap();
        assert!(!exact.near_lattice(&BigUint::from(3u32)));
        let i = Interval::parse("0.25", "0.5").unwrap();
        assert!(i.near_lattice(&BigUint::from(4u32)));
    }
}
