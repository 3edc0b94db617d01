//! Eigenangle multisets of the k-tuple, k-subset and hook-irrep
//! representations of a permutation, computed from its cycle type.
//!
//! A permutation of a finite set with cycle lengths `L` has eigenangles
//! `{0, 1/L, ..., (L-1)/L}` per cycle, so the induced cycle type
//! ([`SpectrumCycleType`]) encodes the whole spectrum.

mod angle;
mod brute;
mod expected;
mod irrep;
pub mod multiset;
mod necklace;
mod stats;
mod subset;
mod tuple;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use angle::{
    Angle, FracTable, Interval, FRAC_PHI, FRAC_SQRT2, FRAC_SQRT3, FRAC_SQRT5, FRAC_SQRT7, NAMED_ANGLES,
};
pub use brute::{brute_force_induced, induced_permutation, BRUTE_FORCE_BOUND};
pub use expected::{expected_count, EXACT_CENTERING_MAX_N};
pub use irrep::{
    defining_angles, hook_irrep_angle_index, hook_irrep_angle_index_bounded, hook_irrep_count, HookAngles,
    IRREP_ENUMERATION_BOUND,
};
pub use necklace::{
    aperiodic_necklaces, enumerate_necklaces, necklace_counts, necklaces, necklaces_with_period, NecklaceCounts,
};
pub use stats::{
    rep_count, trapezoid_error, y_rep_statistic, y_statistic, y_statistic_exact, y_statistic_f, y_statistic_table,
    Indicator, PeriodicFn, WithIntegral,
};
pub use subset::induced_subset_cycle_type;
pub use tuple::{induced_tuple_cycle_type, induced_tuple_cycle_type_bounded};

/// Largest `k` accepted by the formula-based spectra by default.
pub const DEFAULT_K_BOUND: usize = 5;

/// Which permutation representation of `S_n` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Action on ordered k-tuples of distinct points.
    Tuple,
    /// Action on k-subsets.
    Set,
    /// The hook irrep `S^(n-k, 1^k)`.
    Irrep,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Tuple => "tuple",
            Mode::Set => "set",
            Mode::Irrep => "irrep",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tuple" => Ok(Mode::Tuple),
            "set" | "subset" => Ok(Mode::Set),
            "irrep" | "hook" => Ok(Mode::Irrep),
            other => Err(Error::InvalidParameter(format!("unknown mode '{other}', expected tuple|set|irrep"))),
        }
    }
}

/// Cycle type of an induced permutation: multiplicity of each cycle length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SpectrumCycleType {
    total: BigUint,
    counts: BTreeMap<BigUint, BigUint>,
}

impl SpectrumCycleType {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts<I, L, C>(items: I) -> Self
    where
        I: IntoIterator<Item = (L, C)>,
        L: Into<BigUint>,
        C: Into<BigUint>,
    {
        let mut s = Self::new();
        for (l, c) in items {
            s.add(l.into(), c.into());
        }
        s
    }

    /// Adds `count` cycles of length `len`.
    pub fn add(&mut self, len: BigUint, count: BigUint) {
        if count.is_zero() {
            return;
        }
        self.total += &len * &count;
        *self.counts.entry(len).or_default() += count;
    }

    pub fn merge(&mut self, other: &SpectrumCycleType) {
        for (l, c) in &other.counts {
            self.add(l.clone(), c.clone());
        }
    }

    /// Degree of the induced permutation, `sum_L L count(L)`.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn counts(&self) -> &BTreeMap<BigUint, BigUint> {
        &self.counts
    }

    pub fn count(&self, len: u64) -> BigUint {
        self.counts.get(&BigUint::from(len)).cloned().unwrap_or_default()
    }

    pub fn num_cycles(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Number of eigenangles in the open arc `I`.
    pub fn count_in_interval(&self, interval: &Interval) -> BigUint {
        self.counts
            .iter()
            .map(|(l, c)| interval.count_full_cycle(l) * c)
            .sum()
    }

    /// Cycle lengths whose angles sit close enough to an endpoint that the
    /// finite-precision literal might decide the count.
    pub fn near_lattice_lengths(&self, interval: &Interval) -> Vec<BigUint> {
        self.counts
            .keys()
            .filter(|l| interval.near_lattice(l))
            .cloned()
            .collect()
    }

    /// All eigenangles as exact fractions `(a, L)` meaning `a / L`, one entry
    /// per angle. Intended for small spectra.
    pub fn angles(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for (l, c) in &self.counts {
            let l = l.to_u64().expect("cycle length fits u64");
            let c = c.to_u64().expect("count fits u64");
            for _ in 0..c {
                out.extend((0..l).map(|a| (a, l)));
            }
        }
        out
    }
}

impl fmt::Display for SpectrumCycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, c)) in self.counts.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}:{c}")?;
        }
        f.write_str("}")
    }
}

/// Exact count of eigenangles of `spec` inside `interval`.
pub fn count_in_interval(spec: &SpectrumCycleType, interval: &Interval) -> BigUint {
    spec.count_in_interval(interval)
}

pub(crate) fn check_k(n: usize, k: usize, bound: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} must satisfy 1 <= k <= n = {n}")));
    }
    if k > bound {
        return Err(Error::bound("k", k.to_string(), bound.to_string()));
    }
    Ok(())
}
