//! Eigenangle statistics of permutation representations of the symmetric
//! group under the Ewens measure.
//!
//! The crate is organised bottom-up:
//!
//! * [`perm`]: cycle types, Ewens probabilities, sampling and factorial
//!   moments of cycle counts.
//! * [`spectra`]: exact eigenangle multisets of the k-tuple, k-subset and
//!   hook-irrep representations, computed from a cycle type alone.
//! * [`asymptotics`]: exact rational limiting moments, cumulants and
//!   finite-n moments.
//! * [`density`]: the closed-form k = 2 limiting density and its Stieltjes
//!   transform.
//! * [`equidist`]: fractional-part sequences, Weyl sums and discrepancy.
//! * [`experiment`]: the seeded experiment harness behind the CLI.

pub mod asymptotics;
pub mod combinat;
pub mod density;
pub mod equidist;
mod error;
pub mod experiment;
pub mod perm;
pub mod quad;
pub mod rng;
pub mod series;
pub mod spectra;

pub use error::{Error, Result};

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
