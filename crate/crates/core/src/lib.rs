//! Exact computation on finite micro-macro dynamical systems.
//!
//! A [`System`] is a finite set of microstates `0..n`, an invertible dynamics
//! `alpha`, a surjective macro labelling and an optional reversion map.
//! Probabilities are exact [`Rational`]s and entropies are exact [`LogValue`]s,
//! so every identity checked by this crate is decided without tolerances.

pub mod budget;
pub mod build;
pub mod census;
pub mod check;
pub mod combinatorics;
pub mod dist;
pub mod ebound;
pub mod entropy;
pub mod error;
pub mod ldev;
pub mod logvalue;
pub mod markov;
pub mod process;
pub mod produce;
pub mod repro;
pub mod sample;
pub mod system;
mod unionfind;

pub use budget::Budget;
pub use check::{Check, Checks};
pub use dist::MacroDistribution;
pub use error::{Error, Result};
pub use logvalue::LogValue;
pub use system::{RawSystem, System};

/// Exact scalar used for every probability, ratio and kernel entry.
pub type Rational = num_rational::BigRational;

/// Builds the rational `num / den`. Panics when `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Builds the rational `num / den` from counts.
pub fn ratio_u(num: usize, den: usize) -> Rational {
    Rational::new((num as u64).into(), (den as u64).into())
}

/// Embeds a count as a rational.
pub fn int(n: usize) -> Rational {
    Rational::from_integer((n as u64).into())
}
