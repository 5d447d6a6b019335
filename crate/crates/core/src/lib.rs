//! Exact computations for homeomorphism groups of the Knaster continuum.
//!
//! Everything runs on exact rationals. PL maps of `[0,1]` are kept in
//! canonical breakpoint form, so equality tests are exact, and every
//! approximate construction (conjugators, metric bounds) is certified after
//! the fact by an exact distance computation.

pub mod conjugacy;
pub mod error;
pub mod gen;
pub mod knaster;
pub mod map;
pub mod pl;
pub mod rational;
pub mod tent;

pub use error::{Error, Result};
pub use map::{OpenPlMap, PlHomeo, PlMap};
pub use pl::PlFn;
pub use rational::{q, Rational};
pub use tent::{block_sum, oplus_power, straighten, tent, tent_value, verify_semiconjugacy, SemiconjugacyRecord, TentMap};
