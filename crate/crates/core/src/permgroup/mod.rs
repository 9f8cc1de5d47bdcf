//! Signed permutations, Schreier–Sims stabilizer chains and double-coset
//! canonicalization.
//!
//! A tensor monomial's index configuration is a [`SignedPermutation`] mapping
//! slot positions to index names. Slot symmetries act on the right, dummy
//! relabellings on the left, and the canonical form is the least element of
//! the double coset `D·g·S`.

mod coset;
mod group;
mod perm;
pub mod slot_groups;

use thiserror::Error;

pub use coset::{brute_force_double_coset_rep, canonical_double_coset_rep, dummy_pair_group, CosetRep};
pub use group::PermGroup;
pub use perm::SignedPermutation;

pub(crate) use coset::min_over_slot_group;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("images do not form a bijection")]
    NotBijection,
    #[error("point out of range")]
    PointOutOfRange,
    #[error("malformed cycle notation: {0}")]
    Syntax(String),
    #[error("double coset too large for exhaustive search ({0} elements)")]
    TooLarge(String),
}
