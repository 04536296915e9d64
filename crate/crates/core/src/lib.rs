//! Exact integer computations for two-strand torus-knot homology and the
//! loop homology of complex Grassmannians.
//!
//! The crate has no IO; everything here is pure, deterministic, exact
//! arithmetic over `Z`:
//!
//! - [`polyalg`]: sparse multivariate polynomials over `Z` on a blocked
//!   alphabet, symmetric-function constructors, divided-difference and
//!   transposition operators, signed operator words.
//! - [`complexes`]: cube complexes of polynomial modules with operator-word
//!   edge maps, their invariant subcomplexes, and scalar extensions.
//! - [`nilhecke`]: the chain-level divided-difference action on a cube
//!   complex, symmetrizing idempotents, and a seeded relation test harness.
//! - [`intmat`]: Hermite and Smith normal forms of integer matrices.
//! - [`homology`]: finite-rank reduction of a cube complex modulo the full
//!   symmetric ideal and bigraded homology via Smith normal form.
//! - [`grassmannian`]: partitions, closed-geodesic component data (Morse
//!   index, nullity, grading shifts), and loop-homology assembly.
//! - [`knotinv`]: the colored sl(N) homology of T(2,2m+1) and its stable
//!   limit, with the grading comparison against loop homology.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod complexes;
pub mod grassmannian;
pub mod homology;
pub mod intmat;
pub mod knotinv;
pub mod nilhecke;
pub mod polyalg;

pub use num_bigint;

use core::fmt;

/// Errors raised by constructors whose inputs fail a precondition.
/// Invariant violations inside a computation panic instead; they indicate
/// a bug, not bad input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    IndexOutOfRange(&'static str),
    TooManyParts { allowed: usize, got: usize },
    ShapeMismatch { expected: usize, got: usize },
    BadContext(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::IndexOutOfRange(what) => write!(f, "index out of range: {}", what),
            Error::TooManyParts { allowed, got } => {
                write!(f, "partition has {} parts, at most {} allowed", got, allowed)
            }
            Error::ShapeMismatch { expected, got } => {
                write!(f, "composition sums to {}, ambient rank is {}", got, expected)
            }
            Error::BadContext(what) => write!(f, "bad context: {}", what),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
