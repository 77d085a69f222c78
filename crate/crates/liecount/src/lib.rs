//! Exact-arithmetic toolkit for Lie-theoretic counting invariants.
//!
//! The crate computes three counting invariants of a semisimple group:
//! the number of distinguished nilpotent orbits, of strongly isolated
//! conjugacy classes, and of classes of commuting triples with torus-free
//! centralizer. Two independent pipelines are provided: an affine-diagram
//! recursion over exact root data ([`counting`]), and partition generating
//! functions for the classical series ([`series`]). A finite-field layer
//! ([`field`], [`gl`], [`selection`]) verifies character-sum identities for
//! `gl_n` by brute-force enumeration in exact cyclotomic arithmetic.
//!
//! No floating point is used anywhere on a verification path.

pub mod caps;
pub mod counting;
pub mod error;
pub mod field;
pub mod gl;
pub mod groups;
pub mod lattice;
pub mod orbits;
pub mod roots;
pub mod selection;
pub mod series;

pub use caps::Caps;
pub use error::{Error, Result};
