#![allow(clippy::needless_range_loop)]

//! Exact computations with finite rngs (rings without unit): ideals and
//! weights, unit and idempotent constructions, free idempotent rngs,
//! semigroup algebras and elementary matrix groups.

pub mod catalog;
pub mod cli;
pub mod constructions;
pub mod elgroup;
pub mod error;
pub mod format;
pub mod free_idem;
pub mod ideals;
pub mod lattice;
pub mod rng;
pub mod search;
pub mod semigroups;

pub use error::{Error, Result};
pub use rng::{FiniteRng, RngElement, UnitizationElement};
