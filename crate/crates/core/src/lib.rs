//! Magic rectangle sets over finite abelian groups.
//!
//! An `MRS_G(m, n; s, k; c)` is a family of `c` partially filled `m x n`
//! arrays whose entries list every element of an abelian group `G` of order
//! `nkc` exactly once, with `s` filled cells per row, `k` per column, a common
//! row sum and a common column sum. This crate builds such families from
//! explicit constructions, verifies them, and decides existence for given
//! parameters, falling back to an exhaustive search at small orders.

pub mod array;
pub mod construct;
pub mod diagonal;
pub mod error;
pub mod existence;
pub mod fixtures;
pub mod group;
pub mod integer;
pub mod num;
pub mod search;

pub use error::{MrsError, Result};
pub use group::{FiniteAbelianGroup, GroupElement, GroupHom};
