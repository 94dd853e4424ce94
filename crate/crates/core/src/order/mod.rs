//! Finite complete lattices and Galois connections between them.
//!
//! Elements are canonical indices `0..n`. A [`FiniteLattice`] is validated once, at
//! construction; afterwards joins and meets are table lookups. Every finite lattice is
//! complete, so "preserves arbitrary suprema" reduces to preserving the empty join and
//! binary joins, which is what [`MonotoneMap::sup_failure`] checks.

mod lattice;
mod monotone;

pub use lattice::{Downset, FiniteLattice};
pub use monotone::{greatest_where, is_sup_preserving, right_adjoint_of, MonotoneMap, SupFailure};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("element index {index} out of range for a lattice of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("order is not reflexive: missing pair ({0}, {0})")]
    NotReflexive(usize),
    #[error("order is not antisymmetric: {0} <= {1} and {1} <= {0}")]
    NotAntisymmetric(usize, usize),
    #[error("order is not transitive: {0} <= {1} and {1} <= {2} but not {0} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("elements {0} and {1} have no least upper bound")]
    NoJoin(usize, usize),
    #[error("elements {0} and {1} have no greatest lower bound")]
    NoMeet(usize, usize),
    #[error("element name list has {names} entries for {size} elements")]
    NameCount { names: usize, size: usize },
    #[error("map table has {len} entries for a source of size {size}")]
    TableLength { len: usize, size: usize },
    #[error("map is not monotone: {0} <= {1} but their images are not ordered")]
    NotMonotone(usize, usize),
    #[error("map does not preserve suprema: {0}")]
    NotSupPreserving(SupFailure),
}
