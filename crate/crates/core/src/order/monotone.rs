use std::fmt;
use std::sync::Arc;

use super::{FiniteLattice, OrderError};

/// An order-preserving map between finite lattices, stored as a lookup table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    source: Arc<FiniteLattice>,
    target: Arc<FiniteLattice>,
    table: Vec<usize>,
}

/// Why a monotone map fails to preserve suprema.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupFailure {
    /// `f(⊥) = image ≠ ⊥`.
    Bottom { image: usize },
    /// `f(x ∨ y) = image_of_join ≠ join_of_images = f(x) ∨ f(y)`.
    Binary { x: usize, y: usize, image_of_join: usize, join_of_images: usize },
}

impl fmt::Display for SupFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupFailure::Bottom { image } => write!(f, "bottom is sent to {image}"),
            SupFailure::Binary { x, y, image_of_join, join_of_images } => {
                write!(f, "f({x} ∨ {y}) = {image_of_join} but f({x}) ∨ f({y}) = {join_of_images}")
            }
        }
    }
}

impl MonotoneMap {
    pub fn new(source: Arc<FiniteLattice>, target: Arc<FiniteLattice>, table: Vec<usize>) -> Result<Self, OrderError> {
        if table.len() != source.len() {
            return Err(OrderError::TableLength { len: table.len(), size: source.len() });
        }
        for &y in &table {
            target.check(y)?;
        }
        for x in source.elements() {
            for y in source.elements() {
                if source.leq(x, y) && !target.leq(table[x], table[y]) {
                    return Err(OrderError::NotMonotone(x, y));
                }
            }
        }
        Ok(Self { source, target, table })
    }

    pub fn from_fn(
        source: Arc<FiniteLattice>,
        target: Arc<FiniteLattice>,
        f: impl Fn(usize) -> usize,
    ) -> Result<Self, OrderError> {
        let table = source.elements().map(f).collect();
        Self::new(source, target, table)
    }

    pub fn identity(lattice: Arc<FiniteLattice>) -> Self {
        let table = lattice.elements().collect();
        Self { source: lattice.clone(), target: lattice, table }
    }

    pub fn source(&self) -> &Arc<FiniteLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteLattice> {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// First failure of `f(⊥) = ⊥` or `f(x ∨ y) = f(x) ∨ f(y)`, scanning pairs in order.
    pub fn sup_failure(&self) -> Option<SupFailure> {
        let (s, t) = (&*self.source, &*self.target);
        let image = self.apply(s.bottom());
        if image != t.bottom() {
            return Some(SupFailure::Bottom { image });
        }
        for x in s.elements() {
            for y in (x + 1)..s.len() {
                let image_of_join = self.apply(s.join2(x, y));
                let join_of_images = t.join2(self.apply(x), self.apply(y));
                if image_of_join != join_of_images {
                    return Some(SupFailure::Binary { x, y, image_of_join, join_of_images });
                }
            }
        }
        None
    }

    pub fn is_sup_preserving(&self) -> bool {
        self.sup_failure().is_none()
    }

    /// The right adjoint `g(y) = ⋁{x | f(x) <= y}`, if `f` preserves suprema.
    pub fn right_adjoint(&self) -> Result<MonotoneMap, OrderError> {
        if let Some(w) = self.sup_failure() {
            return Err(OrderError::NotSupPreserving(w));
        }
        let table = self
            .target
            .elements()
            .map(|y| self.source.join(self.source.elements().filter(|&x| self.target.leq(self.apply(x), y))))
            .collect();
        Ok(MonotoneMap { source: self.target.clone(), target: self.source.clone(), table })
    }
}

pub fn is_sup_preserving(f: &MonotoneMap) -> bool {
    f.is_sup_preserving()
}

pub fn right_adjoint_of(f: &MonotoneMap) -> Result<MonotoneMap, OrderError> {
    f.right_adjoint()
}

/// The largest element satisfying a down-closed predicate, when the satisfying set has
/// a maximum.
///
/// Evaluating a right adjoint `g(y) = ⋁{x | f(x) <= y}` pointwise is the case
/// `pred = |x| f(x) <= y`; the join lands back in the set exactly when `f` preserves the
/// joins involved.
pub fn greatest_where(lattice: &FiniteLattice, pred: impl Fn(usize) -> bool) -> Option<usize> {
    let candidate = lattice.join(lattice.elements().filter(|&x| pred(x)));
    pred(candidate).then_some(candidate)
}
