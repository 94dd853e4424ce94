//! Finite quantaloids: hom-lattices `Q(X,Y)`, join-preserving composition and units.
//!
//! Composition is stored densely per object triple. For `f ∈ Q(X,Y)` and `g ∈ Q(Y,Z)`,
//! `comp(x, y, z, g, f)` is `g ∘ f ∈ Q(X,Z)`.
//!
//! Residuation uses the following convention throughout the crate:
//!
//! - the *extension* `[g, h]` of `h: X→Z` along `g: X→Y` is the largest `k: Y→Z`
//!   with `k ∘ g <= h` (right adjoint to precomposition with `g`);
//! - the *lifting* `{g, h}` of `h: X→Z` through `g: Y→Z` is the largest `k: X→Y`
//!   with `g ∘ k <= h` (right adjoint to postcomposition with `g`).

pub mod builders;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::order::{FiniteLattice, MonotoneMap, OrderError};

pub use builders::{
    boolean_quantale, chain_quantale, endo_quantale, free_quantaloid_on_graph, powerset_monoid_quantale, DiGraph,
    FiniteMonoid,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantaloidError {
    #[error("a quantaloid needs at least one object")]
    NoObjects,
    #[error("expected {expected} {what}, found {found}")]
    Shape { what: &'static str, expected: usize, found: usize },
    #[error("composition table {x}->{y}->{z} has an entry {entry} outside Q({x},{z})")]
    TableEntry { x: usize, y: usize, z: usize, entry: usize },
    #[error("unit of object {x} is {unit}, outside Q({x},{x})")]
    UnitOutOfRange { x: usize, unit: usize },
    #[error("arrows are not composable: target {tgt} of the first is not source {src} of the second")]
    NonComposable { tgt: usize, src: usize },
    #[error("arrow {elem} is not an element of Q({src},{tgt})")]
    ArrowOutOfRange { src: usize, tgt: usize, elem: usize },
    #[error("residuation needs arrows with a common {0}")]
    ResidualMismatch(&'static str),
    #[error("malformed builder input: {0}")]
    Builder(String),
    #[error("builder output violates the quantaloid axioms: {0}")]
    NotAQuantaloid(QuantaloidViolation),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// An arrow `elem ∈ Q(src, tgt)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QArrow {
    pub src: usize,
    pub tgt: usize,
    pub elem: usize,
}

impl QArrow {
    pub fn new(src: usize, tgt: usize, elem: usize) -> Self {
        Self { src, tgt, elem }
    }
}

/// One violated quantaloid axiom instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum QuantaloidViolation {
    /// `h ∘ (g ∘ f) ≠ (h ∘ g) ∘ f` for `f: w→x, g: x→y, h: y→z`.
    Associativity { objects: [usize; 4], f: usize, g: usize, h: usize },
    /// `1_y ∘ f ≠ f` for `f: x→y`.
    LeftUnit { x: usize, y: usize, f: usize },
    /// `f ∘ 1_x ≠ f` for `f: x→y`.
    RightUnit { x: usize, y: usize, f: usize },
    /// `(g1 ∨ g2) ∘ f ≠ (g1 ∘ f) ∨ (g2 ∘ f)`; `g2 = None` is the empty join `0 ∘ f ≠ 0`.
    JoinLeft { objects: [usize; 3], g1: Option<usize>, g2: Option<usize>, f: usize },
    /// `g ∘ (f1 ∨ f2) ≠ (g ∘ f1) ∨ (g ∘ f2)`; `f2 = None` is the empty join `g ∘ 0 ≠ 0`.
    JoinRight { objects: [usize; 3], g: usize, f1: Option<usize>, f2: Option<usize> },
}

impl fmt::Display for QuantaloidViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).unwrap_or_default())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantaloid {
    names: Vec<String>,
    homs: Vec<Arc<FiniteLattice>>,
    tables: Vec<Vec<usize>>,
    units: Vec<usize>,
}

impl Quantaloid {
    /// Assembles a quantaloid from its parts, checking only shapes and index ranges.
    ///
    /// `homs[x * n + y]` is `Q(x,y)`; `tables[(x * n + y) * n + z]` is the composition
    /// table for `x -> y -> z` with rows indexed by `Q(y,z)` and columns by `Q(x,y)`.
    /// Use [`verify`](Self::verify) for the axioms.
    pub fn new(
        names: Vec<String>,
        homs: Vec<FiniteLattice>,
        tables: Vec<Vec<Vec<usize>>>,
        units: Vec<usize>,
    ) -> Result<Self, QuantaloidError> {
        let n = names.len();
        if n == 0 {
            return Err(QuantaloidError::NoObjects);
        }
        let shape = |what, expected, found| {
            if expected == found {
                Ok(())
            } else {
                Err(QuantaloidError::Shape { what, expected, found })
            }
        };
        shape("hom lattices", n * n, homs.len())?;
        shape("composition tables", n * n * n, tables.len())?;
        shape("units", n, units.len())?;
        let homs: Vec<Arc<FiniteLattice>> = homs.into_iter().map(Arc::new).collect();
        let mut flat = Vec::with_capacity(tables.len());
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let table = &tables[(x * n + y) * n + z];
                    let (rows, cols) = (homs[y * n + z].len(), homs[x * n + y].len());
                    let target = homs[x * n + z].len();
                    shape("table rows", rows, table.len())?;
                    let mut t = Vec::with_capacity(rows * cols);
                    for row in table {
                        shape("table columns", cols, row.len())?;
                        for &entry in row {
                            if entry >= target {
                                return Err(QuantaloidError::TableEntry { x, y, z, entry });
                            }
                            t.push(entry);
                        }
                    }
                    flat.push(t);
                }
            }
        }
        for (x, &unit) in units.iter().enumerate() {
            if unit >= homs[x * n + x].len() {
                return Err(QuantaloidError::UnitOutOfRange { x, unit });
            }
        }
        Ok(Self { names, homs, tables: flat, units })
    }

    /// A one-object quantaloid (a quantale) from a lattice, a composition rule and a unit.
    pub fn quantale(
        name: &str,
        lattice: FiniteLattice,
        compose: impl Fn(usize, usize) -> usize,
        unit: usize,
    ) -> Result<Self, QuantaloidError> {
        let table = lattice.elements().map(|g| lattice.elements().map(|f| compose(g, f)).collect()).collect();
        Self::new(vec![name.to_string()], vec![lattice], vec![table], vec![unit])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn objects(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn hom(&self, x: usize, y: usize) -> &FiniteLattice {
        &self.homs[x * self.len() + y]
    }

    pub fn hom_arc(&self, x: usize, y: usize) -> &Arc<FiniteLattice> {
        &self.homs[x * self.len() + y]
    }

    /// `g ∘ f` for `f ∈ Q(x,y)`, `g ∈ Q(y,z)`.
    #[inline]
    pub fn comp(&self, x: usize, y: usize, z: usize, g: usize, f: usize) -> usize {
        let n = self.len();
        let cols = self.homs[x * n + y].len();
        self.tables[(x * n + y) * n + z][g * cols + f]
    }

    /// The composition table for `x -> y -> z` as rows (`Q(y,z)`) by columns (`Q(x,y)`).
    pub fn table(&self, x: usize, y: usize, z: usize) -> Vec<Vec<usize>> {
        self.hom(y, z)
            .elements()
            .map(|g| self.hom(x, y).elements().map(|f| self.comp(x, y, z, g, f)).collect())
            .collect()
    }

    #[inline]
    pub fn unit(&self, x: usize) -> usize {
        self.units[x]
    }

    pub fn zero(&self, x: usize, y: usize) -> usize {
        self.hom(x, y).bottom()
    }

    pub fn top(&self, x: usize, y: usize) -> usize {
        self.hom(x, y).top()
    }

    pub fn unit_arrow(&self, x: usize) -> QArrow {
        QArrow::new(x, x, self.unit(x))
    }

    pub fn check_arrow(&self, a: &QArrow) -> Result<(), QuantaloidError> {
        if a.src >= self.len() || a.tgt >= self.len() || a.elem >= self.hom(a.src, a.tgt).len() {
            return Err(QuantaloidError::ArrowOutOfRange { src: a.src, tgt: a.tgt, elem: a.elem });
        }
        Ok(())
    }

    /// Every arrow of the quantaloid, ordered by `(src, tgt, elem)`.
    pub fn arrows(&self) -> impl Iterator<Item = QArrow> + '_ {
        self.objects().flat_map(move |x| {
            self.objects().flat_map(move |y| self.hom(x, y).elements().map(move |e| QArrow::new(x, y, e)))
        })
    }

    pub fn compose(&self, g: &QArrow, f: &QArrow) -> Result<QArrow, QuantaloidError> {
        self.check_arrow(g)?;
        self.check_arrow(f)?;
        if g.src != f.tgt {
            return Err(QuantaloidError::NonComposable { tgt: f.tgt, src: g.src });
        }
        Ok(QArrow::new(f.src, g.tgt, self.comp(f.src, f.tgt, g.tgt, g.elem, f.elem)))
    }

    /// `[g, h]`: the largest `k: Y→Z` with `k ∘ g <= h`, for `g: X→Y`, `h: X→Z`.
    pub fn extension(&self, g: &QArrow, h: &QArrow) -> Result<QArrow, QuantaloidError> {
        self.check_arrow(g)?;
        self.check_arrow(h)?;
        if g.src != h.src {
            return Err(QuantaloidError::ResidualMismatch("source"));
        }
        let (x, y, z) = (g.src, g.tgt, h.tgt);
        let precompose = MonotoneMap::from_fn(self.hom_arc(y, z).clone(), self.hom_arc(x, z).clone(), |k| {
            self.comp(x, y, z, k, g.elem)
        })?;
        let adjoint = precompose.right_adjoint()?;
        Ok(QArrow::new(y, z, adjoint.apply(h.elem)))
    }

    /// `{g, h}`: the largest `k: X→Y` with `g ∘ k <= h`, for `g: Y→Z`, `h: X→Z`.
    pub fn lifting(&self, g: &QArrow, h: &QArrow) -> Result<QArrow, QuantaloidError> {
        self.check_arrow(g)?;
        self.check_arrow(h)?;
        if g.tgt != h.tgt {
            return Err(QuantaloidError::ResidualMismatch("target"));
        }
        let (x, y, z) = (h.src, g.src, g.tgt);
        let postcompose = MonotoneMap::from_fn(self.hom_arc(x, y).clone(), self.hom_arc(x, z).clone(), |k| {
            self.comp(x, y, z, g.elem, k)
        })?;
        let adjoint = postcompose.right_adjoint()?;
        Ok(QArrow::new(x, y, adjoint.apply(h.elem)))
    }

    /// Every violated axiom instance: associativity, unit laws and preservation of binary
    /// and empty joins in each variable. Empty iff the tables form a quantaloid.
    pub fn verify(&self) -> Vec<QuantaloidViolation> {
        let mut out = Vec::new();
        let objs = self.objects();
        for x in objs.clone() {
            for y in objs.clone() {
                for f in self.hom(x, y).elements() {
                    if self.comp(x, y, y, self.unit(y), f) != f {
                        out.push(QuantaloidViolation::LeftUnit { x, y, f });
                    }
                    if self.comp(x, x, y, f, self.unit(x)) != f {
                        out.push(QuantaloidViolation::RightUnit { x, y, f });
                    }
                }
            }
        }
        for x in objs.clone() {
            for y in objs.clone() {
                for z in objs.clone() {
                    self.verify_joins(x, y, z, &mut out);
                }
            }
        }
        for w in objs.clone() {
            for x in objs.clone() {
                for y in objs.clone() {
                    for z in objs.clone() {
                        for f in self.hom(w, x).elements() {
                            for g in self.hom(x, y).elements() {
                                let gf = self.comp(w, x, y, g, f);
                                for h in self.hom(y, z).elements() {
                                    let left = self.comp(w, y, z, h, gf);
                                    let right = self.comp(w, x, z, self.comp(x, y, z, h, g), f);
                                    if left != right {
                                        out.push(QuantaloidViolation::Associativity { objects: [w, x, y, z], f, g, h });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn verify_joins(&self, x: usize, y: usize, z: usize, out: &mut Vec<QuantaloidViolation>) {
        let (lxy, lyz, lxz) = (self.hom(x, y), self.hom(y, z), self.hom(x, z));
        let objects = [x, y, z];
        for f in lxy.elements() {
            if self.comp(x, y, z, lyz.bottom(), f) != lxz.bottom() {
                out.push(QuantaloidViolation::JoinLeft { objects, g1: None, g2: None, f });
            }
            for g1 in lyz.elements() {
                for g2 in (g1 + 1)..lyz.len() {
                    let lhs = self.comp(x, y, z, lyz.join2(g1, g2), f);
                    let rhs = lxz.join2(self.comp(x, y, z, g1, f), self.comp(x, y, z, g2, f));
                    if lhs != rhs {
                        out.push(QuantaloidViolation::JoinLeft { objects, g1: Some(g1), g2: Some(g2), f });
                    }
                }
            }
        }
        for g in lyz.elements() {
            if self.comp(x, y, z, g, lxy.bottom()) != lxz.bottom() {
                out.push(QuantaloidViolation::JoinRight { objects, g, f1: None, f2: None });
            }
            for f1 in lxy.elements() {
                for f2 in (f1 + 1)..lxy.len() {
                    let lhs = self.comp(x, y, z, g, lxy.join2(f1, f2));
                    let rhs = lxz.join2(self.comp(x, y, z, g, f1), self.comp(x, y, z, g, f2));
                    if lhs != rhs {
                        out.push(QuantaloidViolation::JoinRight { objects, g, f1: Some(f1), f2: Some(f2) });
                    }
                }
            }
        }
    }

    pub fn is_quantaloid(&self) -> bool {
        self.verify().is_empty()
    }

    /// Whether every hom-lattice is distributive (for quantales with `∘ = ∧`, a locale).
    pub fn homs_distributive(&self) -> bool {
        self.homs.iter().all(|l| l.distributivity_failure().is_none())
    }
}

/// True when two handles denote the same quantaloid.
pub fn same_base(a: &Arc<Quantaloid>, b: &Arc<Quantaloid>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_law_on_compose() {
        for q in [boolean_quantale(), chain_quantale(2).unwrap(), chain_quantale(4).unwrap()] {
            for g in q.arrows() {
                let composed = q.compose(&g, &q.unit_arrow(g.src)).unwrap();
                assert_eq!(composed, g);
            }
        }
    }

    #[test]
    fn boolean_composition_is_meet() {
        let q = boolean_quantale();
        let a = |e| QArrow::new(0, 0, e);
        assert_eq!(q.compose(&a(1), &a(1)).unwrap().elem, 1);
        assert_eq!(q.compose(&a(1), &a(0)).unwrap().elem, 0);
    }

    #[test]
    fn truncated_sum() {
        let q = chain_quantale(2).unwrap();
        let a = |e| QArrow::new(0, 0, e);
        assert_eq!(q.compose(&a(1), &a(1)).unwrap().elem, 2);
        assert_eq!(q.compose(&a(0), &a(1)).unwrap().elem, 1);
    }

    #[test]
    fn non_composable_is_rejected() {
        let g = DiGraph::new(2, vec![(0, 1)]);
        let q = free_quantaloid_on_graph(&g).unwrap();
        let f = QArrow::new(0, 1, 1);
        assert!(matches!(q.compose(&f, &f), Err(QuantaloidError::NonComposable { .. })));
    }

    #[test]
    fn builders_verify() {
        assert!(boolean_quantale().verify().is_empty());
        assert!(chain_quantale(2).unwrap().verify().is_empty());
    }

    #[test]
    fn tampered_unit_is_reported() {
        let q = boolean_quantale();
        let broken =
            Quantaloid::new(q.names().to_vec(), vec![q.hom(0, 0).clone()], vec![q.table(0, 0, 0)], vec![0]).unwrap();
        let report = broken.verify();
        assert!(report.contains(&QuantaloidViolation::LeftUnit { x: 0, y: 0, f: 1 }));
        assert!(report.contains(&QuantaloidViolation::RightUnit { x: 0, y: 0, f: 1 }));
    }

    #[test]
    fn meet_on_m3_is_not_a_quantaloid() {
        let m3 = FiniteLattice::m3();
        let meet = m3.clone();
        let q = Quantaloid::quantale("*", m3, |g, f| meet.meet2(g, f), 4).unwrap();
        let report = q.verify();
        // x ∧ (y ∨ z) = x but (x ∧ y) ∨ (x ∧ z) = ⊥
        assert!(report.contains(&QuantaloidViolation::JoinLeft { objects: [0, 0, 0], g1: Some(2), g2: Some(3), f: 1 }));
        assert!(!report.iter().any(|v| matches!(v, QuantaloidViolation::Associativity { .. })));
    }

    #[test]
    fn residuals_along_units() {
        for q in [boolean_quantale(), chain_quantale(3).unwrap()] {
            for h in q.arrows() {
                assert_eq!(q.extension(&q.unit_arrow(h.src), &h).unwrap(), h);
                assert_eq!(q.lifting(&q.unit_arrow(h.tgt), &h).unwrap(), h);
            }
        }
    }

    #[test]
    fn boolean_extension_is_implication() {
        let q = boolean_quantale();
        let a = |e| QArrow::new(0, 0, e);
        for g in 0..2 {
            for h in 0..2 {
                let implication = usize::from(g == 0 || h == 1);
                assert_eq!(q.extension(&a(g), &a(h)).unwrap().elem, implication);
                assert_eq!(q.lifting(&a(g), &a(h)).unwrap().elem, implication);
            }
        }
    }

    #[test]
    fn chain_lifting() {
        let q = chain_quantale(2).unwrap();
        let a = |e| QArrow::new(0, 0, e);
        // largest k (numerically smallest) with min(1 + k, 2) >= 2
        assert_eq!(q.lifting(&a(1), &a(2)).unwrap().elem, 1);
        assert_eq!(q.extension(&a(1), &a(2)).unwrap().elem, 1);
        assert_eq!(q.lifting(&a(2), &a(0)).unwrap().elem, 0);
        assert_eq!(q.lifting(&a(0), &a(2)).unwrap().elem, 2);
    }
}
