//! Q-enriched categories, functors, matrices and distributors.
//!
//! Objects are positional: object `a` of a category is the index `a`. A hom-arrow
//! `A(a', a)` lives in `Q(ta, ta')`.

mod collage;
mod enumerate;
mod iso;
mod limits;
mod matrix;
mod sample;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::quantaloid::{same_base, Quantaloid};

pub use collage::{arrow_category, collage, cospan_distributor, triple_collage, Collage, TripleCollage};
pub use enumerate::{count_matrices, enumerate_distributors, enumerate_functors, DistributorSearch, FunctorSearch};
pub use iso::find_isomorphism;
pub use limits::{bang, fiber, one_object, point, pullback, terminal, Fiber, Pullback};
pub use matrix::{compose_distributors, DistributorViolation, QDistributor, QMatrix};
pub use sample::{random_category, random_distributor, random_functor, random_matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QCatError {
    #[error("structures live over different base quantaloids")]
    BaseMismatch,
    #[error("object {index} out of range for a category with {size} objects")]
    ObjectOutOfRange { index: usize, size: usize },
    #[error("type {ty} of object {object} is not an object of the base")]
    TypeOutOfRange { object: usize, ty: usize },
    #[error("hom-arrow ({row}, {col}) = {elem} is not an element of its hom-lattice")]
    ElementOutOfRange { row: usize, col: usize, elem: usize },
    #[error("expected {expected} {what}, found {found}")]
    Shape { what: &'static str, expected: usize, found: usize },
    #[error("not composable: {0}")]
    NonComposable(&'static str),
    #[error("arrow of type {src}->{tgt} does not fit here")]
    ArrowType { src: usize, tgt: usize },
}

/// A category enriched in a finite quantaloid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QCategory {
    base: Arc<Quantaloid>,
    names: Vec<String>,
    types: Vec<usize>,
    hom: Vec<usize>,
}

/// One violated category axiom instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum CategoryViolation {
    /// `1_{ta} ≰ A(a,a)`.
    Identity { object: usize },
    /// `A(a'',a') ∘ A(a',a) ≰ A(a'',a)`; `lhs` is the composite, `rhs` the direct hom.
    Composition { a: usize, a1: usize, a2: usize, lhs: usize, rhs: usize },
}

impl QCategory {
    /// Builds a category from `hom[a'][a] = A(a', a)`, checking shapes and ranges only.
    pub fn new(
        base: Arc<Quantaloid>,
        names: Vec<String>,
        types: Vec<usize>,
        hom: Vec<Vec<usize>>,
    ) -> Result<Self, QCatError> {
        let n = types.len();
        if names.len() != n {
            return Err(QCatError::Shape { what: "object names", expected: n, found: names.len() });
        }
        if hom.len() != n {
            return Err(QCatError::Shape { what: "hom rows", expected: n, found: hom.len() });
        }
        for (object, &ty) in types.iter().enumerate() {
            if ty >= base.len() {
                return Err(QCatError::TypeOutOfRange { object, ty });
            }
        }
        let mut flat = Vec::with_capacity(n * n);
        for (row, entries) in hom.iter().enumerate() {
            if entries.len() != n {
                return Err(QCatError::Shape { what: "hom columns", expected: n, found: entries.len() });
            }
            for (col, &elem) in entries.iter().enumerate() {
                if elem >= base.hom(types[col], types[row]).len() {
                    return Err(QCatError::ElementOutOfRange { row, col, elem });
                }
                flat.push(elem);
            }
        }
        Ok(Self { base, names, types, hom: flat })
    }

    /// Builds a category from a hom function `(a', a) ↦ A(a', a)`.
    pub fn from_fn(
        base: Arc<Quantaloid>,
        names: Vec<String>,
        types: Vec<usize>,
        hom: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, QCatError> {
        let n = types.len();
        let rows = (0..n).map(|a2| (0..n).map(|a| hom(a2, a)).collect()).collect();
        Self::new(base, names, types, rows)
    }

    /// The empty category over `base`.
    pub fn empty(base: Arc<Quantaloid>) -> Self {
        Self { base, names: vec![], types: vec![], hom: vec![] }
    }

    pub fn base(&self) -> &Arc<Quantaloid> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn objects(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn types(&self) -> &[usize] {
        &self.types
    }

    #[inline]
    pub fn ty(&self, a: usize) -> usize {
        self.types[a]
    }

    /// `A(a2, a) ∈ Q(ta, ta2)`.
    #[inline]
    pub fn hom(&self, a2: usize, a: usize) -> usize {
        self.hom[a2 * self.len() + a]
    }

    pub fn hom_rows(&self) -> Vec<Vec<usize>> {
        self.objects().map(|a2| self.objects().map(|a| self.hom(a2, a)).collect()).collect()
    }

    /// A copy with one hom-arrow replaced, without re-validation.
    pub fn with_hom(&self, a2: usize, a: usize, elem: usize) -> Self {
        let mut out = self.clone();
        let n = out.len();
        out.hom[a2 * n + a] = elem;
        out
    }

    pub fn check_object(&self, a: usize) -> Result<(), QCatError> {
        if a < self.len() {
            Ok(())
        } else {
            Err(QCatError::ObjectOutOfRange { index: a, size: self.len() })
        }
    }

    pub fn verify(&self) -> Vec<CategoryViolation> {
        let q = &*self.base;
        let mut out = Vec::new();
        for a in self.objects() {
            let t = self.ty(a);
            if !q.hom(t, t).leq(q.unit(t), self.hom(a, a)) {
                out.push(CategoryViolation::Identity { object: a });
            }
        }
        for a in self.objects() {
            for a1 in self.objects() {
                for a2 in self.objects() {
                    let (t, t1, t2) = (self.ty(a), self.ty(a1), self.ty(a2));
                    let lhs = q.comp(t, t1, t2, self.hom(a2, a1), self.hom(a1, a));
                    let rhs = self.hom(a2, a);
                    if !q.hom(t, t2).leq(lhs, rhs) {
                        out.push(CategoryViolation::Composition { a, a1, a2, lhs, rhs });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.verify().is_empty()
    }
}

/// A type-preserving object map that weakly increases hom-arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFunctor {
    dom: Arc<QCategory>,
    cod: Arc<QCategory>,
    map: Vec<usize>,
}

/// One violated functor condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum FunctorViolation {
    Type {
        object: usize,
    },
    /// `A(a', a) ≰ B(Fa', Fa)`.
    Hom {
        a2: usize,
        a: usize,
        dom_hom: usize,
        cod_hom: usize,
    },
}

impl QFunctor {
    /// Checks shapes and ranges; types and hom inequalities are left to [`verify`](Self::verify).
    pub fn new(dom: Arc<QCategory>, cod: Arc<QCategory>, map: Vec<usize>) -> Result<Self, QCatError> {
        if !same_base(dom.base(), cod.base()) {
            return Err(QCatError::BaseMismatch);
        }
        if map.len() != dom.len() {
            return Err(QCatError::Shape { what: "object images", expected: dom.len(), found: map.len() });
        }
        for &b in &map {
            cod.check_object(b)?;
        }
        Ok(Self { dom, cod, map })
    }

    pub fn identity(a: &Arc<QCategory>) -> Self {
        Self { dom: a.clone(), cod: a.clone(), map: a.objects().collect() }
    }

    pub(crate) fn from_parts_unchecked(dom: Arc<QCategory>, cod: Arc<QCategory>, map: Vec<usize>) -> Self {
        Self { dom, cod, map }
    }

    pub fn dom(&self) -> &Arc<QCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<QCategory> {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `G ∘ F`.
    pub fn then(&self, g: &QFunctor) -> Result<QFunctor, QCatError> {
        if !Arc::ptr_eq(&self.cod, &g.dom) && self.cod != g.dom {
            return Err(QCatError::NonComposable("codomain of the first functor is not the domain of the second"));
        }
        Ok(QFunctor { dom: self.dom.clone(), cod: g.cod.clone(), map: self.map.iter().map(|&b| g.apply(b)).collect() })
    }

    pub fn verify(&self) -> Vec<FunctorViolation> {
        let q = self.dom.base();
        let mut out = Vec::new();
        for a in self.dom.objects() {
            if self.dom.ty(a) != self.cod.ty(self.apply(a)) {
                out.push(FunctorViolation::Type { object: a });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for a2 in self.dom.objects() {
            for a in self.dom.objects() {
                let dom_hom = self.dom.hom(a2, a);
                let cod_hom = self.cod.hom(self.apply(a2), self.apply(a));
                if !q.hom(self.dom.ty(a), self.dom.ty(a2)).leq(dom_hom, cod_hom) {
                    out.push(FunctorViolation::Hom { a2, a, dom_hom, cod_hom });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.verify().is_empty()
    }

    /// Objects of the domain sent to `b`, in increasing order.
    pub fn preimage(&self, b: usize) -> Vec<usize> {
        self.dom.objects().filter(|&a| self.apply(a) == b).collect()
    }
}

/// True when the two categories live over the same quantaloid.
pub fn same_base_cat(a: &QCategory, b: &QCategory) -> bool {
    same_base(a.base(), b.base())
}

pub(crate) fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}
