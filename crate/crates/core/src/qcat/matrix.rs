use std::sync::Arc;

use serde::Serialize;

use super::{QCatError, QCategory};
use crate::quantaloid::{same_base, QArrow, Quantaloid};

/// A Q-valued matrix `M: X → Y` between typed object families; `M(y, x) ∈ Q(tx, ty)`.
///
/// Matrices are the ambient quantaloid `Matr(Q)`: composition is
/// `(N ∘ M)(z, x) = ⋁_y N(z, y) ∘ M(y, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    base: Arc<Quantaloid>,
    dom_types: Vec<usize>,
    cod_types: Vec<usize>,
    entries: Vec<usize>,
}

impl QMatrix {
    /// From rows indexed by the codomain, columns by the domain.
    pub fn new(
        base: Arc<Quantaloid>,
        dom_types: Vec<usize>,
        cod_types: Vec<usize>,
        rows: Vec<Vec<usize>>,
    ) -> Result<Self, QCatError> {
        if rows.len() != cod_types.len() {
            return Err(QCatError::Shape { what: "matrix rows", expected: cod_types.len(), found: rows.len() });
        }
        for (object, &ty) in dom_types.iter().chain(&cod_types).enumerate() {
            if ty >= base.len() {
                return Err(QCatError::TypeOutOfRange { object, ty });
            }
        }
        let mut entries = Vec::with_capacity(dom_types.len() * cod_types.len());
        for (row, values) in rows.iter().enumerate() {
            if values.len() != dom_types.len() {
                return Err(QCatError::Shape {
                    what: "matrix columns",
                    expected: dom_types.len(),
                    found: values.len(),
                });
            }
            for (col, &elem) in values.iter().enumerate() {
                if elem >= base.hom(dom_types[col], cod_types[row]).len() {
                    return Err(QCatError::ElementOutOfRange { row, col, elem });
                }
                entries.push(elem);
            }
        }
        Ok(Self { base, dom_types, cod_types, entries })
    }

    /// From an entry function `(y, x) ↦ M(y, x)`; entries are assumed in range.
    pub fn from_fn(
        base: Arc<Quantaloid>,
        dom_types: Vec<usize>,
        cod_types: Vec<usize>,
        entry: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let mut entries = Vec::with_capacity(dom_types.len() * cod_types.len());
        for y in 0..cod_types.len() {
            for x in 0..dom_types.len() {
                let e = entry(y, x);
                debug_assert!(e < base.hom(dom_types[x], cod_types[y]).len());
                entries.push(e);
            }
        }
        Self { base, dom_types, cod_types, entries }
    }

    pub fn zero(base: Arc<Quantaloid>, dom_types: Vec<usize>, cod_types: Vec<usize>) -> Self {
        let b = base.clone();
        let (d, c) = (dom_types.clone(), cod_types.clone());
        Self::from_fn(base, dom_types, cod_types, move |y, x| b.zero(d[x], c[y]))
    }

    pub fn top(base: Arc<Quantaloid>, dom_types: Vec<usize>, cod_types: Vec<usize>) -> Self {
        let b = base.clone();
        let (d, c) = (dom_types.clone(), cod_types.clone());
        Self::from_fn(base, dom_types, cod_types, move |y, x| b.top(d[x], c[y]))
    }

    /// The hom-arrows of `A` as an endo-matrix.
    pub fn of_category(a: &QCategory) -> Self {
        Self::from_fn(a.base().clone(), a.types().to_vec(), a.types().to_vec(), |y, x| a.hom(y, x))
    }

    pub fn base(&self) -> &Arc<Quantaloid> {
        &self.base
    }

    pub fn dom_types(&self) -> &[usize] {
        &self.dom_types
    }

    pub fn cod_types(&self) -> &[usize] {
        &self.cod_types
    }

    pub fn cols(&self) -> usize {
        self.dom_types.len()
    }

    pub fn rows(&self) -> usize {
        self.cod_types.len()
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize) -> usize {
        self.entries[y * self.cols() + x]
    }

    pub fn set(&mut self, y: usize, x: usize, elem: usize) {
        let cols = self.cols();
        self.entries[y * cols + x] = elem;
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        (0..self.rows()).map(|y| (0..self.cols()).map(|x| self.get(y, x)).collect()).collect()
    }

    fn same_shape(&self, other: &QMatrix) -> bool {
        self.dom_types == other.dom_types && self.cod_types == other.cod_types
    }

    /// Elementwise order. Matrices of different shapes are incomparable.
    pub fn leq(&self, other: &QMatrix) -> bool {
        self.same_shape(other)
            && (0..self.rows()).all(|y| {
                (0..self.cols())
                    .all(|x| self.base.hom(self.dom_types[x], self.cod_types[y]).leq(self.get(y, x), other.get(y, x)))
            })
    }

    pub fn join(&self, other: &QMatrix) -> Result<QMatrix, QCatError> {
        self.pointwise(other, |l, a, b| l.join2(a, b))
    }

    pub fn meet(&self, other: &QMatrix) -> Result<QMatrix, QCatError> {
        self.pointwise(other, |l, a, b| l.meet2(a, b))
    }

    fn pointwise(
        &self,
        other: &QMatrix,
        op: impl Fn(&crate::order::FiniteLattice, usize, usize) -> usize,
    ) -> Result<QMatrix, QCatError> {
        if !self.same_shape(other) {
            return Err(QCatError::NonComposable("matrices have different shapes"));
        }
        let (d, c) = (&self.dom_types, &self.cod_types);
        Ok(Self::from_fn(self.base.clone(), d.clone(), c.clone(), |y, x| {
            op(self.base.hom(d[x], c[y]), self.get(y, x), other.get(y, x))
        }))
    }

    /// `N ∘ M` for `M: X → Y` and `N: Y → Z`.
    pub fn compose(n: &QMatrix, m: &QMatrix) -> Result<QMatrix, QCatError> {
        if !same_base(&n.base, &m.base) {
            return Err(QCatError::BaseMismatch);
        }
        if n.dom_types != m.cod_types {
            return Err(QCatError::NonComposable("middle object families differ"));
        }
        let q = &*m.base;
        let (xs, ys, zs) = (&m.dom_types, &m.cod_types, &n.cod_types);
        Ok(Self::from_fn(m.base.clone(), xs.clone(), zs.clone(), |z, x| {
            q.hom(xs[x], zs[z]).join((0..ys.len()).map(|y| q.comp(xs[x], ys[y], zs[z], n.get(z, y), m.get(y, x))))
        }))
    }

    /// `[M, N]`: the largest `K: Y → Z` with `K ∘ M <= N`, for `M: X → Y`, `N: X → Z`.
    pub fn extension(m: &QMatrix, n: &QMatrix) -> Result<QMatrix, QCatError> {
        if m.dom_types != n.dom_types {
            return Err(QCatError::NonComposable("extension needs a common domain"));
        }
        let q = &*m.base;
        let (xs, ys, zs) = (&m.dom_types, &m.cod_types, &n.cod_types);
        let mut out = Self::top(m.base.clone(), ys.clone(), zs.clone());
        for z in 0..zs.len() {
            for y in 0..ys.len() {
                let l = q.hom(ys[y], zs[z]);
                let value = l.meet((0..xs.len()).map(|x| {
                    let g = QArrow::new(xs[x], ys[y], m.get(y, x));
                    let h = QArrow::new(xs[x], zs[z], n.get(z, x));
                    q.extension(&g, &h).expect("residuals exist in a quantaloid").elem
                }));
                out.set(z, y, value);
            }
        }
        Ok(out)
    }

    /// `{M, N}`: the largest `K: X → Y` with `M ∘ K <= N`, for `M: Y → Z`, `N: X → Z`.
    pub fn lifting(m: &QMatrix, n: &QMatrix) -> Result<QMatrix, QCatError> {
        if m.cod_types != n.cod_types {
            return Err(QCatError::NonComposable("lifting needs a common codomain"));
        }
        let q = &*m.base;
        let (xs, ys, zs) = (&n.dom_types, &m.dom_types, &m.cod_types);
        let mut out = Self::top(m.base.clone(), xs.clone(), ys.clone());
        for y in 0..ys.len() {
            for x in 0..xs.len() {
                let l = q.hom(xs[x], ys[y]);
                let value = l.meet((0..zs.len()).map(|z| {
                    let g = QArrow::new(ys[y], zs[z], m.get(z, y));
                    let h = QArrow::new(xs[x], zs[z], n.get(z, x));
                    q.lifting(&g, &h).expect("residuals exist in a quantaloid").elem
                }));
                out.set(y, x, value);
            }
        }
        Ok(out)
    }
}

/// A distributor `Φ: X ⇸ Y`: a matrix absorbing the actions of both categories,
/// `Φ(y, x1) ∘ X(x1, x) <= Φ(y, x)` and `Y(y, y1) ∘ Φ(y1, x) <= Φ(y, x)`.
///
/// Distributors are kept apart from bare matrices; [`as_matrix`](Self::as_matrix) is the
/// inclusion `Dist(Q)(X, Y) → Matr(Q)(X, Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QDistributor {
    dom: Arc<QCategory>,
    cod: Arc<QCategory>,
    matrix: QMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum DistributorViolation {
    /// `Φ(y, x1) ∘ X(x1, x) ≰ Φ(y, x)`.
    DomainAction { y: usize, x1: usize, x: usize, lhs: usize, rhs: usize },
    /// `Y(y, y1) ∘ Φ(y1, x) ≰ Φ(y, x)`.
    CodomainAction { y: usize, y1: usize, x: usize, lhs: usize, rhs: usize },
}

impl QDistributor {
    /// Structural construction from rows (indexed by `Y`) of entries (indexed by `X`).
    pub fn new(dom: Arc<QCategory>, cod: Arc<QCategory>, rows: Vec<Vec<usize>>) -> Result<Self, QCatError> {
        if !same_base(dom.base(), cod.base()) {
            return Err(QCatError::BaseMismatch);
        }
        let matrix = QMatrix::new(dom.base().clone(), dom.types().to_vec(), cod.types().to_vec(), rows)?;
        Ok(Self { dom, cod, matrix })
    }

    /// Wraps a matrix whose object families match `dom` and `cod`; no action check.
    pub fn from_matrix(dom: Arc<QCategory>, cod: Arc<QCategory>, matrix: QMatrix) -> Result<Self, QCatError> {
        if !same_base(dom.base(), cod.base()) || !same_base(dom.base(), matrix.base()) {
            return Err(QCatError::BaseMismatch);
        }
        if matrix.dom_types() != dom.types() || matrix.cod_types() != cod.types() {
            return Err(QCatError::Shape { what: "matrix object types", expected: 0, found: 1 });
        }
        Ok(Self { dom, cod, matrix })
    }

    pub fn from_fn(dom: Arc<QCategory>, cod: Arc<QCategory>, entry: impl Fn(usize, usize) -> usize) -> Self {
        let matrix = QMatrix::from_fn(dom.base().clone(), dom.types().to_vec(), cod.types().to_vec(), entry);
        Self { dom, cod, matrix }
    }

    pub fn zero(dom: Arc<QCategory>, cod: Arc<QCategory>) -> Self {
        let matrix = QMatrix::zero(dom.base().clone(), dom.types().to_vec(), cod.types().to_vec());
        Self { dom, cod, matrix }
    }

    pub fn top(dom: Arc<QCategory>, cod: Arc<QCategory>) -> Self {
        let matrix = QMatrix::top(dom.base().clone(), dom.types().to_vec(), cod.types().to_vec());
        Self { dom, cod, matrix }
    }

    /// The hom-distributor `A: A ⇸ A`, the identity for [`compose_distributors`].
    pub fn hom(a: &Arc<QCategory>) -> Self {
        Self { dom: a.clone(), cod: a.clone(), matrix: QMatrix::of_category(a) }
    }

    /// The smallest distributor above `M`, namely `Y ∘ M ∘ X`.
    pub fn reflection(dom: Arc<QCategory>, cod: Arc<QCategory>, m: &QMatrix) -> Result<Self, QCatError> {
        let left = QMatrix::compose(m, &QMatrix::of_category(&dom))?;
        let matrix = QMatrix::compose(&QMatrix::of_category(&cod), &left)?;
        Self::from_matrix(dom, cod, matrix)
    }

    /// The largest distributor below `M`, namely `{Y, [X, M]}` in this crate's residuation
    /// convention.
    pub fn coreflection(dom: Arc<QCategory>, cod: Arc<QCategory>, m: &QMatrix) -> Result<Self, QCatError> {
        let inner = QMatrix::extension(&QMatrix::of_category(&dom), m)?;
        let matrix = QMatrix::lifting(&QMatrix::of_category(&cod), &inner)?;
        Self::from_matrix(dom, cod, matrix)
    }

    pub fn dom(&self) -> &Arc<QCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<QCategory> {
        &self.cod
    }

    pub fn as_matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> QMatrix {
        self.matrix
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize) -> usize {
        self.matrix.get(y, x)
    }

    pub fn leq(&self, other: &QDistributor) -> bool {
        self.matrix.leq(&other.matrix)
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        self.matrix.to_rows()
    }

    pub fn verify(&self) -> Vec<DistributorViolation> {
        let q = self.dom.base();
        let (xc, yc) = (&*self.dom, &*self.cod);
        let mut out = Vec::new();
        for y in yc.objects() {
            for x in xc.objects() {
                let (tx, ty) = (xc.ty(x), yc.ty(y));
                let l = q.hom(tx, ty);
                let rhs = self.get(y, x);
                for x1 in xc.objects() {
                    let lhs = q.comp(tx, xc.ty(x1), ty, self.get(y, x1), xc.hom(x1, x));
                    if !l.leq(lhs, rhs) {
                        out.push(DistributorViolation::DomainAction { y, x1, x, lhs, rhs });
                    }
                }
                for y1 in yc.objects() {
                    let lhs = q.comp(tx, yc.ty(y1), ty, yc.hom(y, y1), self.get(y1, x));
                    if !l.leq(lhs, rhs) {
                        out.push(DistributorViolation::CodomainAction { y, y1, x, lhs, rhs });
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

/// `Ψ ⊗ Φ` for `Φ: X ⇸ Y` and `Ψ: Y ⇸ Z`: `(Ψ ⊗ Φ)(z, x) = ⋁_y Ψ(z, y) ∘ Φ(y, x)`.
pub fn compose_distributors(psi: &QDistributor, phi: &QDistributor) -> Result<QDistributor, QCatError> {
    if !Arc::ptr_eq(&phi.cod, &psi.dom) && phi.cod != psi.dom {
        return Err(QCatError::NonComposable("middle categories differ"));
    }
    let matrix = QMatrix::compose(&psi.matrix, &phi.matrix)?;
    Ok(QDistributor { dom: phi.dom.clone(), cod: psi.cod.clone(), matrix })
}
