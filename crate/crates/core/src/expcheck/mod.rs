//! Exponentiability of Q-functors: the two conditions, the `hat ⊣ sharp` adjunctions
//! between hom-downsets of `B` and distributors between fibers, the lax squares that
//! connect them, and the partial-product and slice-exponential constructions.

mod adjoint;
mod conditions;
mod lax;
mod partial;

use std::sync::Arc;

use thiserror::Error;

use crate::order::{Downset, SupFailure};
use crate::qcat::{fiber, CategoryViolation, Fiber, FunctorViolation, QCatError, QCategory, QFunctor};
use crate::quantaloid::Quantaloid;

pub use adjoint::{hat, sharp, transposed_point};
pub use conditions::{
    check_condition_one, check_condition_two, condition_one_evaluations, is_exponentiable, ConditionOneWitness,
    ConditionReport, ConditionTwoWitness, ExponentiabilityReport, Witness,
};
pub use lax::{check_hat_lax, check_sharp_lax, hat_square_report, HatSquareReport, SharpLaxBudget, SharpLaxReport};
pub use partial::{mediating, partial_product, slice_exponential, PartialProduct, SliceExponential};

/// Hom-elements indexed by row, then column.
pub type Table = Vec<Vec<usize>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpError {
    #[error("the functor is not valid: {0:?}")]
    InvalidFunctor(Vec<FunctorViolation>),
    #[error("the {which} category is not valid: {violations:?}")]
    InvalidCategory { which: &'static str, violations: Vec<CategoryViolation> },
    #[error("the functor is not exponentiable")]
    ConditionViolated(Box<ExponentiabilityReport>),
    #[error("f ↦ f ∧ A(a', a) does not preserve suprema for a = {a}, a' = {a1}: {failure}")]
    AdjointMissing { a: usize, a1: usize, failure: SupFailure },
    #[error("element {f} is not below B({b1}, {b})")]
    OutOfDownset { b: usize, b1: usize, f: usize },
    #[error("sharp at ({b}, {b1}): downset search gives {search}, meet formula gives {formula}")]
    InternalDisagreement { b: usize, b1: usize, search: usize, formula: usize },
    #[error("expected a matrix between the fibers over {b} and {b1}")]
    FiberShape { b: usize, b1: usize },
    #[error("no mediating functor: {0}")]
    NoMediator(String),
    #[error("the construction produced an invalid {0}")]
    Internal(String),
    #[error(transparent)]
    QCat(#[from] QCatError),
}

/// A functor `F: A → B` together with its fibers and the hom-downsets of `B`.
///
/// Building one validates `F`; everything in this module is computed relative to it.
#[derive(Debug, Clone)]
pub struct FiberedFunctor {
    functor: QFunctor,
    fibers: Vec<Fiber>,
    /// `downsets[b1 * |B| + b] = ↓B(b1, b)`.
    downsets: Vec<Downset>,
    /// For each pair `(a, a1)`, the right adjoint of `f ↦ f ∧ A(a1, a)` on `↓B(Fa1, Fa)`,
    /// as a table from `Q(ta, ta1)` to local downset indices, or why it does not exist.
    adjoints: Vec<Result<Vec<usize>, SupFailure>>,
}

impl FiberedFunctor {
    pub fn new(functor: &QFunctor) -> Result<Self, ExpError> {
        for (which, cat) in [("domain", functor.dom()), ("codomain", functor.cod())] {
            let violations = cat.verify();
            if !violations.is_empty() {
                return Err(ExpError::InvalidCategory { which, violations });
            }
        }
        let violations = functor.verify();
        if !violations.is_empty() {
            return Err(ExpError::InvalidFunctor(violations));
        }
        let (a_cat, b_cat) = (functor.dom(), functor.cod());
        let q = b_cat.base();
        let fibers = b_cat.objects().map(|b| fiber(functor, b)).collect::<Result<Vec<_>, _>>()?;
        let mut downsets = Vec::with_capacity(b_cat.len() * b_cat.len());
        for b1 in b_cat.objects() {
            for b in b_cat.objects() {
                downsets.push(q.hom(b_cat.ty(b), b_cat.ty(b1)).downset(b_cat.hom(b1, b)));
            }
        }
        let mut out = Self { functor: functor.clone(), fibers, downsets, adjoints: vec![] };
        let mut adjoints = Vec::with_capacity(a_cat.len() * a_cat.len());
        for a1 in a_cat.objects() {
            for a in a_cat.objects() {
                adjoints.push(out.restriction_adjoint(a, a1));
            }
        }
        out.adjoints = adjoints;
        Ok(out)
    }

    pub fn functor(&self) -> &QFunctor {
        &self.functor
    }

    pub fn dom(&self) -> &Arc<QCategory> {
        self.functor.dom()
    }

    pub fn cod(&self) -> &Arc<QCategory> {
        self.functor.cod()
    }

    pub fn base(&self) -> &Arc<Quantaloid> {
        self.functor.dom().base()
    }

    pub fn fiber(&self, b: usize) -> &Fiber {
        &self.fibers[b]
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    /// `↓B(b1, b)` as a lattice of its own.
    pub fn downset(&self, b: usize, b1: usize) -> &Downset {
        &self.downsets[b1 * self.cod().len() + b]
    }

    /// The right adjoint of `f ↦ f ∧ A(a1, a)`, from `Q(ta, ta1)` into `↓B(Fa1, Fa)` (local
    /// indices).
    pub fn restriction_right_adjoint(&self, a: usize, a1: usize) -> Result<&[usize], ExpError> {
        match &self.adjoints[a1 * self.dom().len() + a] {
            Ok(table) => Ok(table),
            Err(failure) => Err(ExpError::AdjointMissing { a, a1, failure: *failure }),
        }
    }

    fn restriction_adjoint(&self, a: usize, a1: usize) -> Result<Vec<usize>, SupFailure> {
        let (a_cat, f) = (self.dom(), &self.functor);
        let q = self.base();
        let target = q.hom_arc(a_cat.ty(a), a_cat.ty(a1));
        let down = self.downset(f.apply(a), f.apply(a1));
        let hom = a_cat.hom(a1, a);
        let map = crate::order::MonotoneMap::from_fn(down.lattice.clone(), target.clone(), |l| {
            target.meet2(down.to_parent(l), hom)
        })
        .expect("meeting with a fixed element is monotone");
        match map.right_adjoint() {
            Ok(adjoint) => Ok(adjoint.table().to_vec()),
            Err(crate::order::OrderError::NotSupPreserving(failure)) => Err(failure),
            Err(e) => unreachable!("unexpected order error {e}"),
        }
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use std::sync::Arc;

    use crate::qcat::test_support::{bool_base, chain};
    use crate::qcat::QFunctor;

    /// The 2-chain `{a0 <= a2}` into the 3-chain, missing the middle object.
    pub fn f_skip() -> QFunctor {
        let q = bool_base();
        let a = crate::qcat::test_support::preorder(&q, 2, |i, j| i <= j);
        let a = Arc::new(
            crate::qcat::QCategory::new(q.clone(), vec!["a0".into(), "a2".into()], a.types().to_vec(), a.hom_rows())
                .unwrap(),
        );
        QFunctor::new(a, chain(&q, 3), vec![0, 2]).unwrap()
    }

    pub fn identity_on(n: usize) -> QFunctor {
        QFunctor::identity(&chain(&bool_base(), n))
    }
}
