use serde::Serialize;

use super::{ExpError, FiberedFunctor};
use crate::qcat::QFunctor;

/// `(f1 ∨ f2) ∧ A(a1, a) = lhs ≠ rhs = (f1 ∧ A(a1, a)) ∨ (f2 ∧ A(a1, a))`.
///
/// The nullary case `0 ∧ A(a1, a) ≠ 0` is recorded with `f1 = f2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ConditionOneWitness {
    pub a: usize,
    pub a1: usize,
    pub f1: usize,
    pub f2: usize,
    pub lhs: usize,
    pub rhs: usize,
}

/// `(g ∘ f) ∧ A(a2, a) = lhs ≠ rhs = ⋁_{a1 ∈ F⁻¹b1} (g ∧ A(a2, a1)) ∘ (f ∧ A(a1, a))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ConditionTwoWitness {
    pub a: usize,
    pub a2: usize,
    pub b1: usize,
    pub f: usize,
    pub g: usize,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport<W> {
    pub verdict: bool,
    pub witnesses: Vec<W>,
}

impl<W> ConditionReport<W> {
    fn from_witnesses(witnesses: Vec<W>) -> Self {
        Self { verdict: witnesses.is_empty(), witnesses }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum Witness {
    #[serde(rename = "1")]
    One(ConditionOneWitness),
    #[serde(rename = "2")]
    Two(ConditionTwoWitness),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentiabilityReport {
    pub verdict: bool,
    pub condition1: ConditionReport<ConditionOneWitness>,
    pub condition2: ConditionReport<ConditionTwoWitness>,
    pub witnesses: Vec<Witness>,
}

impl FiberedFunctor {
    pub fn condition_one(&self) -> ConditionReport<ConditionOneWitness> {
        let (a_cat, b_cat, f) = (self.dom(), self.cod(), self.functor());
        let q = self.base();
        let mut witnesses = Vec::new();
        for a in a_cat.objects() {
            for a1 in a_cat.objects() {
                let l = q.hom(a_cat.ty(a), a_cat.ty(a1));
                let h = a_cat.hom(a1, a);
                let below: Vec<usize> = l.below(b_cat.hom(f.apply(a1), f.apply(a))).collect();
                let bottom = l.bottom();
                if l.meet2(bottom, h) != bottom {
                    let lhs = l.meet2(bottom, h);
                    witnesses.push(ConditionOneWitness { a, a1, f1: bottom, f2: bottom, lhs, rhs: bottom });
                }
                for (i, &f1) in below.iter().enumerate() {
                    for &f2 in &below[i + 1..] {
                        let lhs = l.meet2(l.join2(f1, f2), h);
                        let rhs = l.join2(l.meet2(f1, h), l.meet2(f2, h));
                        if lhs != rhs {
                            witnesses.push(ConditionOneWitness { a, a1, f1, f2, lhs, rhs });
                        }
                    }
                }
            }
        }
        ConditionReport::from_witnesses(witnesses)
    }

    pub fn condition_two(&self) -> ConditionReport<ConditionTwoWitness> {
        let (a_cat, b_cat, func) = (self.dom(), self.cod(), self.functor());
        let q = self.base();
        let mut witnesses = Vec::new();
        for a in a_cat.objects() {
            for a2 in a_cat.objects() {
                let (ta, ta2) = (a_cat.ty(a), a_cat.ty(a2));
                let (fa, fa2) = (func.apply(a), func.apply(a2));
                let out = q.hom(ta, ta2);
                for b1 in b_cat.objects() {
                    let tb1 = b_cat.ty(b1);
                    let (lf, lg) = (q.hom(ta, tb1), q.hom(tb1, ta2));
                    let middle = &self.fiber(b1).members;
                    for f in lf.below(b_cat.hom(b1, fa)) {
                        for g in lg.below(b_cat.hom(fa2, b1)) {
                            let lhs = out.meet2(q.comp(ta, tb1, ta2, g, f), a_cat.hom(a2, a));
                            let rhs = out.join(middle.iter().map(|&a1| {
                                let g1 = lg.meet2(g, a_cat.hom(a2, a1));
                                let f1 = lf.meet2(f, a_cat.hom(a1, a));
                                q.comp(ta, tb1, ta2, g1, f1)
                            }));
                            if lhs != rhs {
                                witnesses.push(ConditionTwoWitness { a, a2, b1, f, g, lhs, rhs });
                            }
                        }
                    }
                }
            }
        }
        ConditionReport::from_witnesses(witnesses)
    }

    pub fn exponentiability(&self) -> ExponentiabilityReport {
        let condition1 = self.condition_one();
        let condition2 = self.condition_two();
        let witnesses = condition1
            .witnesses
            .iter()
            .map(|w| Witness::One(*w))
            .chain(condition2.witnesses.iter().map(|w| Witness::Two(*w)))
            .collect();
        ExponentiabilityReport { verdict: condition1.verdict && condition2.verdict, condition1, condition2, witnesses }
    }

    /// Three independent evaluations of the first condition: the direct distributivity
    /// check, sup-preservation of every `f ↦ f ∧ A(a', a)`, and sup-preservation of every
    /// `hat` map `↓B(b', b) → Matr(A_b, A_{b'})`.
    pub fn condition_one_evaluations(&self) -> [bool; 3] {
        let direct = self.condition_one().verdict;
        let pointwise = self.adjoints.iter().all(Result::is_ok);
        let b_cat = self.cod();
        let matrixwise = b_cat.objects().all(|b| {
            b_cat.objects().all(|b1| {
                let down = self.downset(b, b1);
                let hat = |f: usize| self.hat_matrix(b, b1, f);
                let l = &down.lattice;
                if hat(down.to_parent(l.bottom())) != self.zero_matrix(b, b1) {
                    return false;
                }
                l.elements().all(|x| {
                    (x + 1..l.len()).all(|y| {
                        let joined = hat(down.to_parent(l.join2(x, y)));
                        joined == hat(down.to_parent(x)).join(&hat(down.to_parent(y))).expect("same shape")
                    })
                })
            })
        });
        [direct, pointwise, matrixwise]
    }
}

pub fn check_condition_one(f: &QFunctor) -> Result<ConditionReport<ConditionOneWitness>, ExpError> {
    Ok(FiberedFunctor::new(f)?.condition_one())
}

pub fn check_condition_two(f: &QFunctor) -> Result<ConditionReport<ConditionTwoWitness>, ExpError> {
    Ok(FiberedFunctor::new(f)?.condition_two())
}

pub fn is_exponentiable(f: &QFunctor) -> Result<ExponentiabilityReport, ExpError> {
    Ok(FiberedFunctor::new(f)?.exponentiability())
}

pub fn condition_one_evaluations(f: &QFunctor) -> Result<[bool; 3], ExpError> {
    Ok(FiberedFunctor::new(f)?.condition_one_evaluations())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expcheck::test_support::*;
    use crate::qcat::test_support::*;
    use crate::qcat::{enumerate_functors, QFunctor};

    #[test]
    fn skip_functor_has_the_classic_witness() {
        let report = is_exponentiable(&f_skip()).unwrap();
        assert!(!report.verdict);
        assert!(report.condition1.verdict);
        assert_eq!(
            report.condition2.witnesses,
            vec![ConditionTwoWitness { a: 0, a2: 1, b1: 1, f: 1, g: 1, lhs: 1, rhs: 0 }]
        );
    }

    #[test]
    fn identities_are_exponentiable() {
        for n in 0..4 {
            let report = is_exponentiable(&identity_on(n)).unwrap();
            assert!(report.verdict, "{report:?}");
        }
    }

    #[test]
    fn identity_on_objects_chain_functor() {
        let q = bool_base();
        let c = chain(&q, 3);
        let discrete = preorder(&q, 3, |i, j| i == j);
        let f = QFunctor::new(discrete, c.clone(), vec![0, 1, 2]).unwrap();
        assert!(is_exponentiable(&f).unwrap().verdict);
        let g = QFunctor::new(c.clone(), c, vec![0, 1, 2]).unwrap();
        assert!(is_exponentiable(&g).unwrap().verdict);
    }

    #[test]
    fn locale_base_satisfies_condition_one() {
        let q = bool_base();
        let (a, b) = (chain(&q, 3), chain(&q, 2));
        for f in enumerate_functors(&a, &b) {
            let fib = FiberedFunctor::new(&f).unwrap();
            assert!(fib.condition_one().verdict);
            assert_eq!(fib.condition_one_evaluations(), [true; 3]);
        }
    }

    #[test]
    fn invalid_functor_is_rejected() {
        let q = bool_base();
        let c = chain(&q, 2);
        let f = QFunctor::new(c.clone(), c, vec![1, 0]).unwrap();
        assert!(matches!(is_exponentiable(&f), Err(ExpError::InvalidFunctor(_))));
    }
}
