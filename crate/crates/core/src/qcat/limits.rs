use std::sync::Arc;

use super::{QCatError, QCategory, QFunctor};
use crate::quantaloid::{same_base, Quantaloid};

/// The terminal Q-category: one object per Q-object, every hom-arrow top.
pub fn terminal(q: &Arc<Quantaloid>) -> Arc<QCategory> {
    let types: Vec<usize> = q.objects().collect();
    Arc::new(
        QCategory::from_fn(q.clone(), q.names().to_vec(), types, |y, x| q.top(x, y))
            .expect("terminal category is well formed"),
    )
}

/// `*_X`: one object of type `X` with hom-arrow `1_X`.
pub fn one_object(q: &Arc<Quantaloid>, x: usize) -> Arc<QCategory> {
    Arc::new(
        QCategory::new(q.clone(), vec![format!("*{}", q.name(x))], vec![x], vec![vec![q.unit(x)]])
            .expect("one-object category is well formed"),
    )
}

/// The functor `*_{tb} → B` pointing at `b`.
pub fn point(b_cat: &Arc<QCategory>, b: usize) -> Result<QFunctor, QCatError> {
    b_cat.check_object(b)?;
    QFunctor::new(one_object(b_cat.base(), b_cat.ty(b)), b_cat.clone(), vec![b])
}

/// The unique functor `A → T`, sending each object to its type.
pub fn bang(a: &Arc<QCategory>) -> QFunctor {
    QFunctor::from_parts_unchecked(a.clone(), terminal(a.base()), a.types().to_vec())
}

/// `A ×_C B` with its two projections.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub category: Arc<QCategory>,
    /// Object `i` of the pullback is `pairs[i] = (a, b)`, listed lexicographically.
    pub pairs: Vec<(usize, usize)>,
    pub left: QFunctor,
    pub right: QFunctor,
}

impl Pullback {
    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        self.pairs.binary_search(&(a, b)).ok()
    }
}

/// `(A ×_C B)((a', b'), (a, b)) = A(a', a) ∧ B(b', b)` over pairs with `Fa = Gb`.
pub fn pullback(f: &QFunctor, g: &QFunctor) -> Result<Pullback, QCatError> {
    if !Arc::ptr_eq(f.cod(), g.cod()) && f.cod() != g.cod() {
        return Err(QCatError::NonComposable("pullback needs a common codomain"));
    }
    let (a_cat, b_cat) = (f.dom(), g.dom());
    let q = a_cat.base();
    if !same_base(q, b_cat.base()) {
        return Err(QCatError::BaseMismatch);
    }
    let pairs: Vec<(usize, usize)> = a_cat
        .objects()
        .flat_map(|a| b_cat.objects().filter(move |&b| f.apply(a) == g.apply(b)).map(move |b| (a, b)))
        .collect();
    let names = pairs.iter().map(|&(a, b)| format!("({},{})", a_cat.name(a), b_cat.name(b))).collect();
    let types: Vec<usize> = pairs.iter().map(|&(a, _)| a_cat.ty(a)).collect();
    let category = Arc::new(QCategory::from_fn(q.clone(), names, types, |i2, i| {
        let ((a2, b2), (a, b)) = (pairs[i2], pairs[i]);
        q.hom(a_cat.ty(a), a_cat.ty(a2)).meet2(a_cat.hom(a2, a), b_cat.hom(b2, b))
    })?);
    let left = QFunctor::from_parts_unchecked(category.clone(), a_cat.clone(), pairs.iter().map(|p| p.0).collect());
    let right = QFunctor::from_parts_unchecked(category.clone(), b_cat.clone(), pairs.iter().map(|p| p.1).collect());
    Ok(Pullback { category, pairs, left, right })
}

/// The fiber `A_b` of `F: A → B` with its inclusion into `A`.
#[derive(Debug, Clone)]
pub struct Fiber {
    pub category: Arc<QCategory>,
    /// `members[i]` is the object of `A` that is object `i` of the fiber.
    pub members: Vec<usize>,
    pub inclusion: QFunctor,
}

impl Fiber {
    pub fn local_of(&self, a: usize) -> Option<usize> {
        self.members.binary_search(&a).ok()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }
}

/// `A_b(a', a) = 1_{tb} ∧ A(a', a)` over the objects of `F⁻¹b`.
pub fn fiber(f: &QFunctor, b: usize) -> Result<Fiber, QCatError> {
    f.cod().check_object(b)?;
    let a_cat = f.dom();
    let q = a_cat.base();
    let t = f.cod().ty(b);
    let members = f.preimage(b);
    let names = members.iter().map(|&a| a_cat.name(a).to_string()).collect();
    let category = Arc::new(QCategory::from_fn(q.clone(), names, vec![t; members.len()], |i2, i| {
        q.hom(t, t).meet2(q.unit(t), a_cat.hom(members[i2], members[i]))
    })?);
    let inclusion = QFunctor::from_parts_unchecked(category.clone(), a_cat.clone(), members.clone());
    Ok(Fiber { category, members, inclusion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcat::test_support::*;
    use crate::qcat::{enumerate_functors, find_isomorphism};
    use crate::quantaloid::chain_quantale;

    #[test]
    fn terminal_over_boolean_and_chain() {
        let t = terminal(&bool_base());
        assert_eq!(t.hom_rows(), vec![vec![1]]);
        let q = Arc::new(chain_quantale(2).unwrap());
        let t = terminal(&q);
        assert_eq!(t.hom(0, 0), q.top(0, 0));
        assert!(t.is_valid());
    }

    #[test]
    fn bang_is_a_functor() {
        let q = bool_base();
        for n in 0..4 {
            assert!(bang(&chain(&q, n)).is_valid());
        }
    }

    #[test]
    fn points_are_functors() {
        let q = bool_base();
        let c = chain(&q, 3);
        for b in c.objects() {
            assert!(point(&c, b).unwrap().is_valid());
        }
        assert!(one_object(&q, 0).is_valid());
    }

    #[test]
    fn diagonal_pullback_is_isomorphic() {
        let q = bool_base();
        let c = chain(&q, 3);
        let id = QFunctor::identity(&c);
        let pb = pullback(&id, &id).unwrap();
        assert_eq!(pb.pairs, vec![(0, 0), (1, 1), (2, 2)]);
        assert!(find_isomorphism(&pb.category, &c).is_some());
        assert!(pb.left.is_valid() && pb.right.is_valid());
    }

    #[test]
    fn distinct_points_have_empty_pullback() {
        let q = bool_base();
        let c = chain(&q, 3);
        let pb = pullback(&point(&c, 0).unwrap(), &point(&c, 2).unwrap()).unwrap();
        assert!(pb.category.is_empty());
    }

    #[test]
    fn pullback_of_monotone_maps_matches_hand_enumeration() {
        let q = bool_base();
        let (two, three) = (chain(&q, 2), chain(&q, 3));
        let f = QFunctor::new(two.clone(), three.clone(), vec![0, 2]).unwrap();
        let g = QFunctor::new(three.clone(), three.clone(), vec![0, 2, 2]).unwrap();
        let pb = pullback(&f, &g).unwrap();
        assert_eq!(pb.pairs, vec![(0, 0), (1, 1), (1, 2)]);
        for i2 in 0..3 {
            for i in 0..3 {
                let ((a2, b2), (a, b)) = (pb.pairs[i2], pb.pairs[i]);
                let expected = usize::from(a <= a2 && b <= b2);
                assert_eq!(pb.category.hom(i2, i), expected);
            }
        }
    }

    #[test]
    fn fiber_of_skip_functor() {
        let q = bool_base();
        let (two, three) = (chain(&q, 2), chain(&q, 3));
        let f = QFunctor::new(two, three, vec![0, 2]).unwrap();
        assert!(fiber(&f, 1).unwrap().is_empty());
        assert_eq!(fiber(&f, 2).unwrap().members, vec![1]);
    }

    #[test]
    fn fiber_agrees_with_pullback_of_point() {
        let q = bool_base();
        let (a, b) = (chain(&q, 3), chain(&q, 2));
        for f in enumerate_functors(&a, &b) {
            for y in b.objects() {
                let fib = fiber(&f, y).unwrap();
                let pb = pullback(&point(&b, y).unwrap(), &f).unwrap();
                assert_eq!(fib.category.hom_rows(), pb.category.hom_rows());
                assert_eq!(fib.members, pb.pairs.iter().map(|p| p.1).collect::<Vec<_>>());
            }
        }
    }
}
