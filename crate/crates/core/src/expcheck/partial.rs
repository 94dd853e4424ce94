use std::sync::Arc;

use super::{ExpError, FiberedFunctor, Table};
use crate::qcat::{pullback, FunctorSearch, Pullback, QCategory, QFunctor, QMatrix};

/// A partial product of `C` along `F: A → B`: the category `P`, the projection `P → B` and
/// the evaluation `P ×_B A → C`.
///
/// Object `i` of `P` is `objects[i] = (b, H)` with `H: A_b → C` given by its object map;
/// objects are sorted lexicographically.
#[derive(Debug, Clone)]
pub struct PartialProduct {
    pub category: Arc<QCategory>,
    pub proj: QFunctor,
    pub eval: QFunctor,
    /// `P ×_B A`, the domain of `eval`.
    pub pullback: Pullback,
    pub objects: Vec<(usize, Vec<usize>)>,
    functor: QFunctor,
    target: Arc<QCategory>,
}

impl PartialProduct {
    /// Wires up projection and evaluation for a given object set and hom table, without
    /// checking that the result is a partial product.
    pub fn assemble(
        functor: &QFunctor,
        target: &Arc<QCategory>,
        objects: Vec<(usize, Vec<usize>)>,
        hom: Vec<Vec<usize>>,
    ) -> Result<Self, ExpError> {
        let b_cat = functor.cod();
        let names = objects
            .iter()
            .map(|(b, h)| {
                let images: Vec<&str> = h.iter().map(|&c| target.name(c)).collect();
                format!("({},[{}])", b_cat.name(*b), images.join(","))
            })
            .collect();
        let types = objects.iter().map(|(b, _)| b_cat.ty(*b)).collect();
        let category = Arc::new(QCategory::new(functor.dom().base().clone(), names, types, hom)?);
        Self::with_parts(functor, target, objects, category)
    }

    fn with_parts(
        functor: &QFunctor,
        target: &Arc<QCategory>,
        objects: Vec<(usize, Vec<usize>)>,
        category: Arc<QCategory>,
    ) -> Result<Self, ExpError> {
        let proj = QFunctor::new(category.clone(), functor.cod().clone(), objects.iter().map(|o| o.0).collect())?;
        let pullback = pullback(&proj, functor)?;
        let members: Vec<Vec<usize>> = functor.cod().objects().map(|b| functor.preimage(b)).collect();
        let eval_map = pullback
            .pairs
            .iter()
            .map(|&(p, a)| {
                let (b, h) = &objects[p];
                let local = members[*b].binary_search(&a).expect("a lies over b");
                h[local]
            })
            .collect();
        let eval = QFunctor::new(pullback.category.clone(), target.clone(), eval_map)?;
        Ok(Self { category, proj, eval, pullback, objects, functor: functor.clone(), target: target.clone() })
    }

    /// The same structure with one hom-arrow of `P` replaced.
    pub fn with_hom(&self, p2: usize, p: usize, elem: usize) -> Result<Self, ExpError> {
        let category = Arc::new(self.category.with_hom(p2, p, elem));
        Self::with_parts(&self.functor, &self.target, self.objects.clone(), category)
    }

    pub fn functor(&self) -> &QFunctor {
        &self.functor
    }

    pub fn target(&self) -> &Arc<QCategory> {
        &self.target
    }

    pub fn object_index(&self, b: usize, h: &[usize]) -> Option<usize> {
        self.objects.binary_search_by(|(b0, h0)| (*b0, h0.as_slice()).cmp(&(b, h))).ok()
    }
}

/// An object `(b, H)`: a point of `B` and a fiber map `A_b → C`.
type SliceObject = (usize, Vec<usize>);

/// The objects `(b, H)` with `H: A_b → C` drawn from `candidates(b)`, and their homs
/// `C(H'−, H−)^F`.
fn fiberwise_construction(
    fib: &FiberedFunctor,
    target: &Arc<QCategory>,
    candidates: impl Fn(usize) -> Vec<usize>,
) -> Result<(Vec<SliceObject>, Table), ExpError> {
    let mut objects = Vec::new();
    for b in fib.cod().objects() {
        let local = &fib.fiber(b).category;
        let allowed = candidates(b);
        let lists = vec![allowed; local.len()];
        for h in FunctorSearch::with_candidates(local, target, lists) {
            objects.push((b, h.map().to_vec()));
        }
    }
    let q = fib.base();
    let mut hom = vec![vec![0; objects.len()]; objects.len()];
    for (i2, (b2, h2)) in objects.iter().enumerate() {
        for (i, (b, h)) in objects.iter().enumerate() {
            let (src, dst) = (&fib.fiber(*b).category, &fib.fiber(*b2).category);
            let m =
                QMatrix::from_fn(q.clone(), src.types().to_vec(), dst.types().to_vec(), |y, x| target.hom(h2[y], h[x]));
            hom[i2][i] = fib.sharp_matrix(*b, *b2, &m)?;
        }
    }
    Ok((objects, hom))
}

fn check_constructed(pp: &PartialProduct) -> Result<(), ExpError> {
    if !pp.category.is_valid() {
        return Err(ExpError::Internal(format!("category: {:?}", pp.category.verify())));
    }
    if !pp.proj.is_valid() {
        return Err(ExpError::Internal("projection".into()));
    }
    if !pp.eval.is_valid() {
        return Err(ExpError::Internal("evaluation".into()));
    }
    Ok(())
}

/// The partial product of `C` along an exponentiable `F`, with
/// `P((b', H'), (b, H)) = C(H'−, H−)^F`.
pub fn partial_product(f: &QFunctor, target: &Arc<QCategory>) -> Result<PartialProduct, ExpError> {
    let fib = FiberedFunctor::new(f)?;
    fib.partial_product(target)
}

impl FiberedFunctor {
    pub fn partial_product(&self, target: &Arc<QCategory>) -> Result<PartialProduct, ExpError> {
        if !crate::qcat::same_base_cat(target, self.dom()) {
            return Err(crate::qcat::QCatError::BaseMismatch.into());
        }
        let report = self.exponentiability();
        if !report.verdict {
            return Err(ExpError::ConditionViolated(Box::new(report)));
        }
        let all: Vec<usize> = target.objects().collect();
        let (objects, hom) = fiberwise_construction(self, target, |_| all.clone())?;
        let pp = PartialProduct::assemble(self.functor(), target, objects, hom)?;
        check_constructed(&pp)?;
        Ok(pp)
    }
}

/// The functor `K: P' → P` forced by a cone `(P'ₘ: P' → B, E': P' ×_B A → C)`:
/// `K(x) = (P'ₘ x, E'(x, −))`.
///
/// `E'` must have the pullback `pullback(P'ₘ, F)` as its domain, objects in the same order.
/// Fails when `E'(x, −)` is not an object of `P` or the object map is not a functor.
pub fn mediating(pp: &PartialProduct, p_map: &QFunctor, e_prime: &QFunctor) -> Result<QFunctor, ExpError> {
    let f = pp.functor();
    let pb = pullback(p_map, f)?;
    if e_prime.dom().len() != pb.pairs.len() {
        return Err(ExpError::NoMediator("the evaluation cone has the wrong domain".into()));
    }
    let mut map = Vec::with_capacity(p_map.dom().len());
    for x in p_map.dom().objects() {
        let b = p_map.apply(x);
        let h: Vec<usize> = f
            .preimage(b)
            .into_iter()
            .map(|a| e_prime.apply(pb.index_of(x, a).expect("(x, a) lies in the pullback")))
            .collect();
        match pp.object_index(b, &h) {
            Some(i) => map.push(i),
            None => return Err(ExpError::NoMediator(format!("E'({x}, -) = {h:?} is not a functor on the fiber"))),
        }
    }
    let k = QFunctor::new(p_map.dom().clone(), pp.category.clone(), map)?;
    let violations = k.verify();
    if violations.is_empty() {
        Ok(k)
    } else {
        Err(ExpError::NoMediator(format!("{violations:?}")))
    }
}

/// An exponential `(G)^(F)` in the slice over `B`, for `F: A → B` and `G: C → B`.
///
/// Objects are `(b, H)` with `H: A_b → C` landing in the fiber of `G` over `b`; `proj` is
/// the structure map `E → B` and `eval: E ×_B A → C` lies over `B`.
#[derive(Debug, Clone)]
pub struct SliceExponential {
    pub exponential: PartialProduct,
    pub structure: QFunctor,
}

impl SliceExponential {
    pub fn category(&self) -> &Arc<QCategory> {
        &self.exponential.category
    }

    pub fn proj(&self) -> &QFunctor {
        &self.exponential.proj
    }
}

pub fn slice_exponential(f: &QFunctor, g: &QFunctor) -> Result<SliceExponential, ExpError> {
    FiberedFunctor::new(f)?.slice_exponential(g)
}

impl FiberedFunctor {
    pub fn slice_exponential(&self, g: &QFunctor) -> Result<SliceExponential, ExpError> {
        if !Arc::ptr_eq(g.cod(), self.cod()) && g.cod() != self.cod() {
            return Err(crate::qcat::QCatError::NonComposable("both functors must land in the same base").into());
        }
        let violations = g.verify();
        if !violations.is_empty() {
            return Err(ExpError::InvalidFunctor(violations));
        }
        let report = self.exponentiability();
        if !report.verdict {
            return Err(ExpError::ConditionViolated(Box::new(report)));
        }
        let target = g.dom();
        let (objects, hom) = fiberwise_construction(self, target, |b| g.preimage(b))?;
        let exponential = PartialProduct::assemble(self.functor(), target, objects, hom)?;
        check_constructed(&exponential)?;
        Ok(SliceExponential { exponential, structure: g.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expcheck::test_support::*;
    use crate::qcat::test_support::*;
    use crate::qcat::{find_isomorphism, point, terminal};

    #[test]
    fn along_terminal_recovers_base() {
        let q = bool_base();
        let f = QFunctor::new(chain(&q, 3), chain(&q, 2), vec![0, 0, 1]).unwrap();
        let pp = partial_product(&f, &terminal(&q)).unwrap();
        assert!(find_isomorphism(&pp.category, f.cod()).is_some());
        assert_eq!(pp.proj.map(), &[0, 1]);
    }

    #[test]
    fn identity_gives_product() {
        let q = bool_base();
        let (b, c) = (chain(&q, 2), chain(&q, 3));
        let pp = partial_product(&QFunctor::identity(&b), &c).unwrap();
        assert_eq!(pp.category.len(), 6);
        for (i2, (b2, h2)) in pp.objects.iter().enumerate() {
            for (i, (b1, h)) in pp.objects.iter().enumerate() {
                let expected = b.hom(*b2, *b1).min(c.hom(h2[0], h[0]));
                assert_eq!(pp.category.hom(i2, i), expected);
            }
        }
    }

    #[test]
    fn skip_functor_is_refused() {
        let q = bool_base();
        assert!(matches!(partial_product(&f_skip(), &terminal(&q)), Err(ExpError::ConditionViolated(_))));
    }

    #[test]
    fn point_cone_picks_out_object() {
        let q = bool_base();
        let (b, c) = (chain(&q, 2), chain(&q, 2));
        let f = QFunctor::identity(&b);
        let pp = partial_product(&f, &c).unwrap();
        let p = point(&b, 1).unwrap();
        let pb = pullback(&p, &f).unwrap();
        let e = QFunctor::new(pb.category.clone(), c.clone(), vec![0]).unwrap();
        let k = mediating(&pp, &p, &e).unwrap();
        assert_eq!(pp.objects[k.apply(0)], (1, vec![0]));
    }

    #[test]
    fn identity_cone_mediates_to_identity() {
        let q = bool_base();
        let f = QFunctor::new(chain(&q, 2), chain(&q, 2), vec![0, 1]).unwrap();
        let c = chain(&q, 2);
        let pp = partial_product(&f, &c).unwrap();
        let k = mediating(&pp, &pp.proj, &pp.eval).unwrap();
        assert_eq!(k.map(), (0..pp.category.len()).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn slice_exponential_over_identity_structure() {
        let q = bool_base();
        let b = chain(&q, 3);
        let f = identity_on(3);
        let e = slice_exponential(&f, &QFunctor::identity(&b)).unwrap();
        assert!(find_isomorphism(e.category(), &b).is_some());
    }
}
