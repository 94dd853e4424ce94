use std::sync::Arc;

use super::{enumerate_qcategories_up_to, Budget, Exhausted, FailureReason, Meter, OracleFailure, OracleVerdict};
use crate::expcheck::SliceExponential;
use crate::qcat::{enumerate_functors, pullback, FunctorSearch, Pullback, QCategory, QFunctor};

/// An object `p: X → B` of the slice over `B`.
#[derive(Debug, Clone)]
pub struct SliceProbe {
    pub label: String,
    pub map: QFunctor,
}

/// Every functor into `B` from a category with at most `max_objects` objects.
pub fn slice_probes(b: &Arc<QCategory>, max_objects: usize) -> Vec<SliceProbe> {
    let mut out = Vec::new();
    for (i, x) in enumerate_qcategories_up_to(b.base(), max_objects).into_iter().enumerate() {
        let x = Arc::new(x);
        for (j, p) in enumerate_functors(&x, b).enumerate() {
            out.push(SliceProbe { label: format!("small#{i}/map#{j}"), map: p });
        }
    }
    out
}

/// Checks that currying is a bijection between slice morphisms `X ×_B A → C` over `B` and
/// slice morphisms `X → E` over `B`, for every probe `p: X → B`, where `E` is the candidate
/// exponential of `G: C → B` along `F: A → B`.
pub fn check_adjunction_bijection(
    f: &QFunctor,
    g: &QFunctor,
    exp: &SliceExponential,
    probes: &[SliceProbe],
    budget: Budget,
) -> OracleVerdict {
    let mut meter = Meter::new(budget);
    let mut failures = Vec::new();
    if let Some(detail) = structure_problem(f, g, exp) {
        failures.push(OracleFailure {
            probe: 0,
            label: "exponential".into(),
            p_map: Vec::new(),
            cone: None,
            mediator: None,
            reason: FailureReason::InvalidStructure,
            detail,
        });
        return OracleVerdict::finish(failures, &meter, budget, false);
    }
    let exhausted = run(f, g, exp, probes, &mut meter, &mut failures).is_err();
    OracleVerdict::finish(failures, &meter, budget, exhausted)
}

fn structure_problem(f: &QFunctor, g: &QFunctor, exp: &SliceExponential) -> Option<String> {
    let e = &exp.exponential;
    let violations = e.category.verify();
    if !violations.is_empty() {
        return Some(format!("E is not a category: {violations:?}"));
    }
    if !e.proj.is_valid() {
        return Some("the projection E -> B is not a functor".into());
    }
    if !e.eval.is_valid() {
        return Some("the evaluation is not a functor".into());
    }
    if e.functor().map() != f.map() || !Arc::ptr_eq(e.target(), g.dom()) && e.target() != g.dom() {
        return Some("the exponential was built for other functors".into());
    }
    let over_b = e.pullback.pairs.iter().enumerate().all(|(i, &(p, _))| g.apply(e.eval.apply(i)) == e.proj.apply(p));
    if !over_b {
        return Some("the evaluation does not lie over B".into());
    }
    None
}

fn run(
    f: &QFunctor,
    g: &QFunctor,
    exp: &SliceExponential,
    probes: &[SliceProbe],
    meter: &mut Meter,
    failures: &mut Vec<OracleFailure>,
) -> Result<(), Exhausted> {
    let e = &exp.exponential;
    for (pi, probe) in probes.iter().enumerate() {
        let p = &probe.map;
        let x = p.dom();
        let pb = pullback(p, f).expect("common codomain");
        let record = |failures: &mut Vec<OracleFailure>, cone, mediator, reason, detail| {
            failures.push(OracleFailure {
                probe: pi,
                label: probe.label.clone(),
                p_map: p.map().to_vec(),
                cone,
                mediator,
                reason,
                detail,
            });
            failures.len() >= OracleVerdict::MAX_FAILURES
        };

        let l_candidates = pb.pairs.iter().map(|&(x, _)| g.preimage(p.apply(x))).collect();
        for l in FunctorSearch::with_candidates(&pb.category, g.dom(), l_candidates) {
            meter.tick()?;
            let problem = match curry(exp, p, &pb, &l) {
                Err(detail) => Some((FailureReason::CurryFails, detail)),
                Ok(r) => match uncurry(exp, &pb, &r) {
                    Ok(back) if back.map() == l.map() => None,
                    Ok(back) => Some((FailureReason::RoundTrip, format!("uncurry(curry L) = {:?}", back.map()))),
                    Err(detail) => Some((FailureReason::RoundTrip, detail)),
                },
            };
            if let Some((reason, detail)) = problem {
                if record(failures, Some(l.map().to_vec()), None, reason, detail) {
                    return Ok(());
                }
            }
        }

        let r_candidates =
            x.objects().map(|i| e.category.objects().filter(|&j| e.proj.apply(j) == p.apply(i)).collect()).collect();
        for r in FunctorSearch::with_candidates(x, &e.category, r_candidates) {
            meter.tick()?;
            let problem = match uncurry(exp, &pb, &r) {
                Err(detail) => Some((FailureReason::UncurryFails, detail)),
                Ok(l) => match curry(exp, p, &pb, &l) {
                    Ok(back) if back.map() == r.map() => None,
                    Ok(back) => Some((FailureReason::RoundTrip, format!("curry(uncurry R) = {:?}", back.map()))),
                    Err(detail) => Some((FailureReason::RoundTrip, detail)),
                },
            };
            if let Some((reason, detail)) = problem {
                if record(failures, None, Some(r.map().to_vec()), reason, detail) {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

/// `R(x) = (p x, L(x, −))`.
fn curry(exp: &SliceExponential, p: &QFunctor, pb: &Pullback, l: &QFunctor) -> Result<QFunctor, String> {
    let e = &exp.exponential;
    let f = e.functor();
    let mut map = Vec::with_capacity(p.dom().len());
    for x in p.dom().objects() {
        let b = p.apply(x);
        let h: Vec<usize> =
            f.preimage(b).into_iter().map(|a| l.apply(pb.index_of(x, a).expect("lies over b"))).collect();
        match e.object_index(b, &h) {
            Some(i) => map.push(i),
            None => return Err(format!("L({x}, -) = {h:?} is not an object of E")),
        }
    }
    let r = QFunctor::new(p.dom().clone(), e.category.clone(), map).map_err(|err| err.to_string())?;
    let violations = r.verify();
    if violations.is_empty() {
        Ok(r)
    } else {
        Err(format!("the curried map is not a functor: {violations:?}"))
    }
}

/// `L(x, a) = eval(R x, a)`.
fn uncurry(exp: &SliceExponential, pb: &Pullback, r: &QFunctor) -> Result<QFunctor, String> {
    let e = &exp.exponential;
    let map = pb
        .pairs
        .iter()
        .map(|&(x, a)| e.eval.apply(e.pullback.index_of(r.apply(x), a).expect("R lies over p")))
        .collect();
    let l = QFunctor::new(pb.category.clone(), exp.structure.dom().clone(), map).map_err(|err| err.to_string())?;
    let violations = l.verify();
    if violations.is_empty() {
        Ok(l)
    } else {
        Err(format!("the uncurried map is not a functor: {violations:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expcheck::slice_exponential;
    use crate::qcat::test_support::*;

    fn setup() -> (QFunctor, QFunctor) {
        let q = bool_base();
        let b = chain(&q, 2);
        let f = QFunctor::new(chain(&q, 3), b.clone(), vec![0, 1, 1]).unwrap();
        let g = QFunctor::new(chain(&q, 2), b, vec![0, 1]).unwrap();
        (f, g)
    }

    #[test]
    fn constructed_exponential_passes() {
        let (f, g) = setup();
        let exp = slice_exponential(&f, &g).unwrap();
        let probes = slice_probes(f.cod(), 2);
        let verdict = check_adjunction_bijection(&f, &g, &exp, &probes, Budget::default());
        assert!(verdict.passed(), "{verdict:?}");
    }

    #[test]
    fn lowered_hom_is_caught() {
        let (f, g) = setup();
        let mut exp = slice_exponential(&f, &g).unwrap();
        let e = &exp.exponential;
        let (i2, i) = (0..e.category.len())
            .flat_map(|i2| (0..e.category.len()).map(move |i| (i2, i)))
            .find(|&(i2, i)| i2 != i && e.category.hom(i2, i) == 1)
            .unwrap();
        exp.exponential = e.with_hom(i2, i, 0).unwrap();
        let verdict = check_adjunction_bijection(&f, &g, &exp, &slice_probes(f.cod(), 2), Budget::default());
        assert!(!verdict.passed());
    }

    #[test]
    fn probe_count() {
        let q = bool_base();
        let b = chain(&q, 1);
        assert_eq!(slice_probes(&b, 2).len(), 1 + 1 + 4);
    }
}
