use super::{Budget, Exhausted, FailureReason, Meter, OracleFailure, OracleVerdict, ProbeFamily};
use crate::expcheck::PartialProduct;
use std::collections::HashMap;
use std::sync::Arc;

use crate::qcat::{enumerate_functors, pullback, FunctorSearch, Pullback, QCategory, QFunctor};

/// Objects of `P` grouped by their label `[b, H…]`, which fixes both `proj` and `eval`.
type ObjectIndex = HashMap<Vec<usize>, Vec<usize>>;

fn object_index(pp: &PartialProduct) -> ObjectIndex {
    let mut index: ObjectIndex = HashMap::new();
    for (p, (b, h)) in pp.objects.iter().enumerate() {
        let mut key = Vec::with_capacity(h.len() + 1);
        key.push(*b);
        key.extend_from_slice(h);
        index.entry(key).or_default().push(p);
    }
    index
}

/// `starts[x]..starts[x + 1]` are the pullback objects `(x, a)`, in increasing `a`.
fn block_starts(pb: &Pullback, n: usize) -> Vec<usize> {
    let mut starts = vec![0; n + 1];
    for &(x, _) in &pb.pairs {
        starts[x + 1] += 1;
    }
    for x in 0..n {
        starts[x + 1] += starts[x];
    }
    starts
}

struct Context<'a> {
    pp: &'a PartialProduct,
    index: ObjectIndex,
    starts: Vec<usize>,
}

impl<'a> Context<'a> {
    fn new(pp: &'a PartialProduct) -> Self {
        Self { pp, index: object_index(pp), starts: block_starts(&pp.pullback, pp.category.len()) }
    }
}

/// Checks the universal property of a candidate partial product against every cone out of
/// every probe.
///
/// For a probe `P'`, a cone is a functor `P'ₘ: P' → B` with a functor
/// `E': P' ×_B A → C`. Each cone must have exactly one `K: P' → P` with `proj ∘ K = P'ₘ` and
/// `eval ∘ (K ×_B 1) = E'`, and each functor `K` must induce a cone.
pub fn verify_universal_property(pp: &PartialProduct, probes: &ProbeFamily, budget: Budget) -> OracleVerdict {
    let mut meter = Meter::new(budget);
    let mut failures = Vec::new();
    let exhausted = run(pp, probes, &mut meter, &mut failures).is_err();
    OracleVerdict::finish(failures, &meter, budget, exhausted)
}

fn run(
    pp: &PartialProduct,
    probes: &ProbeFamily,
    meter: &mut Meter,
    failures: &mut Vec<OracleFailure>,
) -> Result<(), Exhausted> {
    let f = pp.functor();
    let cx = Context::new(pp);
    let mut key = Vec::new();
    for (pi, probe) in probes.probes.iter().enumerate() {
        let p_cat = &probe.category;
        for p_map in enumerate_functors(p_cat, f.cod()) {
            meter.tick()?;
            let pb = pullback(&p_map, f).expect("common codomain");
            let cone_starts = block_starts(&pb, p_cat.len());
            for e in enumerate_functors(&pb.category, pp.target()) {
                meter.tick()?;
                if let Some((reason, detail)) = check_cone(&cx, p_cat, &p_map, &cone_starts, &e, &mut key) {
                    failures.push(failure(pi, &probe.label, &p_map, Some(&e), None, reason, detail));
                    if failures.len() >= OracleVerdict::MAX_FAILURES {
                        return Ok(());
                    }
                }
            }
            for k in over_map(pp, p_cat, &p_map) {
                meter.tick()?;
                if let Some((reason, detail)) = check_mediator(&cx, &pb, &cone_starts, &k) {
                    failures.push(failure(pi, &probe.label, &p_map, None, Some(&k), reason, detail));
                    if failures.len() >= OracleVerdict::MAX_FAILURES {
                        return Ok(());
                    }
                }
            }
        }
    }
    Ok(())
}

fn failure(
    probe: usize,
    label: &str,
    p_map: &QFunctor,
    cone: Option<&QFunctor>,
    mediator: Option<&QFunctor>,
    reason: FailureReason,
    detail: String,
) -> OracleFailure {
    OracleFailure {
        probe,
        label: label.to_string(),
        p_map: p_map.map().to_vec(),
        cone: cone.map(|e| e.map().to_vec()),
        mediator: mediator.map(|k| k.map().to_vec()),
        reason,
        detail,
    }
}

/// All functors `K: P' → P` with `proj ∘ K = P'ₘ`.
fn over_map(pp: &PartialProduct, p_cat: &Arc<QCategory>, p_map: &QFunctor) -> FunctorSearch {
    let candidates = p_cat
        .objects()
        .map(|x| pp.category.objects().filter(|&p| pp.proj.apply(p) == p_map.apply(x)).collect())
        .collect();
    FunctorSearch::with_candidates(p_cat, &pp.category, candidates)
}

/// Counts the mediators of one cone, stopping at two. `K(x)` must lie over `P'ₘ x` and
/// evaluate to `E'(x, −)`; the index lists the objects of `P` doing so.
fn check_cone(
    cx: &Context,
    p_cat: &Arc<QCategory>,
    p_map: &QFunctor,
    cone_starts: &[usize],
    e: &QFunctor,
    key: &mut Vec<usize>,
) -> Option<(FailureReason, String)> {
    let pp = cx.pp;
    let mut candidates: Vec<&[usize]> = Vec::with_capacity(p_cat.len());
    for x in p_cat.objects() {
        key.clear();
        key.push(p_map.apply(x));
        key.extend_from_slice(&e.map()[cone_starts[x]..cone_starts[x + 1]]);
        match cx.index.get(key.as_slice()) {
            Some(list) => candidates.push(list),
            None => return Some((FailureReason::NoMediator, "no functor satisfies both equations".into())),
        }
    }
    if candidates.iter().all(|c| c.len() == 1) {
        let q = p_cat.base();
        let functorial = p_cat.objects().all(|x2| {
            p_cat.objects().all(|x| {
                q.hom(p_cat.ty(x), p_cat.ty(x2))
                    .leq(p_cat.hom(x2, x), pp.category.hom(candidates[x2][0], candidates[x][0]))
            })
        });
        return if functorial {
            None
        } else {
            let k: Vec<usize> = candidates.iter().map(|c| c[0]).collect();
            Some((FailureReason::NoMediator, format!("the only candidate {k:?} is not a functor")))
        };
    }
    let candidates = candidates.into_iter().map(|c| c.to_vec()).collect();
    let found: Vec<QFunctor> = FunctorSearch::with_candidates(p_cat, &pp.category, candidates).take(2).collect();
    match found.len() {
        1 => None,
        0 => Some((FailureReason::NoMediator, "no functor satisfies both equations".into())),
        _ => {
            Some((FailureReason::NonUniqueMediator, format!("mediators {:?} and {:?}", found[0].map(), found[1].map())))
        }
    }
}

/// Whether `K` induces a cone: `eval ∘ (K ×_B 1)` must be a functor.
fn check_mediator(
    cx: &Context,
    cone_pb: &Pullback,
    cone_starts: &[usize],
    k: &QFunctor,
) -> Option<(FailureReason, String)> {
    let pp = cx.pp;
    let mut map = Vec::with_capacity(cone_pb.pairs.len());
    for x in 0..cone_starts.len() - 1 {
        let s = cx.starts[k.apply(x)];
        map.extend((0..cone_starts[x + 1] - cone_starts[x]).map(|j| pp.eval.apply(s + j)));
    }
    let (d, c) = (&cone_pb.category, pp.target());
    let q = d.base();
    for i2 in d.objects() {
        for i in d.objects() {
            let (dom_hom, cod_hom) = (d.hom(i2, i), c.hom(map[i2], map[i]));
            if !q.hom(d.ty(i), d.ty(i2)).leq(dom_hom, cod_hom) {
                let detail = format!(
                    "induced evaluation is not a functor: hom {dom_hom} from {i} to {i2} exceeds {cod_hom} in the target"
                );
                return Some((FailureReason::EquationFails, detail));
            }
        }
    }
    None
}

/// Re-runs the single check recorded in `failure`; returns the reason it fails again, if it
/// does.
pub fn replay(pp: &PartialProduct, probes: &ProbeFamily, failure: &OracleFailure) -> Option<FailureReason> {
    let probe = probes.probes.get(failure.probe)?;
    let p_map = QFunctor::new(probe.category.clone(), pp.functor().cod().clone(), failure.p_map.clone()).ok()?;
    let pb = pullback(&p_map, pp.functor()).ok()?;
    if let Some(cone) = &failure.cone {
        let e = QFunctor::new(pb.category.clone(), pp.target().clone(), cone.clone()).ok()?;
        let starts = block_starts(&pb, probe.category.len());
        return check_cone(&Context::new(pp), &probe.category, &p_map, &starts, &e, &mut Vec::new()).map(|r| r.0);
    }
    if let Some(mediator) = &failure.mediator {
        let k = QFunctor::new(probe.category.clone(), pp.category.clone(), mediator.clone()).ok()?;
        if !k.is_valid() {
            return None;
        }
        let starts = block_starts(&pb, probe.category.len());
        return check_mediator(&Context::new(pp), &pb, &starts, &k).map(|r| r.0);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expcheck::partial_product;
    use crate::qcat::test_support::*;
    use crate::qcat::{collage, terminal, QDistributor};

    #[test]
    fn product_passes() {
        let q = bool_base();
        let b = chain(&q, 2);
        let c = chain(&q, 2);
        let pp = partial_product(&QFunctor::identity(&b), &c).unwrap();
        let verdict = verify_universal_property(&pp, &ProbeFamily::standard(&q), Budget::default());
        assert!(verdict.passed(), "{verdict:?}");
    }

    #[test]
    fn terminal_target_passes() {
        let q = bool_base();
        let f = QFunctor::new(chain(&q, 3), chain(&q, 2), vec![0, 0, 1]).unwrap();
        let pp = partial_product(&f, &terminal(&q)).unwrap();
        assert!(verify_universal_property(&pp, &ProbeFamily::standard(&q), Budget::default()).passed());
    }

    #[test]
    fn raised_hom_is_caught_and_replays() {
        let q = bool_base();
        let b = chain(&q, 2);
        let one = chain(&q, 1);
        let c = collage(&QDistributor::zero(one.clone(), one)).category;
        let pp = partial_product(&QFunctor::identity(&b), &c).unwrap();
        let probes = ProbeFamily::standard(&q);
        let (i2, i) = (0..pp.category.len())
            .flat_map(|i2| (0..pp.category.len()).map(move |i| (i2, i)))
            .find(|&(i2, i)| pp.category.hom(i2, i) == 0 && b.hom(pp.objects[i2].0, pp.objects[i].0) == 1)
            .unwrap();
        let tampered = pp.with_hom(i2, i, 1).unwrap();
        let verdict = verify_universal_property(&tampered, &probes, Budget::default());
        assert!(!verdict.passed());
        for failure in &verdict.failures {
            assert!(matches!(failure.reason, FailureReason::EquationFails | FailureReason::NonUniqueMediator));
            assert_eq!(replay(&tampered, &probes, failure), Some(failure.reason));
        }
    }

    #[test]
    fn lowered_hom_is_caught() {
        let q = bool_base();
        let b = chain(&q, 2);
        let pp = partial_product(&QFunctor::identity(&b), &terminal(&q)).unwrap();
        let tampered = pp.with_hom(1, 0, 0).unwrap();
        let verdict = verify_universal_property(&tampered, &ProbeFamily::standard(&q), Budget::default());
        assert!(verdict.failures.iter().any(|f| f.reason == FailureReason::NoMediator));
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let q = bool_base();
        let b = chain(&q, 2);
        let pp = partial_product(&QFunctor::identity(&b), &chain(&q, 2)).unwrap();
        let verdict = verify_universal_property(&pp, &ProbeFamily::standard(&q), Budget::new(3));
        assert!(verdict.is_inconclusive());
    }
}
