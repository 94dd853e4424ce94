use std::collections::HashSet;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{verify_universal_property, Budget, Exhausted, Meter, OracleFailure, ProbeFamily};
use crate::expcheck::PartialProduct;
use crate::qcat::arrow_category;
use crate::qcat::{
    collage, enumerate_functors, fiber, pullback, random_distributor, terminal, triple_collage, Fiber, QCategory,
    QDistributor, QFunctor,
};
use crate::quantaloid::Quantaloid;

/// A category `C` along which a partial product is searched for.
#[derive(Debug, Clone)]
pub struct Target {
    pub label: String,
    pub category: Arc<QCategory>,
}

#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    pub budget: Budget,
    /// Probe categories for the universal property; the standard family when `None`.
    pub probes: Option<ProbeFamily>,
    /// Extra random distributors per ordered pair of fibers.
    pub samples: usize,
    pub seed: u64,
    /// Targets with more objects are skipped (and counted).
    pub max_target_objects: Option<usize>,
}

/// Why a functor was found not to be exponentiable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub target: String,
    pub target_objects: usize,
    pub detail: String,
    /// The last universal-property failure of a candidate, when some candidate was a
    /// category.
    pub failure: Option<OracleFailure>,
    pub candidates_tried: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BruteForceVerdict {
    Exponentiable { targets: usize, skipped: usize, work: u64 },
    NotExponentiable(Evidence),
    Inconclusive { targets_done: usize, work: u64, budget: u64 },
}

impl BruteForceVerdict {
    pub fn is_exponentiable(&self) -> Option<bool> {
        match self {
            Self::Exponentiable { .. } => Some(true),
            Self::NotExponentiable(_) => Some(false),
            Self::Inconclusive { .. } => None,
        }
    }
}

/// `(f ∧ A(a', a))` from `A_b` to `A_b'`, for `f ≤ B(b', b)`.
fn restricted(f_cat: &QFunctor, src: &Fiber, dst: &Fiber, f: usize) -> QDistributor {
    let a_cat = f_cat.dom();
    let q = a_cat.base();
    let (t, t2) = (src.category.types().first().copied(), dst.category.types().first().copied());
    QDistributor::from_fn(src.category.clone(), dst.category.clone(), |y, x| {
        let lattice = q.hom(t.expect("nonempty"), t2.expect("nonempty"));
        lattice.meet2(f, a_cat.hom(dst.members[y], src.members[x]))
    })
}

fn distributors(f_cat: &QFunctor, fibers: &[Fiber], b: usize, b2: usize) -> Vec<(String, QDistributor)> {
    let (src, dst) = (&fibers[b], &fibers[b2]);
    let (x, y) = (&src.category, &dst.category);
    let b_cat = f_cat.cod();
    let mut out = vec![
        ("zero".to_string(), QDistributor::zero(x.clone(), y.clone())),
        ("top".to_string(), QDistributor::top(x.clone(), y.clone())),
    ];
    if !src.is_empty() && !dst.is_empty() {
        let lattice = b_cat.base().hom(b_cat.ty(b), b_cat.ty(b2));
        for f in lattice.below(b_cat.hom(b2, b)) {
            out.push((format!("restrict({})", lattice.name(f)), restricted(f_cat, src, dst, f)));
        }
    }
    out.retain(|(_, d)| d.is_valid());
    out
}

/// The categories `C` tried by the brute-force search, deduplicated, with the number skipped
/// for size.
///
/// The corpus holds the terminal category, collages of distributors between fibers
/// (zero, top, `f ∧ A`, and seeded random ones), triple collages of the `f ∧ A`
/// distributors along composable pairs, and `P_f` for every Q-arrow `f`.
pub fn target_corpus(f: &QFunctor, options: &SearchOptions) -> (Vec<Target>, usize) {
    let q = f.dom().base();
    let b_cat = f.cod();
    let fibers: Vec<Fiber> = b_cat.objects().map(|b| fiber(f, b).expect("object in range")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut candidates = vec![Target { label: "terminal".into(), category: terminal(q) }];
    for b in b_cat.objects() {
        for b2 in b_cat.objects() {
            for (name, d) in distributors(f, &fibers, b, b2) {
                let label = format!("collage {name}: {} -> {}", b_cat.name(b), b_cat.name(b2));
                candidates.push(Target { label, category: collage(&d).category });
            }
            for i in 0..options.samples {
                let d = random_distributor(&mut rng, &fibers[b].category, &fibers[b2].category);
                let label = format!("collage random#{i}: {} -> {}", b_cat.name(b), b_cat.name(b2));
                candidates.push(Target { label, category: collage(&d).category });
            }
        }
    }
    for b in b_cat.objects() {
        for b1 in b_cat.objects() {
            for b2 in b_cat.objects() {
                let (first, second) = (distributors(f, &fibers, b, b1), distributors(f, &fibers, b1, b2));
                for (n1, phi) in first.iter().filter(|(n, _)| n.starts_with("restrict")) {
                    for (n2, psi) in second.iter().filter(|(n, _)| n.starts_with("restrict")) {
                        let tc = triple_collage(phi, psi).expect("composable");
                        let label =
                            format!("triple {n1}, {n2}: {} -> {} -> {}", b_cat.name(b), b_cat.name(b1), b_cat.name(b2));
                        candidates.push(Target { label, category: tc.category });
                    }
                }
            }
        }
    }
    for a in q.arrows() {
        let label = format!("P({}: {}->{})", q.hom(a.src, a.tgt).name(a.elem), q.name(a.src), q.name(a.tgt));
        candidates.push(Target { label, category: arrow_category(q, &a).expect("well typed") });
    }
    let mut seen = HashSet::new();
    let mut skipped = 0;
    let mut out = Vec::new();
    for t in candidates {
        if !seen.insert((t.category.types().to_vec(), t.category.hom_rows())) {
            continue;
        }
        if options.max_target_objects.is_some_and(|m| t.category.len() > m) {
            skipped += 1;
            continue;
        }
        out.push(t);
    }
    out.sort_by_key(|t| t.category.len());
    (out, skipped)
}

enum Search {
    Found,
    Refuted(Evidence),
}

/// Decides exponentiability of `F` by searching, for each target `C`, for a hom table on
/// the objects `(b, H: A_b → C)` that makes a partial product.
///
/// Hom values are bounded below by the cones out of the probes (each cone forces its
/// mediator's object map) and above by `B` and by functoriality of the evaluation. Every
/// assignment in between that forms a category is checked with
/// [`verify_universal_property`].
pub fn brute_force_exponentiable(f: &QFunctor, options: &SearchOptions) -> BruteForceVerdict {
    let probes = options.probes.clone().unwrap_or_else(|| ProbeFamily::standard(f.dom().base()));
    let (targets, skipped) = target_corpus(f, options);
    let mut meter = Meter::new(options.budget);
    for (i, t) in targets.iter().enumerate() {
        match search_target(f, t, &probes, options.probes.as_ref(), &mut meter, options.budget) {
            Ok(Search::Found) => {}
            Ok(Search::Refuted(e)) => return BruteForceVerdict::NotExponentiable(e),
            Err(Exhausted) => {
                return BruteForceVerdict::Inconclusive {
                    targets_done: i,
                    work: meter.used(),
                    budget: options.budget.max_work,
                }
            }
        }
    }
    BruteForceVerdict::Exponentiable { targets: targets.len(), skipped, work: meter.used() }
}

fn search_target(
    f: &QFunctor,
    target: &Target,
    probes: &ProbeFamily,
    options_probes: Option<&ProbeFamily>,
    meter: &mut Meter,
    budget: Budget,
) -> Result<Search, Exhausted> {
    let c = &target.category;
    let b_cat = f.cod();
    let a_cat = f.dom();
    let q = a_cat.base();
    let fibers: Vec<Fiber> = b_cat.objects().map(|b| fiber(f, b).expect("object in range")).collect();

    let mut objects = Vec::new();
    for b in b_cat.objects() {
        for h in enumerate_functors(&fibers[b].category, c) {
            meter.tick()?;
            objects.push((b, h.map().to_vec()));
        }
    }
    let n = objects.len();
    let lattice = |p2: usize, p: usize| q.hom(b_cat.ty(objects[p].0), b_cat.ty(objects[p2].0));

    // Values allowed by `B` and by functoriality of the evaluation. Their join is the
    // bound forced by the `P_f` cones from `(b, H)` to `(b', H')`; the point cones force
    // units on the diagonal.
    let mut admissible = Vec::with_capacity(n * n);
    for slot in 0..n * n {
        meter.tick()?;
        let (p2, p) = (slot / n, slot % n);
        let ((b2, h2), (b, h)) = (&objects[p2], &objects[p]);
        let l = lattice(p2, p);
        let allowed: Vec<usize> = l
            .below(b_cat.hom(*b2, *b))
            .filter(|&v| {
                fibers[*b2].members.iter().enumerate().all(|(j2, &a2)| {
                    fibers[*b]
                        .members
                        .iter()
                        .enumerate()
                        .all(|(j, &a)| l.leq(l.meet2(v, a_cat.hom(a2, a)), c.hom(h2[j2], h[j])))
                })
            })
            .collect();
        let mut lower = l.join(allowed.iter().copied());
        if p2 == p {
            lower = l.join2(lower, q.unit(b_cat.ty(*b)));
        }
        admissible.push((lower, allowed));
    }
    if let Some(extra) = options_probes {
        cone_bounds(f, c, &fibers, &objects, extra, &mut admissible, meter)?;
    }
    let mut values = Vec::with_capacity(n * n);
    for (slot, (lower, allowed)) in admissible.into_iter().enumerate() {
        let l = lattice(slot / n, slot % n);
        let v: Vec<usize> = allowed.into_iter().filter(|&v| l.leq(lower, v)).collect();
        if v.is_empty() {
            let (p2, p) = (slot / n, slot % n);
            return Ok(Search::Refuted(Evidence {
                target: target.label.clone(),
                target_objects: c.len(),
                detail: format!(
                    "no admissible hom-arrow from {} to {}: every value at least the cone bound breaks B or the evaluation",
                    describe(b_cat, c, &objects[p]),
                    describe(b_cat, c, &objects[p2])
                ),
                failure: None,
                candidates_tried: 0,
            }));
        }
        values.push(v);
    }
    let admissible = values;

    let types: Vec<usize> = objects.iter().map(|(b, _)| b_cat.ty(*b)).collect();
    let mut tried = 0u64;
    let mut last_failure = None;
    let mut attempt = |hom: &[usize], meter: &mut Meter| -> Result<bool, Exhausted> {
        tried += 1;
        meter.tick()?;
        let rows = (0..n).map(|r| hom[r * n..(r + 1) * n].to_vec()).collect();
        let pp = PartialProduct::assemble(f, c, objects.clone(), rows).expect("well-typed table");
        if !(pp.proj.is_valid() && pp.eval.is_valid()) {
            return Ok(false);
        }
        let verdict = verify_universal_property(&pp, probes, Budget::new(budget.max_work.saturating_sub(meter.used())));
        meter.charge(verdict.work)?;
        if verdict.is_inconclusive() {
            return Err(Exhausted);
        }
        last_failure = verdict.failures.into_iter().next();
        Ok(last_failure.is_none())
    };

    if admissible.iter().all(|v| v.len() == 1) {
        let hom: Vec<usize> = admissible.iter().map(|v| v[0]).collect();
        meter.charge((n * n) as u64)?;
        if is_category(q, &types, &hom) && attempt(&hom, meter)? {
            return Ok(Search::Found);
        }
    } else if backtrack(q, &types, &admissible, meter, &mut attempt)? {
        return Ok(Search::Found);
    }
    let detail = if last_failure.is_some() {
        "no admissible hom table satisfies the universal property".to_string()
    } else {
        "no admissible hom table is a category".to_string()
    };
    Ok(Search::Refuted(Evidence {
        target: target.label.clone(),
        target_objects: c.len(),
        detail,
        failure: last_failure,
        candidates_tried: tried,
    }))
}

/// Whether a full hom table satisfies the unit and composition laws. Only pairs of
/// non-bottom arrows are composed, since composing with a bottom arrow gives bottom.
fn is_category(q: &Quantaloid, types: &[usize], hom: &[usize]) -> bool {
    let n = types.len();
    let nonzero = |z: usize, y: usize| hom[z * n + y] != q.zero(types[y], types[z]);
    if !(0..n).all(|x| q.hom(types[x], types[x]).leq(q.unit(types[x]), hom[x * n + x])) {
        return false;
    }
    let into: Vec<Vec<usize>> = (0..n).map(|y| (0..n).filter(|&z| nonzero(z, y)).collect()).collect();
    for y in 0..n {
        for x in (0..n).filter(|&x| nonzero(y, x)) {
            for &z in &into[y] {
                let composite = q.comp(types[x], types[y], types[z], hom[z * n + y], hom[y * n + x]);
                if !q.hom(types[x], types[z]).leq(composite, hom[z * n + x]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Depth-first search over row-major hom tables drawn from `admissible`, pruning on every
/// composition law whose three entries are already placed. Calls `attempt` on each complete
/// table and stops at the first success.
fn backtrack(
    q: &Quantaloid,
    types: &[usize],
    admissible: &[Vec<usize>],
    meter: &mut Meter,
    attempt: &mut impl FnMut(&[usize], &mut Meter) -> Result<bool, Exhausted>,
) -> Result<bool, Exhausted> {
    let n = types.len();
    let consistent = |hom: &[usize], k: usize| -> bool {
        let (p2, p) = (k / n, k % n);
        let ok = |z: usize, y: usize, x: usize| {
            let composite = q.comp(types[x], types[y], types[z], hom[z * n + y], hom[y * n + x]);
            q.hom(types[x], types[z]).leq(composite, hom[z * n + x])
        };
        (0..n).all(|x| p * n + x > k || p2 * n + x > k || ok(p2, p, x))
            && (0..n).all(|z| z * n + p2 > k || z * n + p > k || ok(z, p2, p))
            && (0..n).all(|y| p2 * n + y > k || y * n + p > k || ok(p2, y, p))
    };
    let slots = n * n;
    let mut hom = vec![0; slots];
    let mut idx = vec![0usize; slots + 1];
    let mut k = 0;
    loop {
        if k == slots {
            if attempt(&hom, meter)? {
                return Ok(true);
            }
            if k == 0 {
                return Ok(false);
            }
            k -= 1;
            idx[k] += 1;
            continue;
        }
        let mut placed = false;
        while idx[k] < admissible[k].len() {
            meter.tick()?;
            hom[k] = admissible[k][idx[k]];
            if consistent(&hom, k) {
                placed = true;
                break;
            }
            idx[k] += 1;
        }
        if placed {
            k += 1;
            idx[k] = 0;
        } else {
            idx[k] = 0;
            if k == 0 {
                return Ok(false);
            }
            k -= 1;
            idx[k] += 1;
        }
    }
}

/// Raises lower bounds with the cones out of extra probe categories: each cone forces the
/// object map of its mediator.
fn cone_bounds(
    f: &QFunctor,
    c: &Arc<QCategory>,
    fibers: &[Fiber],
    objects: &[(usize, Vec<usize>)],
    probes: &ProbeFamily,
    bounds: &mut [(usize, Vec<usize>)],
    meter: &mut Meter,
) -> Result<(), Exhausted> {
    let b_cat = f.cod();
    let q = b_cat.base();
    let n = objects.len();
    for probe in &probes.probes {
        for p_map in enumerate_functors(&probe.category, b_cat) {
            meter.tick()?;
            let pb = pullback(&p_map, f).expect("common codomain");
            for e in enumerate_functors(&pb.category, c) {
                meter.tick()?;
                let k: Vec<usize> = probe
                    .category
                    .objects()
                    .map(|x| {
                        let b = p_map.apply(x);
                        let h: Vec<usize> = fibers[b]
                            .members
                            .iter()
                            .map(|&a| e.apply(pb.index_of(x, a).expect("a lies over b")))
                            .collect();
                        objects.binary_search_by(|(b0, h0)| (*b0, h0.as_slice()).cmp(&(b, &h))).expect("H is a functor")
                    })
                    .collect();
                for x2 in probe.category.objects() {
                    for x in probe.category.objects() {
                        let (t, t2) = (b_cat.ty(objects[k[x]].0), b_cat.ty(objects[k[x2]].0));
                        let slot = &mut bounds[k[x2] * n + k[x]].0;
                        *slot = q.hom(t, t2).join2(*slot, probe.category.hom(x2, x));
                    }
                }
            }
        }
    }
    Ok(())
}

fn describe(b_cat: &QCategory, c: &QCategory, (b, h): &(usize, Vec<usize>)) -> String {
    let images: Vec<&str> = h.iter().map(|&x| c.name(x)).collect();
    format!("({}, [{}])", b_cat.name(*b), images.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expcheck::test_support::{f_skip, identity_on};
    use crate::qcat::test_support::*;

    #[test]
    fn identity_is_exponentiable() {
        let f = identity_on(2);
        let verdict = brute_force_exponentiable(&f, &SearchOptions::default());
        assert_eq!(verdict.is_exponentiable(), Some(true), "{verdict:?}");
    }

    #[test]
    fn skipping_functor_is_refuted() {
        let verdict = brute_force_exponentiable(&f_skip(), &SearchOptions::default());
        let BruteForceVerdict::NotExponentiable(evidence) = verdict else { panic!("{verdict:?}") };
        assert!(evidence.target.starts_with("collage"), "{evidence:?}");
    }

    #[test]
    fn corpus_is_deduplicated_and_valid() {
        let (targets, skipped) = target_corpus(&f_skip(), &SearchOptions { samples: 2, ..Default::default() });
        assert_eq!(skipped, 0);
        let keys: HashSet<_> = targets.iter().map(|t| (t.category.types().to_vec(), t.category.hom_rows())).collect();
        assert_eq!(keys.len(), targets.len());
        assert!(targets.iter().all(|t| t.category.is_valid()));
    }

    #[test]
    fn size_limit_counts_skips() {
        let options = SearchOptions { max_target_objects: Some(1), ..Default::default() };
        let (targets, skipped) = target_corpus(&f_skip(), &options);
        assert!(skipped > 0);
        assert!(targets.iter().all(|t| t.category.len() <= 1));
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let q = bool_base();
        let f = QFunctor::identity(&chain(&q, 2));
        let verdict = brute_force_exponentiable(&f, &SearchOptions { budget: Budget::new(5), ..Default::default() });
        assert_eq!(verdict.is_exponentiable(), None);
    }
}
