//! Rebuilds every committed fixture and compares it byte for byte with the file on disk.
//! Run with `QEXP_WRITE_FIXTURES=1` to rewrite the files instead.

use std::path::PathBuf;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qexp::expcheck::check_condition_one;
use qexp::instance::Instance;
use qexp::order::FiniteLattice;
use qexp::qcat::{random_category, random_functor, terminal, QCategory, QFunctor};
use qexp::quantaloid::{boolean_quantale, endo_quantale, Quantaloid};

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn named_preorder(q: &Arc<Quantaloid>, names: &[&str], leq: impl Fn(usize, usize) -> bool) -> Arc<QCategory> {
    let n = names.len();
    let rows = (0..n).map(|a2| (0..n).map(|a| usize::from(leq(a, a2))).collect()).collect();
    Arc::new(QCategory::new(q.clone(), names.iter().map(|s| s.to_string()).collect(), vec![0; n], rows).unwrap())
}

fn preorder_chain3() -> Instance {
    let q = Arc::new(boolean_quantale());
    let a = named_preorder(&q, &["a0", "a2"], |i, j| i <= j);
    let b = named_preorder(&q, &["b0", "b1", "b2"], |i, j| i <= j);
    let c = named_preorder(&q, &["c0", "c1"], |i, j| i <= j);
    let d = named_preorder(&q, &["d0", "d1", "d2"], |i, j| i == j);
    let mut inst = Instance::new(q.clone());
    inst.add_category("A", a.clone());
    inst.add_category("B", b.clone());
    inst.add_category("C", c.clone());
    inst.add_category("D", d.clone());
    inst.add_category("T", terminal(&q));
    let functors = [
        ("F_skip", "A", a, vec![0, 2]),
        ("id", "B", b.clone(), vec![0, 1, 2]),
        ("discrete", "D", d, vec![0, 1, 2]),
        ("G", "C", c, vec![0, 2]),
    ];
    for (name, dom_name, dom, map) in functors {
        inst.add_functor(name, dom_name, "B", QFunctor::new(dom, b.clone(), map).unwrap()).unwrap();
    }
    inst
}

/// The first seed whose random functor over the endomorphism quantale of `M3` violates
/// condition one, with a support image that is itself a functor of preorders.
fn endo_m3_search() -> (u64, QFunctor) {
    let q = Arc::new(endo_quantale(&FiniteLattice::m3()).unwrap());
    for seed in 0.. {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = Arc::new(random_category(&mut rng, &q, &[0]));
        let Some(f) = random_functor(&mut rng, &b, 2) else { continue };
        if !check_condition_one(&f).unwrap().verdict && support(&f).is_valid() {
            return (seed, f);
        }
    }
    unreachable!()
}

/// Replaces each hom-arrow by whether it is non-zero, giving a functor of preorders.
fn support(f: &QFunctor) -> QFunctor {
    let bool_q = Arc::new(boolean_quantale());
    let image = |c: &Arc<QCategory>| {
        let q = c.base();
        let rows = c
            .objects()
            .map(|a2| c.objects().map(|a| usize::from(c.hom(a2, a) != q.zero(c.ty(a), c.ty(a2)))).collect())
            .collect();
        QCategory::new(bool_q.clone(), c.names().to_vec(), vec![0; c.len()], rows).map(Arc::new)
    };
    match (image(f.dom()), image(f.cod())) {
        (Ok(a), Ok(b)) => QFunctor::new(a, b, f.map().to_vec()).unwrap(),
        _ => {
            let empty = Arc::new(QCategory::empty(bool_q.clone()));
            QFunctor::new(empty.clone(), empty, Vec::new()).unwrap()
        }
    }
}

fn single_functor(f: &QFunctor) -> Instance {
    let mut inst = Instance::new(f.dom().base().clone());
    inst.add_category("A", f.dom().clone());
    inst.add_category("B", f.cod().clone());
    inst.add_functor("F", "A", "B", f.clone()).unwrap();
    inst
}

fn fixtures() -> Vec<(&'static str, Instance)> {
    let (_, f) = endo_m3_search();
    vec![
        ("preorder_chain3.json", preorder_chain3()),
        ("endo_m3_condition_one.json", single_functor(&f)),
        ("endo_m3_support.json", single_functor(&support(&f))),
    ]
}

#[test]
fn fixtures_match_generator() {
    let dir = fixture_dir();
    let write = std::env::var_os("QEXP_WRITE_FIXTURES").is_some();
    for (name, inst) in fixtures() {
        assert!(inst.validate().valid, "{name} must validate");
        let text = inst.to_json_string();
        let path = dir.join(name);
        if write {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_default();
        assert!(on_disk == text, "{name} is stale; rerun with QEXP_WRITE_FIXTURES=1");
    }
}

#[test]
fn endo_search_is_deterministic() {
    let (s1, f1) = endo_m3_search();
    let (s2, f2) = endo_m3_search();
    assert_eq!(s1, s2);
    assert_eq!(f1, f2);
    assert!(support(&f1).is_valid());
    assert!(check_condition_one(&support(&f1)).unwrap().verdict);
}
