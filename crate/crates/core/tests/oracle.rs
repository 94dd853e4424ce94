use std::sync::Arc;

use qexp::expcheck::is_exponentiable;
use qexp::oracle::{
    brute_force_exponentiable, preorder_equivalence, preorder_functor_corpus, ProbeFamily, SearchOptions,
};
use qexp::quantaloid::boolean_quantale;

#[test]
fn small_probe_sweep_agrees_with_restricted_probes() {
    let q = Arc::new(boolean_quantale());
    let sweep = SearchOptions {
        probes: Some(ProbeFamily::standard(&q).extend(ProbeFamily::all_up_to(&q, 2))),
        ..SearchOptions::default()
    };
    let corpus = preorder_functor_corpus(&q, 2);
    for f in corpus.iter().chain(preorder_functor_corpus(&q, 3).iter().step_by(97)) {
        let restricted = brute_force_exponentiable(f, &SearchOptions::default()).is_exponentiable();
        let swept = brute_force_exponentiable(f, &sweep).is_exponentiable();
        assert_eq!(restricted, swept, "{:?} -> {:?}", f.map(), f.cod().hom_rows());
        assert_eq!(restricted, Some(is_exponentiable(f).unwrap().verdict));
    }
}

#[test]
fn equivalence_on_two_object_preorders() {
    let m = preorder_equivalence(2, &SearchOptions::default());
    assert!(m.is_perfect(), "{m:?}");
    assert_eq!(m.total, preorder_functor_corpus(&Arc::new(boolean_quantale()), 2).len());
}
