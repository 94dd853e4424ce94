//! Seeded random generation of matrices, distributors, categories and functors.

use std::sync::Arc;

use rand::Rng;

use super::{default_names, QCategory, QDistributor, QFunctor, QMatrix};
use crate::quantaloid::Quantaloid;

/// A matrix with entries drawn uniformly from their hom-lattices, row by row.
pub fn random_matrix(rng: &mut impl Rng, q: &Arc<Quantaloid>, dom_types: &[usize], cod_types: &[usize]) -> QMatrix {
    let mut entries = Vec::with_capacity(dom_types.len() * cod_types.len());
    for &ty in cod_types {
        for &tx in dom_types {
            entries.push(rng.gen_range(0..q.hom(tx, ty).len()));
        }
    }
    let nx = dom_types.len();
    QMatrix::from_fn(q.clone(), dom_types.to_vec(), cod_types.to_vec(), |r, c| entries[r * nx + c])
}

/// The reflection or (with equal odds) the coreflection of a uniformly random matrix.
pub fn random_distributor(rng: &mut impl Rng, x: &Arc<QCategory>, y: &Arc<QCategory>) -> QDistributor {
    let m = random_matrix(rng, x.base(), x.types(), y.types());
    if rng.gen_bool(0.5) {
        QDistributor::reflection(x.clone(), y.clone(), &m).expect("shapes match")
    } else {
        QDistributor::coreflection(x.clone(), y.clone(), &m).expect("shapes match")
    }
}

/// The least category above `M`: add units on the diagonal, then compose until stable.
fn closure(mut m: QMatrix) -> QMatrix {
    let q = m.base().clone();
    let types = m.dom_types().to_vec();
    for (a, &t) in types.iter().enumerate() {
        let e = q.hom(t, t).join2(m.get(a, a), q.unit(t));
        m.set(a, a, e);
    }
    loop {
        let next = m.join(&QMatrix::compose(&m, &m).expect("endo-matrix")).expect("same shape");
        if next == m {
            return m;
        }
        m = next;
    }
}

fn sparse(rng: &mut impl Rng, m: QMatrix) -> QMatrix {
    let q = m.base().clone();
    let (d, c) = (m.dom_types().to_vec(), m.cod_types().to_vec());
    let keep: Vec<bool> = (0..d.len() * c.len()).map(|_| rng.gen_bool(0.5)).collect();
    QMatrix::from_fn(q.clone(), d.clone(), c.clone(), |y, x| {
        if keep[y * d.len() + x] {
            m.get(y, x)
        } else {
            q.zero(d[x], c[y])
        }
    })
}

/// A random category on the given object types: the closure of a sparse random matrix.
pub fn random_category(rng: &mut impl Rng, q: &Arc<Quantaloid>, types: &[usize]) -> QCategory {
    let m = random_matrix(rng, q, types, types);
    let m = closure(sparse(rng, m));
    QCategory::from_fn(q.clone(), default_names("a", types.len()), types.to_vec(), |y, x| m.get(y, x))
        .expect("closure has the right shape")
}

/// A random functor into `B` from a random `n`-object category: a random object map, homs
/// drawn below the corresponding homs of `B`, then closed up.
pub fn random_functor(rng: &mut impl Rng, b: &Arc<QCategory>, n: usize) -> Option<QFunctor> {
    if b.is_empty() && n > 0 {
        return None;
    }
    let q = b.base();
    let map: Vec<usize> = (0..n).map(|_| rng.gen_range(0..b.len())).collect();
    let types: Vec<usize> = map.iter().map(|&y| b.ty(y)).collect();
    let m = random_matrix(rng, q, &types, &types);
    let m = sparse(rng, m);
    let below = QMatrix::from_fn(q.clone(), types.clone(), types.clone(), |y, x| {
        q.hom(types[x], types[y]).meet2(m.get(y, x), b.hom(map[y], map[x]))
    });
    let m = closure(below);
    let a = QCategory::from_fn(q.clone(), default_names("a", n), types, |y, x| m.get(y, x)).ok()?;
    QFunctor::new(Arc::new(a), b.clone(), map).ok()
}
