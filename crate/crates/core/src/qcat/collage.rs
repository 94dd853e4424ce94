use std::sync::Arc;

use super::{compose_distributors, QCatError, QCategory, QDistributor, QFunctor};
use crate::quantaloid::{QArrow, Quantaloid};

/// The distributor `C(T−, S−): X ⇸ Y` represented by a co-span `S: X → C ← Y: T`.
pub fn cospan_distributor(s: &QFunctor, t: &QFunctor) -> Result<QDistributor, QCatError> {
    if !Arc::ptr_eq(s.cod(), t.cod()) && s.cod() != t.cod() {
        return Err(QCatError::NonComposable("co-span legs need a common codomain"));
    }
    let c = s.cod();
    Ok(QDistributor::from_fn(s.dom().clone(), t.dom().clone(), |y, x| c.hom(t.apply(y), s.apply(x))))
}

/// The collage of `Φ: X ⇸ Y` with its two full embeddings.
#[derive(Debug, Clone)]
pub struct Collage {
    pub category: Arc<QCategory>,
    pub left: QFunctor,
    pub right: QFunctor,
}

/// Objects of `X` then objects of `Y`; `C(y, x) = Φ(y, x)` and `C(x, y) = 0`.
pub fn collage(phi: &QDistributor) -> Collage {
    let (x_cat, y_cat) = (phi.dom(), phi.cod());
    let blocks = [x_cat.as_ref(), y_cat.as_ref()];
    let category = Arc::new(glue(x_cat.base(), &blocks, |bi2, i2, bi, i| match (bi2, bi) {
        (1, 0) => Some(phi.get(i2, i)),
        _ => None,
    }));
    let nx = x_cat.len();
    let left = QFunctor::from_parts_unchecked(x_cat.clone(), category.clone(), (0..nx).collect());
    let right = QFunctor::from_parts_unchecked(y_cat.clone(), category.clone(), (nx..nx + y_cat.len()).collect());
    Collage { category, left, right }
}

/// Three blocks glued along `Φ: A ⇸ B`, `Ψ: B ⇸ C` and `Ψ ⊗ Φ: A ⇸ C`.
#[derive(Debug, Clone)]
pub struct TripleCollage {
    pub category: Arc<QCategory>,
    pub s: QFunctor,
    pub t: QFunctor,
    pub u: QFunctor,
}

pub fn triple_collage(phi: &QDistributor, psi: &QDistributor) -> Result<TripleCollage, QCatError> {
    let composite = compose_distributors(psi, phi)?;
    let (a, b, c) = (phi.dom(), phi.cod(), psi.cod());
    let blocks = [a.as_ref(), b.as_ref(), c.as_ref()];
    let category = Arc::new(glue(a.base(), &blocks, |bi2, i2, bi, i| match (bi2, bi) {
        (1, 0) => Some(phi.get(i2, i)),
        (2, 1) => Some(psi.get(i2, i)),
        (2, 0) => Some(composite.get(i2, i)),
        _ => None,
    }));
    let (na, nb) = (a.len(), b.len());
    let embed = |cat: &Arc<QCategory>, offset: usize| {
        QFunctor::from_parts_unchecked(cat.clone(), category.clone(), (offset..offset + cat.len()).collect())
    };
    Ok(TripleCollage { s: embed(a, 0), t: embed(b, na), u: embed(c, na + nb), category })
}

/// Disjoint union of blocks; within a block the block's own homs, across blocks the value of
/// `cross(block', index', block, index)` or zero.
fn glue(
    q: &Arc<Quantaloid>,
    blocks: &[&QCategory],
    cross: impl Fn(usize, usize, usize, usize) -> Option<usize>,
) -> QCategory {
    let mut locate = Vec::new();
    let mut names = Vec::new();
    let mut types = Vec::new();
    for (bi, block) in blocks.iter().enumerate() {
        for i in block.objects() {
            locate.push((bi, i));
            names.push(block.name(i).to_string());
            types.push(block.ty(i));
        }
    }
    if names.iter().collect::<std::collections::BTreeSet<_>>().len() < names.len() {
        names = locate.iter().map(|&(bi, i)| format!("{}.{}", bi, blocks[bi].name(i))).collect();
    }
    let types2 = types.clone();
    QCategory::from_fn(q.clone(), names, types, |g2, g| {
        let ((bi2, i2), (bi, i)) = (locate[g2], locate[g]);
        if bi2 == bi {
            blocks[bi].hom(i2, i)
        } else {
            cross(bi2, i2, bi, i).unwrap_or_else(|| q.zero(types2[g], types2[g2]))
        }
    })
    .expect("glued category is well formed")
}

/// `P_f` for `f: X → Y`: objects `X` and `Y` with `P_f(Y, X) = f`, `P_f(X, Y) = 0` and units
/// on the diagonal.
pub fn arrow_category(q: &Arc<Quantaloid>, f: &QArrow) -> Result<Arc<QCategory>, QCatError> {
    q.check_arrow(f).map_err(|_| QCatError::ArrowType { src: f.src, tgt: f.tgt })?;
    let names = vec![format!("X:{}", q.name(f.src)), format!("Y:{}", q.name(f.tgt))];
    let hom = vec![vec![q.unit(f.src), q.zero(f.tgt, f.src)], vec![f.elem, q.unit(f.tgt)]];
    Ok(Arc::new(QCategory::new(q.clone(), names, vec![f.src, f.tgt], hom)?))
}
