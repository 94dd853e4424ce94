use super::QCategory;
use crate::quantaloid::same_base;

/// An object bijection `σ` with `ty(σa) = ty(a)` and `B(σa', σa) = A(a', a)`, found by
/// exhaustive search. `result[a]` is the image of `a`.
pub fn find_isomorphism(a: &QCategory, b: &QCategory) -> Option<Vec<usize>> {
    if a.len() != b.len() || !same_base(a.base(), b.base()) {
        return None;
    }
    let mut map = Vec::with_capacity(a.len());
    let mut used = vec![false; b.len()];
    extend(a, b, &mut map, &mut used).then_some(map)
}

fn extend(a: &QCategory, b: &QCategory, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let x = map.len();
    if x == a.len() {
        return true;
    }
    for y in b.objects() {
        if used[y] || a.ty(x) != b.ty(y) || a.hom(x, x) != b.hom(y, y) {
            continue;
        }
        let consistent =
            map.iter().enumerate().all(|(x1, &y1)| a.hom(x, x1) == b.hom(y, y1) && a.hom(x1, x) == b.hom(y1, y));
        if !consistent {
            continue;
        }
        map.push(y);
        used[y] = true;
        if extend(a, b, map, used) {
            return true;
        }
        map.pop();
        used[y] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcat::test_support::*;

    #[test]
    fn relabelled_chain_is_found() {
        let q = bool_base();
        let c = chain(&q, 3);
        let reversed = preorder(&q, 3, |i, j| i >= j);
        assert_eq!(find_isomorphism(&c, &reversed), Some(vec![2, 1, 0]));
    }

    #[test]
    fn chain_is_not_discrete() {
        let q = bool_base();
        let discrete = preorder(&q, 2, |i, j| i == j);
        assert_eq!(find_isomorphism(&chain(&q, 2), &discrete), None);
        assert_eq!(find_isomorphism(&chain(&q, 2), &chain(&q, 3)), None);
    }
}
