use std::sync::Arc;

use super::{QCategory, QDistributor, QFunctor};

/// Backtracking enumeration of the functors `A → B`, in lexicographic order of object maps.
///
/// The search may be narrowed by per-object candidate lists; candidates that are not
/// type-correct are skipped.
#[derive(Debug, Clone)]
pub struct FunctorSearch {
    dom: Arc<QCategory>,
    cod: Arc<QCategory>,
    candidates: Vec<Vec<usize>>,
    map: Vec<usize>,
    cursor: Vec<usize>,
    started: bool,
    done: bool,
}

impl FunctorSearch {
    pub fn new(dom: &Arc<QCategory>, cod: &Arc<QCategory>) -> Self {
        let candidates = dom.objects().map(|a| cod.objects().filter(|&b| cod.ty(b) == dom.ty(a)).collect()).collect();
        Self::with_candidates(dom, cod, candidates)
    }

    /// `candidates[a]` lists the allowed images of `a`, in the order they are tried.
    pub fn with_candidates(dom: &Arc<QCategory>, cod: &Arc<QCategory>, candidates: Vec<Vec<usize>>) -> Self {
        assert_eq!(candidates.len(), dom.len(), "one candidate list per object");
        let candidates = candidates
            .into_iter()
            .enumerate()
            .map(|(a, list)| list.into_iter().filter(|&b| b < cod.len() && cod.ty(b) == dom.ty(a)).collect())
            .collect();
        Self {
            dom: dom.clone(),
            cod: cod.clone(),
            candidates,
            map: Vec::with_capacity(dom.len()),
            cursor: Vec::with_capacity(dom.len()),
            started: false,
            done: false,
        }
    }

    /// Whether sending `a` to `b` is compatible with the images already chosen for `0..a`.
    fn fits(&self, a: usize, b: usize) -> bool {
        let (dom, cod) = (&*self.dom, &*self.cod);
        let q = dom.base();
        let ta = dom.ty(a);
        if !q.hom(ta, ta).leq(dom.hom(a, a), cod.hom(b, b)) {
            return false;
        }
        self.map.iter().enumerate().all(|(a1, &b1)| {
            let t1 = dom.ty(a1);
            q.hom(t1, ta).leq(dom.hom(a, a1), cod.hom(b, b1)) && q.hom(ta, t1).leq(dom.hom(a1, a), cod.hom(b1, b))
        })
    }

    /// Advances to the next complete assignment, starting the scan for the current depth at
    /// `cursor[depth]`.
    fn advance(&mut self) -> bool {
        let n = self.dom.len();
        loop {
            let depth = self.map.len();
            if depth == n {
                return true;
            }
            let start = self.cursor.get(depth).copied().unwrap_or(0);
            let found = (start..self.candidates[depth].len()).find(|&i| self.fits(depth, self.candidates[depth][i]));
            match found {
                Some(i) => {
                    if self.cursor.len() == depth {
                        self.cursor.push(i);
                    } else {
                        self.cursor[depth] = i;
                    }
                    self.map.push(self.candidates[depth][i]);
                }
                None => {
                    self.cursor.truncate(depth);
                    if !self.backtrack() {
                        return false;
                    }
                }
            }
        }
    }

    /// Drops the deepest assignment and moves its cursor past it.
    fn backtrack(&mut self) -> bool {
        if self.map.pop().is_none() {
            return false;
        }
        let depth = self.map.len();
        self.cursor[depth] += 1;
        true
    }
}

impl Iterator for FunctorSearch {
    type Item = QFunctor;

    fn next(&mut self) -> Option<QFunctor> {
        if self.done {
            return None;
        }
        if self.started && !self.backtrack() {
            self.done = true;
            return None;
        }
        self.started = true;
        if self.advance() {
            Some(QFunctor::from_parts_unchecked(self.dom.clone(), self.cod.clone(), self.map.clone()))
        } else {
            self.done = true;
            None
        }
    }
}

/// All functors `A → B` in lexicographic order of object maps.
pub fn enumerate_functors(dom: &Arc<QCategory>, cod: &Arc<QCategory>) -> FunctorSearch {
    FunctorSearch::new(dom, cod)
}

/// Backtracking enumeration of the distributors `X ⇸ Y`, entries chosen row by row in
/// increasing element order.
#[derive(Debug, Clone)]
pub struct DistributorSearch {
    dom: Arc<QCategory>,
    cod: Arc<QCategory>,
    entries: Vec<usize>,
    cursor: Vec<usize>,
    started: bool,
    done: bool,
}

impl DistributorSearch {
    pub fn new(dom: &Arc<QCategory>, cod: &Arc<QCategory>) -> Self {
        Self { dom: dom.clone(), cod: cod.clone(), entries: vec![], cursor: vec![], started: false, done: false }
    }

    fn size(&self, k: usize) -> usize {
        let nx = self.dom.len();
        self.dom.base().hom(self.dom.ty(k % nx), self.cod.ty(k / nx)).len()
    }

    fn fits(&self, k: usize, e: usize) -> bool {
        let (xc, yc) = (&*self.dom, &*self.cod);
        let q = xc.base();
        let nx = xc.len();
        let (y, x) = (k / nx, k % nx);
        let (tx, ty) = (xc.ty(x), yc.ty(y));
        let get = |y1: usize, x1: usize| if (y1, x1) == (y, x) { e } else { self.entries[y1 * nx + x1] };
        for x1 in 0..=x {
            let t1 = xc.ty(x1);
            let v = get(y, x1);
            if !q.hom(tx, ty).leq(q.comp(tx, t1, ty, v, xc.hom(x1, x)), e)
                || !q.hom(t1, ty).leq(q.comp(t1, tx, ty, e, xc.hom(x, x1)), v)
            {
                return false;
            }
        }
        for y1 in 0..=y {
            let t1 = yc.ty(y1);
            let v = get(y1, x);
            if !q.hom(tx, ty).leq(q.comp(tx, t1, ty, yc.hom(y, y1), v), e)
                || !q.hom(tx, t1).leq(q.comp(tx, ty, t1, yc.hom(y1, y), e), v)
            {
                return false;
            }
        }
        true
    }

    fn advance(&mut self) -> bool {
        let total = self.dom.len() * self.cod.len();
        loop {
            let k = self.entries.len();
            if k == total {
                return true;
            }
            let start = self.cursor.get(k).copied().unwrap_or(0);
            match (start..self.size(k)).find(|&e| self.fits(k, e)) {
                Some(e) => {
                    if self.cursor.len() == k {
                        self.cursor.push(e);
                    } else {
                        self.cursor[k] = e;
                    }
                    self.entries.push(e);
                }
                None => {
                    self.cursor.truncate(k);
                    if !self.backtrack() {
                        return false;
                    }
                }
            }
        }
    }

    fn backtrack(&mut self) -> bool {
        if self.entries.pop().is_none() {
            return false;
        }
        let k = self.entries.len();
        self.cursor[k] += 1;
        true
    }
}

impl Iterator for DistributorSearch {
    type Item = QDistributor;

    fn next(&mut self) -> Option<QDistributor> {
        if self.done {
            return None;
        }
        if self.started && !self.backtrack() {
            self.done = true;
            return None;
        }
        self.started = true;
        if self.advance() {
            let nx = self.dom.len();
            let entries = &self.entries;
            Some(QDistributor::from_fn(self.dom.clone(), self.cod.clone(), |y, x| entries[y * nx + x]))
        } else {
            self.done = true;
            None
        }
    }
}

/// All distributors `X ⇸ Y`.
pub fn enumerate_distributors(dom: &Arc<QCategory>, cod: &Arc<QCategory>) -> DistributorSearch {
    DistributorSearch::new(dom, cod)
}

/// The number of matrices `X → Y`, saturating at `u128::MAX`.
pub fn count_matrices(dom: &QCategory, cod: &QCategory) -> u128 {
    let q = dom.base();
    let mut total: u128 = 1;
    for y in cod.objects() {
        for x in dom.objects() {
            total = total.saturating_mul(q.hom(dom.ty(x), cod.ty(y)).len() as u128);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcat::test_support::*;
    use crate::qcat::{one_object, QMatrix};
    use crate::quantaloid::chain_quantale;

    fn all_matrices(dom: &Arc<QCategory>, cod: &Arc<QCategory>) -> Vec<QMatrix> {
        let q = dom.base();
        let sizes: Vec<usize> = cod
            .objects()
            .flat_map(|y| dom.objects().map(move |x| (x, y)))
            .map(|(x, y)| q.hom(dom.ty(x), cod.ty(y)).len())
            .collect();
        let mut out = vec![];
        let mut digits = vec![0; sizes.len()];
        loop {
            let nx = dom.len();
            out.push(QMatrix::from_fn(q.clone(), dom.types().to_vec(), cod.types().to_vec(), |y, x| {
                digits[y * nx + x]
            }));
            let mut k = 0;
            while k < digits.len() {
                digits[k] += 1;
                if digits[k] < sizes[k] {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == digits.len() {
                return out;
            }
        }
    }

    #[test]
    fn empty_domain_has_one_functor() {
        let q = bool_base();
        let found: Vec<_> = enumerate_functors(&chain(&q, 0), &chain(&q, 3)).collect();
        assert_eq!(found.len(), 1);
        assert!(found[0].map().is_empty());
    }

    #[test]
    fn points_biject_with_objects() {
        let q = bool_base();
        let c = chain(&q, 3);
        let maps: Vec<Vec<usize>> = enumerate_functors(&one_object(&q, 0), &c).map(|f| f.map().to_vec()).collect();
        assert_eq!(maps, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn monotone_maps_two_to_three() {
        let q = bool_base();
        let (two, three) = (chain(&q, 2), chain(&q, 3));
        let maps: Vec<Vec<usize>> = enumerate_functors(&two, &three).map(|f| f.map().to_vec()).collect();
        let brute: Vec<Vec<usize>> =
            (0..3).flat_map(|i| (0..3).map(move |j| vec![i, j])).filter(|m| m[0] <= m[1]).collect();
        assert_eq!(maps.len(), 6);
        assert_eq!(maps, brute);
    }

    #[test]
    fn functor_search_agrees_with_brute_force() {
        let q = bool_base();
        let a = preorder(&q, 3, |i, j| i == j || (i == 0 && j == 2));
        let b = preorder(&q, 3, |i, j| i <= j || j == 0 && i == 1);
        let found: Vec<Vec<usize>> = enumerate_functors(&a, &b).map(|f| f.map().to_vec()).collect();
        let mut brute = vec![];
        for m in 0..27usize {
            let map = vec![m / 9, (m / 3) % 3, m % 3];
            if QFunctor::new(a.clone(), b.clone(), map.clone()).unwrap().is_valid() {
                brute.push(map);
            }
        }
        assert_eq!(found, brute);
    }

    #[test]
    fn restricted_candidates() {
        let q = bool_base();
        let (two, three) = (chain(&q, 2), chain(&q, 3));
        let found: Vec<Vec<usize>> = FunctorSearch::with_candidates(&two, &three, vec![vec![1], vec![2, 0, 1]])
            .map(|f| f.map().to_vec())
            .collect();
        assert_eq!(found, vec![vec![1, 2], vec![1, 1]]);
    }

    #[test]
    fn distributor_search_agrees_with_filtered_matrices() {
        let q = Arc::new(chain_quantale(2).unwrap());
        let x = Arc::new(
            QCategory::from_fn(q.clone(), vec!["x0".into(), "x1".into()], vec![0, 0], |a2, a| {
                if a2 == a {
                    0
                } else if a2 == 1 {
                    1
                } else {
                    2
                }
            })
            .unwrap(),
        );
        assert!(x.is_valid());
        let y = one_object(&q, 0);
        let found: Vec<QMatrix> = enumerate_distributors(&x, &y).map(QDistributor::into_matrix).collect();
        let brute: Vec<QMatrix> = all_matrices(&x, &y)
            .into_iter()
            .filter(|m| QDistributor::from_matrix(x.clone(), y.clone(), m.clone()).unwrap().is_valid())
            .collect();
        assert_eq!(found.len(), brute.len());
        for m in &brute {
            assert!(found.contains(m));
        }
        assert_eq!(count_matrices(&x, &y), 9);
    }

    #[test]
    fn distributors_between_empty_categories() {
        let q = bool_base();
        let e = chain(&q, 0);
        assert_eq!(enumerate_distributors(&e, &chain(&q, 2)).count(), 1);
    }
}
