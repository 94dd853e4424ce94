use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{brute_force_exponentiable, SearchOptions};
use crate::expcheck::is_exponentiable;
use crate::qcat::{default_names, enumerate_functors, QCategory, QFunctor};
use crate::quantaloid::{boolean_quantale, Quantaloid};

/// All categories on a fixed list of object types, in lexicographic order of their hom
/// tables (row by row).
#[derive(Debug, Clone)]
pub struct CategorySearch {
    base: Arc<Quantaloid>,
    types: Vec<usize>,
    sizes: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl CategorySearch {
    pub fn new(base: &Arc<Quantaloid>, types: &[usize]) -> Self {
        let n = types.len();
        let sizes = (0..n * n).map(|k| base.hom(types[k % n], types[k / n]).len()).collect();
        Self { base: base.clone(), types: types.to_vec(), sizes, digits: vec![0; n * n], done: false }
    }

    fn step(&mut self) {
        for k in (0..self.digits.len()).rev() {
            self.digits[k] += 1;
            if self.digits[k] < self.sizes[k] {
                return;
            }
            self.digits[k] = 0;
        }
        self.done = true;
    }
}

impl Iterator for CategorySearch {
    type Item = QCategory;

    fn next(&mut self) -> Option<QCategory> {
        let n = self.types.len();
        while !self.done {
            let digits = &self.digits;
            let candidate = QCategory::from_fn(self.base.clone(), default_names("a", n), self.types.clone(), |y, x| {
                digits[y * n + x]
            })
            .expect("digits range over the hom-lattices");
            self.step();
            if candidate.is_valid() {
                return Some(candidate);
            }
        }
        None
    }
}

pub fn enumerate_qcategories(base: &Arc<Quantaloid>, types: &[usize]) -> CategorySearch {
    CategorySearch::new(base, types)
}

/// Every category with at most `max_objects` objects, by size, then type vector, then hom
/// table.
pub fn enumerate_qcategories_up_to(base: &Arc<Quantaloid>, max_objects: usize) -> Vec<QCategory> {
    let mut out = Vec::new();
    for n in 0..=max_objects {
        let mut types = vec![0; n];
        loop {
            out.extend(enumerate_qcategories(base, &types));
            let mut k = n;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                types[k] += 1;
                if types[k] < base.len() {
                    break;
                }
                types[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if n == 0 || k == usize::MAX {
                break;
            }
        }
    }
    out
}

/// All preorders on `0..n`, as categories over the boolean quantale `q`.
pub fn preorders(q: &Arc<Quantaloid>, n: usize) -> Vec<Arc<QCategory>> {
    enumerate_qcategories(q, &vec![0; n]).map(Arc::new).collect()
}

/// Every monotone map between preorders with at most `max_objects` elements each.
pub fn preorder_functor_corpus(q: &Arc<Quantaloid>, max_objects: usize) -> Vec<QFunctor> {
    let cats: Vec<Arc<QCategory>> = (0..=max_objects).flat_map(|n| preorders(q, n)).collect();
    let mut out = Vec::new();
    for a in &cats {
        for b in &cats {
            out.extend(enumerate_functors(a, b));
        }
    }
    out
}

/// How the condition checkers and the brute-force oracle classify a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AgreementMatrix {
    pub total: usize,
    pub both_exponentiable: usize,
    pub both_not: usize,
    pub checker_only: usize,
    pub oracle_only: usize,
    pub inconclusive: usize,
    /// Corpus indices where the two disagree or the oracle gave up.
    pub mismatches: Vec<usize>,
}

impl AgreementMatrix {
    pub fn agreement(&self) -> usize {
        self.both_exponentiable + self.both_not
    }

    pub fn is_perfect(&self) -> bool {
        self.agreement() == self.total
    }
}

/// Runs the condition checkers and the brute-force oracle on every functor of the preorder
/// corpus with at most `max_objects` objects per side.
pub fn preorder_equivalence(max_objects: usize, options: &SearchOptions) -> AgreementMatrix {
    let q = Arc::new(boolean_quantale());
    let corpus = preorder_functor_corpus(&q, max_objects);
    let verdicts: Vec<(bool, Option<bool>)> = corpus
        .par_iter()
        .map(|f| {
            let checker = is_exponentiable(f).expect("corpus functors are valid").verdict;
            (checker, brute_force_exponentiable(f, options).is_exponentiable())
        })
        .collect();
    let mut m = AgreementMatrix::default();
    for (i, verdict) in verdicts.into_iter().enumerate() {
        m.total += 1;
        match verdict {
            (true, Some(true)) => m.both_exponentiable += 1,
            (false, Some(false)) => m.both_not += 1,
            (true, Some(false)) => {
                m.checker_only += 1;
                m.mismatches.push(i);
            }
            (false, Some(true)) => {
                m.oracle_only += 1;
                m.mismatches.push(i);
            }
            (_, None) => {
                m.inconclusive += 1;
                m.mismatches.push(i);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantaloid::chain_quantale;

    fn direct_count(q: &Arc<Quantaloid>, types: &[usize]) -> usize {
        let n = types.len();
        let sizes: Vec<usize> = (0..n * n).map(|k| q.hom(types[k % n], types[k / n]).len()).collect();
        let total: usize = sizes.iter().product();
        (0..total)
            .filter(|&code| {
                let mut rest = code;
                let digits: Vec<usize> = sizes
                    .iter()
                    .map(|&s| {
                        let d = rest % s;
                        rest /= s;
                        d
                    })
                    .collect();
                QCategory::from_fn(q.clone(), default_names("a", n), types.to_vec(), |y, x| digits[y * n + x])
                    .unwrap()
                    .is_valid()
            })
            .count()
    }

    #[test]
    fn preorder_counts() {
        let q = Arc::new(boolean_quantale());
        let counts: Vec<usize> = (0..4).map(|n| preorders(&q, n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29]);
        for n in 0..3 {
            assert_eq!(counts[n], direct_count(&q, &vec![0; n]));
        }
    }

    #[test]
    fn one_object_categories_over_chain() {
        let q = Arc::new(chain_quantale(2).unwrap());
        let found = enumerate_qcategories(&q, &[0]).count();
        assert_eq!(found, direct_count(&q, &[0]));
        assert_eq!(enumerate_qcategories(&q, &[0, 0]).count(), direct_count(&q, &[0, 0]));
    }

    #[test]
    fn up_to_lists_all_sizes() {
        let q = Arc::new(boolean_quantale());
        assert_eq!(enumerate_qcategories_up_to(&q, 2).len(), 1 + 1 + 4);
    }

    #[test]
    fn corpus_size() {
        let q = Arc::new(boolean_quantale());
        let corpus = preorder_functor_corpus(&q, 2);
        let brute: usize = (0..=2)
            .flat_map(|n| preorders(&q, n))
            .flat_map(|a| (0..=2).flat_map(|m| preorders(&q, m)).map(move |b| (a.clone(), b)))
            .map(|(a, b)| {
                let n = a.len();
                let total = b.len().pow(n as u32);
                (0..total)
                    .filter(|&code| {
                        let map: Vec<usize> = (0..n).map(|i| (code / b.len().pow(i as u32)) % b.len()).collect();
                        QFunctor::new(a.clone(), b.clone(), map).unwrap().is_valid()
                    })
                    .count()
            })
            .sum();
        assert_eq!(corpus.len(), brute);
    }
}
