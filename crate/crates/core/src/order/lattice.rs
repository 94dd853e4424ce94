use std::sync::Arc;

use super::OrderError;

/// A finite lattice presented by its full order relation.
///
/// Binary join and meet tables are computed eagerly; construction fails if the relation
/// is not a partial order or some pair lacks a join or a meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    leq: Vec<bool>,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Builds a lattice from an explicit list of pairs `(i, j)` meaning `i <= j`.
    ///
    /// The list must already contain the reflexive pairs and be transitively closed.
    pub fn from_pairs(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, OrderError> {
        let n = names.len();
        let mut leq = vec![false; n * n];
        for &(i, j) in pairs {
            for index in [i, j] {
                if index >= n {
                    return Err(OrderError::IndexOutOfRange { index, size: n });
                }
            }
            leq[i * n + j] = true;
        }
        Self::from_matrix(names, leq)
    }

    /// Builds a lattice on `0..n` from an order predicate, with index names.
    pub fn from_order(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self, OrderError> {
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::from_named_order(names, leq)
    }

    pub fn from_named_order(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self, OrderError> {
        let n = names.len();
        let mut m = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = leq(i, j);
            }
        }
        Self::from_matrix(names, m)
    }

    fn from_matrix(names: Vec<String>, leq: Vec<bool>) -> Result<Self, OrderError> {
        let n = names.len();
        if n == 0 {
            return Err(OrderError::Empty);
        }
        let le = |i: usize, j: usize| leq[i * n + j];
        for i in 0..n {
            if !le(i, i) {
                return Err(OrderError::NotReflexive(i));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if le(i, j) && le(j, i) {
                    return Err(OrderError::NotAntisymmetric(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !le(i, j) {
                    continue;
                }
                for k in 0..n {
                    if le(j, k) && !le(i, k) {
                        return Err(OrderError::NotTransitive(i, j, k));
                    }
                }
            }
        }

        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for i in 0..n {
            for j in i..n {
                let upper: Vec<usize> = (0..n).filter(|&u| le(i, u) && le(j, u)).collect();
                let lub =
                    upper.iter().copied().find(|&u| upper.iter().all(|&v| le(u, v))).ok_or(OrderError::NoJoin(i, j))?;
                let lower: Vec<usize> = (0..n).filter(|&l| le(l, i) && le(l, j)).collect();
                let glb =
                    lower.iter().copied().find(|&l| lower.iter().all(|&v| le(v, l))).ok_or(OrderError::NoMeet(i, j))?;
                join[i * n + j] = lub;
                join[j * n + i] = lub;
                meet[i * n + j] = glb;
                meet[j * n + i] = glb;
            }
        }
        let bottom = (1..n).fold(0, |acc, x| meet[acc * n + x]);
        let top = (1..n).fold(0, |acc, x| join[acc * n + x]);
        Ok(Self { names, leq, join, meet, bottom, top })
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        Self::from_order(n, |i, j| i <= j).expect("a non-empty chain is a lattice")
    }

    /// The diamond `M3`: `⊥ < x, y, z < ⊤`, indexed `⊥=0, x=1, y=2, z=3, ⊤=4`.
    pub fn m3() -> Self {
        let names = ["bot", "x", "y", "z", "top"].map(String::from).to_vec();
        Self::from_named_order(names, |i, j| i == j || i == 0 || j == 4).expect("M3 is a lattice")
    }

    /// The pentagon `N5`: `⊥ < a < b < ⊤` and `⊥ < c < ⊤`, indexed `⊥=0, a=1, b=2, c=3, ⊤=4`.
    pub fn n5() -> Self {
        let names = ["bot", "a", "b", "c", "top"].map(String::from).to_vec();
        Self::from_named_order(names, |i, j| i == j || i == 0 || j == 4 || (i == 1 && j == 2)).expect("N5 is a lattice")
    }

    /// The powerset of a `k`-element set; element `m` is the subset with bitmask `m`.
    pub fn powerset(k: usize) -> Self {
        let n = 1usize << k;
        let names = (0..n).map(|m| subset_name(m, k)).collect();
        Self::from_named_order(names, |i, j| i & !j == 0).expect("a powerset is a lattice")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Always false: lattices have a bottom element.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    #[inline]
    pub fn join2(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y]
    }

    #[inline]
    pub fn meet2(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    /// Least upper bound of a family; the empty join is the bottom.
    pub fn join(&self, family: impl IntoIterator<Item = usize>) -> usize {
        family.into_iter().fold(self.bottom, |acc, x| self.join2(acc, x))
    }

    /// Greatest lower bound of a family; the empty meet is the top.
    pub fn meet(&self, family: impl IntoIterator<Item = usize>) -> usize {
        family.into_iter().fold(self.top, |acc, x| self.meet2(acc, x))
    }

    /// Range-checked [`join`](Self::join).
    pub fn try_join(&self, family: &[usize]) -> Result<usize, OrderError> {
        self.check_all(family)?;
        Ok(self.join(family.iter().copied()))
    }

    /// Range-checked [`meet`](Self::meet).
    pub fn try_meet(&self, family: &[usize]) -> Result<usize, OrderError> {
        self.check_all(family)?;
        Ok(self.meet(family.iter().copied()))
    }

    pub fn check(&self, x: usize) -> Result<(), OrderError> {
        if x < self.len() {
            Ok(())
        } else {
            Err(OrderError::IndexOutOfRange { index: x, size: self.len() })
        }
    }

    fn check_all(&self, family: &[usize]) -> Result<(), OrderError> {
        family.iter().try_for_each(|&x| self.check(x))
    }

    /// All pairs `(i, j)` with `i <= j`, in row-major order.
    pub fn order_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| self.leq(i, j)).collect()
    }

    /// Elements below `b`, in increasing index order.
    pub fn below(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.elements().filter(move |&x| self.leq(x, b))
    }

    /// The principal down-set `↓b` with the induced order.
    pub fn downset(&self, b: usize) -> Downset {
        let members: Vec<usize> = self.below(b).collect();
        let names = members.iter().map(|&m| self.names[m].clone()).collect();
        let lattice = FiniteLattice::from_named_order(names, |i, j| self.leq(members[i], members[j]))
            .expect("a principal down-set of a lattice is a lattice");
        Downset { lattice: Arc::new(lattice), members }
    }

    /// A triple `(x, y, z)` with `x ∧ (y ∨ z) ≠ (x ∧ y) ∨ (x ∧ z)`, if any.
    pub fn distributivity_failure(&self) -> Option<(usize, usize, usize)> {
        for x in self.elements() {
            for y in self.elements() {
                for z in self.elements() {
                    let lhs = self.meet2(x, self.join2(y, z));
                    let rhs = self.join2(self.meet2(x, y), self.meet2(x, z));
                    if lhs != rhs {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }
}

fn subset_name(mask: usize, k: usize) -> String {
    let items: Vec<String> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| i.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// A principal down-set `↓b`, together with its embedding into the parent lattice.
#[derive(Debug, Clone)]
pub struct Downset {
    pub lattice: Arc<FiniteLattice>,
    /// `members[local]` is the parent index of the local element.
    pub members: Vec<usize>,
}

impl Downset {
    pub fn to_parent(&self, local: usize) -> usize {
        self.members[local]
    }

    pub fn to_local(&self, parent: usize) -> Option<usize> {
        self.members.binary_search(&parent).ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_join(l: &FiniteLattice, s: &[usize]) -> usize {
        let upper: Vec<usize> = l.elements().filter(|&u| s.iter().all(|&x| l.leq(x, u))).collect();
        *upper.iter().find(|&&u| upper.iter().all(|&v| l.leq(u, v))).unwrap()
    }

    fn brute_meet(l: &FiniteLattice, s: &[usize]) -> usize {
        let lower: Vec<usize> = l.elements().filter(|&u| s.iter().all(|&x| l.leq(u, x))).collect();
        *lower.iter().find(|&&u| lower.iter().all(|&v| l.leq(v, u))).unwrap()
    }

    #[test]
    fn chain_join_and_meet() {
        let two = FiniteLattice::chain(2);
        assert_eq!(two.join([0, 1]), 1);
        assert_eq!(two.meet([0, 1]), 0);
    }

    #[test]
    fn empty_families() {
        for l in [FiniteLattice::chain(3), FiniteLattice::m3(), FiniteLattice::n5()] {
            assert_eq!(l.join([]), l.bottom());
            assert_eq!(l.meet([]), l.top());
        }
    }

    #[test]
    fn m3_atoms() {
        let m3 = FiniteLattice::m3();
        assert_eq!(m3.join([1, 2]), brute_join(&m3, &[1, 2]));
        assert_eq!(m3.join([1, 2]), 4);
        assert_eq!(m3.meet([1, 2]), brute_meet(&m3, &[1, 2]));
        assert_eq!(m3.meet([1, 2]), 0);
        assert!(m3.distributivity_failure().is_some());
        assert!(FiniteLattice::powerset(3).distributivity_failure().is_none());
    }

    #[test]
    fn out_of_range_is_rejected() {
        let two = FiniteLattice::chain(2);
        assert_eq!(two.try_join(&[0, 5]), Err(OrderError::IndexOutOfRange { index: 5, size: 2 }));
        assert!(two.try_meet(&[7]).is_err());
    }

    #[test]
    fn validation_rejects_bad_orders() {
        let names = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
        // 0 <= 1 <= 2 without 0 <= 2
        let r = FiniteLattice::from_pairs(names(3), &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]);
        assert_eq!(r, Err(OrderError::NotTransitive(0, 1, 2)));
        let r = FiniteLattice::from_pairs(names(2), &[(0, 0), (0, 1)]);
        assert_eq!(r, Err(OrderError::NotReflexive(1)));
        let r = FiniteLattice::from_pairs(names(2), &[(0, 0), (1, 1), (0, 1), (1, 0)]);
        assert_eq!(r, Err(OrderError::NotAntisymmetric(0, 1)));
        // two incomparable elements: no join
        let r = FiniteLattice::from_pairs(names(2), &[(0, 0), (1, 1)]);
        assert_eq!(r, Err(OrderError::NoJoin(0, 1)));
        assert_eq!(FiniteLattice::from_pairs(vec![], &[]), Err(OrderError::Empty));
    }

    #[test]
    fn downsets() {
        let m3 = FiniteLattice::m3();
        let top = m3.downset(m3.top());
        assert_eq!(*top.lattice, m3);
        let bot = m3.downset(m3.bottom());
        assert_eq!(bot.len(), 1);
        let x = m3.downset(1);
        assert_eq!(x.members, vec![0, 1]);
        assert_eq!(x.lattice.order_pairs(), FiniteLattice::chain(2).order_pairs());
        assert_eq!(x.lattice.top(), 1);
        assert_eq!(x.to_parent(x.lattice.top()), 1);
        assert_eq!(x.to_local(1), Some(1));
        assert_eq!(x.to_local(2), None);
    }

    #[test]
    fn binary_tables_agree_with_scans() {
        for l in [FiniteLattice::m3(), FiniteLattice::n5(), FiniteLattice::powerset(2)] {
            for x in l.elements() {
                for y in l.elements() {
                    assert_eq!(l.join2(x, y), brute_join(&l, &[x, y]));
                    assert_eq!(l.meet2(x, y), brute_meet(&l, &[x, y]));
                }
            }
        }
    }
}
