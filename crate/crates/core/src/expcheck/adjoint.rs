use super::{ExpError, FiberedFunctor};
use crate::order::greatest_where;
use crate::qcat::{QDistributor, QFunctor, QMatrix};

impl FiberedFunctor {
    fn check_below(&self, b: usize, b1: usize, f: usize) -> Result<(), ExpError> {
        let b_cat = self.cod();
        let l = self.base().hom(b_cat.ty(b), b_cat.ty(b1));
        if f < l.len() && l.leq(f, b_cat.hom(b1, b)) {
            Ok(())
        } else {
            Err(ExpError::OutOfDownset { b, b1, f })
        }
    }

    pub(crate) fn hat_matrix(&self, b: usize, b1: usize, f: usize) -> QMatrix {
        let (src, dst) = (self.fiber(b), self.fiber(b1));
        let b_cat = self.cod();
        let l = self.base().hom(b_cat.ty(b), b_cat.ty(b1));
        let a_cat = self.dom();
        QMatrix::from_fn(self.base().clone(), src.category.types().to_vec(), dst.category.types().to_vec(), |y, x| {
            l.meet2(f, a_cat.hom(dst.members[y], src.members[x]))
        })
    }

    pub(crate) fn zero_matrix(&self, b: usize, b1: usize) -> QMatrix {
        let (src, dst) = (self.fiber(b), self.fiber(b1));
        QMatrix::zero(self.base().clone(), src.category.types().to_vec(), dst.category.types().to_vec())
    }

    /// `hat(f) = (f ∧ A(a', a))` for `f <= B(b1, b)`, a distributor `A_b ⇸ A_{b1}`.
    pub fn hat(&self, b: usize, b1: usize, f: usize) -> Result<QDistributor, ExpError> {
        self.check_below(b, b1, f)?;
        let matrix = self.hat_matrix(b, b1, f);
        Ok(QDistributor::from_matrix(self.fiber(b).category.clone(), self.fiber(b1).category.clone(), matrix)?)
    }

    fn check_fiber_shape(&self, b: usize, b1: usize, m: &QMatrix) -> Result<(), ExpError> {
        let (src, dst) = (self.fiber(b), self.fiber(b1));
        if m.dom_types() == src.category.types() && m.cod_types() == dst.category.types() {
            Ok(())
        } else {
            Err(ExpError::FiberShape { b, b1 })
        }
    }

    /// `Φ^F`: the largest `f <= B(b1, b)` with `hat(f) <= Φ`.
    pub fn sharp(&self, b: usize, b1: usize, phi: &QDistributor) -> Result<usize, ExpError> {
        self.sharp_matrix(b, b1, phi.as_matrix())
    }

    /// The largest `f <= B(b1, b)` with `hat(f) <= M` for an arbitrary matrix `M`, found
    /// by searching the downset and confirmed against the meet of the pointwise adjoints.
    pub fn sharp_matrix(&self, b: usize, b1: usize, m: &QMatrix) -> Result<usize, ExpError> {
        self.check_fiber_shape(b, b1, m)?;
        let formula = self.sharp_by_meet(b, b1, m)?;
        let down = self.downset(b, b1);
        let search = greatest_where(&down.lattice, |l| self.hat_matrix(b, b1, down.to_parent(l)).leq(m))
            .map(|l| down.to_parent(l));
        match search {
            Some(search) if search == formula => Ok(search),
            Some(search) => Err(ExpError::InternalDisagreement { b, b1, search, formula }),
            None => Err(ExpError::Internal(format!("no largest element below B({b1}, {b}) under the matrix"))),
        }
    }

    /// `⋀_{(a, a')} (M(a', a))^F` over the fibers, each `(−)^F` the right adjoint of
    /// `f ↦ f ∧ A(a', a)`; the empty meet is `B(b1, b)`.
    pub fn sharp_by_meet(&self, b: usize, b1: usize, m: &QMatrix) -> Result<usize, ExpError> {
        self.check_fiber_shape(b, b1, m)?;
        let (src, dst) = (self.fiber(b), self.fiber(b1));
        let down = self.downset(b, b1);
        let mut acc = down.lattice.top();
        for (y, &a1) in dst.members.iter().enumerate() {
            for (x, &a) in src.members.iter().enumerate() {
                let adjoint = self.restriction_right_adjoint(a, a1)?;
                acc = down.lattice.meet2(acc, adjoint[m.get(y, x)]);
            }
        }
        Ok(down.to_parent(acc))
    }

    /// `T^{(a, a1)}(g)`: the matrix `A_{Fa} → A_{Fa1}` with `g` at `(a1, a)` and top elsewhere.
    pub fn transposed_point(&self, a: usize, a1: usize, g: usize) -> QMatrix {
        let f = self.functor();
        let (b, b1) = (f.apply(a), f.apply(a1));
        let (src, dst) = (self.fiber(b), self.fiber(b1));
        let (x0, y0) = (src.local_of(a).expect("a lies over b"), dst.local_of(a1).expect("a1 lies over b1"));
        let l = self.base().hom(self.cod().ty(b), self.cod().ty(b1));
        QMatrix::from_fn(self.base().clone(), src.category.types().to_vec(), dst.category.types().to_vec(), |y, x| {
            if (y, x) == (y0, x0) {
                g
            } else {
                l.top()
            }
        })
    }
}

pub fn hat(f: &QFunctor, b: usize, b1: usize, elem: usize) -> Result<QDistributor, ExpError> {
    FiberedFunctor::new(f)?.hat(b, b1, elem)
}

pub fn sharp(f: &QFunctor, b: usize, b1: usize, phi: &QDistributor) -> Result<usize, ExpError> {
    FiberedFunctor::new(f)?.sharp(b, b1, phi)
}

pub fn transposed_point(f: &QFunctor, a: usize, a1: usize, g: usize) -> Result<QMatrix, ExpError> {
    Ok(FiberedFunctor::new(f)?.transposed_point(a, a1, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expcheck::test_support::*;
    use crate::qcat::enumerate_distributors;

    #[test]
    fn hat_of_zero_is_zero() {
        let fib = FiberedFunctor::new(&identity_on(3)).unwrap();
        for b in 0..3 {
            for b1 in 0..3 {
                let d = fib.hat(b, b1, 0).unwrap();
                assert!(d.to_rows().iter().flatten().all(|&e| e == 0));
            }
        }
    }

    #[test]
    fn hat_on_skip_functor() {
        let fib = FiberedFunctor::new(&f_skip()).unwrap();
        assert_eq!(fib.hat(0, 2, 1).unwrap().to_rows(), vec![vec![1]]);
        assert_eq!(fib.hat(1, 2, 1).unwrap().to_rows(), vec![Vec::<usize>::new()]);
        assert_eq!(fib.hat(2, 0, 1), Err(ExpError::OutOfDownset { b: 2, b1: 0, f: 1 }));
    }

    #[test]
    fn adjunction_laws_on_identity() {
        let fib = FiberedFunctor::new(&identity_on(3)).unwrap();
        for b in 0..3 {
            for b1 in 0..3 {
                let (src, dst) = (fib.fiber(b).category.clone(), fib.fiber(b1).category.clone());
                let top = QDistributor::top(src.clone(), dst.clone());
                assert_eq!(fib.sharp(b, b1, &top).unwrap(), fib.cod().hom(b1, b));
                for phi in enumerate_distributors(&src, &dst) {
                    let s = fib.sharp(b, b1, &phi).unwrap();
                    assert!(fib.hat(b, b1, s).unwrap().leq(&phi));
                    for f in fib.downset(b, b1).members.clone() {
                        assert_eq!(f <= s, fib.hat(b, b1, f).unwrap().leq(&phi));
                    }
                }
            }
        }
    }

    #[test]
    fn transposed_point_recovers_pointwise_adjoint() {
        let fib = FiberedFunctor::new(&f_skip()).unwrap();
        for (a, a1) in [(0, 0), (0, 1), (1, 1)] {
            let adjoint = fib.restriction_right_adjoint(a, a1).unwrap().to_vec();
            let down = fib.downset(fib.functor().apply(a), fib.functor().apply(a1)).clone();
            for g in 0..2 {
                let t = fib.transposed_point(a, a1, g);
                let (b, b1) = (fib.functor().apply(a), fib.functor().apply(a1));
                assert_eq!(fib.sharp_matrix(b, b1, &t).unwrap(), down.to_parent(adjoint[g]));
            }
        }
    }
}
