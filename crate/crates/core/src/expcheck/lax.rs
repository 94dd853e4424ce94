use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ExpError, FiberedFunctor, Table};
use crate::qcat::{
    compose_distributors, count_matrices, enumerate_distributors, random_distributor, QDistributor, QFunctor,
};

/// Both directions of the square `hat(g ∘ f)` versus `hat(g) ⊗ hat(f)` at a triple
/// `(b, b1, b2)`; each failure is the first `(f, g)` in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HatSquareReport {
    pub lax: bool,
    pub oplax: bool,
    pub lax_failure: Option<(usize, usize)>,
    pub oplax_failure: Option<(usize, usize)>,
}

/// How many distributor pairs `check_sharp_lax` may enumerate before switching to sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SharpLaxBudget {
    /// Upper bound on `|Matr(A_b, A_b1)| · |Matr(A_b1, A_b2)|` for exhaustive enumeration.
    pub max_pairs: u128,
    /// Random pairs checked when the bound is exceeded, after every pair of hat-images.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SharpLaxBudget {
    fn default() -> Self {
        Self { max_pairs: 1 << 16, samples: 512, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharpLaxReport {
    pub holds: bool,
    pub exhaustive: bool,
    pub pairs_checked: u64,
    /// `(Φ, Ψ, Ψ^F ∘ Φ^F, (Ψ ⊗ Φ)^F)` for the first failing pair.
    pub failure: Option<(Table, Table, usize, usize)>,
}

impl FiberedFunctor {
    pub fn hat_square_report(&self, b: usize, b1: usize, b2: usize) -> HatSquareReport {
        let (b_cat, q) = (self.cod(), self.base());
        let (t, t1, t2) = (b_cat.ty(b), b_cat.ty(b1), b_cat.ty(b2));
        let mut report = HatSquareReport { lax: true, oplax: true, lax_failure: None, oplax_failure: None };
        for &f in &self.downset(b, b1).members {
            let hf = self.hat(b, b1, f).expect("f is below B(b1, b)");
            for &g in &self.downset(b1, b2).members {
                let hg = self.hat(b1, b2, g).expect("g is below B(b2, b1)");
                let composite = compose_distributors(&hg, &hf).expect("fibers compose");
                let direct = self.hat_matrix(b, b2, q.comp(t, t1, t2, g, f));
                if report.lax && !direct.leq(composite.as_matrix()) {
                    report.lax = false;
                    report.lax_failure = Some((f, g));
                }
                if report.oplax && !composite.as_matrix().leq(&direct) {
                    report.oplax = false;
                    report.oplax_failure = Some((f, g));
                }
            }
        }
        report
    }

    /// `hat(g ∘ f) <= hat(g) ⊗ hat(f)` for all `f <= B(b1, b)`, `g <= B(b2, b1)`.
    pub fn hat_lax(&self, b: usize, b1: usize, b2: usize) -> bool {
        self.hat_square_report(b, b1, b2).lax
    }

    /// `Ψ^F ∘ Φ^F <= (Ψ ⊗ Φ)^F` for distributors `Φ: A_b ⇸ A_b1`, `Ψ: A_b1 ⇸ A_b2`.
    pub fn sharp_lax(
        &self,
        b: usize,
        b1: usize,
        b2: usize,
        budget: &SharpLaxBudget,
    ) -> Result<SharpLaxReport, ExpError> {
        let (x, y, z) = (&self.fiber(b).category, &self.fiber(b1).category, &self.fiber(b2).category);
        let bound = count_matrices(x, y).saturating_mul(count_matrices(y, z));
        let exhaustive = bound <= budget.max_pairs;
        let hats = |from: usize, to: usize| -> Result<Vec<QDistributor>, ExpError> {
            let b_cat = self.cod();
            let l = self.base().hom(b_cat.ty(from), b_cat.ty(to));
            l.below(b_cat.hom(to, from)).map(|f| self.hat(from, to, f)).collect()
        };
        let (phis, psis, hat_counts) = if exhaustive {
            (enumerate_distributors(x, y).collect(), enumerate_distributors(y, z).collect(), (0, 0))
        } else {
            let (mut phis, mut psis) = (hats(b, b1)?, hats(b1, b2)?);
            let counts = (phis.len(), psis.len());
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            for _ in 0..budget.samples {
                phis.push(random_distributor(&mut rng, x, y));
                psis.push(random_distributor(&mut rng, y, z));
            }
            (phis, psis, counts)
        };
        let sharp_phi = phis.iter().map(|p| self.sharp(b, b1, p)).collect::<Result<Vec<_>, _>>()?;
        let sharp_psi = psis.iter().map(|p| self.sharp(b1, b2, p)).collect::<Result<Vec<_>, _>>()?;
        let b_cat = self.cod();
        let (t, t1, t2) = (b_cat.ty(b), b_cat.ty(b1), b_cat.ty(b2));
        let q = self.base();
        let l = q.hom(t, t2);
        let mut checked = 0u64;
        let pairs: Box<dyn Iterator<Item = (usize, usize)>> = if exhaustive {
            Box::new((0..phis.len()).flat_map(|i| (0..psis.len()).map(move |j| (i, j))))
        } else {
            let (nh, nh1) = hat_counts;
            let hat_pairs = (0..nh).flat_map(move |i| (0..nh1).map(move |j| (i, j)));
            Box::new(hat_pairs.chain((0..budget.samples).map(move |k| (nh + k, nh1 + k))))
        };
        for (i, j) in pairs {
            checked += 1;
            let lhs = q.comp(t, t1, t2, sharp_psi[j], sharp_phi[i]);
            let rhs = self.sharp(b, b2, &compose_distributors(&psis[j], &phis[i])?)?;
            if !l.leq(lhs, rhs) {
                return Ok(SharpLaxReport {
                    holds: false,
                    exhaustive,
                    pairs_checked: checked,
                    failure: Some((phis[i].to_rows(), psis[j].to_rows(), lhs, rhs)),
                });
            }
        }
        Ok(SharpLaxReport { holds: true, exhaustive, pairs_checked: checked, failure: None })
    }

    pub fn hat_lax_everywhere(&self) -> bool {
        let n = self.cod().len();
        (0..n).all(|b| (0..n).all(|b1| (0..n).all(|b2| self.hat_lax(b, b1, b2))))
    }

    pub fn sharp_lax_everywhere(&self, budget: &SharpLaxBudget) -> Result<bool, ExpError> {
        let n = self.cod().len();
        for b in 0..n {
            for b1 in 0..n {
                for b2 in 0..n {
                    if !self.sharp_lax(b, b1, b2, budget)?.holds {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

pub fn hat_square_report(f: &QFunctor, b: usize, b1: usize, b2: usize) -> Result<HatSquareReport, ExpError> {
    Ok(FiberedFunctor::new(f)?.hat_square_report(b, b1, b2))
}

pub fn check_hat_lax(f: &QFunctor, b: usize, b1: usize, b2: usize) -> Result<bool, ExpError> {
    Ok(FiberedFunctor::new(f)?.hat_lax(b, b1, b2))
}

pub fn check_sharp_lax(
    f: &QFunctor,
    b: usize,
    b1: usize,
    b2: usize,
    budget: &SharpLaxBudget,
) -> Result<SharpLaxReport, ExpError> {
    FiberedFunctor::new(f)?.sharp_lax(b, b1, b2, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expcheck::test_support::*;
    use crate::qcat::QCategory;
    use crate::quantaloid::chain_quantale;
    use std::sync::Arc;

    #[test]
    fn skip_functor_fails_lax_square() {
        let fib = FiberedFunctor::new(&f_skip()).unwrap();
        let r = fib.hat_square_report(0, 1, 2);
        assert!(!r.lax && r.oplax);
        assert_eq!(r.lax_failure, Some((1, 1)));
        assert!(!fib.sharp_lax(0, 1, 2, &SharpLaxBudget::default()).unwrap().holds);
        assert!(!fib.hat_lax_everywhere());
    }

    #[test]
    fn identity_satisfies_both_squares() {
        let fib = FiberedFunctor::new(&identity_on(3)).unwrap();
        assert!(fib.hat_lax_everywhere());
        assert!(fib.sharp_lax_everywhere(&SharpLaxBudget::default()).unwrap());
    }

    #[test]
    fn empty_outer_fiber_is_trivial() {
        let fib = FiberedFunctor::new(&f_skip()).unwrap();
        for b in 0..3 {
            assert!(fib.hat_lax(1, b, 2));
            assert!(fib.hat_lax(0, b, 1));
        }
    }

    #[test]
    fn sampled_sharp_check_is_deterministic() {
        let fib = FiberedFunctor::new(&identity_on(2)).unwrap();
        let budget = SharpLaxBudget { max_pairs: 0, samples: 16, seed: 7 };
        let r1 = fib.sharp_lax(0, 1, 1, &budget).unwrap();
        let r2 = fib.sharp_lax(0, 1, 1, &budget).unwrap();
        assert_eq!(r1, r2);
        assert!(!r1.exhaustive && r1.holds);
    }

    #[test]
    fn sampling_includes_hat_pairs() {
        let q = Arc::new(chain_quantale(3).unwrap());
        let names = |p: &str, n: usize| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
        let a = QCategory::new(q.clone(), names("a", 3), vec![0; 3], vec![vec![0, 2, 3], vec![2, 0, 3], vec![1, 3, 0]]);
        let b = QCategory::new(q.clone(), names("b", 1), vec![0], vec![vec![0]]);
        let f = QFunctor::new(Arc::new(a.unwrap()), Arc::new(b.unwrap()), vec![0, 0, 0]).unwrap();
        let fib = FiberedFunctor::new(&f).unwrap();
        assert!(!fib.condition_two().verdict);
        let report = fib.sharp_lax(0, 0, 0, &SharpLaxBudget { max_pairs: 0, samples: 0, seed: 0 }).unwrap();
        assert!(!report.exhaustive && !report.holds);
    }
}
