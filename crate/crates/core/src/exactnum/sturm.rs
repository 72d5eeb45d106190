//! Sturm sequences for exact real-root counting.

use num_rational::BigRational;
use num_traits::Signed;

use super::poly::IntPolynomial;

/// Sturm chain `p, p', -rem(p, p'), ...` kept over the integers.
///
/// Remainders are replaced by positive multiples (pseudo-remainders with the
/// sign corrected, then divided by their content), which leaves every sign
/// evaluation unchanged.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<IntPolynomial>,
}

impl SturmChain {
    pub fn new(p: &IntPolynomial) -> Self {
        let mut chain = Vec::new();
        if p.is_zero() {
            return Self { chain };
        }
        chain.push(p.clone());
        let dp = p.derivative();
        if dp.is_zero() {
            return Self { chain };
        }
        chain.push(dp);
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            let mut r = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            let delta = a.degree().unwrap() - b.degree().unwrap();
            if b.leading().unwrap().is_negative() && (delta + 1) % 2 == 1 {
                r = r.neg();
            }
            // r is now a positive multiple of rem(a, b); the chain takes -rem.
            let c = r.content();
            let next = r.div_scalar(&c).unwrap().neg();
            let done = next.is_constant();
            chain.push(next);
            if done {
                break;
            }
        }
        Self { chain }
    }

    pub fn polys(&self) -> &[IntPolynomial] {
        &self.chain
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn variations_at(&self, q: &BigRational) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at(q)))
    }

    fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.chain.iter().map(IntPolynomial::sign_at_neg_inf))
    }

    fn variations_at_pos_inf(&self) -> usize {
        Self::variations(self.chain.iter().map(IntPolynomial::sign_at_pos_inf))
    }

    /// Number of distinct real roots strictly below `q`.
    pub fn count_below(&self, q: &BigRational) -> usize {
        let Some(p) = self.chain.first() else { return 0 };
        // V(-∞) - V(q) counts the distinct roots in (-∞, q].
        let upto = self.variations_at_neg_inf() - self.variations_at(q);
        if p.sign_at(q) == 0 {
            upto - 1
        } else {
            upto
        }
    }

    /// Number of distinct real roots.
    pub fn count_real(&self) -> usize {
        if self.chain.is_empty() {
            return 0;
        }
        self.variations_at_neg_inf() - self.variations_at_pos_inf()
    }
}

/// Number of real roots of the square-free polynomial `p` strictly below `q`.
pub fn count_roots_below(p: &IntPolynomial, q: &BigRational) -> usize {
    SturmChain::new(p).count_below(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn spec_examples() {
        let x2m2 = IntPolynomial::from_i64s(&[-2, 0, 1]);
        assert_eq!(count_roots_below(&x2m2, &q(0, 1)), 1);
        assert_eq!(count_roots_below(&x2m2, &q(-2, 1)), 0);
        assert_eq!(count_roots_below(&IntPolynomial::from_i64s(&[-1, 1]), &q(5, 1)), 1);
    }

    #[test]
    fn roots_at_the_query_point_are_excluded() {
        // (x - 1)(x - 2)(x + 3)
        let p = IntPolynomial::linear_root(1)
            .mul(&IntPolynomial::linear_root(2))
            .mul(&IntPolynomial::linear_root(-3));
        let chain = SturmChain::new(&p);
        assert_eq!(chain.count_below(&q(-3, 1)), 0);
        assert_eq!(chain.count_below(&q(1, 1)), 1);
        assert_eq!(chain.count_below(&q(3, 2)), 2);
        assert_eq!(chain.count_below(&q(2, 1)), 2);
        assert_eq!(chain.count_below(&q(21, 10)), 3);
        assert_eq!(chain.count_real(), 3);
    }

    #[test]
    fn negative_leading_coefficient() {
        // -(x^2 - 2) has the same roots.
        let p = IntPolynomial::from_i64s(&[2, 0, -1]);
        let chain = SturmChain::new(&p);
        assert_eq!(chain.count_below(&q(0, 1)), 1);
        assert_eq!(chain.count_below(&q(3, 2)), 2);
        assert_eq!(chain.count_real(), 2);
    }

    #[test]
    fn complex_roots_are_not_counted() {
        let p = IntPolynomial::from_i64s(&[1, 0, 1]).mul(&IntPolynomial::linear_root(4));
        assert_eq!(SturmChain::new(&p).count_real(), 1);
    }
}
