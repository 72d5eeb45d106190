//! Exact integer and rational arithmetic.
//!
//! Everything here is exact: determinants by Bareiss elimination,
//! characteristic polynomials by the Faddeev–LeVerrier recurrence, gcds by
//! subresultant sequences and real-root counts by Sturm chains. These feed the
//! rationality verdicts in [`crate::spectral`].

mod matrix;
mod poly;
mod sturm;

pub use matrix::{char_poly, det_bareiss, IntMatrix, RatMatrix};
pub use poly::IntPolynomial;
pub use sturm::{count_roots_below, SturmChain};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Shorthand for the rational `n / d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the integer `n` as a rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Square-free decomposition of `p`; see [`IntPolynomial::square_free_decomposition`].
pub fn square_free_decomposition(p: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    p.square_free_decomposition()
}

/// Integer roots of `p`, ascending; see [`IntPolynomial::integer_roots`].
pub fn integer_roots(p: &IntPolynomial) -> Vec<BigInt> {
    p.integer_roots()
}
