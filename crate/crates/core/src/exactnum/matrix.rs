//! Square integer and rational matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Dense square matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self {
            n,
            data: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    /// `self - c·I`.
    pub fn shift_diagonal(&self, c: &BigInt) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] -= c;
        }
        m
    }

    pub(crate) fn rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.n.max(1)).map(<[BigInt]>::to_vec).collect()
    }
}

/// Dense square matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![BigRational::zero(); n * n] }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self { n, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.n + j] = v;
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set_sym(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[j * self.n + i] = v.clone();
        self.data[i * self.n + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero_diagonal_symmetric(&self) -> bool {
        self.is_symmetric() && (0..self.n).all(|i| self.get(i, i).is_zero())
    }

    /// Every entry is 0 or 1.
    pub fn is_zero_one(&self) -> bool {
        self.data.iter().all(|v| v.is_zero() || v.is_one())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        Self { n: self.n, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// Least common multiple `D` of all denominators together with the integer
    /// matrix `D·self`.
    pub fn scale_to_integer(&self) -> (BigInt, IntMatrix) {
        let d = self.data.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let data = self
            .data
            .iter()
            .map(|v| v.numer() * (&d / v.denom()))
            .collect();
        (d, IntMatrix { n: self.n, data })
    }

    pub fn to_sym(&self) -> SymMatrix {
        let n = self.n;
        SymMatrix::from_fn(n, |i, j| self.get(i, j).to_f64().unwrap_or(f64::NAN))
    }

    /// Positions `(k, l)`, `k < l`, with nonzero entries.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|k| (k + 1..n).map(move |l| (k, l)))
            .filter(|&(k, l)| !self.get(k, l).is_zero())
            .collect()
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix({})", self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Determinant by fraction-free (Bareiss) elimination. The empty matrix has
/// determinant 1.
pub fn det_bareiss(m: &IntMatrix) -> BigInt {
    let n = m.dim();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.rows();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Monic characteristic polynomial `det(xI - M)` by the Faddeev–LeVerrier
/// recurrence; every division by `k` is exact over the integers.
pub fn char_poly(m: &IntMatrix) -> super::IntPolynomial {
    let n = m.dim();
    let a = m.rows();
    // Sparse row view of A: most inputs are adjacency matrices.
    let a_sparse: Vec<Vec<(usize, &BigInt)>> = a
        .iter()
        .map(|row| row.iter().enumerate().filter(|(_, v)| !v.is_zero()).collect())
        .collect();
    let mul_a = |b: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
        a_sparse
            .iter()
            .map(|row| {
                let mut out = vec![BigInt::zero(); n];
                for &(l, v) in row {
                    for (o, x) in out.iter_mut().zip(&b[l]) {
                        if !x.is_zero() {
                            *o += v * x;
                        }
                    }
                }
                out
            })
            .collect()
    };
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    // M_k = A·M_{k-1} + c_{n-k+1}·I, c_{n-k} = -tr(A·M_k) / k, with M_0 = 0.
    let mut am_prev: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut mk = am_prev;
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let am = mul_a(&mk);
        let trace: BigInt = (0..n).map(|i| &am[i][i]).sum();
        let (c, r) = (-trace).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
        coeffs[n - k] = c;
        am_prev = am;
    }
    super::IntPolynomial::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::IntPolynomial;

    fn k3() -> IntMatrix {
        IntMatrix::from_rows(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]])
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det_bareiss(&IntMatrix::identity(3)), BigInt::from(1));
        assert_eq!(det_bareiss(&k3().shift_diagonal(&BigInt::from(2))), BigInt::zero());
        assert_eq!(det_bareiss(&k3()), BigInt::from(2));
        assert_eq!(det_bareiss(&IntMatrix::zeros(0)), BigInt::from(1));
        // needs a row swap
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(det_bareiss(&m), BigInt::from(-1));
        let m = IntMatrix::from_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(det_bareiss(&m), BigInt::from(4));
    }

    #[test]
    fn characteristic_polynomial_examples() {
        assert_eq!(char_poly(&IntMatrix::zeros(2)), IntPolynomial::from_i64s(&[0, 0, 1]));
        assert_eq!(char_poly(&k3()), IntPolynomial::from_i64s(&[-2, -3, 0, 1]));
        assert_eq!(char_poly(&IntMatrix::from_rows(&[vec![1]])), IntPolynomial::from_i64s(&[-1, 1]));
        // non-symmetric input still works: [[1,2],[3,4]] → x^2 - 5x - 2
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(char_poly(&m), IntPolynomial::from_i64s(&[-2, -5, 1]));
    }

    #[test]
    fn scaling_rationals_to_integers() {
        let half = BigRational::new(1.into(), 2.into());
        let third = BigRational::new(1.into(), 3.into());
        let mut a = RatMatrix::zeros(2);
        a.set_sym(0, 1, half.clone());
        a.set(0, 0, third);
        let (d, m) = a.scale_to_integer();
        assert_eq!(d, BigInt::from(6));
        assert_eq!(m.get(0, 1), &BigInt::from(3));
        assert_eq!(m.get(0, 0), &BigInt::from(2));
    }
}
