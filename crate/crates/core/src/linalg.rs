//! Dense symmetric floating-point linear algebra.

use crate::error::{Error, Result};

/// Sweep cap for the cyclic Jacobi solver.
pub const MAX_SWEEPS: usize = 100;

/// Default relative tolerance for the off-diagonal norm in [`jacobi_eigen`].
pub const DEFAULT_EIGEN_TOL: f64 = 1e-13;

/// Dense square symmetric matrix, row-major.
///
/// Construction symmetrizes the input by averaging `(k, l)` and `(l, k)`, so the
/// stored entries are exactly symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// The `n × n` matrix whose entries are all 1.
    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| 1.0)
    }

    /// All ones off the diagonal, zero on it.
    pub fn complete(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 0.0 } else { 1.0 })
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = f(i, j);
            }
        }
        Self::symmetrized(n, data)
    }

    /// Builds from rows; panics unless the rows form a square array.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self::symmetrized(n, rows.concat())
    }

    fn symmetrized(n: usize, mut data: Vec<f64>) -> Self {
        for i in 0..n {
            for j in i + 1..n {
                let v = 0.5 * (data[i * n + j] + data[j * n + i]);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|v| v * c).collect() }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.n.max(1))
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }
}

/// Eigenvalues in ascending order with optional orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// `vectors[i]` belongs to `values[i]`.
    pub vectors: Option<Vec<Vec<f64>>>,
}

/// Cyclic Jacobi eigensolver.
///
/// Sweeps over all off-diagonal pairs, annihilating each with a plane rotation,
/// until the off-diagonal Frobenius norm falls below `tol·‖M‖_F`. Fails with
/// [`Error::NonConvergence`] after [`MAX_SWEEPS`] sweeps.
pub fn jacobi_eigen(m: &SymMatrix, tol: f64, want_vectors: bool) -> Result<Eigen> {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = m.dim();
    let mut a = m.rows();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let threshold = tol * m.frobenius_norm();

    let off_norm = |a: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                if want_vectors {
                    for row in v.iter_mut() {
                        let (vkp, vkq) = (row[p], row[q]);
                        row[p] = c * vkp - s * vkq;
                        row[q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    if !converged && off_norm(&a) > threshold {
        return Err(Error::NonConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = want_vectors.then(|| {
        order
            .iter()
            .map(|&i| v.iter().map(|row| row[i]).collect())
            .collect()
    });
    Ok(Eigen { values, vectors })
}

/// Ascending eigenvalues with the default tolerance.
pub fn eigenvalues(m: &SymMatrix) -> Result<Vec<f64>> {
    jacobi_eigen(m, DEFAULT_EIGEN_TOL, false).map(|e| e.values)
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &SymMatrix, b: &SymMatrix) -> SymMatrix {
    let (na, nb) = (a.dim(), b.dim());
    SymMatrix::from_fn(na * nb, |i, j| a.get(i / nb, j / nb) * b.get(i % nb, j % nb))
}

/// Entrywise quotient `Jt / D` with `0 / 0 := 0`.
///
/// Fails with [`Error::ZeroMismatch`] where `D` vanishes but `Jt` does not.
pub fn entrywise_quotient(jt: &SymMatrix, d: &SymMatrix) -> Result<SymMatrix> {
    let n = d.dim();
    if jt.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: jt.dim() });
    }
    for i in 0..n {
        for j in 0..n {
            if d.get(i, j) == 0.0 && jt.get(i, j) != 0.0 {
                return Err(Error::ZeroMismatch { row: i, col: j });
            }
        }
    }
    Ok(SymMatrix::from_fn(n, |i, j| {
        let den = d.get(i, j);
        if den == 0.0 {
            0.0
        } else {
            jt.get(i, j) / den
        }
    }))
}

/// Number of eigenvalues with `|λ| > tol·max(1, ‖M‖_F)`.
pub fn numeric_rank(m: &SymMatrix, tol: f64) -> Result<usize> {
    let cutoff = tol * m.frobenius_norm().max(1.0);
    Ok(eigenvalues(m)?.iter().filter(|v| v.abs() > cutoff).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cycle(n: usize) -> SymMatrix {
        SymMatrix::from_fn(n, |i, j| {
            if (i + 1) % n == j || (j + 1) % n == i {
                1.0
            } else {
                0.0
            }
        })
    }

    fn path(n: usize) -> SymMatrix {
        SymMatrix::from_fn(n, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 })
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn eigenvalue_examples() {
        assert_close(&eigenvalues(&SymMatrix::diag(&[3.0, 1.0, 2.0])).unwrap(), &[1.0, 2.0, 3.0], 1e-15);
        assert_close(
            &eigenvalues(&cycle(6)).unwrap(),
            &[-2.0, -1.0, -1.0, 1.0, 1.0, 2.0],
            1e-10,
        );
        let r2 = 2f64.sqrt();
        assert_close(&eigenvalues(&path(3)).unwrap(), &[-r2, 0.0, r2], 1e-10);
        assert!(eigenvalues(&SymMatrix::zeros(0)).unwrap().is_empty());
        assert_close(&eigenvalues(&SymMatrix::zeros(3)).unwrap(), &[0.0; 3], 0.0);
    }

    #[test]
    fn kron_examples() {
        let c = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 3.0]]);
        let k = kron(&SymMatrix::identity(2), &c);
        assert_eq!(k.get(0, 1), 2.0);
        assert_eq!(k.get(2, 3), 2.0);
        assert_eq!(k.get(3, 3), 3.0);
        assert_eq!(k.get(0, 2), 0.0);

        let zz = SymMatrix::diag(&[0.0, 0.0, 1.0]);
        let ev = eigenvalues(&kron(&SymMatrix::complete(2), &zz)).unwrap();
        assert_close(&ev, &[-1.0, 0.0, 0.0, 0.0, 0.0, 1.0], 1e-12);

        let a = cycle(4);
        assert_eq!(kron(&a, &SymMatrix::ones(1)), a);
    }

    #[test]
    fn quotient_examples() {
        let d = SymMatrix::from_fn(3, |i, j| if i == j { 0.0 } else { (i + j + 1) as f64 });
        let q = entrywise_quotient(&d.scaled(2.0), &d).unwrap();
        assert_eq!(q, SymMatrix::complete(3).scaled(2.0));
        assert_eq!(entrywise_quotient(&SymMatrix::zeros(3), &d).unwrap(), SymMatrix::zeros(3));
        let bad = SymMatrix::ones(3);
        assert_eq!(
            entrywise_quotient(&bad, &d),
            Err(Error::ZeroMismatch { row: 0, col: 0 })
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numeric_rank(&SymMatrix::diag(&[0.0, 0.0, 1.0]), 1e-9).unwrap(), 1);
        assert_eq!(numeric_rank(&SymMatrix::ones(5), 1e-9).unwrap(), 1);
        assert_eq!(numeric_rank(&SymMatrix::zeros(4), 1e-9).unwrap(), 0);
        assert_eq!(numeric_rank(&SymMatrix::identity(4), 1e-9).unwrap(), 4);
    }

    fn sym_strategy(max_n: usize) -> impl Strategy<Value = SymMatrix> {
        (1..=max_n).prop_flat_map(|n| {
            prop::collection::vec(-5.0f64..5.0, n * n).prop_map(move |v| {
                SymMatrix::from_fn(n, |i, j| v[i.min(j) * n + i.max(j)])
            })
        })
    }

    proptest! {
        #[test]
        fn eigenpairs_have_small_residuals(m in sym_strategy(9)) {
            let eig = jacobi_eigen(&m, DEFAULT_EIGEN_TOL, true).unwrap();
            let norm = m.frobenius_norm().max(1e-300);
            let vecs = eig.vectors.unwrap();
            for (lam, v) in eig.values.iter().zip(&vecs) {
                let mv = m.apply(v);
                let res: f64 = mv.iter().zip(v).map(|(a, b)| (a - lam * b).powi(2)).sum::<f64>().sqrt();
                prop_assert!(res <= 1e-8 * norm);
            }
            for (i, a) in vecs.iter().enumerate() {
                for (j, b) in vecs.iter().enumerate() {
                    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((dot - expected).abs() < 1e-10);
                }
            }
            let sum: f64 = eig.values.iter().sum();
            prop_assert!((sum - m.trace()).abs() <= 1e-8 * norm.max(1.0));
            prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn kron_spectrum_is_products(a in sym_strategy(4), b in sym_strategy(3)) {
            let ea = eigenvalues(&a).unwrap();
            let eb = eigenvalues(&b).unwrap();
            let mut products: Vec<f64> = ea.iter().flat_map(|x| eb.iter().map(move |y| x * y)).collect();
            products.sort_by(f64::total_cmp);
            let ek = eigenvalues(&kron(&a, &b)).unwrap();
            let scale = a.frobenius_norm().max(1.0) * b.frobenius_norm().max(1.0);
            for (x, y) in products.iter().zip(&ek) {
                prop_assert!((x - y).abs() <= 1e-9 * scale);
            }
        }
    }
}
