//! Optimal time overhead of sign-flip schemes by linear programming.
//!
//! Every scheme realizes a nonnegative combination `Σ t S(x)` of Seidel
//! matrices, so the optimal overhead for a target `A` is
//! `min Σ t  s.t.  Σ t·S(x) = A, t ≥ 0`, one equality per pair `k < l`.
//! Since `S(x) = S(-x)` only patterns with `x_0 = +1` are used.

use std::fmt::Debug;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::RatMatrix;
use crate::graphs::SignPattern;
use crate::schemes::{Scheme, Step};

/// Largest `n` for the exact simplex (`2^13` generators).
pub const EXACT_MAX_N: usize = 14;
/// Largest `n` for the floating simplex.
pub const FLOAT_MAX_N: usize = 16;
/// Limits of the exhaustive minimal-step search.
pub const BRUTE_MAX_N: usize = 5;
pub const BRUTE_MAX_STEPS: usize = 8;
/// Zero threshold of the floating simplex.
pub const FLOAT_EPS: f64 = 1e-9;

/// The `2^(n-1)` distinct Seidel matrices of `n` nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    n: usize,
    patterns: Vec<SignPattern>,
}

impl GeneratorSet {
    pub fn new(n: usize) -> Self {
        let count = if n == 0 { 1 } else { 1usize << (n - 1) };
        Self { n, patterns: (0..count).map(|i| SignPattern::from_index(n, i)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[SignPattern] {
        &self.patterns
    }

    /// Column of generator `g` over the pairs `k < l` in lexicographic order.
    fn column(&self, g: usize) -> Vec<i8> {
        let x = self.patterns[g].signs();
        pairs(self.n).map(|(k, l)| x[k] * x[l]).collect()
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |k| (k + 1..n).map(move |l| (k, l)))
}

/// Scalars the simplex can run on. Floats compare against [`FLOAT_EPS`].
pub trait LpScalar: Num + Signed + Clone + PartialOrd + Debug {
    fn negligible(&self) -> bool;
    fn from_i8(v: i8) -> Self;

    fn definitely_positive(&self) -> bool {
        self.is_positive() && !self.negligible()
    }

    fn definitely_negative(&self) -> bool {
        self.is_negative() && !self.negligible()
    }
}

impl LpScalar for BigRational {
    fn negligible(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }

    fn from_i8(v: i8) -> Self {
        BigRational::from_integer(v.into())
    }
}

impl LpScalar for f64 {
    fn negligible(&self) -> bool {
        self.abs() <= FLOAT_EPS
    }

    fn from_i8(v: i8) -> Self {
        f64::from(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub tau: T,
    /// Generators with positive weight, in generator order.
    pub support: Vec<(SignPattern, T)>,
}

impl LpSolution<BigRational> {
    /// The support as a scheme, one step per generator.
    pub fn to_scheme(&self, n: usize) -> Result<Scheme> {
        let steps = self.support.iter().map(|(x, t)| Step { t: t.clone(), signs: x.clone() }).collect();
        Scheme::new(n, steps)
    }
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    obj: Vec<T>,
    basis: Vec<usize>,
    cols: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl<T: LpScalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() / p.clone();
            }
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<T>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    /// Primal simplex with Bland's rule over the columns marked `allowed`.
    fn run(&mut self, allowed: &[bool]) -> Outcome {
        loop {
            let Some(c) = (0..self.cols).find(|&j| allowed[j] && self.obj[j].definitely_negative()) else {
                return Outcome::Optimal;
            };
            let mut best: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].definitely_positive() {
                    continue;
                }
                let ratio = row[self.cols].clone() / row[c].clone();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Outcome::Unbounded,
            }
        }
    }
}

fn check_target(a: &RatMatrix) -> Result<()> {
    if !a.is_zero_diagonal_symmetric() {
        return Err(Error::NotZeroDiagonalSymmetric);
    }
    Ok(())
}

/// Two-phase simplex for `min Σ t, Σ t·S(x) = A, t ≥ 0`.
fn solve<T: LpScalar>(a: &RatMatrix, conv: impl Fn(&BigRational) -> T) -> LpSolution<T> {
    let n = a.dim();
    if a.is_zero() {
        return LpSolution { status: LpStatus::Optimal, tau: T::zero(), support: Vec::new() };
    }
    let gens = GeneratorSet::new(n);
    let g = gens.len();
    let b: Vec<T> = pairs(n).map(|(k, l)| conv(a.get(k, l))).collect();
    let m = b.len();
    let cols = g + m;

    let columns: Vec<Vec<i8>> = (0..g).map(|j| gens.column(j)).collect();
    let mut rows = Vec::with_capacity(m);
    for (i, bi) in b.iter().enumerate() {
        let flip = bi.is_negative();
        let mut row = Vec::with_capacity(cols + 1);
        row.extend(columns.iter().map(|col| T::from_i8(if flip { -col[i] } else { col[i] })));
        row.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
        row.push(bi.abs());
        rows.push(row);
    }
    // phase 1: minimize the sum of artificials
    let mut obj = vec![T::zero(); cols + 1];
    for row in &rows {
        for j in 0..g {
            obj[j] = obj[j].clone() - row[j].clone();
        }
        obj[cols] = obj[cols].clone() - row[cols].clone();
    }
    let mut t = Tableau { rows, obj, basis: (g..cols).collect(), cols };
    let all = vec![true; cols];
    t.run(&all);
    if t.obj[cols].definitely_negative() {
        return LpSolution { status: LpStatus::Infeasible, tau: T::zero(), support: Vec::new() };
    }
    // drive remaining artificials out of the basis; drop redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= g {
            match (0..g).find(|&j| !t.rows[i][j].negligible()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    // phase 2: unit costs on the generators
    let mut obj = vec![T::zero(); cols + 1];
    for j in 0..g {
        obj[j] = T::one();
    }
    for row in &t.rows {
        for (o, v) in obj.iter_mut().zip(row) {
            *o = o.clone() - v.clone();
        }
    }
    t.obj = obj;
    let structural: Vec<bool> = (0..cols).map(|j| j < g).collect();
    if let Outcome::Unbounded = t.run(&structural) {
        unreachable!("unit costs on nonnegative variables are bounded below");
    }

    let mut values = vec![T::zero(); g];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        if bv < g {
            values[bv] = row[cols].clone();
        }
    }
    let support: Vec<(SignPattern, T)> = values
        .into_iter()
        .enumerate()
        .filter(|(_, v)| v.definitely_positive())
        .map(|(j, v)| (gens.patterns()[j].clone(), v))
        .collect();
    let tau = support.iter().fold(T::zero(), |acc, (_, v)| acc + v.clone());
    LpSolution { status: LpStatus::Optimal, tau, support }
}

/// Exact optimal overhead over the rationals, `n ≤ 14`.
pub fn optimal_overhead_exact(a: &RatMatrix) -> Result<LpSolution<BigRational>> {
    check_target(a)?;
    if a.dim() > EXACT_MAX_N {
        return Err(Error::SizeExceeded { what: "exact linear program", n: a.dim(), max: EXACT_MAX_N });
    }
    Ok(solve(a, Clone::clone))
}

/// Floating optimal overhead, `n ≤ 16`.
pub fn optimal_overhead_float(a: &RatMatrix) -> Result<LpSolution<f64>> {
    check_target(a)?;
    if a.dim() > FLOAT_MAX_N {
        return Err(Error::SizeExceeded { what: "floating linear program", n: a.dim(), max: FLOAT_MAX_N });
    }
    Ok(solve(a, |v| v.to_f64().unwrap_or(f64::NAN)))
}

/// Exact solution of `M t = b` when the columns of `M` are independent.
fn solve_independent(cols: &[Vec<i8>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let (m, k) = (b.len(), cols.len());
    let mut aug: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| BigRational::from_i8(c[i])).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..k {
        let p = (r..m).find(|&i| !aug[i][c].negligible())?;
        aug.swap(r, p);
        let pv = aug[r][c].clone();
        for v in aug[r].iter_mut() {
            *v = &*v / &pv;
        }
        for i in 0..m {
            if i != r && !aug[i][c].negligible() {
                let f = aug[i][c].clone();
                for j in c..=k {
                    let d = &f * &aug[r][j];
                    aug[i][j] = &aug[i][j] - d;
                }
            }
        }
        r += 1;
    }
    if aug[r..].iter().any(|row| !row[k].negligible()) {
        return None;
    }
    Some(aug[..k].iter().map(|row| row[k].clone()).collect())
}

/// Smallest number of generators that represent `a` with strictly positive
/// times, found exhaustively; `None` if more than `max_steps` are needed.
///
/// Only linearly independent generator sets are tried: a positive
/// representation on a dependent set can be shifted along its kernel until a
/// time vanishes, so a smaller set also works.
pub fn min_steps_bruteforce(a: &RatMatrix, max_steps: usize) -> Result<Option<Scheme>> {
    check_target(a)?;
    let n = a.dim();
    if n > BRUTE_MAX_N {
        return Err(Error::SizeExceeded { what: "brute-force node count", n, max: BRUTE_MAX_N });
    }
    if max_steps > BRUTE_MAX_STEPS {
        return Err(Error::SizeExceeded { what: "brute-force step count", n: max_steps, max: BRUTE_MAX_STEPS });
    }
    if a.is_zero() {
        return Ok(Some(Scheme::empty(n)));
    }
    let gens = GeneratorSet::new(n);
    let columns: Vec<Vec<i8>> = (0..gens.len()).map(|j| gens.column(j)).collect();
    let b: Vec<BigRational> = pairs(n).map(|(k, l)| a.get(k, l).clone()).collect();
    for size in 1..=max_steps.min(gens.len()) {
        for subset in (0..gens.len()).combinations(size) {
            let cols: Vec<Vec<i8>> = subset.iter().map(|&j| columns[j].clone()).collect();
            let Some(t) = solve_independent(&cols, &b) else { continue };
            if t.iter().all(Signed::is_positive) {
                let steps = subset
                    .iter()
                    .zip(t)
                    .map(|(&j, t)| Step { t, signs: gens.patterns()[j].clone() })
                    .collect();
                return Scheme::new(n, steps).map(Some);
            }
        }
    }
    Ok(None)
}
