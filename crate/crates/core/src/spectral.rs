//! Spectra with exact rationality verdicts for the minimal eigenvalue.
//!
//! Eigenvalues are computed numerically and clustered into multiplicities. For
//! matrices with rational entries the minimal eigenvalue is additionally
//! classified exactly: the matrix is scaled by the lcm `D` of its denominators
//! to an integer matrix `DA`, whose characteristic polynomial is monic with
//! integer coefficients. A rational root of such a polynomial is an integer, so
//! `λ` is rational iff `Dλ` is an integer root. The root belonging to the
//! minimum is isolated with Sturm chains, which also yields its exact
//! multiplicity via the square-free decomposition.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{char_poly, IntPolynomial, RatMatrix, SturmChain};
use crate::linalg::{eigenvalues, SymMatrix};

/// Largest dimension for which exact verdicts are computed by default.
pub const DEFAULT_EXACT_SIZE_LIMIT: usize = 64;

/// Relative clustering tolerance, scaled by `max(1, ‖M‖_F)`.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralConfig {
    pub cluster_tol: f64,
    pub exact_size_limit: usize,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self { cluster_tol: DEFAULT_CLUSTER_TOL, exact_size_limit: DEFAULT_EXACT_SIZE_LIMIT }
    }
}

/// Eigenvalue clusters in ascending order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub clusters: Vec<Cluster>,
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
}

impl Spectrum {
    pub fn min(&self) -> Option<Cluster> {
        self.clusters.first().copied()
    }

    pub fn max(&self) -> Option<Cluster> {
        self.clusters.last().copied()
    }
}

/// Greedy clustering of ascending values: a value joins the current cluster
/// when it lies within `tol` of the previous value. Cluster values are means.
pub fn cluster_eigenvalues(values: &[f64], tol: f64) -> Spectrum {
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for &v in values {
        match groups.last_mut() {
            Some(g) if (v - g.last().unwrap()).abs() <= tol => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    Spectrum {
        clusters: groups
            .iter()
            .map(|g| Cluster { value: g.iter().sum::<f64>() / g.len() as f64, multiplicity: g.len() })
            .collect(),
        n: values.len(),
    }
}

/// Numeric spectrum of `m` clustered with the configured tolerance.
pub fn spectrum(m: &SymMatrix, cfg: &SpectralConfig) -> Result<Spectrum> {
    let values = eigenvalues(m)?;
    Ok(cluster_eigenvalues(&values, cfg.cluster_tol * m.frobenius_norm().max(1.0)))
}

/// Exact classification of the minimal eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RationalityVerdict {
    /// `λ_min = root / scale` where `root` is an integer root of the
    /// characteristic polynomial of the scaled matrix `scale·A`. For integer
    /// matrices `scale = 1`.
    Integer {
        #[serde(serialize_with = "ser_display")]
        root: BigInt,
        #[serde(serialize_with = "ser_display")]
        scale: BigInt,
    },
    /// Certified irrational. `lower ≤ λ_min < upper` and the closed interval
    /// contains no integer multiple of `1 / scale`, so `λ_min` is bounded away
    /// from every rational with that denominator.
    Irrational {
        #[serde(serialize_with = "ser_display")]
        lower: BigRational,
        #[serde(serialize_with = "ser_display")]
        upper: BigRational,
        #[serde(serialize_with = "ser_display")]
        scale: BigInt,
    },
    /// Matrix too large for the exact pipeline.
    NumericOnly,
}

pub(crate) fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl RationalityVerdict {
    pub fn is_irrational(&self) -> bool {
        matches!(self, RationalityVerdict::Irrational { .. })
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, RationalityVerdict::NumericOnly)
    }

    /// The exact eigenvalue for an integer verdict.
    pub fn rational_value(&self) -> Option<BigRational> {
        match self {
            RationalityVerdict::Integer { root, scale } => Some(BigRational::new(root.clone(), scale.clone())),
            _ => None,
        }
    }

    /// Lower bound on `|λ_min - z|` for every integer `z`, for an irrational
    /// verdict.
    pub fn integer_separation(&self) -> Option<BigRational> {
        let RationalityVerdict::Irrational { lower, upper, .. } = self else { return None };
        let below = lower - BigRational::from_integer(lower.floor().to_integer());
        let above = BigRational::from_integer(upper.ceil().to_integer()) - upper;
        Some(below.min(above))
    }
}

/// Minimal eigenvalue with its multiplicity and rationality verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinEigenvalue {
    pub value: f64,
    pub multiplicity: usize,
    pub verdict: RationalityVerdict,
}

/// Exact data about the characteristic polynomial of `D·A`.
#[derive(Clone, Debug)]
pub struct ExactSpectrum {
    pub scale: BigInt,
    pub char_poly: IntPolynomial,
    /// Square-free factors with multiplicities.
    pub factors: Vec<(IntPolynomial, usize)>,
    /// Product of the square-free factors: same roots, all simple.
    pub squarefree: IntPolynomial,
}

impl ExactSpectrum {
    pub fn new(a: &RatMatrix) -> Self {
        let (scale, da) = a.scale_to_integer();
        let char_poly = char_poly(&da);
        let factors = char_poly.square_free_decomposition();
        let squarefree = factors.iter().fold(IntPolynomial::one(), |acc, (f, _)| acc.mul(f));
        Self { scale, char_poly, factors, squarefree }
    }

    /// Rational bracket `[lower, upper)` in scaled units around the smallest
    /// root of the square-free part, refined from the numeric guess until it
    /// isolates exactly one root.
    fn isolate_min_root(&self, guess: f64, sturm: &SturmChain) -> (BigRational, BigRational) {
        let two = BigRational::from_integer(2.into());
        let g = BigRational::from_f64(guess).unwrap_or_else(BigRational::zero);
        let mut step = BigRational::new(1.into(), 1_000_000.into());
        let mut lower = &g - &step;
        while sturm.count_below(&lower) > 0 {
            step = &step * &two;
            lower = &g - &step;
        }
        let mut step = BigRational::new(1.into(), 1_000_000.into());
        let mut upper = &g + &step;
        while sturm.count_below(&upper) == 0 {
            step = &step * &two;
            upper = &g + &step;
        }
        while sturm.count_below(&upper) > 1 {
            let mid = (&lower + &upper) / &two;
            if sturm.count_below(&mid) >= 1 {
                upper = mid;
            } else {
                lower = mid;
            }
        }
        (lower, upper)
    }
}

/// Minimal eigenvalue of a symmetric rational matrix with exact multiplicity and
/// rationality verdict.
///
/// Matrices above `cfg.exact_size_limit` get a [`RationalityVerdict::NumericOnly`]
/// verdict with the numeric cluster multiplicity.
pub fn min_eig_rationality(a: &RatMatrix, cfg: &SpectralConfig) -> Result<MinEigenvalue> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if !a.is_symmetric() {
        return Err(Error::NotZeroDiagonalSymmetric);
    }
    let numeric = spectrum(&a.to_sym(), cfg)?;
    let min = numeric.min().expect("nonempty spectrum");
    if n > cfg.exact_size_limit {
        return Ok(MinEigenvalue {
            value: min.value,
            multiplicity: min.multiplicity,
            verdict: RationalityVerdict::NumericOnly,
        });
    }

    let exact = ExactSpectrum::new(a);
    let scale_f = num_traits::ToPrimitive::to_f64(&exact.scale).unwrap_or(f64::INFINITY);
    let sturm = SturmChain::new(&exact.squarefree);
    let (lower, upper) = exact.isolate_min_root(min.value * scale_f, &sturm);

    let (factor, multiplicity) = exact
        .factors
        .iter()
        .find(|(f, _)| SturmChain::new(f).count_below(&upper) == 1)
        .expect("the isolated root belongs to one square-free factor");

    // narrow to width < 1 so at most two integers remain as candidates
    let (mut lower, mut upper) = (lower, upper);
    let two = BigRational::from_integer(2.into());
    while &upper - &lower >= BigRational::one() {
        let mid = (&lower + &upper) / &two;
        if sturm.count_below(&mid) >= 1 {
            upper = mid;
        } else {
            lower = mid;
        }
    }
    let integer_root = [lower.ceil(), upper.floor()]
        .into_iter()
        .find(|z| *z >= lower && *z < upper && factor.sign_at(z) == 0)
        .map(|z| z.to_integer());

    let verdict = match integer_root {
        Some(root) => RationalityVerdict::Integer { root, scale: exact.scale.clone() },
        None => {
            let (lower, upper) = refine_away_from_integers(lower, upper, &sturm);
            let scale_q = BigRational::from_integer(exact.scale.clone());
            RationalityVerdict::Irrational {
                lower: lower / &scale_q,
                upper: upper / &scale_q,
                scale: exact.scale.clone(),
            }
        }
    };
    let value = match verdict.rational_value() {
        Some(v) => num_traits::ToPrimitive::to_f64(&v).unwrap_or(min.value),
        None => min.value,
    };
    Ok(MinEigenvalue { value, multiplicity: *multiplicity, verdict })
}

/// Bisects `[lower, upper)` (exactly one root, not an integer) until the closed
/// interval contains no integer.
fn refine_away_from_integers(
    mut lower: BigRational,
    mut upper: BigRational,
    sturm: &SturmChain,
) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(2.into());
    loop {
        let has_integer = lower.is_integer() || upper.is_integer() || lower.floor() != upper.floor();
        if !has_integer {
            return (lower, upper);
        }
        let mid = (&lower + &upper) / &two;
        if sturm.count_below(&mid) >= 1 {
            upper = mid;
        } else {
            lower = mid;
        }
    }
}

/// Exact comparison of `λ_min(A)` with a rational `q`.
pub fn compare_min_eigenvalue(a: &RatMatrix, q: &BigRational) -> Result<Ordering> {
    if a.dim() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let exact = ExactSpectrum::new(a);
    let scaled = q * BigRational::from_integer(exact.scale.clone());
    let sturm = SturmChain::new(&exact.squarefree);
    Ok(if sturm.count_below(&scaled) > 0 {
        Ordering::Less
    } else if exact.squarefree.sign_at(&scaled) == 0 {
        Ordering::Equal
    } else {
        Ordering::Greater
    })
}

/// Short label for reports.
pub fn verdict_label(v: &RationalityVerdict) -> &'static str {
    match v {
        RationalityVerdict::Integer { .. } => "rational",
        RationalityVerdict::Irrational { .. } => "irrational",
        RationalityVerdict::NumericOnly => "numeric-only",
    }
}

/// Number of eigenvalues strictly above `tol·max(1, ‖A‖_F)`.
pub fn count_positive(m: &SymMatrix, tol: f64) -> Result<usize> {
    let cutoff = tol * m.frobenius_norm().max(1.0);
    Ok(eigenvalues(m)?.iter().filter(|&&v| v > cutoff).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{det_bareiss, ratio};
    use crate::graphs::InteractionGraph;

    fn adj(g: InteractionGraph) -> RatMatrix {
        g.weight_matrix()
    }

    #[test]
    fn clustering_examples() {
        let s = cluster_eigenvalues(&[-2.0, -1.0, -1.0, 1.0, 1.0, 2.0], 1e-7);
        let got: Vec<(f64, usize)> = s.clusters.iter().map(|c| (c.value, c.multiplicity)).collect();
        assert_eq!(got, vec![(-2.0, 1), (-1.0, 2), (1.0, 2), (2.0, 1)]);
        assert_eq!(cluster_eigenvalues(&[0.0; 3], 1e-7).clusters, vec![Cluster { value: 0.0, multiplicity: 3 }]);
        let r2 = 2f64.sqrt();
        assert_eq!(cluster_eigenvalues(&[-r2, 0.0, r2], 1e-7).clusters.len(), 3);
    }

    #[test]
    fn min_eigenvalue_examples() {
        let cfg = SpectralConfig::default();
        let c6 = min_eig_rationality(&adj(InteractionGraph::cycle(6).unwrap()), &cfg).unwrap();
        assert_eq!(c6.value, -2.0);
        assert_eq!(c6.multiplicity, 1);
        assert_eq!(c6.verdict, RationalityVerdict::Integer { root: (-2).into(), scale: 1.into() });

        let p3 = min_eig_rationality(&adj(InteractionGraph::path(3).unwrap()), &cfg).unwrap();
        assert!((p3.value + 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(p3.multiplicity, 1);
        assert!(p3.verdict.is_irrational());

        let wheel = min_eig_rationality(&adj(InteractionGraph::graph_code_wheel()), &cfg).unwrap();
        assert!((wheel.value + (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert_eq!(wheel.multiplicity, 2);
        assert!(wheel.verdict.is_irrational());
    }

    #[test]
    fn irrational_brackets_contain_the_eigenvalue_and_avoid_integers() {
        let cfg = SpectralConfig::default();
        for g in [InteractionGraph::path(3).unwrap(), InteractionGraph::graph_code_wheel(), InteractionGraph::cycle(5).unwrap()] {
            let m = min_eig_rationality(&adj(g), &cfg).unwrap();
            let RationalityVerdict::Irrational { lower, upper, .. } = &m.verdict else { panic!() };
            let lo = num_traits::ToPrimitive::to_f64(lower).unwrap();
            let hi = num_traits::ToPrimitive::to_f64(upper).unwrap();
            assert!(lo <= m.value && m.value < hi);
            assert!(m.verdict.integer_separation().unwrap() > BigRational::zero());
        }
    }

    #[test]
    fn integer_verdict_makes_shifted_matrix_singular() {
        let cfg = SpectralConfig::default();
        for g in [
            InteractionGraph::cycle(4).unwrap(),
            InteractionGraph::cycle(8).unwrap(),
            InteractionGraph::complete(5).unwrap(),
            InteractionGraph::path(2).unwrap(),
        ] {
            let a = adj(g);
            let m = min_eig_rationality(&a, &cfg).unwrap();
            let RationalityVerdict::Integer { root, scale } = &m.verdict else { panic!("{m:?}") };
            let (d, da) = a.scale_to_integer();
            assert_eq!(&d, scale);
            assert!(det_bareiss(&da.shift_diagonal(root)).is_zero());
        }
    }

    #[test]
    fn rational_entries_are_scaled() {
        // (1/2)·A(C6) has λ_min = -1; (1/3)·A(P3) has λ_min = -√2/3.
        let cfg = SpectralConfig::default();
        let a = adj(InteractionGraph::cycle(6).unwrap()).scaled(&ratio(1, 2));
        let m = min_eig_rationality(&a, &cfg).unwrap();
        assert_eq!(m.verdict.rational_value(), Some(ratio(-1, 1)));
        let a = adj(InteractionGraph::path(3).unwrap()).scaled(&ratio(1, 3));
        let m = min_eig_rationality(&a, &cfg).unwrap();
        assert!(m.verdict.is_irrational());
        assert!((m.value + 2f64.sqrt() / 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_and_limits() {
        let cfg = SpectralConfig::default();
        let m = min_eig_rationality(&RatMatrix::zeros(4), &cfg).unwrap();
        assert_eq!(m.multiplicity, 4);
        assert_eq!(m.verdict.rational_value(), Some(ratio(0, 1)));
        assert_eq!(min_eig_rationality(&RatMatrix::zeros(0), &cfg), Err(Error::EmptyMatrix));
        let small = SpectralConfig { exact_size_limit: 3, ..cfg };
        let m = min_eig_rationality(&adj(InteractionGraph::path(5).unwrap()), &small).unwrap();
        assert_eq!(m.verdict, RationalityVerdict::NumericOnly);
        assert_eq!(m.multiplicity, 1);
    }

    #[test]
    fn exact_comparison() {
        let p3 = adj(InteractionGraph::path(3).unwrap());
        assert_eq!(compare_min_eigenvalue(&p3, &ratio(-2, 1)).unwrap(), Ordering::Greater);
        assert_eq!(compare_min_eigenvalue(&p3, &ratio(-141, 100)).unwrap(), Ordering::Less);
        assert_eq!(compare_min_eigenvalue(&p3, &ratio(-142, 100)).unwrap(), Ordering::Greater);
        let c6 = adj(InteractionGraph::cycle(6).unwrap());
        assert_eq!(compare_min_eigenvalue(&c6, &ratio(-2, 1)).unwrap(), Ordering::Equal);
    }

    #[test]
    fn exact_multiplicity_matches_numeric_clusters_on_families() {
        let cfg = SpectralConfig::default();
        let mut graphs = vec![InteractionGraph::graph_code_wheel()];
        for n in 3..=32 {
            graphs.push(InteractionGraph::cycle(n).unwrap());
            graphs.push(InteractionGraph::path(n).unwrap());
        }
        for n in 2..=12 {
            graphs.push(InteractionGraph::complete(n).unwrap());
        }
        for l in 2..=5 {
            graphs.push(InteractionGraph::square_lattice(l).unwrap());
        }
        for g in graphs {
            let a = adj(g);
            let exact = min_eig_rationality(&a, &cfg).unwrap();
            let numeric = spectrum(&a.to_sym(), &cfg).unwrap().min().unwrap();
            assert_eq!(exact.multiplicity, numeric.multiplicity, "n = {}", a.dim());
        }
    }
}
