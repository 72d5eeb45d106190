//! Lower and upper bounds on the number of time steps and the time overhead.
//!
//! All bounds are computed on the rescaled problem: simulating `W̃ ⊗ C` with
//! `W ⊗ C` is the same as simulating `(W̃/W) ⊗ C` with `K ⊗ C`, where `K` is the
//! all-ones zero-diagonal matrix. The quotient is formed exactly, so any
//! positive rescaling of matching pairs `(W_kl, W̃_kl)` leaves every bound
//! literally unchanged.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::RatMatrix;
use crate::graphs::{greedy_edge_coloring, presets, quotient_target, InteractionGraph};
use crate::linalg::{eigenvalues, entrywise_quotient, kron, numeric_rank, SymMatrix};
use crate::spectral::{count_positive, min_eig_rationality, MinEigenvalue, RationalityVerdict, SpectralConfig};

/// Tolerance for eigenvalues on the boundary of the admissible interval; such
/// eigenvalues count as inside.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Relative tolerance for positivity and rank decisions.
pub const RANK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingKind {
    Zz,
    Identity,
    Custom,
}

/// The common interaction type `C` shared by all pairs, with its cached
/// extreme eigenvalues and rank.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingType {
    kind: CouplingKind,
    matrix: SymMatrix,
    lambda_min: f64,
    lambda_max: f64,
    rank: usize,
}

impl CouplingType {
    /// `σ_z ⊗ σ_z` coupling between qubits: `C = diag(0, 0, 1)`.
    pub fn zz() -> Self {
        Self::build(CouplingKind::Zz, SymMatrix::diag(&[0.0, 0.0, 1.0])).expect("zz coupling")
    }

    /// Isotropic coupling `C = identity(m)`.
    pub fn identity(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::TooSmall { what: "coupling dimension", value: 0, min: 1 });
        }
        Self::build(CouplingKind::Identity, SymMatrix::identity(m))
    }

    /// Any symmetric `m × m` coupling. Exact matches of the presets are
    /// recognized.
    pub fn custom(matrix: SymMatrix) -> Result<Self> {
        if matrix.dim() == 0 {
            return Err(Error::TooSmall { what: "coupling dimension", value: 0, min: 1 });
        }
        let kind = if matrix == SymMatrix::diag(&[0.0, 0.0, 1.0]) {
            CouplingKind::Zz
        } else if matrix == SymMatrix::identity(matrix.dim()) {
            CouplingKind::Identity
        } else {
            CouplingKind::Custom
        };
        Self::build(kind, matrix)
    }

    fn build(kind: CouplingKind, matrix: SymMatrix) -> Result<Self> {
        let ev = eigenvalues(&matrix)?;
        let rank = numeric_rank(&matrix, RANK_TOL)?;
        Ok(Self { kind, lambda_min: ev[0], lambda_max: *ev.last().unwrap(), rank, matrix })
    }

    pub fn kind(&self) -> CouplingKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_psd(&self) -> bool {
        self.lambda_min >= -RANK_TOL * self.matrix.frobenius_norm().max(1.0)
    }
}

/// General eigenvalue-counting lower bound.
///
/// `s` is the number of eigenvalues of `Jt / (W ⊗ I)` strictly outside
/// `[-μ·λ_max(C), -μ·λ_min(C)]` (`I` the all-ones `m × m` matrix); the bound is
/// `⌈s / r(C)⌉`.
pub fn thm1_steps_lower(jt: &SymMatrix, w: &InteractionGraph, c: &CouplingType, mu: f64) -> Result<usize> {
    let m = c.m();
    if jt.dim() != w.n() * m {
        return Err(Error::DimensionMismatch { expected: w.n() * m, got: jt.dim() });
    }
    let divisor = kron(&w.to_sym(), &SymMatrix::ones(m));
    let rescaled = entrywise_quotient(jt, &divisor)?;
    steps_lower_from_rescaled(&rescaled, c, mu)
}

/// [`thm1_steps_lower`] on an already rescaled target `J' = Jt / (W ⊗ I)`.
pub fn steps_lower_from_rescaled(rescaled: &SymMatrix, c: &CouplingType, mu: f64) -> Result<usize> {
    if !(mu > 0.0) {
        return Err(Error::NonPositiveMu(mu.to_string()));
    }
    if c.rank() == 0 {
        return Err(Error::ZeroCoupling);
    }
    let lo = -mu * c.lambda_max() - BOUNDARY_TOL;
    let hi = -mu * c.lambda_min() + BOUNDARY_TOL;
    let s = eigenvalues(rescaled)?.iter().filter(|&&v| v < lo || v > hi).count();
    Ok(s.div_ceil(c.rank()))
}

/// Carathéodory bound `n(n-1)m²/2 + 1` on the steps of any feasible simulation.
pub fn thm2_steps_upper(n: usize, m: usize) -> u64 {
    let (n, m) = (n as u64, m as u64);
    n * n.saturating_sub(1) * m * m / 2 + 1
}

/// Positive semidefinite coupling: at least the number of positive eigenvalues
/// of `A = W̃/W`.
pub fn thm3_case1(a: &RatMatrix) -> Result<usize> {
    count_positive(&a.to_sym(), RANK_TOL)
}

/// Isotropic coupling: at least `n - k`, `k` the exact multiplicity of `μ_min`.
pub fn thm3_case2(a: &RatMatrix) -> Result<usize> {
    let min = min_eig_rationality(a, &SpectralConfig::default())?;
    Ok(a.dim() - min.multiplicity)
}

/// Sign-flip bounds for `zz` coupling: `(lower, upper)` with `lower = n` when
/// `μ_min` is certified irrational and `n - k` otherwise, and
/// `upper = n(n-1)/2 + 1`.
pub fn thm3_case3(a: &RatMatrix) -> Result<(usize, u64)> {
    let b = case3_bound(a, &SpectralConfig::default())?;
    Ok((b.lower, b.upper.expect("case 3 has an upper bound")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Thm3Case {
    Case1,
    Case2,
    Case3,
}

/// A step lower bound from one case of the coupling-preserving theorem.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thm3Bound {
    pub case: Thm3Case,
    pub lower: usize,
    /// The `n - k` bound without the irrationality strengthening (cases 2, 3).
    pub lower_without_irrationality: Option<usize>,
    pub upper: Option<u64>,
    /// Multiplicity of the minimal eigenvalue (cases 2, 3).
    pub k: Option<usize>,
    pub verdict: Option<&'static str>,
    pub rationale: String,
}

fn case3_bound(a: &RatMatrix, cfg: &SpectralConfig) -> Result<Thm3Bound> {
    let n = a.dim();
    let min = min_eig_rationality(a, cfg)?;
    let weak = n - min.multiplicity;
    let (lower, rationale) = match &min.verdict {
        RationalityVerdict::Irrational { .. } => (n, format!("minimal eigenvalue certified irrational: at least n = {n}")),
        RationalityVerdict::Integer { .. } => (weak, format!("minimal eigenvalue rational with multiplicity {}: n - k = {weak}", min.multiplicity)),
        RationalityVerdict::NumericOnly => (weak, format!("exact size limit exceeded; numeric multiplicity {}: n - k = {weak}", min.multiplicity)),
    };
    Ok(Thm3Bound {
        case: Thm3Case::Case3,
        lower,
        lower_without_irrationality: Some(weak),
        upper: Some(thm2_steps_upper(n, 1)),
        k: Some(min.multiplicity),
        verdict: Some(crate::spectral::verdict_label(&min.verdict)),
        rationale,
    })
}

/// Dispatches to the requested case after checking that the coupling meets its
/// hypothesis: case 1 needs `C ⪰ 0`, case 2 needs `C = identity`, case 3 needs
/// `C = diag(0, 0, 1)`.
pub fn thm3_steps_lower(case: Thm3Case, a: &RatMatrix, c: &CouplingType, cfg: &SpectralConfig) -> Result<Thm3Bound> {
    match case {
        Thm3Case::Case1 => {
            if !c.is_psd() {
                return Err(Error::CouplingMismatch("case 1 needs a positive semidefinite coupling".into()));
            }
            let lower = thm3_case1(a)?;
            Ok(Thm3Bound {
                case,
                lower,
                lower_without_irrationality: None,
                upper: None,
                k: None,
                verdict: None,
                rationale: format!("{lower} positive eigenvalues of the rescaled target"),
            })
        }
        Thm3Case::Case2 => {
            if c.kind() != CouplingKind::Identity {
                return Err(Error::CouplingMismatch("case 2 needs the identity coupling".into()));
            }
            let min = min_eig_rationality(a, cfg)?;
            let lower = a.dim() - min.multiplicity;
            Ok(Thm3Bound {
                case,
                lower,
                lower_without_irrationality: Some(lower),
                upper: None,
                k: Some(min.multiplicity),
                verdict: Some(crate::spectral::verdict_label(&min.verdict)),
                rationale: format!("minimal eigenvalue multiplicity {}: n - k = {lower}", min.multiplicity),
            })
        }
        Thm3Case::Case3 => {
            if c.kind() != CouplingKind::Zz {
                return Err(Error::CouplingMismatch("case 3 needs zz coupling diag(0, 0, 1)".into()));
            }
            case3_bound(a, cfg)
        }
    }
}

/// Overhead lower bound `τ ≥ -μ_min(A)`; strict when `μ_min` is irrational.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverheadLower {
    pub value: f64,
    pub strict: bool,
    /// Exact value as `p/q` when `μ_min` is rational.
    pub exact: Option<String>,
}

pub fn overhead_lower(a: &RatMatrix) -> Result<OverheadLower> {
    overhead_lower_from(a, &min_eig_rationality(a, &SpectralConfig::default())?)
}

fn overhead_lower_from(a: &RatMatrix, min: &MinEigenvalue) -> Result<OverheadLower> {
    if a.is_zero() {
        return Err(Error::ZeroTarget);
    }
    Ok(OverheadLower {
        value: -min.value,
        strict: min.verdict.is_irrational(),
        exact: min.verdict.rational_value().map(|v| (-v).to_string()),
    })
}

/// Overhead upper bound from an edge coloring of a 0/1 target: the preset
/// class count when the graph has a preset partition, otherwise the number of
/// greedy color classes.
pub fn overhead_upper_coloring(g: &InteractionGraph) -> Result<usize> {
    if !g.is_zero_one() {
        return Err(Error::NotZeroOne);
    }
    if let Some((_, parts)) = presets::recognize(g) {
        return Ok(parts.len());
    }
    Ok(greedy_edge_coloring(g).len())
}

/// Every bound that applies to one simulation problem.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub m: usize,
    pub coupling: CouplingKind,
    pub min_eigenvalue: MinEigenvalue,
    /// The `μ` used for the eigenvalue-counting bound.
    pub mu: Option<f64>,
    pub steps_lower_thm1: Option<usize>,
    pub steps_lower_thm3: Option<Thm3Bound>,
    pub steps_upper_thm2: u64,
    pub steps_upper_case3: Option<u64>,
    pub overhead_lower: Option<OverheadLower>,
    pub overhead_upper_coloring: Option<usize>,
    pub provenance: BTreeMap<&'static str, String>,
}

impl BoundsReport {
    /// Best available step lower bound.
    pub fn steps_lower(&self) -> usize {
        let t3 = self.steps_lower_thm3.as_ref().map_or(0, |b| b.lower);
        self.steps_lower_thm1.unwrap_or(0).max(t3)
    }
}

/// Computes all bounds for simulating `target ⊗ C` with `natural ⊗ C`.
///
/// `natural` must be complete. When `mu` is `None` the eigenvalue-counting
/// bound is evaluated at the overhead lower bound `-μ_min` of the rescaled
/// target (and skipped for a zero target).
pub fn bounds_report(
    target: &InteractionGraph,
    natural: &InteractionGraph,
    c: &CouplingType,
    mu: Option<f64>,
    cfg: &SpectralConfig,
) -> Result<BoundsReport> {
    let n = natural.n();
    if target.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: target.n() });
    }
    if let Some((k, l)) = (0..n)
        .flat_map(|k| (k + 1..n).map(move |l| (k, l)))
        .find(|&(k, l)| natural.weight(k, l).is_zero())
    {
        return Err(Error::IncompleteNatural { row: k, col: l });
    }
    if n < 2 {
        return Err(Error::TooSmall { what: "node count", value: n, min: 2 });
    }
    let a = quotient_target(target, natural)?;
    let min = min_eig_rationality(&a, cfg)?;
    let mut provenance = BTreeMap::new();

    let overhead = if a.is_zero() {
        provenance.insert("overhead_lower", "zero target: decoupling, no overhead bound".to_string());
        None
    } else {
        provenance.insert(
            "overhead_lower",
            "majorization: tau >= -mu_min(A); strict when mu_min is irrational (sign-flip case)".to_string(),
        );
        Some(overhead_lower_from(&a, &min)?)
    };

    let mu = mu.or_else(|| overhead.as_ref().map(|o| o.value));
    let steps_lower_thm1 = match mu {
        Some(mu) => {
            let rescaled = kron(&a.to_sym(), c.matrix());
            provenance.insert(
                "steps_lower_thm1",
                format!("eigenvalues of (W~/W) x C outside [-mu*lmax(C), -mu*lmin(C)] at mu = {mu}, divided by rank(C) = {}", c.rank()),
            );
            Some(steps_lower_from_rescaled(&rescaled, c, mu)?)
        }
        None => {
            provenance.insert("steps_lower_thm1", "skipped: no overhead parameter for a zero target".to_string());
            None
        }
    };

    let case = match c.kind() {
        CouplingKind::Zz => Some(Thm3Case::Case3),
        CouplingKind::Identity => Some(Thm3Case::Case2),
        CouplingKind::Custom if c.is_psd() => Some(Thm3Case::Case1),
        CouplingKind::Custom => None,
    };
    let steps_lower_thm3 = match case {
        Some(case) => {
            let b = thm3_steps_lower(case, &a, c, cfg)?;
            let name = match case {
                Thm3Case::Case1 => "coupling-preserving bound, case 1 (positive semidefinite C): positive eigenvalues of W~/W",
                Thm3Case::Case2 => "coupling-preserving bound, case 2 (C = identity): n - k",
                Thm3Case::Case3 => "coupling-preserving bound, case 3 (zz, sign flips): n - k, or n if mu_min is irrational",
            };
            provenance.insert("steps_lower_thm3", name.to_string());
            Some(b)
        }
        None => None,
    };
    let steps_upper_case3 = (c.kind() == CouplingKind::Zz).then(|| {
        provenance.insert("steps_upper_case3", "Caratheodory over Seidel matrices: n(n-1)/2 + 1".to_string());
        thm2_steps_upper(n, 1)
    });
    provenance.insert("steps_upper_thm2", "Caratheodory: n(n-1)m^2/2 + 1".to_string());

    let overhead_upper_coloring = if a.is_zero_one() && !a.is_zero() {
        let g = InteractionGraph::from_matrix(&a)?;
        let via = if presets::recognize(&g).is_some() { "preset partition" } else { "greedy edge coloring" };
        provenance.insert("overhead_upper_coloring", format!("matching classes, unit weight each ({via})"));
        Some(overhead_upper_coloring(&g)?)
    } else {
        None
    };

    Ok(BoundsReport {
        n,
        m: c.m(),
        coupling: c.kind(),
        min_eigenvalue: min,
        mu,
        steps_lower_thm1,
        steps_lower_thm3,
        steps_upper_thm2: thm2_steps_upper(n, c.m()),
        steps_upper_case3,
        overhead_lower: overhead,
        overhead_upper_coloring,
        provenance,
    })
}

/// Convenience: `A ⊗ C` for a rational target `A`.
pub fn lift_target(a: &RatMatrix, c: &CouplingType) -> SymMatrix {
    kron(&a.to_sym(), c.matrix())
}
