//! Sign-flip simulation schemes and their verification.
//!
//! A [`Scheme`] is a list of steps `(t_j, x_j)`; under `zz` coupling on a
//! complete natural graph it realizes `Σ_j t_j X_j K X_j`, whose `(k, l)` entry
//! is `Σ_j t_j x_j[k] x_j[l]`. Schemes are built from clique partitions by
//! cluster decoupling with Sylvester–Hadamard matrices: every clique gets one
//! Hadamard row, so pairs inside a clique keep their coupling and pairs across
//! cliques average to zero.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::RatMatrix;
use crate::graphs::{greedy_edge_coloring, presets, CliquePartition, InteractionGraph, SignPattern};
use crate::linalg::SymMatrix;
use crate::spectral::ser_display;

/// Tolerance for `‖B Bᵀ - I‖_F` of a general scheme block.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub t: BigRational,
    pub signs: SignPattern,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scheme {
    n: usize,
    steps: Vec<Step>,
}

impl Scheme {
    pub fn new(n: usize, steps: Vec<Step>) -> Result<Self> {
        for s in &steps {
            if !s.t.is_positive() {
                return Err(Error::NonPositiveTime);
            }
            if s.signs.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: s.signs.len() });
            }
        }
        Ok(Self { n, steps })
    }

    /// The zero-step scheme: no evolution at all, realizing the zero target.
    pub fn empty(n: usize) -> Self {
        Self { n, steps: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// `N`, the number of waiting intervals.
    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    /// `τ = Σ t_j`.
    pub fn overhead(&self) -> BigRational {
        self.steps.iter().map(|s| &s.t).sum()
    }
}

/// Sylvester construction of a `d × d` Hadamard matrix, `d` a power of two.
pub fn sylvester_hadamard(d: usize) -> Result<Vec<Vec<i8>>> {
    if !d.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(d));
    }
    let mut h = vec![vec![1i8]];
    while h.len() < d {
        let top = h.iter().map(|r| r.iter().chain(r).copied().collect());
        let bottom = h.iter().map(|r| r.iter().copied().chain(r.iter().map(|&v| -v)).collect());
        h = top.chain(bottom).collect();
    }
    Ok(h)
}

/// Keeps every within-clique pair at `weight` and cancels every cross-clique
/// pair, using `D` steps of length `weight / D` where `D` is the smallest
/// power of two not below the clique count.
pub fn cluster_decoupling_subroutine(p: &CliquePartition, weight: &BigRational) -> Result<Scheme> {
    cluster_decoupling_signed(p, &vec![1; p.n()], weight)
}

/// As [`cluster_decoupling_subroutine`] with an extra sign per node, so a pair
/// inside a clique is kept at `weight · orient[k] · orient[l]`.
pub fn cluster_decoupling_signed(p: &CliquePartition, orient: &[i8], weight: &BigRational) -> Result<Scheme> {
    if !weight.is_positive() {
        return Err(Error::NonPositiveTime);
    }
    if orient.len() != p.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), got: orient.len() });
    }
    let d = p.clique_count().max(1).next_power_of_two();
    let h = sylvester_hadamard(d)?;
    let t = weight / BigRational::from_integer(d.into());
    let steps = (0..d)
        .map(|j| {
            let signs = (0..p.n()).map(|v| h[p.clique_of(v)][j] * orient[v]).collect();
            Ok(Step { t: t.clone(), signs: SignPattern::new(signs)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Scheme::new(p.n(), steps)
}

/// Concatenates subroutines; targets and overheads add.
pub fn compose(subroutines: &[Scheme]) -> Result<Scheme> {
    let first = subroutines.first().ok_or(Error::EmptyComposition)?;
    let mut steps = Vec::new();
    for s in subroutines {
        if s.n != first.n {
            return Err(Error::DimensionMismatch { expected: first.n, got: s.n });
        }
        steps.extend(s.steps.iter().cloned());
    }
    Scheme::new(first.n, steps)
}

/// One unit-weight subroutine per partition.
pub fn scheme_from_partitions(n: usize, partitions: &[CliquePartition]) -> Result<Scheme> {
    if partitions.is_empty() {
        return Ok(Scheme::empty(n));
    }
    let subs = partitions
        .iter()
        .map(|p| cluster_decoupling_subroutine(p, &BigRational::one()))
        .collect::<Result<Vec<_>>>()?;
    compose(&subs)
}

/// Even cycle: two matchings, `n` steps, overhead 2.
pub fn preset_cycle(n: usize) -> Result<Scheme> {
    scheme_from_partitions(n, &presets::cycle_partitions(n)?)
}

/// Even `l × l` lattice: four matchings, overhead 4.
pub fn preset_lattice(l: usize) -> Result<Scheme> {
    scheme_from_partitions(l * l, &presets::lattice_partitions(l)?)
}

/// Wheel: three subroutines of four steps each, overhead 3.
pub fn preset_wheel() -> Result<Scheme> {
    scheme_from_partitions(6, &presets::wheel_partitions())
}

/// A matching class of the synthesizer: the partition into edge pairs and
/// singletons, a sign per node and the kept weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingClass {
    pub partition: CliquePartition,
    pub orient: Vec<i8>,
    pub weight: BigRational,
}

/// Splits the edges of `g` by absolute weight and greedily edge-colors each
/// group. A negative edge is realized by flipping the sign of its larger node.
pub fn matching_classes(g: &InteractionGraph) -> Result<Vec<MatchingClass>> {
    let n = g.n();
    let mut groups: BTreeMap<BigRational, Vec<(usize, usize)>> = BTreeMap::new();
    for (&(k, l), w) in g.weights() {
        groups.entry(w.abs()).or_default().push((k, l));
    }
    let mut out = Vec::new();
    for (weight, edges) in groups {
        let sub = InteractionGraph::from_edges(n, edges)?;
        for class in greedy_edge_coloring(&sub) {
            let mut orient = vec![1i8; n];
            for &(k, l) in &class {
                if g.weight(k, l).is_negative() {
                    orient[l] = -1;
                }
            }
            out.push(MatchingClass { partition: CliquePartition::from_matching(n, &class)?, orient, weight: weight.clone() });
        }
    }
    Ok(out)
}

/// General synthesizer: one cluster-decoupling subroutine per matching class.
///
/// For a 0/1 target, `N = Σ nextPowerOfTwo(#cliques)` over the classes and
/// `τ` is the number of classes. An empty target gives the zero-step scheme.
pub fn synthesize_by_matchings(g: &InteractionGraph) -> Result<Scheme> {
    let classes = matching_classes(g)?;
    if classes.is_empty() {
        return Ok(Scheme::empty(g.n()));
    }
    let subs = classes
        .iter()
        .map(|c| cluster_decoupling_signed(&c.partition, &c.orient, &c.weight))
        .collect::<Result<Vec<_>>>()?;
    compose(&subs)
}

/// `Σ_j t_j X_j K X_j`, exactly.
pub fn realized_target(s: &Scheme) -> RatMatrix {
    let n = s.n;
    let mut m = RatMatrix::zeros(n);
    for k in 0..n {
        for l in k + 1..n {
            let v: BigRational = s
                .steps
                .iter()
                .map(|st| if st.signs.get(k) == st.signs.get(l) { st.t.clone() } else { -st.t.clone() })
                .sum();
            m.set_sym(k, l, v);
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Defect {
    pub k: usize,
    pub l: usize,
    #[serde(serialize_with = "ser_display")]
    pub expected: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub realized: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    #[serde(serialize_with = "ser_display")]
    pub overhead: BigRational,
    pub steps: usize,
    pub defects: Vec<Defect>,
}

/// Exact check that `s` realizes `target`; lists every mismatched pair `k < l`.
pub fn verify(s: &Scheme, target: &RatMatrix) -> Result<VerifyReport> {
    if target.dim() != s.n {
        return Err(Error::DimensionMismatch { expected: s.n, got: target.dim() });
    }
    let realized = realized_target(s);
    let mut defects = Vec::new();
    for k in 0..s.n {
        for l in k + 1..s.n {
            let (e, r) = (target.get(k, l), realized.get(k, l));
            if e != r || target.get(l, k) != r {
                defects.push(Defect { k, l, expected: e.clone(), realized: r.clone() });
            }
        }
    }
    if let Some(k) = (0..s.n).find(|&k| !target.get(k, k).is_zero()) {
        defects.push(Defect { k, l: k, expected: target.get(k, k).clone(), realized: BigRational::zero() });
    }
    Ok(VerifyReport { ok: defects.is_empty(), overhead: s.overhead(), steps: s.step_count(), defects })
}

/// Dense `m × m` block, row-major.
pub type Block = Vec<Vec<f64>>;

#[derive(Clone, Debug, PartialEq)]
pub struct GeneralStep {
    pub t: f64,
    /// One block per node: `V_j = B_0 ⊕ … ⊕ B_{n-1}`.
    pub blocks: Vec<Block>,
}

/// Scheme with arbitrary orthogonal local actions, checked numerically.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralScheme {
    pub n: usize,
    pub m: usize,
    pub steps: Vec<GeneralStep>,
}

impl GeneralScheme {
    /// Lifts a sign scheme to `zz` coupling blocks: an unflipped node acts
    /// as the identity, a flipped node (conjugation by `σ_x`) as
    /// `diag(1, -1, -1)`, which reverses the `σ_z` component.
    pub fn from_sign_scheme(s: &Scheme) -> Self {
        let block = |sign: i8| -> Block {
            let d = [1.0, f64::from(sign), f64::from(sign)];
            (0..3).map(|i| (0..3).map(|j| if i == j { d[i] } else { 0.0 }).collect()).collect()
        };
        let steps = s
            .steps
            .iter()
            .map(|st| GeneralStep {
                t: rat_to_f64(&st.t),
                blocks: st.signs.signs().iter().map(|&x| block(x)).collect(),
            })
            .collect();
        Self { n: s.n, m: 3, steps }
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// `‖Σ_j t_j V_j J V_jᵀ - Jt‖_F`.
pub fn verify_general(s: &GeneralScheme, j: &SymMatrix, jt: &SymMatrix) -> Result<f64> {
    let dim = s.n * s.m;
    for mat in [j, jt] {
        if mat.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: mat.dim() });
        }
    }
    let mut acc = vec![vec![0.0; dim]; dim];
    for (idx, step) in s.steps.iter().enumerate() {
        if step.blocks.len() != s.n {
            return Err(Error::DimensionMismatch { expected: s.n, got: step.blocks.len() });
        }
        for (node, b) in step.blocks.iter().enumerate() {
            if b.len() != s.m || b.iter().any(|r| r.len() != s.m) {
                return Err(Error::DimensionMismatch { expected: s.m, got: b.len() });
            }
            if orthogonality_defect(b) > ORTHOGONALITY_TOL {
                return Err(Error::NonOrthogonalBlock { step: idx, node });
            }
        }
        // (V J Vᵀ)[(k,a),(l,b)] = Σ_{c,d} B_k[a][c] J[(k,c),(l,d)] B_l[b][d]
        for k in 0..s.n {
            for l in 0..s.n {
                let (bk, bl) = (&step.blocks[k], &step.blocks[l]);
                for a in 0..s.m {
                    for b in 0..s.m {
                        let mut v = 0.0;
                        for c in 0..s.m {
                            if bk[a][c] == 0.0 {
                                continue;
                            }
                            for d in 0..s.m {
                                v += bk[a][c] * j.get(k * s.m + c, l * s.m + d) * bl[b][d];
                            }
                        }
                        acc[k * s.m + a][l * s.m + b] += step.t * v;
                    }
                }
            }
        }
    }
    let mut sq = 0.0;
    for (r, row) in acc.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            sq += (v - jt.get(r, c)).powi(2);
        }
    }
    Ok(sq.sqrt())
}

fn orthogonality_defect(b: &Block) -> f64 {
    let m = b.len();
    let mut sq = 0.0;
    for i in 0..m {
        for j in 0..m {
            let dot: f64 = (0..m).map(|c| b[i][c] * b[j][c]).sum();
            let e = if i == j { dot - 1.0 } else { dot };
            sq += e * e;
        }
    }
    sq.sqrt()
}
