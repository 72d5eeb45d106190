//! Interaction graphs, clique partitions and sign patterns.
//!
//! Nodes are indexed from 0. A graph stores the off-diagonal weights `w_kl` of
//! a symmetric zero-diagonal weight matrix; a 0/1-weighted graph is an ordinary
//! adjacency matrix, i.e. the "keep or cancel" simulation target.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::RatMatrix;
use crate::linalg::SymMatrix;

/// Symmetric weight map over `n` nodes with zero diagonal.
///
/// Only nonzero weights are stored, keyed by `(k, l)` with `k < l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InteractionGraph {
    n: usize,
    weights: BTreeMap<(usize, usize), BigRational>,
}

impl InteractionGraph {
    /// Graph without edges.
    pub fn empty(n: usize) -> Self {
        Self { n, weights: BTreeMap::new() }
    }

    /// Builds a graph from weighted pairs. Pairs may be given in either order;
    /// duplicates, loops, out-of-range nodes and zero weights are rejected.
    pub fn from_weighted_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, BigRational)>,
    ) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at node {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) out of range for n = {n}")));
            }
            if w.is_zero() {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) has zero weight")));
            }
            let key = (a.min(b), a.max(b));
            if weights.insert(key, w).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge {key:?}")));
            }
        }
        Ok(Self { n, weights })
    }

    /// Builds a 0/1 graph from unweighted pairs.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::from_weighted_edges(n, edges.into_iter().map(|(a, b)| (a, b, BigRational::one())))
    }

    /// Reads the off-diagonal entries of a symmetric zero-diagonal matrix.
    pub fn from_matrix(a: &RatMatrix) -> Result<Self> {
        if !a.is_zero_diagonal_symmetric() {
            return Err(Error::NotZeroDiagonalSymmetric);
        }
        let weights = a
            .support()
            .into_iter()
            .map(|(k, l)| ((k, l), a.get(k, l).clone()))
            .collect();
        Ok(Self { n: a.dim(), weights })
    }

    /// Cycle `0-1-…-(n-1)-0`.
    pub fn cycle(n: usize) -> Result<Self> {
        check_min("cycle length", n, 3)?;
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Path `0-1-…-(n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        check_min("path length", n, 2)?;
        Self::from_edges(n, (0..n - 1).map(|i| (i, i + 1)))
    }

    /// `l × l` square lattice with nearest-neighbour edges; node `(r, c)` has
    /// index `r·l + c`.
    pub fn square_lattice(l: usize) -> Result<Self> {
        check_min("lattice side", l, 2)?;
        let idx = |r: usize, c: usize| r * l + c;
        let mut edges = Vec::new();
        for r in 0..l {
            for c in 0..l {
                if c + 1 < l {
                    edges.push((idx(r, c), idx(r, c + 1)));
                }
                if r + 1 < l {
                    edges.push((idx(r, c), idx(r + 1, c)));
                }
            }
        }
        Self::from_edges(l * l, edges)
    }

    /// Complete graph `K_n` with unit weights.
    pub fn complete(n: usize) -> Result<Self> {
        check_min("complete graph size", n, 2)?;
        Self::from_edges(n, (0..n).flat_map(|k| (k + 1..n).map(move |l| (k, l))))
    }

    /// The 6-node graph-code wheel: a 5-cycle on nodes 0–4 and hub node 5
    /// adjacent to all of them.
    pub fn graph_code_wheel() -> Self {
        let rim = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, 5));
        Self::from_edges(6, rim.chain(spokes)).expect("wheel edges are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    /// Nonzero weights keyed by `(k, l)` with `k < l`.
    pub fn weights(&self) -> &BTreeMap<(usize, usize), BigRational> {
        &self.weights
    }

    /// Edges `(k, l)` with `k < l`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.weights.keys().copied()
    }

    pub fn weight(&self, k: usize, l: usize) -> BigRational {
        self.weights
            .get(&(k.min(l), k.max(l)))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn has_edge(&self, k: usize, l: usize) -> bool {
        self.weights.contains_key(&(k.min(l), k.max(l)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges().filter(|&(k, l)| k == v || l == v).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_zero_one(&self) -> bool {
        self.weights.values().all(One::is_one)
    }

    /// Every off-diagonal pair carries a nonzero weight.
    pub fn is_complete(&self) -> bool {
        self.weights.len() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut components = self.n;
        for (k, l) in self.edges() {
            let (a, b) = (find(&mut parent, k), find(&mut parent, l));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components == 1
    }

    /// The weight matrix as exact rationals.
    pub fn weight_matrix(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.n);
        for (&(k, l), w) in &self.weights {
            m.set_sym(k, l, w.clone());
        }
        m
    }

    /// The weight matrix in floating point.
    pub fn to_sym(&self) -> SymMatrix {
        self.weight_matrix().to_sym()
    }

    /// Multiplies every weight by the rational factor `r(k, l)`, which must be
    /// nonzero on every edge.
    pub fn rescaled(&self, r: impl Fn(usize, usize) -> BigRational) -> Self {
        Self {
            n: self.n,
            weights: self
                .weights
                .iter()
                .map(|(&(k, l), w)| ((k, l), w * r(k, l)))
                .collect(),
        }
    }
}

fn check_min(what: &'static str, value: usize, min: usize) -> Result<()> {
    if value < min {
        Err(Error::TooSmall { what, value, min })
    } else {
        Ok(())
    }
}

/// Named graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "family")]
pub enum Family {
    Cycle { n: usize },
    Path { n: usize },
    Lattice { l: usize },
    Wheel,
    Complete { n: usize },
}

impl Family {
    pub fn build(self) -> Result<InteractionGraph> {
        match self {
            Family::Cycle { n } => InteractionGraph::cycle(n),
            Family::Path { n } => InteractionGraph::path(n),
            Family::Lattice { l } => InteractionGraph::square_lattice(l),
            Family::Wheel => Ok(InteractionGraph::graph_code_wheel()),
            Family::Complete { n } => InteractionGraph::complete(n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Cycle { .. } => "cycle",
            Family::Path { .. } => "path",
            Family::Lattice { .. } => "lattice",
            Family::Wheel => "wheel",
            Family::Complete { .. } => "complete",
        }
    }
}

/// Target quotient `A = W̃ / W` (entrywise, `0/0 := 0`).
///
/// This is the rescaled simulation target: simulating `W̃ ⊗ C` with `W ⊗ C`
/// is equivalent to simulating `A ⊗ C` with `K ⊗ C`.
pub fn quotient_target(target: &InteractionGraph, natural: &InteractionGraph) -> Result<RatMatrix> {
    if target.n() != natural.n() {
        return Err(Error::DimensionMismatch { expected: natural.n(), got: target.n() });
    }
    let mut a = RatMatrix::zeros(target.n());
    for (&(k, l), wt) in target.weights() {
        let w = natural.weight(k, l);
        if w.is_zero() {
            return Err(Error::ZeroMismatch { row: k, col: l });
        }
        a.set_sym(k, l, wt / w);
    }
    Ok(a)
}

/// First-fit edge coloring: edges are taken in order of decreasing maximum
/// endpoint degree (ties lexicographic) and each gets the smallest color not
/// already used at either endpoint. Every class is a matching and at most
/// `2Δ - 1` classes are used.
pub fn greedy_edge_coloring(g: &InteractionGraph) -> Vec<Vec<(usize, usize)>> {
    let deg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.sort_by_key(|&(k, l)| (std::cmp::Reverse(deg[k].max(deg[l])), k, l));

    let mut used: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.n()];
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    for (k, l) in edges {
        let color = (0..)
            .find(|c| !used[k].contains(c) && !used[l].contains(c))
            .unwrap();
        used[k].insert(color);
        used[l].insert(color);
        if color == classes.len() {
            classes.push(Vec::new());
        }
        classes[color].push((k, l));
    }
    for class in &mut classes {
        class.sort_unstable();
    }
    classes
}

/// Assignment of every node to one clique.
///
/// Clique indices are dense: `0..clique_count()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliquePartition {
    assignment: Vec<usize>,
    count: usize,
}

impl CliquePartition {
    /// From an explicit list of cliques that must cover `0..n` exactly once.
    pub fn from_cliques(n: usize, cliques: &[Vec<usize>]) -> Result<Self> {
        let mut assignment = vec![usize::MAX; n];
        for (c, clique) in cliques.iter().enumerate() {
            if clique.is_empty() {
                return Err(Error::InvalidPartition(format!("clique {c} is empty")));
            }
            for &v in clique {
                if v >= n {
                    return Err(Error::InvalidPartition(format!("node {v} out of range")));
                }
                if assignment[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("node {v} assigned twice")));
                }
                assignment[v] = c;
            }
        }
        if let Some(v) = assignment.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!("node {v} not assigned")));
        }
        Ok(Self { assignment, count: cliques.len() })
    }

    /// From a per-node assignment; labels are renumbered densely in order of
    /// first appearance.
    pub fn from_assignment(labels: &[usize]) -> Self {
        let mut map = BTreeMap::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Self { assignment, count: map.len() }
    }

    /// Two-node cliques for the matching edges followed by singletons for the
    /// unmatched nodes in index order.
    pub fn from_matching(n: usize, matching: &[(usize, usize)]) -> Result<Self> {
        let mut cliques: Vec<Vec<usize>> = matching.iter().map(|&(a, b)| vec![a, b]).collect();
        let mut covered = vec![false; n];
        for &(a, b) in matching {
            for v in [a, b] {
                if v >= n || covered[v] {
                    return Err(Error::InvalidPartition(format!(
                        "edge list is not a matching on {n} nodes"
                    )));
                }
                covered[v] = true;
            }
        }
        cliques.extend((0..n).filter(|&v| !covered[v]).map(|v| vec![v]));
        Self::from_cliques(n, &cliques)
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn clique_count(&self) -> usize {
        self.count
    }

    pub fn clique_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn cliques(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Pairs `(k, l)`, `k < l`, that share a clique.
    pub fn inner_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|k| (k + 1..n).map(move |l| (k, l)))
            .filter(|&(k, l)| self.assignment[k] == self.assignment[l])
            .collect()
    }
}

/// `true` iff every edge of `g` lies inside a clique of exactly one partition
/// and no non-edge lies inside any clique.
pub fn validate_clique_cover(partitions: &[CliquePartition], g: &InteractionGraph) -> bool {
    if partitions.iter().any(|p| p.n() != g.n()) {
        return false;
    }
    let mut hits: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for p in partitions {
        for pair in p.inner_pairs() {
            if !g.has_edge(pair.0, pair.1) {
                return false;
            }
            *hits.entry(pair).or_default() += 1;
        }
    }
    g.edges().all(|e| hits.get(&e) == Some(&1))
}

/// Sign pattern `x ∈ {±1}ⁿ` of one sign-flip time step: `x_k = -1` marks the
/// nodes that are conjugated in that step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignPattern(Vec<i8>);

impl SignPattern {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(s) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidSignPattern(format!("entry {s} is not ±1")));
        }
        Ok(Self(signs))
    }

    pub fn all_plus(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Pattern with `x_0 = +1` and `x_{i+1} = -1` iff bit `i` of `index` is set.
    pub fn from_index(n: usize, index: usize) -> Self {
        let mut signs = vec![1i8; n];
        for (i, s) in signs.iter_mut().enumerate().skip(1) {
            if index >> (i - 1) & 1 == 1 {
                *s = -1;
            }
        }
        Self(signs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, k: usize) -> i8 {
        self.0[k]
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }

    /// Representative with `x_0 = +1`; `S(x)` is unchanged.
    pub fn normalized(&self) -> Self {
        if self.0.first() == Some(&-1) {
            self.negated()
        } else {
            self.clone()
        }
    }

    /// Seidel matrix `S(x)`: `x_k x_l` off the diagonal, zero on it.
    pub fn seidel_matrix(&self) -> SymMatrix {
        let x = &self.0;
        SymMatrix::from_fn(x.len(), |k, l| if k == l { 0.0 } else { f64::from(x[k] * x[l]) })
    }

    /// Exact variant of [`SignPattern::seidel_matrix`].
    pub fn seidel_rational(&self) -> RatMatrix {
        let n = self.0.len();
        let mut m = RatMatrix::zeros(n);
        for k in 0..n {
            for l in k + 1..n {
                m.set_sym(k, l, BigRational::from_integer((self.0[k] * self.0[l]).into()));
            }
        }
        m
    }
}

/// Hand-built clique partitions for the graph families that have them.
pub mod presets {
    use super::*;

    /// Two matchings `{0,1},{2,3},…` and `{n-1,0},{1,2},…` of an even cycle.
    pub fn cycle_partitions(n: usize) -> Result<Vec<CliquePartition>> {
        check_min("cycle length", n, 4)?;
        if n % 2 != 0 {
            return Err(Error::NotEven { what: "cycle length", value: n });
        }
        let first: Vec<(usize, usize)> = (0..n / 2).map(|i| (2 * i, 2 * i + 1)).collect();
        let second: Vec<(usize, usize)> = (0..n / 2).map(|i| ((2 * i + n - 1) % n, 2 * i)).collect();
        Ok(vec![
            CliquePartition::from_matching(n, &first)?,
            CliquePartition::from_matching(n, &second)?,
        ])
    }

    /// Four matchings of an even `l × l` lattice: horizontal edges starting in
    /// an even column, in an odd column, then vertical edges starting in an even
    /// row, in an odd row. Empty classes (only for `l = 2`) are dropped.
    pub fn lattice_partitions(l: usize) -> Result<Vec<CliquePartition>> {
        check_min("lattice side", l, 2)?;
        if l % 2 != 0 {
            return Err(Error::NotEven { what: "lattice side", value: l });
        }
        let idx = |r: usize, c: usize| r * l + c;
        let horizontal = |parity: usize| -> Vec<(usize, usize)> {
            (0..l)
                .flat_map(|r| {
                    (parity..l.saturating_sub(1))
                        .step_by(2)
                        .map(move |c| (idx(r, c), idx(r, c + 1)))
                })
                .collect()
        };
        let vertical = |parity: usize| -> Vec<(usize, usize)> {
            (parity..l.saturating_sub(1))
                .step_by(2)
                .flat_map(|r| (0..l).map(move |c| (idx(r, c), idx(r + 1, c))))
                .collect()
        };
        [horizontal(0), horizontal(1), vertical(0), vertical(1)]
            .iter()
            .filter(|m| !m.is_empty())
            .map(|m| CliquePartition::from_matching(l * l, m))
            .collect()
    }

    /// The three clique partitions for the wheel. In the usual 1-based labels
    /// (hub = 6) they are `{1,2,6},{4,5},{3}`, `{3,4,6},{1,5},{2}` and
    /// `{1},{4},{2,3},{5,6}`; here every label is shifted down by one.
    pub fn wheel_partitions() -> Vec<CliquePartition> {
        let subs: [&[&[usize]]; 3] = [
            &[&[1, 2, 6], &[4, 5], &[3]],
            &[&[3, 4, 6], &[1, 5], &[2]],
            &[&[1], &[4], &[2, 3], &[5, 6]],
        ];
        subs.iter()
            .map(|cliques| {
                let zero_based: Vec<Vec<usize>> = cliques
                    .iter()
                    .map(|c| c.iter().map(|v| v - 1).collect())
                    .collect();
                CliquePartition::from_cliques(6, &zero_based).expect("wheel cliques are valid")
            })
            .collect()
    }

    /// Preset partitions if `g` is (structurally) an even cycle, an even square
    /// lattice or the wheel.
    pub fn recognize(g: &InteractionGraph) -> Option<(Family, Vec<CliquePartition>)> {
        let n = g.n();
        if n >= 4 && n % 2 == 0 && InteractionGraph::cycle(n).ok().as_ref() == Some(g) {
            return Some((Family::Cycle { n }, cycle_partitions(n).ok()?));
        }
        let l = (n as f64).sqrt().round() as usize;
        if l >= 2 && l * l == n && l % 2 == 0 && InteractionGraph::square_lattice(l).ok().as_ref() == Some(g) {
            return Some((Family::Lattice { l }, lattice_partitions(l).ok()?));
        }
        if *g == InteractionGraph::graph_code_wheel() {
            return Some((Family::Wheel, wheel_partitions()));
        }
        None
    }
}
