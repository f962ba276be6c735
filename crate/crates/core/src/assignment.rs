//! Optimal assignment, maximal cycle mean and circulation decomposition.
//!
//! Weights live in the log domain; `-inf` marks a forbidden edge.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;

/// Square matrix of log-domain edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    w: Vec<f64>,
}

impl WeightMatrix {
    pub fn new(n: usize, w: Vec<f64>) -> Result<Self> {
        if w.len() != n * n {
            return Err(Error::invalid(format!("expected {} weights, got {}", n * n, w.len())));
        }
        if w.iter().any(|x| x.is_nan() || *x == f64::INFINITY) {
            return Err(Error::invalid("weights must be finite or -inf"));
        }
        Ok(Self { n, w })
    }

    /// Log view of a nonnegative matrix.
    pub fn from_nonneg(m: &NonnegMatrix) -> Self {
        Self { n: m.n(), w: m.log() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }
}

/// Injective map from a subset of `0..n` into `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialPermutation {
    n: usize,
    map: Vec<Option<usize>>,
}

impl PartialPermutation {
    pub fn new(n: usize, map: Vec<Option<usize>>) -> Result<Self> {
        if map.len() != n {
            return Err(Error::invalid("partial permutation length must equal n"));
        }
        let mut seen = vec![false; n];
        for &j in map.iter().flatten() {
            if j >= n || seen[j] {
                return Err(Error::invalid(format!("column {j} used twice or out of range")));
            }
            seen[j] = true;
        }
        Ok(Self { n, map })
    }

    pub fn from_permutation(perm: &[usize]) -> Result<Self> {
        Self::new(perm.len(), perm.iter().map(|&j| Some(j)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize) -> Option<usize> {
        self.map[i]
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.map[i].is_some()).collect()
    }

    pub fn image(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.map.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn is_empty(&self) -> bool {
        self.map.iter().all(Option::is_none)
    }

    /// Support equals image, so the 0/1 matrix is a permutation matrix on a
    /// principal submatrix and zero elsewhere.
    pub fn is_principal(&self) -> bool {
        self.support() == self.image()
    }

    /// Full permutation as a vector, if the support is all of `0..n`.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        self.map.iter().copied().collect()
    }

    pub fn to_matrix(&self) -> Vec<u64> {
        let mut m = vec![0; self.n * self.n];
        for (i, j) in self.map.iter().enumerate() {
            if let Some(j) = j {
                m[i * self.n + j] = 1;
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// Maximal total log weight; `-inf` when every permutation hits a forbidden edge.
    pub value: f64,
    /// Lexicographically smallest optimal permutation, absent when infeasible.
    pub perm: Option<PartialPermutation>,
}

struct Solution {
    perm: Vec<usize>,
    u: Vec<f64>,
    v: Vec<f64>,
}

/// Shortest augmenting path Hungarian method on costs `-w`, skipping
/// forbidden edges. Returns `None` when no perfect matching exists.
fn hungarian(n: usize, w: &[f64]) -> Option<Solution> {
    const INF: f64 = f64::INFINITY;
    let cost = |i: usize, j: usize| -w[i * n + j];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let c = cost(i0 - 1, j - 1);
                if c < INF {
                    let cur = c - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if delta == INF {
                return None;
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0; n];
    for j in 1..=n {
        perm[p[j] - 1] = j - 1;
    }
    Some(Solution { perm, u, v })
}

fn perm_weight(n: usize, w: &[f64], perm: &[usize]) -> f64 {
    perm.iter().enumerate().map(|(i, &j)| w[i * n + j]).sum()
}

/// Value of the optimal assignment without a witness; `-inf` if infeasible.
pub fn assignment_value(n: usize, w: &[f64]) -> f64 {
    if n == 0 {
        return 0.0;
    }
    match hungarian(n, w) {
        Some(sol) => perm_weight(n, w, &sol.perm),
        None => f64::NEG_INFINITY,
    }
}

/// Optimal permutation (any maximiser) and its value, or `None` if infeasible.
pub(crate) fn assignment_with_perm(n: usize, w: &[f64]) -> Option<(f64, Vec<usize>)> {
    if n == 0 {
        return Some((0.0, Vec::new()));
    }
    hungarian(n, w).map(|sol| (perm_weight(n, w, &sol.perm), sol.perm))
}

pub fn optimal_assignment(weights: &WeightMatrix) -> Assignment {
    let n = weights.n;
    let w = &weights.w;
    if n == 0 {
        return Assignment { value: 0.0, perm: Some(PartialPermutation { n: 0, map: vec![] }) };
    }
    let Some(sol) = hungarian(n, w) else {
        return Assignment { value: f64::NEG_INFINITY, perm: None };
    };
    let value = perm_weight(n, w, &sol.perm);
    let perm = lexicographic_optimum(n, w, &sol);
    Assignment { value, perm: Some(PartialPermutation::from_permutation(&perm).unwrap()) }
}

/// Among the optimal permutations (tight edges under the dual potentials),
/// pick the lexicographically smallest one greedily row by row.
fn lexicographic_optimum(n: usize, w: &[f64], sol: &Solution) -> Vec<usize> {
    let scale = w.iter().filter(|x| x.is_finite()).fold(1.0f64, |m, x| m.max(x.abs()));
    let eps = 1e-9 * scale;
    let tight: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -w[i * n + j];
                    c.is_finite() && c - sol.u[i + 1] - sol.v[j + 1] <= eps
                })
                .collect()
        })
        .collect();
    // the Hungarian solution is itself tight; make sure rounding agrees
    let mut tight = tight;
    for (i, &j) in sol.perm.iter().enumerate() {
        tight[i][j] = true;
    }

    let mut fixed: Vec<usize> = Vec::with_capacity(n);
    let mut col_used = vec![false; n];
    for i in 0..n {
        let mut chosen = None;
        for j in 0..n {
            if col_used[j] || !tight[i][j] {
                continue;
            }
            col_used[j] = true;
            let ok = has_perfect_matching(&tight, i + 1, &col_used);
            col_used[j] = false;
            if ok {
                chosen = Some(j);
                break;
            }
        }
        let j = chosen.unwrap_or(sol.perm[i]);
        col_used[j] = true;
        fixed.push(j);
    }
    if fixed.iter().enumerate().any(|(i, &j)| !tight[i][j]) || !is_permutation(&fixed) {
        return sol.perm.clone();
    }
    fixed
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&j| j < p.len() && !std::mem::replace(&mut seen[j], true))
}

/// Can rows `from..n` be matched into the unused columns of `adj`?
fn has_perfect_matching(adj: &[Vec<bool>], from: usize, col_used: &[bool]) -> bool {
    let n = adj.len();
    let mut match_col: Vec<Option<usize>> = vec![None; n];
    for i in from..n {
        let mut visited = vec![false; n];
        if !kuhn(adj, i, col_used, &mut visited, &mut match_col) {
            return false;
        }
    }
    true
}

fn kuhn(
    adj: &[Vec<bool>],
    i: usize,
    col_used: &[bool],
    visited: &mut [bool],
    match_col: &mut [Option<usize>],
) -> bool {
    for j in 0..adj.len() {
        if !adj[i][j] || col_used[j] || visited[j] {
            continue;
        }
        visited[j] = true;
        if match_col[j].is_none_or(|r| kuhn(adj, r, col_used, visited, match_col)) {
            match_col[j] = Some(i);
            return true;
        }
    }
    false
}

/// Largest mean log weight of a directed cycle, `-inf` if there is none.
/// Karp's algorithm is run on each strongly connected component.
pub fn max_cycle_mean_log(weights: &WeightMatrix) -> f64 {
    let n = weights.n;
    let mut g = DiGraph::<(), f64>::with_capacity(n, n * n);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            let x = weights.get(i, j);
            if x.is_finite() {
                g.add_edge(nodes[i], nodes[j], x);
            }
        }
    }
    let mut best = f64::NEG_INFINITY;
    for comp in tarjan_scc(&g) {
        let verts: Vec<usize> = comp.iter().map(|v| v.index()).collect();
        best = best.max(karp(weights, &verts));
    }
    best
}

fn karp(weights: &WeightMatrix, verts: &[usize]) -> f64 {
    let m = verts.len();
    if m == 1 {
        return weights.get(verts[0], verts[0]);
    }
    let edges: Vec<(usize, usize, f64)> = (0..m)
        .flat_map(|a| (0..m).map(move |b| (a, b)))
        .filter_map(|(a, b)| {
            let x = weights.get(verts[a], verts[b]);
            x.is_finite().then_some((a, b, x))
        })
        .collect();
    // d[k][v]: heaviest walk of exactly k edges from vertex 0 to v
    let mut d = vec![vec![f64::NEG_INFINITY; m]; m + 1];
    d[0][0] = 0.0;
    for k in 1..=m {
        for &(a, b, x) in &edges {
            let cand = d[k - 1][a] + x;
            if cand > d[k][b] {
                d[k][b] = cand;
            }
        }
    }
    let mut best = f64::NEG_INFINITY;
    for v in 0..m {
        if !d[m][v].is_finite() {
            continue;
        }
        let worst = (0..m)
            .filter(|&k| d[k][v].is_finite())
            .map(|k| (d[m][v] - d[k][v]) / (m - k) as f64)
            .fold(f64::INFINITY, f64::min);
        best = best.max(worst);
    }
    best
}

/// Maximal cycle mean of a nonnegative matrix (geometric mean weight); 0 if
/// the digraph of nonzero entries is acyclic.
pub fn max_cycle_mean(m: &NonnegMatrix) -> f64 {
    max_cycle_mean_log(&WeightMatrix::from_nonneg(m)).exp()
}

/// Nonnegative integer matrix whose i-th row and column sums agree for every i.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CirculationMatrix {
    n: usize,
    b: Vec<u64>,
}

impl CirculationMatrix {
    pub fn new(n: usize, b: Vec<u64>) -> Result<Self> {
        if b.len() != n * n {
            return Err(Error::invalid(format!("expected {} entries, got {}", n * n, b.len())));
        }
        for i in 0..n {
            let row_sum: u64 = (0..n).map(|j| b[i * n + j]).sum();
            let col_sum: u64 = (0..n).map(|j| b[j * n + i]).sum();
            if row_sum != col_sum {
                return Err(Error::NotCirculation { index: i + 1, row_sum, col_sum });
            }
        }
        Ok(Self { n, b })
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("circulation matrix must be square"));
        }
        Self::new(n, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u64] {
        &self.b
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.b[i * self.n..(i + 1) * self.n].iter().sum()
    }

    /// Largest row sum.
    pub fn weight(&self) -> u64 {
        (0..self.n).map(|i| self.row_sum(i)).max().unwrap_or(0)
    }
}

/// Writes `B` as a sum of at most `weight(B)` nonzero partial permutation
/// matrices with support equal to image.
///
/// `B + Diag(ℓ - s_i)` is ℓ-regular, so ℓ perfect matchings can be peeled
/// off it; diagonal edges are charged to the padding first and then dropped.
pub fn decompose_circulation(b: &CirculationMatrix) -> Vec<PartialPermutation> {
    let n = b.n;
    let ell = b.weight();
    let mut pad: Vec<u64> = (0..n).map(|i| ell - b.row_sum(i)).collect();
    let mut rem = b.b.clone();
    for i in 0..n {
        rem[i * n + i] += pad[i];
    }
    let mut parts = Vec::new();
    for _ in 0..ell {
        let matching = regular_matching(n, &rem);
        let mut map = vec![None; n];
        for (i, &j) in matching.iter().enumerate() {
            rem[i * n + j] -= 1;
            if i == j && pad[i] > 0 {
                pad[i] -= 1;
            } else {
                map[i] = Some(j);
            }
        }
        let part = PartialPermutation { n, map };
        if !part.is_empty() {
            parts.push(part);
        }
    }
    parts
}

/// Perfect matching in the support of a regular bipartite multigraph,
/// rows taken in increasing order and columns tried in increasing order.
fn regular_matching(n: usize, counts: &[u64]) -> Vec<usize> {
    let adj: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| counts[i * n + j] > 0).collect()).collect();
    let free = vec![false; n];
    let mut match_col: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let mut visited = vec![false; n];
        let found = kuhn(&adj, i, &free, &mut visited, &mut match_col);
        assert!(found, "regular bipartite multigraph must have a perfect matching");
    }
    let mut perm = vec![0; n];
    for (j, r) in match_col.iter().enumerate() {
        perm[r.expect("perfect matching")] = j;
    }
    perm
}
