//! Graph families, bipartitions and the even/odd block decomposition of
//! circulant matrices.
//!
//! A [`DirectedGraph`] is a plain set of ordered edges. Graphs produced from a
//! [`CirculantSpec`] remember that spec so the walk engine can take the
//! Fourier path; circulant structure is never inferred from an edge set.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// First row `(a_0, ..., a_{N-1})` of a circulant matrix `M_ij = a_{(j-i) mod N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSpec {
    coefficients: Vec<f64>,
}

impl CirculantSpec {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidGraph(
                "circulant spec needs at least one coefficient".into(),
            ));
        }
        if let Some(bad) = coefficients.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(Error::InvalidGraph(format!(
                "circulant coefficients must be finite and non-negative, got {bad}"
            )));
        }
        Ok(Self { coefficients })
    }

    /// Builds a spec whose coefficient `k` is 1 for every `k` in `offsets`.
    pub fn from_offsets(n: usize, offsets: &[usize]) -> Result<Self> {
        let mut coefficients = vec![0.0; n];
        for &k in offsets {
            if k >= n {
                return Err(Error::IndexOutOfRange { index: k, len: n });
            }
            coefficients[k] = 1.0;
        }
        Self::new(coefficients)
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn coefficient(&self, k: usize) -> f64 {
        self.coefficients[k % self.len()]
    }

    /// True when every coefficient is exactly 0 or 1 and `a_0 = 0`.
    pub fn is_adjacency(&self) -> bool {
        self.coefficients[0] == 0.0 && self.coefficients.iter().all(|&c| c == 0.0 || c == 1.0)
    }

    /// Even length with every even-indexed coefficient zero: `[0, a_1, 0, a_3, ...]`.
    pub fn is_bipartite_form(&self) -> bool {
        self.len().is_multiple_of(2) && self.coefficients.iter().step_by(2).all(|&c| c == 0.0)
    }

    /// Spec of the transposed matrix: `a^T_k = a_{(N-k) mod N}`.
    pub fn transpose(&self) -> Self {
        let n = self.len();
        Self {
            coefficients: (0..n).map(|k| self.coefficients[(n - k) % n]).collect(),
        }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |i, j| self.coefficients[(j + n - i) % n])
    }

    /// Interprets the spec as an adjacency matrix and lists its edges.
    pub fn to_graph(&self) -> Result<DirectedGraph> {
        if !self.is_adjacency() {
            return Err(Error::InvalidGraph(
                "circulant spec is not a 0/1 adjacency row with a_0 = 0".into(),
            ));
        }
        let n = self.len();
        let mut edges = BTreeSet::new();
        for i in 0..n {
            for (k, &c) in self.coefficients.iter().enumerate() {
                if c == 1.0 {
                    edges.insert((i, (i + k) % n));
                }
            }
        }
        Ok(DirectedGraph {
            n,
            edges,
            circulant: Some(self.clone()),
        })
    }

    /// Comma-separated coefficient line.
    pub fn to_line(&self) -> String {
        self.coefficients
            .iter()
            .map(|c| format_coefficient(*c))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        let coefficients = line
            .trim()
            .split(',')
            .map(|tok| {
                tok.trim().parse::<f64>().map_err(|e| Error::Parse {
                    line: 1,
                    message: format!("bad coefficient {tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coefficients)
    }
}

fn format_coefficient(c: f64) -> String {
    if c.fract() == 0.0 && c.abs() < 1e15 {
        format!("{}", c as i64)
    } else {
        format!("{c:.17e}")
    }
}

/// Integer-indexed node set with ordered edges `(i, j)`, `i != j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    circulant: Option<CirculantSpec>,
}

impl DirectedGraph {
    /// Rejects self-loops, out-of-range endpoints and duplicate edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one node".into()));
        }
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j),
                    len: n,
                });
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at node {i}")));
            }
            if !set.insert((i, j)) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({i}, {j})")));
            }
        }
        Ok(Self {
            n,
            edges: set,
            circulant: None,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    /// The spec this graph was built from, if any.
    pub fn circulant_spec(&self) -> Option<&CirculantSpec> {
        self.circulant.as_ref()
    }

    /// `A_ij = 1` iff `(i, j)` is an edge.
    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            a[(i, j)] = 1.0;
        }
        a
    }

    /// `A = A^T`, i.e. every edge is bidirected.
    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|&(i, j)| self.has_edge(j, i))
    }

    /// Returns the graph with every edge reversal added.
    pub fn symmetrized(&self) -> Self {
        let edges = self
            .edges
            .iter()
            .flat_map(|&(i, j)| [(i, j), (j, i)])
            .collect();
        Self {
            n: self.n,
            edges,
            circulant: self.circulant.as_ref().map(|c| {
                let t = c.transpose();
                CirculantSpec {
                    coefficients: c
                        .coefficients
                        .iter()
                        .zip(&t.coefficients)
                        .map(|(a, b)| a.max(*b))
                        .collect(),
                }
            }),
        }
    }

    /// Drops every bidirected pair, keeping only one-directional edges.
    /// The result has the same antisymmetric part `A - A^T`.
    pub fn without_bidirected(&self) -> Self {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(i, j)| !self.has_edge(j, i))
            .collect();
        Self {
            n: self.n,
            edges,
            circulant: None,
        }
    }

    /// True when both graphs have the same antisymmetric part, i.e. they
    /// differ only by bidirected edge pairs.
    pub fn differs_only_by_bidirected(&self, other: &Self) -> bool {
        self.n == other.n && self.without_bidirected().edges == other.without_bidirected().edges
    }

    pub fn with_edges(&self, extra: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(self.n, self.edges.iter().copied().chain(extra))
    }

    fn undirected_neighbors(&self) -> Vec<Vec<usize>> {
        let mut nbrs = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            nbrs[i].push(j);
            nbrs[j].push(i);
        }
        for list in &mut nbrs {
            list.sort_unstable();
            list.dedup();
        }
        nbrs
    }

    /// Weakly connected components, each sorted, ordered by lowest node.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let nbrs = self.undirected_neighbors();
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &nbrs[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.weak_components().len() == 1
    }

    /// Plain-text edge list: `n <count>` header followed by one `i j` per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for &(i, j) in &self.edges {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }

    /// Parses the edge-list format. Blank lines and `#` comments are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `n <count>` header".into(),
        })?;
        let n = header
            .strip_prefix("n ")
            .and_then(|rest| rest.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::Parse {
                line: hline,
                message: format!("expected `n <count>`, got {header:?}"),
            })?;
        let mut edges = Vec::new();
        for (lineno, line) in lines {
            let mut parts = line.split_whitespace();
            let parse = |tok: Option<&str>| {
                tok.and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse {
                        line: lineno,
                        message: format!("expected `i j`, got {line:?}"),
                    })
            };
            let i = parse(parts.next())?;
            let j = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("trailing tokens in {line:?}"),
                });
            }
            edges.push((i, j));
        }
        Self::new(n, edges).map_err(|e| match e {
            Error::Parse { .. } => e,
            other => Error::Parse {
                line: hline,
                message: other.to_string(),
            },
        })
    }
}

impl fmt::Display for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(n={}, edges={})", self.n, self.edges.len())
    }
}

/// Star with hub 0 and peripheral nodes `1..=n_peripheral`.
pub fn build_star(n_peripheral: usize, directed: bool) -> Result<DirectedGraph> {
    if n_peripheral == 0 {
        return Err(Error::InvalidSize {
            family: "star",
            requirement: "at least one peripheral node",
            n: n_peripheral,
        });
    }
    let spokes = (1..=n_peripheral).map(|j| (0, j));
    if directed {
        DirectedGraph::new(n_peripheral + 1, spokes)
    } else {
        DirectedGraph::new(n_peripheral + 1, spokes.flat_map(|(i, j)| [(i, j), (j, i)]))
    }
}

/// Ring `[0, 1, 0, ..., 0]_c`, or `[0, 1, 0, ..., 0, 1]_c` when undirected.
pub fn build_ring(n: usize, directed: bool) -> Result<DirectedGraph> {
    if n < 3 {
        return Err(Error::InvalidSize {
            family: "ring",
            requirement: "n >= 3",
            n,
        });
    }
    let offsets: &[usize] = if directed { &[1] } else { &[1, n - 1] };
    CirculantSpec::from_offsets(n, offsets)?.to_graph()
}

/// Even ring plus rungs `i -> i + n/2` for every `i` (so rungs are bidirected).
pub fn build_moebius_ladder(n: usize, outer_directed: bool) -> Result<DirectedGraph> {
    if !n.is_multiple_of(2) || n < 6 {
        return Err(Error::InvalidSize {
            family: "moebius ladder",
            requirement: "even n >= 6",
            n,
        });
    }
    let half = n / 2;
    let offsets: Vec<usize> = if outer_directed {
        vec![1, half]
    } else {
        vec![1, half, n - 1]
    };
    CirculantSpec::from_offsets(n, &offsets)?.to_graph()
}

/// Two-colouring of the underlying undirected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Bipartition {
    pub partition_even: Vec<usize>,
    pub partition_odd: Vec<usize>,
    /// Rows: `partition_even`, columns: `partition_odd`.
    pub biadjacency_1: DMatrix<f64>,
    /// Rows: `partition_odd`, columns: `partition_even`.
    pub biadjacency_2: DMatrix<f64>,
}

impl Bipartition {
    /// Node ordering with the even partition first.
    pub fn ordering(&self) -> Vec<usize> {
        self.partition_even
            .iter()
            .chain(&self.partition_odd)
            .copied()
            .collect()
    }

    /// Per-node side flag: `true` for the odd partition.
    pub fn sides(&self) -> Vec<bool> {
        let n = self.partition_even.len() + self.partition_odd.len();
        let mut side = vec![false; n];
        for &i in &self.partition_odd {
            side[i] = true;
        }
        side
    }
}

/// Colours each weakly connected component independently, lowest node of each
/// component on the even side. Returns `None` when an odd cycle exists.
pub fn bipartition(g: &DirectedGraph) -> Option<Bipartition> {
    let nbrs = g.undirected_neighbors();
    let mut colour: Vec<Option<bool>> = vec![None; g.n];
    for start in 0..g.n {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].unwrap();
            for &v in &nbrs[u] {
                match colour[v] {
                    None => {
                        colour[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let (mut even, mut odd) = (Vec::new(), Vec::new());
    for (i, c) in colour.iter().enumerate() {
        if c.unwrap() {
            odd.push(i);
        } else {
            even.push(i);
        }
    }
    let a = g.adjacency();
    let b1 = DMatrix::from_fn(even.len(), odd.len(), |r, c| a[(even[r], odd[c])]);
    let b2 = DMatrix::from_fn(odd.len(), even.len(), |r, c| a[(odd[r], even[c])]);
    Some(Bipartition {
        partition_even: even,
        partition_odd: odd,
        biadjacency_1: b1,
        biadjacency_2: b2,
    })
}

/// Result of conjugating an even-length circulant by the even/odd permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    /// `permutation[i] = j` where `P_ij = 1`.
    pub permutation: Vec<usize>,
    /// `[[top-left, top-right], [bottom-left, bottom-right]]`, each of size N/2.
    pub blocks: [[CirculantSpec; 2]; 2],
}

impl BlockDecomposition {
    pub fn permutation_matrix(&self) -> DMatrix<f64> {
        let n = self.permutation.len();
        let mut p = DMatrix::zeros(n, n);
        for (i, &j) in self.permutation.iter().enumerate() {
            p[(i, j)] = 1.0;
        }
        p
    }

    /// Dense matrix assembled from the four circulant blocks.
    pub fn assembled(&self) -> DMatrix<f64> {
        let half = self.permutation.len() / 2;
        let mut out = DMatrix::zeros(2 * half, 2 * half);
        for (bi, row) in self.blocks.iter().enumerate() {
            for (bj, block) in row.iter().enumerate() {
                out.view_mut((bi * half, bj * half), (half, half))
                    .copy_from(&block.matrix());
            }
        }
        out
    }
}

/// Reorders an even-length circulant so even-indexed nodes come first.
/// Diagonal blocks carry the even coefficients, off-diagonal blocks the odd ones.
pub fn circulant_block_decomposition(c: &CirculantSpec) -> Result<BlockDecomposition> {
    let n = c.len();
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidSize {
            family: "circulant block decomposition",
            requirement: "even N",
            n,
        });
    }
    let half = n / 2;
    let permutation = (0..n).map(|i| (2 * i + (2 * i) / n) % n).collect();
    let h = c.coefficients();
    let even = CirculantSpec {
        coefficients: (0..half).map(|k| h[2 * k]).collect(),
    };
    let upper = CirculantSpec {
        coefficients: (0..half).map(|k| h[2 * k + 1]).collect(),
    };
    let lower = CirculantSpec {
        coefficients: (0..half).map(|k| h[(2 * k + n - 1) % n]).collect(),
    };
    Ok(BlockDecomposition {
        permutation,
        blocks: [[even.clone(), upper], [lower, even]],
    })
}
