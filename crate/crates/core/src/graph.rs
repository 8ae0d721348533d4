//! Graph families and their matrix representations.
//!
//! Matrices follow the convention `L = A - D`: the Laplacian has zero row
//! sums, unit off-diagonal entries on edges and `-deg(j)` on the diagonal, so
//! it is negative semidefinite. The walk Hamiltonian carries the compensating
//! minus sign.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::sparse::CsrMatrix;

/// Matrices for graphs up to this many vertices are stored dense.
pub const DENSE_LIMIT: usize = 4096;

/// Largest hypercube dimension for which an explicit edge list is built.
/// The qubit-structured Hamiltonian goes much further without a graph.
pub const MAX_EXPLICIT_HYPERCUBE: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Line,
    Cycle,
    Complete,
    Hypercube,
    GluedTrees,
    Custom,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Line => "line",
            GraphKind::Cycle => "cycle",
            GraphKind::Complete => "complete",
            GraphKind::Hypercube => "hypercube",
            GraphKind::GluedTrees => "glued_trees",
            GraphKind::Custom => "custom",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "line" => Ok(GraphKind::Line),
            "cycle" => Ok(GraphKind::Cycle),
            "complete" => Ok(GraphKind::Complete),
            "hypercube" => Ok(GraphKind::Hypercube),
            "glued_trees" => Ok(GraphKind::GluedTrees),
            "custom" => Ok(GraphKind::Custom),
            other => Err(invalid(format!("unknown graph kind '{other}'"))),
        }
    }
}

/// Undirected simple graph on vertices `0..num_vertices`.
///
/// Edges are stored once as `(j, k)` with `j < k`, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    kind: GraphKind,
    size_param: usize,
}

impl Graph {
    /// Builds a custom graph, validating the simple-graph invariants.
    pub fn from_edges(
        num_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        Self::with_kind(num_vertices, edges, GraphKind::Custom, num_vertices)
    }

    fn with_kind(
        num_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        kind: GraphKind,
        size_param: usize,
    ) -> Result<Self> {
        if num_vertices == 0 {
            return Err(invalid("graph needs at least one vertex"));
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= num_vertices || b >= num_vertices {
                return Err(Error::IndexOutOfRange {
                    index: a.max(b),
                    bound: num_vertices,
                });
            }
            if a == b {
                return Err(invalid(format!("self-loop at vertex {a}")));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!(
                "duplicate edge {{{}, {}}}",
                w[0].0, w[0].1
            )));
        }
        Ok(Graph {
            num_vertices,
            edges: list,
            kind,
            size_param,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// The size parameter the graph was built from (vertices, dimension or depth).
    pub fn size_param(&self) -> usize {
        self.size_param
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Number of connected components.
    pub fn connected_components(&self) -> usize {
        components(self.num_vertices, self.edges.iter().copied())
    }

    /// Writes the plain-text edge list: `N <num_vertices>` then `j k` per line.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("N {}\n", self.num_vertices);
        for (a, b) in &self.edges {
            s.push_str(&format!("{a} {b}\n"));
        }
        s
    }

    /// Parses the edge-list format written by [`Graph::to_edge_list`].
    ///
    /// The result is tagged [`GraphKind::Custom`].
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let n = header
            .strip_prefix("N ")
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("bad header '{header}'")))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b)), None) => edges.push((a, b)),
                _ => return Err(Error::Parse(format!("bad edge line '{line}'"))),
            }
        }
        Self::from_edges(n, edges)
    }
}

fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = n;
    for (a, b) in edges {
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

/// Builds a member of a graph family.
///
/// `size_param` is the vertex count for line, cycle and complete graphs, the
/// dimension for hypercubes and the tree depth for glued trees. Glued trees
/// need a seed for the random leaf gluing; other families ignore it.
pub fn make_graph(kind: GraphKind, size_param: usize, seed: Option<u64>) -> Result<Graph> {
    if size_param == 0 {
        return Err(invalid("size parameter must be at least 1"));
    }
    match kind {
        GraphKind::Line => line(size_param),
        GraphKind::Cycle => cycle(size_param),
        GraphKind::Complete => complete(size_param),
        GraphKind::Hypercube => hypercube(size_param),
        GraphKind::GluedTrees => {
            let seed = seed.ok_or_else(|| invalid("glued trees need a seed"))?;
            glued_trees(size_param, seed)
        }
        GraphKind::Custom => Err(invalid("custom graphs are built from an edge list")),
    }
}

fn line(n: usize) -> Result<Graph> {
    Graph::with_kind(n, (1..n).map(|j| (j - 1, j)), GraphKind::Line, n)
}

fn cycle(n: usize) -> Result<Graph> {
    // Below three vertices a cycle degenerates to a line.
    let closing = if n >= 3 { Some((0, n - 1)) } else { None };
    Graph::with_kind(
        n,
        (1..n).map(|j| (j - 1, j)).chain(closing),
        GraphKind::Cycle,
        n,
    )
}

fn complete(n: usize) -> Result<Graph> {
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
    Graph::with_kind(n, edges, GraphKind::Complete, n)
}

fn hypercube(dim: usize) -> Result<Graph> {
    if dim > MAX_EXPLICIT_HYPERCUBE {
        return Err(invalid(format!(
            "explicit hypercube limited to dimension {MAX_EXPLICIT_HYPERCUBE}; use the qubit-structured Hamiltonian"
        )));
    }
    let n = 1usize << dim;
    let edges = (0..n).flat_map(move |j| {
        (0..dim)
            .map(move |b| (j, j ^ (1 << b)))
            .filter(|&(a, b)| a < b)
    });
    Graph::with_kind(n, edges, GraphKind::Hypercube, dim)
}

/// Vertex layout of a glued-trees graph of a given depth.
///
/// Both trees are stored in heap order: the left tree occupies
/// `0..tree_size` with the entrance at 0, the right tree occupies
/// `tree_size..2*tree_size` with the exit at `tree_size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GluedTreesLayout {
    pub depth: usize,
    pub tree_size: usize,
}

impl GluedTreesLayout {
    pub fn new(depth: usize) -> Self {
        GluedTreesLayout {
            depth,
            tree_size: (1 << (depth + 1)) - 1,
        }
    }

    pub fn num_vertices(&self) -> usize {
        2 * self.tree_size
    }

    pub fn entrance(&self) -> usize {
        0
    }

    pub fn exit(&self) -> usize {
        self.tree_size
    }

    pub fn num_columns(&self) -> usize {
        2 * self.depth + 2
    }

    /// Distance-from-entrance column of a vertex, `0..=2*depth+1`.
    pub fn column(&self, v: usize) -> usize {
        let heap_depth = |x: usize| (usize::BITS - 1 - (x + 1).leading_zeros()) as usize;
        if v < self.tree_size {
            heap_depth(v)
        } else {
            2 * self.depth + 1 - heap_depth(v - self.tree_size)
        }
    }

    /// Whether an edge joins the two trees' leaf columns.
    pub fn is_glue_edge(&self, a: usize, b: usize) -> bool {
        (a < self.tree_size) != (b < self.tree_size)
    }
}

fn glued_trees(depth: usize, seed: u64) -> Result<Graph> {
    let layout = GluedTreesLayout::new(depth);
    let t = layout.tree_size;
    let mut edges = Vec::with_capacity(2 * (t - 1) + 2 * (1 << depth));
    for offset in [0, t] {
        for v in 1..t {
            edges.push((offset + (v - 1) / 2, offset + v));
        }
    }
    let first_leaf = (1 << depth) - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut left: Vec<usize> = (first_leaf..t).collect();
    let mut right: Vec<usize> = (first_leaf..t).map(|v| v + t).collect();
    left.shuffle(&mut rng);
    right.shuffle(&mut rng);
    // Alternating cycle left[0] - right[0] - left[1] - ... - right[k-1] - left[0]
    // gives every leaf exactly two glue edges.
    let k = left.len();
    for i in 0..k {
        edges.push((left[i], right[i]));
        edges.push((right[i], left[(i + 1) % k]));
    }
    Graph::with_kind(layout.num_vertices(), edges, GraphKind::GluedTrees, depth)
}

/// Real symmetric matrix backed by dense or sparse storage.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphMatrix {
    Dense(DMatrix<f64>),
    Sparse(CsrMatrix),
}

impl GraphMatrix {
    fn from_triplets(n: usize, triplets: Vec<(usize, usize, f64)>) -> Self {
        if n <= DENSE_LIMIT {
            let mut m = DMatrix::zeros(n, n);
            for (r, c, v) in triplets {
                m[(r, c)] += v;
            }
            GraphMatrix::Dense(m)
        } else {
            GraphMatrix::Sparse(CsrMatrix::from_triplets(n, triplets))
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            GraphMatrix::Dense(m) => m.nrows(),
            GraphMatrix::Sparse(m) => m.dim(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        match self {
            GraphMatrix::Dense(m) => m[(r, c)],
            GraphMatrix::Sparse(m) => m.get(r, c),
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        match self {
            GraphMatrix::Dense(m) => m.row_iter().map(|r| r.sum()).collect(),
            GraphMatrix::Sparse(m) => m.row_sums(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match self {
            GraphMatrix::Dense(m) => m.clone(),
            GraphMatrix::Sparse(m) => m.to_dense(),
        }
    }

    pub fn to_csr(&self) -> CsrMatrix {
        match self {
            GraphMatrix::Dense(m) => {
                let n = m.nrows();
                let triplets = (0..n)
                    .flat_map(|r| (0..n).map(move |c| (r, c)))
                    .map(|(r, c)| (r, c, m[(r, c)]))
                    .filter(|t| t.2 != 0.0)
                    .collect::<Vec<_>>();
                CsrMatrix::from_triplets(n, triplets)
            }
            GraphMatrix::Sparse(m) => m.clone(),
        }
    }
}

fn adjacency_triplets(g: &Graph) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
    g.edges
        .iter()
        .flat_map(|&(a, b)| [(a, b, 1.0), (b, a, 1.0)])
}

/// `A[j][k] = 1` iff `{j, k}` is an edge.
pub fn adjacency(g: &Graph) -> GraphMatrix {
    GraphMatrix::from_triplets(g.num_vertices, adjacency_triplets(g).collect())
}

pub fn degree_vector(g: &Graph) -> Vec<usize> {
    let mut deg = vec![0usize; g.num_vertices];
    for &(a, b) in &g.edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    deg
}

/// Graph Laplacian `L = A - D`.
pub fn laplacian(g: &Graph) -> GraphMatrix {
    let deg = degree_vector(g);
    let diag = deg
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .map(|(j, &d)| (j, j, -(d as f64)));
    GraphMatrix::from_triplets(g.num_vertices, adjacency_triplets(g).chain(diag).collect())
}

/// Sparse Laplacian regardless of size, for the integrator's fast path.
pub fn laplacian_csr(g: &Graph) -> CsrMatrix {
    let deg = degree_vector(g);
    let diag = deg.iter().enumerate().map(|(j, &d)| (j, j, -(d as f64)));
    CsrMatrix::from_triplets(
        g.num_vertices,
        adjacency_triplets(g).chain(diag).collect::<Vec<_>>(),
    )
}
