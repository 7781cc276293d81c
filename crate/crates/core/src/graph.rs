//! Immutable simple graphs and the graph operations used throughout the crate.
//!
//! In every product of `F` and `G` the vertex `(x, u)` has index
//! `x * |V(G)| + u` (row-major, `F`-major). OR-powers use the matching
//! mixed-radix index with the first coordinate most significant.

use std::fmt;

use thiserror::Error;

use crate::bitset::BitSet;

/// Largest vertex count a product or power may produce unless a caller
/// supplies its own budget.
pub const DEFAULT_VERTEX_BUDGET: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge endpoint {endpoint} out of range for {n} vertices")]
    EndpointOutOfRange { endpoint: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("result would have {requested} vertices, budget is {budget}")]
    BudgetExceeded { requested: u128, budget: usize },
    #[error("power exponent must be at least 1")]
    ZeroPower,
}

/// A simple undirected graph stored as symmetric adjacency bit rows.
#[derive(Clone)]
pub struct Graph {
    adj: Vec<BitSet>,
    label: Option<String>,
}

impl PartialEq for Graph {
    /// Labelled equality of vertex count and adjacency; the provenance label
    /// is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("label", &self.label)
            .field("n", &self.n())
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list; duplicate pairs collapse.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![BitSet::new(n); n];
        for &(u, v) in edges {
            for endpoint in [u, v] {
                if endpoint >= n {
                    return Err(GraphError::EndpointOutOfRange { endpoint, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Graph { adj, label: None })
    }

    /// Builds a graph from rows that the caller guarantees are symmetric and
    /// loop-free.
    pub(crate) fn from_rows(adj: Vec<BitSet>) -> Self {
        debug_assert!(adj.iter().enumerate().all(|(v, row)| !row.contains(v)));
        Graph { adj, label: None }
    }

    /// Builds a graph from an adjacency predicate evaluated on `u < v`.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut adj = vec![BitSet::new(n); n];
        for u in 0..n {
            for v in u + 1..n {
                if adjacent(u, v) {
                    adj[u].insert(v);
                    adj[v].insert(u);
                }
            }
        }
        Graph { adj, label: None }
    }

    pub fn empty(n: usize) -> Self {
        Graph::from_rows(vec![BitSet::new(n); n]).with_label(format!("E{n}"))
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_fn(n, |_, _| true).with_label(format!("K{n}"))
    }

    /// The cycle `0-1-..-(n-1)-0`. For `n < 3` this degenerates to a path.
    pub fn cycle(n: usize) -> Self {
        Graph::from_fn(n, |u, v| v == u + 1 || (u == 0 && v + 1 == n && n >= 3))
            .with_label(format!("C{n}"))
    }

    pub fn path(n: usize) -> Self {
        Graph::from_fn(n, |u, v| v == u + 1).with_label(format!("P{n}-path"))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitSet::count).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, row) in self.adj.iter().enumerate() {
            out.extend(row.iter().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let rows = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, row)| {
                let mut c = BitSet::full(n);
                c.difference_with(row);
                c.remove(v);
                c
            })
            .collect();
        let g = Graph::from_rows(rows);
        match &self.label {
            Some(l) => g.with_label(format!("co({l})")),
            None => g,
        }
    }

    /// Graph on `vertices` (any order; duplicates ignored), relabelled in
    /// ascending original order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph, GraphError> {
        let n = self.n();
        if let Some(&vertex) = vertices.iter().find(|&&v| v >= n) {
            return Err(GraphError::VertexOutOfRange { vertex, n });
        }
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let sub = Graph::from_fn(keep.len(), |i, j| self.has_edge(keep[i], keep[j]));
        Ok(sub)
    }

    /// Graph with the listed vertices removed, remaining vertices relabelled
    /// in ascending order.
    pub fn delete_vertices(&self, removed: &[usize]) -> Result<Graph, GraphError> {
        let n = self.n();
        if let Some(&vertex) = removed.iter().find(|&&v| v >= n) {
            return Err(GraphError::VertexOutOfRange { vertex, n });
        }
        let keep: Vec<usize> = (0..n).filter(|v| !removed.contains(v)).collect();
        self.induced_subgraph(&keep)
    }

    /// Whether `map` (indexed by vertices of `self`) sends every edge to an
    /// edge of `target`.
    pub fn is_homomorphism_to(&self, target: &Graph, map: &[usize]) -> bool {
        map.len() == self.n()
            && map.iter().all(|&x| x < target.n())
            && self
                .edges()
                .into_iter()
                .all(|(u, v)| target.has_edge(map[u], map[v]))
    }
}

fn check_budget(requested: u128, budget: usize) -> Result<usize, GraphError> {
    if requested > budget as u128 {
        Err(GraphError::BudgetExceeded { requested, budget })
    } else {
        Ok(requested as usize)
    }
}

fn product_rows(
    f: &Graph,
    g: &Graph,
    budget: usize,
    mut block: impl FnMut(usize, usize, usize, &mut BitSet),
) -> Result<Vec<BitSet>, GraphError> {
    let (nf, ng) = (f.n(), g.n());
    let total = check_budget(nf as u128 * ng as u128, budget)?;
    let mut rows = Vec::with_capacity(total);
    for x in 0..nf {
        for u in 0..ng {
            let mut row = BitSet::new(total);
            for y in 0..nf {
                block(x, u, y, &mut row);
            }
            row.remove(x * ng + u);
            rows.push(row);
        }
    }
    Ok(rows)
}

fn set_block(row: &mut BitSet, offset: usize, cols: &BitSet) {
    for v in cols.iter() {
        row.insert(offset + v);
    }
}

fn set_block_full(row: &mut BitSet, offset: usize, width: usize) {
    for v in 0..width {
        row.insert(offset + v);
    }
}

fn pair_label(op: &str, f: &Graph, g: &Graph) -> String {
    format!(
        "{}{op}{}",
        f.label().unwrap_or("F"),
        g.label().unwrap_or("G")
    )
}

/// Index of the product vertex `(x, u)` when the second factor has
/// `second_n` vertices.
pub fn pair_index(x: usize, u: usize, second_n: usize) -> usize {
    x * second_n + u
}

pub fn split_index(index: usize, second_n: usize) -> (usize, usize) {
    (index / second_n, index % second_n)
}

/// Categorical product: `(x,u) ~ (y,v)` iff `x ~ y` in `F` and `u ~ v` in `G`.
pub fn tensor_product(f: &Graph, g: &Graph) -> Result<Graph, GraphError> {
    tensor_product_within(f, g, DEFAULT_VERTEX_BUDGET)
}

pub fn tensor_product_within(f: &Graph, g: &Graph, budget: usize) -> Result<Graph, GraphError> {
    let ng = g.n();
    let rows = product_rows(f, g, budget, |x, u, y, row| {
        if f.has_edge(x, y) {
            set_block(row, y * ng, g.neighbors(u));
        }
    })?;
    Ok(Graph::from_rows(rows).with_label(pair_label("x", f, g)))
}

/// OR-product: distinct pairs adjacent iff adjacent in either coordinate.
pub fn or_product(f: &Graph, g: &Graph) -> Result<Graph, GraphError> {
    or_product_within(f, g, DEFAULT_VERTEX_BUDGET)
}

pub fn or_product_within(f: &Graph, g: &Graph, budget: usize) -> Result<Graph, GraphError> {
    let ng = g.n();
    let rows = product_rows(f, g, budget, |x, u, y, row| {
        if f.has_edge(x, y) {
            set_block_full(row, y * ng, ng);
        } else {
            set_block(row, y * ng, g.neighbors(u));
        }
    })?;
    Ok(Graph::from_rows(rows).with_label(pair_label(".", f, g)))
}

/// AND (strong) product: distinct pairs adjacent iff each coordinate is
/// equal or adjacent.
pub fn and_product(f: &Graph, g: &Graph) -> Result<Graph, GraphError> {
    and_product_within(f, g, DEFAULT_VERTEX_BUDGET)
}

pub fn and_product_within(f: &Graph, g: &Graph, budget: usize) -> Result<Graph, GraphError> {
    let ng = g.n();
    let rows = product_rows(f, g, budget, |x, u, y, row| {
        if x == y || f.has_edge(x, y) {
            set_block(row, y * ng, g.neighbors(u));
            row.insert(y * ng + u);
        }
    })?;
    Ok(Graph::from_rows(rows).with_label(pair_label("&", f, g)))
}

/// Disjoint union plus every edge between the two sides; `F` vertices first.
pub fn join(f: &Graph, g: &Graph) -> Graph {
    let (nf, ng) = (f.n(), g.n());
    let n = nf + ng;
    let mut rows = Vec::with_capacity(n);
    for x in 0..nf {
        let mut row = BitSet::new(n);
        set_block(&mut row, 0, f.neighbors(x));
        set_block_full(&mut row, nf, ng);
        rows.push(row);
    }
    for u in 0..ng {
        let mut row = BitSet::new(n);
        set_block_full(&mut row, 0, nf);
        set_block(&mut row, nf, g.neighbors(u));
        rows.push(row);
    }
    Graph::from_rows(rows).with_label(pair_label("+", f, g))
}

/// `t`-fold OR-power `G^t`.
pub fn or_power(g: &Graph, t: u32) -> Result<Graph, GraphError> {
    or_power_within(g, t, DEFAULT_VERTEX_BUDGET)
}

pub fn or_power_within(g: &Graph, t: u32, budget: usize) -> Result<Graph, GraphError> {
    if t == 0 {
        return Err(GraphError::ZeroPower);
    }
    let requested = (g.n() as u128)
        .checked_pow(t)
        .unwrap_or(u128::MAX);
    check_budget(requested, budget)?;
    let mut acc = g.clone();
    for _ in 1..t {
        acc = or_product_within(&acc, g, budget)?;
    }
    let base = g.label().unwrap_or("G");
    Ok(acc.with_label(if t == 1 {
        base.to_string()
    } else {
        format!("{base}^{t}")
    }))
}
